#include "pgl/elements.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pgl {

std::string element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::PBS: return "pbs";
        case ElementKind::HWP: return "hwp";
        case ElementKind::BS: return "bs";
        case ElementKind::SigmaX: return "sigma_x";
        case ElementKind::SigmaZ: return "sigma_z";
    }
    throw Error(ErrorKind::InvalidArgument, "bad element kind");
}

ElementKind element_kind_from_name(const std::string& name) {
    if (name == "pbs") return ElementKind::PBS;
    if (name == "hwp") return ElementKind::HWP;
    if (name == "bs") return ElementKind::BS;
    if (name == "sigma_x") return ElementKind::SigmaX;
    if (name == "sigma_z") return ElementKind::SigmaZ;
    throw Error(ErrorKind::Io, "unknown element kind '" + name + "'");
}

ElementSpec ElementSpec::hwp(double theta_deg, const std::string& port) {
    ElementSpec e;
    e.kind = ElementKind::HWP;
    e.theta_deg = theta_deg;
    e.ports = {port};
    return e;
}

ElementSpec ElementSpec::pbs(const std::string& in_a, const std::string& in_b, const std::string& out_a,
                             const std::string& out_b, const std::string& h_of_in_a) {
    ElementSpec e;
    e.kind = ElementKind::PBS;
    e.ports = {in_a, in_b, out_a, out_b};
    e.h_of_in_a = h_of_in_a;
    return e;
}

ElementSpec ElementSpec::bs(const std::string& in_a, const std::string& in_b, const std::string& out_a,
                            const std::string& out_b) {
    ElementSpec e;
    e.kind = ElementKind::BS;
    e.ports = {in_a, in_b, out_a, out_b};
    return e;
}

ElementSpec ElementSpec::pauli(ElementKind kind, const std::string& port) {
    if (kind != ElementKind::SigmaX && kind != ElementKind::SigmaZ)
        throw Error(ErrorKind::InvalidArgument, "pauli: kind must be sigma_x or sigma_z");
    ElementSpec e;
    e.kind = kind;
    e.ports = {port};
    return e;
}

std::string ElementSpec::describe() const {
    std::ostringstream os;
    os << element_kind_name(kind);
    if (kind == ElementKind::HWP) os << "(" << theta_deg << ")";
    os << "[";
    for (std::size_t i = 0; i < ports.size(); ++i) os << (i ? "," : "") << ports[i];
    os << "]";
    return os.str();
}

ModeUnitary hwp_unitary(RegistryPtr reg, double theta_deg, const std::string& port) {
    const double t = 2.0 * theta_deg * std::numbers::pi / 180.0;
    const double c = std::cos(t), s = std::sin(t);
    int h = reg->mode(port, Pol::H), v = reg->mode(port, Pol::V);
    // columns: input H, input V
    std::vector<complexd> m = {c, s,
                               s, -c};
    return ModeUnitary(reg, {h, v}, {h, v}, std::move(m));
}

namespace {

ModeUnitary compile_pbs(const ElementSpec& spec, RegistryPtr reg) {
    if (spec.ports.size() != 4)
        throw Error(ErrorKind::Validation, "pbs: needs 2 input and 2 output ports");
    const std::string &in_a = spec.ports[0], &in_b = spec.ports[1];
    const std::string &out_a = spec.ports[2], &out_b = spec.ports[3];
    if (spec.h_of_in_a != out_a && spec.h_of_in_a != out_b)
        throw Error(ErrorKind::Validation, "pbs: H routing of first input names a non-output port");
    const std::string& ha = spec.h_of_in_a;                  // receives in_a's H
    const std::string& hb = (ha == out_a) ? out_b : out_a;    // receives in_b's H
    // Each output takes one input's H and the other's V; both polarizations
    // of both inputs covered, every entry +1.
    std::vector<int> in = {reg->mode(in_a, Pol::H), reg->mode(in_a, Pol::V),
                           reg->mode(in_b, Pol::H), reg->mode(in_b, Pol::V)};
    std::vector<int> out = {reg->mode(ha, Pol::H), reg->mode(hb, Pol::V),
                            reg->mode(hb, Pol::H), reg->mode(ha, Pol::V)};
    std::vector<complexd> m(16, 0.0);
    m[0 * 4 + 0] = 1.0;  // in_a H -> ha H
    m[1 * 4 + 1] = 1.0;  // in_a V -> hb V
    m[2 * 4 + 2] = 1.0;  // in_b H -> hb H
    m[3 * 4 + 3] = 1.0;  // in_b V -> ha V
    return ModeUnitary(std::move(reg), std::move(in), std::move(out), std::move(m));
}

ModeUnitary compile_bs(const ElementSpec& spec, RegistryPtr reg) {
    if (spec.ports.size() != 4)
        throw Error(ErrorKind::Validation, "bs: needs 2 input and 2 output ports");
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<int> in = {reg->mode(spec.ports[0], Pol::H), reg->mode(spec.ports[0], Pol::V),
                           reg->mode(spec.ports[1], Pol::H), reg->mode(spec.ports[1], Pol::V)};
    std::vector<int> out = {reg->mode(spec.ports[2], Pol::H), reg->mode(spec.ports[2], Pol::V),
                            reg->mode(spec.ports[3], Pol::H), reg->mode(spec.ports[3], Pol::V)};
    // Hadamard on the spatial pair, identity on polarization.
    std::vector<complexd> m = {r, 0, r, 0,
                               0, r, 0, r,
                               r, 0, -r, 0,
                               0, r, 0, -r};
    return ModeUnitary(std::move(reg), std::move(in), std::move(out), std::move(m));
}

}  // namespace

ModeUnitary compile_element(const ElementSpec& spec, RegistryPtr reg) {
    switch (spec.kind) {
        case ElementKind::HWP:
            if (spec.ports.size() != 1) throw Error(ErrorKind::Validation, "hwp: exactly one port");
            return hwp_unitary(std::move(reg), spec.theta_deg, spec.ports[0]);
        case ElementKind::SigmaX:
            if (spec.ports.size() != 1) throw Error(ErrorKind::Validation, "pauli: exactly one port");
            return hwp_unitary(std::move(reg), 45.0, spec.ports[0]);
        case ElementKind::SigmaZ:
            if (spec.ports.size() != 1) throw Error(ErrorKind::Validation, "pauli: exactly one port");
            return hwp_unitary(std::move(reg), 0.0, spec.ports[0]);
        case ElementKind::PBS:
            return compile_pbs(spec, std::move(reg));
        case ElementKind::BS:
            return compile_bs(spec, std::move(reg));
    }
    throw Error(ErrorKind::InvalidArgument, "bad element kind");
}

}  // namespace pgl
