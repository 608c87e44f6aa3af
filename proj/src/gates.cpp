#include "pgl/gates.hpp"

#include <cmath>

namespace pgl {

void GateOptions::validate() const {
    if (recycle && !with_bs)
        throw Error(ErrorKind::Validation, "recycling requires the beam splitter (mode 5'' does not exist without it)");
}

void QubitCoeffs::validate() const {
    double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidArgument, "qubit coefficients are not normalized");
}

int LogicalState::qubit_count() const {
    int n = 0;
    while ((1u << n) < amplitudes.size()) ++n;
    if ((1u << n) != amplitudes.size())
        throw Error(ErrorKind::InvalidArgument, "logical state length is not a power of two");
    return n;
}

double LogicalState::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes) total += std::norm(a);
    return total;
}

LogicalState LogicalUnitary::apply(const LogicalState& in) const {
    const std::size_t dim = 1u << qubits;
    if (in.amplitudes.size() != dim) throw Error(ErrorKind::InvalidArgument, "logical dimension mismatch");
    LogicalState out;
    out.amplitudes.assign(dim, {0.0, 0.0});
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out.amplitudes[r] += mat[r * dim + c] * in.amplitudes[c];
    return out;
}

LogicalUnitary ideal_gate(GateKind kind) {
    if (kind == GateKind::CPF) {
        LogicalUnitary u{2, std::vector<complexd>(16, {0.0, 0.0})};
        for (int i = 0; i < 4; ++i) u.mat[i * 4 + i] = (i == 3) ? -1.0 : 1.0;
        return u;
    }
    LogicalUnitary u{3, std::vector<complexd>(64, {0.0, 0.0})};
    for (int i = 0; i < 6; ++i) u.mat[i * 8 + i] = 1.0;
    u.mat[6 * 8 + 7] = 1.0;  // |111> -> |110>
    u.mat[7 * 8 + 6] = 1.0;  // |110> -> |111>
    return u;
}

// -------------------------------------------------------------- builders

namespace {

void add_element(Circuit& c, ElementSpec e) { c.placements.push_back(Step::make_element(std::move(e))); }
void add_checkpoint(Circuit& c, std::string label, CountPattern exact = {}, CountPattern at_most = {}) {
    c.placements.push_back(Step::make_checkpoint({std::move(label), std::move(exact), std::move(at_most)}));
}
void add_post_select(Circuit& c, std::string label, CountPattern pattern) {
    c.placements.push_back(Step::make_post_select({std::move(label), std::move(pattern)}));
}
void add_detect(Circuit& c, std::string label) { c.placements.push_back(Step::make_detect(std::move(label))); }

// Steps shared between a full three-qubit run and the rerouted second
// attempt: everything from the parity check at PBS5 to the last detector.
void append_toffoli_tail(Circuit& c, const std::string& pbs5_in, bool apply_ff) {
    add_element(c, ElementSpec::pbs(pbs5_in, "a2", "7", "8", "8"));
    add_post_select(c, "mode8", {{"8", 1}});
    add_checkpoint(c, "after-pbs5-postselect");
    add_element(c, ElementSpec::hwp(67.5, "7"));
    add_element(c, ElementSpec::hwp(22.5, "4"));
    add_element(c, ElementSpec::pbs("4", "7", "9", "10", "9"));
    add_checkpoint(c, "after-pbs8");
    add_element(c, ElementSpec::hwp(22.5, "8"));
    add_element(c, ElementSpec::hwp(22.5, "t_in"));
    add_element(c, ElementSpec::pbs("8", "t_in", "11", "12", "12"));
    add_element(c, ElementSpec::hwp(22.5, "11"));
    add_element(c, ElementSpec::hwp(22.5, "12"));
    add_checkpoint(c, "after-pbs6-block", {{"11", 1}, {"12", 1}});
    add_detect(c, "D12");
    add_detect(c, "D10");
    add_checkpoint(c, "final", {{"1", 1}, {"9", 1}, {"11", 1}});

    c.detections.push_back({"D12", "12", DetectionBasis::PolarizationResolved, 1});
    c.detections.push_back({"D10", "10", DetectionBasis::NumberOnly, 0});
    if (apply_ff)
        c.feed_forwards.push_back({"D12", "H", ElementSpec::pauli(ElementKind::SigmaX, "11")});
    c.outputs = {{"1", "c1_out"}, {"9", "c2_out"}, {"11", "t_out"}};
}

}  // namespace

Circuit build_cpf_circuit(bool apply_feed_forward) {
    Circuit c;
    c.registry = {"c_in", "t_in", "a", "1", "2", "3", "4"};

    add_checkpoint(c, "input");
    add_element(c, ElementSpec::pbs("c_in", "a", "1", "2", "2"));
    add_checkpoint(c, "after-pbs1");
    add_post_select(c, "pbs1-parity", {{"1", 1}, {"2", 1}});
    add_checkpoint(c, "after-pbs1-postselect");
    add_element(c, ElementSpec::hwp(22.5, "2"));
    add_element(c, ElementSpec::pbs("2", "t_in", "3", "4", "4"));
    add_element(c, ElementSpec::hwp(22.5, "3"));
    add_checkpoint(c, "after-pbs2-block");
    add_post_select(c, "coincidence-34", {{"3", 1}, {"4", 1}});
    add_checkpoint(c, "after-postselect-34");
    add_detect(c, "D3");
    add_checkpoint(c, "after-feed-forward");

    c.detections.push_back({"D3", "3", DetectionBasis::PolarizationResolved, 1});
    if (apply_feed_forward)
        c.feed_forwards.push_back({"D3", "V", ElementSpec::pauli(ElementKind::SigmaZ, "4")});
    c.outputs = {{"1", "c_out"}, {"4", "t_out"}};
    c.validate();
    return c;
}

Circuit build_toffoli_circuit(const GateOptions& opts) {
    opts.validate();
    Circuit c;
    c.registry = {"c1_in", "c2_in", "t_in", "a1", "a2", "1", "2", "3", "4", "5", "6",
                  "7", "8", "9", "10", "11", "12", "5'", "5''", "vac_pbs2", "vac_bs"};
    const std::string pbs5_in = opts.with_bs ? "5'" : "5";

    add_checkpoint(c, "input");
    add_element(c, ElementSpec::pbs("c1_in", "a1", "1", "2", "2"));
    add_checkpoint(c, "after-pbs1");
    add_post_select(c, "pbs1-parity", {{"1", 1}, {"2", 1}});
    add_checkpoint(c, "after-pbs1-postselect");
    add_element(c, ElementSpec::pbs("c2_in", "vac_pbs2", "4", "3", "4"));
    add_element(c, ElementSpec::hwp(22.5, "2"));
    add_element(c, ElementSpec::hwp(22.5, "3"));
    add_element(c, ElementSpec::pbs("2", "3", "5", "6", "6"));
    add_element(c, ElementSpec::hwp(22.5, "5"));
    add_element(c, ElementSpec::hwp(22.5, "6"));
    add_checkpoint(c, "after-pbs3-block", {}, {{"5", 1}, {"6", 1}});
    if (opts.with_bs) {
        add_element(c, ElementSpec::bs("5", "vac_bs", "5'", "5''"));
        add_checkpoint(c, "after-bs");
    }
    add_detect(c, "D6");
    add_checkpoint(c, "pre-pbs5", {}, opts.with_bs ? CountPattern{{"5''", 0}} : CountPattern{});
    if (opts.recycle) add_post_select(c, "recycle-divert", {{"5''", 0}});
    append_toffoli_tail(c, pbs5_in, opts.apply_feed_forward);

    c.detections.push_back({"D6", "6", DetectionBasis::PolarizationResolved, 1});
    if (opts.apply_feed_forward) {
        c.feed_forwards.push_back({"D6", "V", ElementSpec::pauli(ElementKind::SigmaX, pbs5_in)});
        if (opts.recycle)
            c.feed_forwards.push_back({"D6", "V", ElementSpec::pauli(ElementKind::SigmaX, "5''")});
    }
    c.validate();
    return c;
}

GateCircuits build_gate(GateKind kind, const GateOptions& opts) {
    GateCircuits g;
    g.kind = kind;
    g.options = opts;
    if (kind == GateKind::CPF) {
        g.main = build_cpf_circuit(opts.apply_feed_forward);
        return g;
    }
    opts.validate();
    g.main = build_toffoli_circuit(opts);
    if (opts.recycle) {
        Circuit tail;
        tail.registry = g.main.registry;
        append_toffoli_tail(tail, "5'", opts.apply_feed_forward);
        tail.validate();
        g.tail = std::move(tail);
        g.divert_label = "postselect:recycle-divert";
        g.reroute_from = "5''";
        g.reroute_to = "5'";
    }
    return g;
}

// ------------------------------------------------------------ encode/decode

FockState encode_input(const GateCircuits& gate, const std::vector<QubitCoeffs>& qubits) {
    const int expected = gate.kind == GateKind::CPF ? 2 : 3;
    if (static_cast<int>(qubits.size()) != expected)
        throw Error(ErrorKind::Config, "encode_input: wrong number of gate qubits");
    RegistryPtr reg = gate.main.make_registry();

    auto photon = [&](const std::string& label, complexd alpha, complexd beta) {
        FockState s(reg, 1);
        if (alpha != complexd{0.0, 0.0}) s.add_term(BasisKet().with_added(reg->mode(label, Pol::H), 1), alpha);
        if (beta != complexd{0.0, 0.0}) s.add_term(BasisKet().with_added(reg->mode(label, Pol::V), 1), beta);
        return s;
    };
    const double r = 1.0 / std::sqrt(2.0);

    std::vector<FockState> photons;
    if (gate.kind == GateKind::CPF) {
        for (auto q : qubits) q.validate();
        photons = {photon("c_in", qubits[0].alpha, qubits[0].beta),
                   photon("t_in", qubits[1].alpha, qubits[1].beta), photon("a", r, r)};
    } else {
        for (auto q : qubits) q.validate();
        photons = {photon("c1_in", qubits[0].alpha, qubits[0].beta),
                   photon("c2_in", qubits[1].alpha, qubits[1].beta),
                   photon("t_in", qubits[2].alpha, qubits[2].beta), photon("a1", r, r), photon("a2", r, r)};
    }
    FockState out = photons[0];
    for (std::size_t i = 1; i < photons.size(); ++i) out = tensor(out, photons[i]);
    // exact renormalization guards against 1e-9-level slack in the inputs
    auto [unit, n2] = normalize(out);
    (void)n2;
    return unit;
}

LogicalState decode_output(const FockState& state, const Circuit& circuit) {
    const ModeRegistry& reg = state.registry();
    const int n = static_cast<int>(circuit.outputs.size());
    LogicalState out;
    out.amplitudes.assign(1u << n, {0.0, 0.0});
    for (const auto& [ket, amp] : state.terms()) {
        int index = 0;
        for (int q = 0; q < n; ++q) {
            const int spatial = reg.spatial_index(circuit.outputs[q].mode);
            if (ket.spatial_total(spatial) != 1)
                throw Error(ErrorKind::Precondition,
                            "decode_output: output mode '" + circuit.outputs[q].mode +
                                "' does not hold exactly one photon");
            const int bit = ket.count(reg.mode_of(spatial, Pol::V)) == 1 ? 1 : 0;
            index = (index << 1) | bit;
        }
        out.amplitudes[index] += amp;
    }
    return out;
}

RunResult run_gate(const GateCircuits& gate, const FockState& input) {
    RunResult first = run(gate.main, input);
    if (!gate.options.recycle || !gate.tail) return first;

    std::vector<BranchSeed> seeds;
    for (const auto& b : first.branches) {
        if (b.success || b.failed_at != gate.divert_label) continue;
        FockState st = b.state;
        st.scale(std::sqrt(b.probability));
        st = relabel_spatial(st, gate.reroute_from, gate.reroute_to);
        seeds.push_back({b.record, std::move(st), true});
    }
    if (seeds.empty()) return first;

    RunResult second = run_branches(*gate.tail, seeds);
    RunResult merged;
    for (auto& b : first.branches)
        if (b.success || b.failed_at != gate.divert_label) merged.branches.push_back(std::move(b));
    for (auto& b : second.branches) merged.branches.push_back(std::move(b));
    return merged;
}

LogicalState ideal_output(GateKind kind, const std::vector<QubitCoeffs>& qubits) {
    LogicalState in;
    in.amplitudes = {1.0};
    for (const auto& q : qubits) {
        LogicalState next;
        next.amplitudes.assign(in.amplitudes.size() * 2, {0.0, 0.0});
        for (std::size_t i = 0; i < in.amplitudes.size(); ++i) {
            next.amplitudes[2 * i] = in.amplitudes[i] * q.alpha;
            next.amplitudes[2 * i + 1] = in.amplitudes[i] * q.beta;
        }
        in = std::move(next);
    }
    return ideal_gate(kind).apply(in);
}

double state_fidelity(const LogicalState& a, const LogicalState& b) {
    if (a.amplitudes.size() != b.amplitudes.size())
        throw Error(ErrorKind::InvalidArgument, "state_fidelity: dimension mismatch");
    complexd dot{0.0, 0.0};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) dot += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    double na = a.norm_squared(), nb = b.norm_squared();
    if (na <= 0.0 || nb <= 0.0) throw Error(ErrorKind::ZeroNorm, "state_fidelity: zero state");
    return std::abs(dot) / std::sqrt(na * nb);
}

}  // namespace pgl
