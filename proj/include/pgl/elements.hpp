#ifndef PGL_ELEMENTS_HPP
#define PGL_ELEMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "pgl/fock.hpp"

namespace pgl {

enum class ElementKind { PBS, HWP, BS, SigmaX, SigmaZ };

std::string element_kind_name(ElementKind k);
ElementKind element_kind_from_name(const std::string& name);

/// One optical element with explicit port wiring.
///
/// HWP / Pauli: one port (`ports[0]`), in-place.
/// BS: ports = {in_a, in_b, out_a, out_b}; in_a -> (out_a + out_b)/sqrt(2),
///     in_b -> (out_a - out_b)/sqrt(2), polarization preserved.
/// PBS: ports = {in_a, in_b, out_a, out_b}; `h_of_in_a` names the output that
///     receives in_a's H component. The rest of the routing is forced:
///     in_a's V and in_b's H go to the other output, in_b's V follows in_a's H.
///     All entries +1 (no reflection phase).
struct ElementSpec {
    ElementKind kind = ElementKind::HWP;
    double theta_deg = 0.0;            // HWP only
    std::vector<std::string> ports;
    std::string h_of_in_a;             // PBS only

    static ElementSpec hwp(double theta_deg, const std::string& port);
    static ElementSpec pbs(const std::string& in_a, const std::string& in_b,
                           const std::string& out_a, const std::string& out_b,
                           const std::string& h_of_in_a);
    static ElementSpec bs(const std::string& in_a, const std::string& in_b,
                          const std::string& out_a, const std::string& out_b);
    static ElementSpec pauli(ElementKind kind, const std::string& port);

    std::string describe() const;
};

/// 2x2 polarization rotation of a half-wave plate at `theta_deg`:
/// H -> cos2t H + sin2t V, V -> sin2t H - cos2t V.
ModeUnitary hwp_unitary(RegistryPtr reg, double theta_deg, const std::string& port);

/// Compile an element against a registry. Validates ports and wiring and
/// checks the result is unitary.
ModeUnitary compile_element(const ElementSpec& spec, RegistryPtr reg);

}  // namespace pgl

#endif
