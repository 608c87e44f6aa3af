#ifndef PGL_GATES_HPP
#define PGL_GATES_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pgl/circuit.hpp"

namespace pgl {

enum class GateKind { CPF, Toffoli };

struct GateOptions {
    bool with_bs = true;
    bool recycle = false;
    bool apply_feed_forward = true;

    void validate() const;  // recycle implies with_bs
};

/// Amplitudes of an n-qubit state, basis ordered |0..0> .. |1..1> with H = 0,
/// control(s) before target.
struct LogicalState {
    std::vector<complexd> amplitudes;

    int qubit_count() const;
    double norm_squared() const;
};

/// Dense 2^n x 2^n logical unitary (row-major).
struct LogicalUnitary {
    int qubits;
    std::vector<complexd> mat;

    LogicalState apply(const LogicalState& in) const;
};

LogicalUnitary ideal_gate(GateKind kind);

/// One photonic qubit's coefficients (|alpha|^2 + |beta|^2 = 1).
struct QubitCoeffs {
    complexd alpha{1.0, 0.0};
    complexd beta{0.0, 0.0};

    static QubitCoeffs basis(int bit) { return bit ? QubitCoeffs{0.0, 1.0} : QubitCoeffs{1.0, 0.0}; }
    void validate() const;
};

/// The compiled circuits for one gate. For a recycling run `divert` names the
/// post-selection that parks the delayed-photon component and `tail` is the
/// continuation re-entered after relabeling `reroute_from` -> `reroute_to`.
struct GateCircuits {
    GateKind kind;
    GateOptions options;
    Circuit main;
    std::optional<Circuit> tail;
    std::string divert_label;    // label of the diverted-branch post-selection
    std::string reroute_from;    // "5''"
    std::string reroute_to;      // "5'"
};

Circuit build_cpf_circuit(bool apply_feed_forward = true);
Circuit build_toffoli_circuit(const GateOptions& opts);

GateCircuits build_gate(GateKind kind, const GateOptions& opts = {});

/// Product input of the gate photons and the fixed diagonal ancilla(e).
FockState encode_input(const GateCircuits& gate, const std::vector<QubitCoeffs>& qubits);

/// Reads the polarization of each output mode into a logical vector.
/// Requires exactly one photon per output spatial mode.
LogicalState decode_output(const FockState& state, const Circuit& circuit);

/// Runs the gate end to end; a recycling gate reroutes the delayed component
/// through the tail circuit and appends those branches (success probabilities
/// add incoherently).
RunResult run_gate(const GateCircuits& gate, const FockState& input);

LogicalState ideal_output(GateKind kind, const std::vector<QubitCoeffs>& qubits);

double state_fidelity(const LogicalState& a, const LogicalState& b);  // |<a|b>|

}  // namespace pgl

#endif
