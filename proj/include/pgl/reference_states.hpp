#ifndef PGL_REFERENCE_STATES_HPP
#define PGL_REFERENCE_STATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "pgl/gates.hpp"

namespace pgl {

/// Closed-form expected state at a named checkpoint, derived by hand from the
/// standard wirings, as a function of the input coefficients. Available for
/// the checkpoints whose intermediate states have published expressions.
std::optional<FockState> reference_checkpoint_state(const GateCircuits& gate,
                                                    const std::vector<QubitCoeffs>& qubits,
                                                    const std::string& checkpoint);

/// Expected cumulative probability at the checkpoint, when known in closed
/// form (e.g. 1/2 after the first parity check, 1/4 after the coincidence
/// selection of the two-qubit gate).
std::optional<double> reference_checkpoint_probability(const GateCircuits& gate,
                                                       const std::vector<QubitCoeffs>& qubits,
                                                       const std::string& checkpoint);

struct KetDiff {
    std::string ket;
    complexd simulated;   // normalized, phase-aligned
    complexd reference;
    double abs_diff;
};

struct CheckpointDiff {
    std::string checkpoint;
    bool has_reference = false;
    int instances = 0;        // snapshots found (one per branch reaching the label)
    double cumulative_probability = 0.0;   // summed over instances
    std::optional<double> reference_probability;
    double max_abs_diff = 0.0;
    std::vector<KetDiff> kets;             // worst instance, normalized amplitudes
};

/// Compares the simulator's (phase-aligned, normalized) checkpoint state
/// against the closed-form reference, ket by ket.
CheckpointDiff diff_checkpoint(const GateCircuits& gate, const std::vector<QubitCoeffs>& qubits,
                               const std::string& checkpoint);

std::vector<std::string> referenced_checkpoints(GateKind kind);

}  // namespace pgl

#endif
