#ifndef PGL_ANALYSIS_HPP
#define PGL_ANALYSIS_HPP

#include <functional>
#include <string>
#include <vector>

#include "pgl/gates.hpp"

namespace pgl {

/// Sum of probabilities over success branches.
double success_probability(const RunResult& result);

/// Probability-weighted mean of |<ideal|branch>| over success branches.
/// Throws ZeroNorm when no branch succeeds.
double gate_fidelity(const RunResult& result, const Circuit& circuit, const LogicalState& ideal);

struct TruthTableEntry {
    double success_probability = 0.0;
    std::vector<double> output_populations;  // probability-weighted |<y|out>|^2 per basis y
};

/// Coincidence-basis characterization over all computational-basis inputs.
std::vector<TruthTableEntry> truth_table(GateKind kind, const GateOptions& opts = {});

struct SweepRow {
    double alpha2;
    double p_sim;
    double p_paper;
    double f_sim;
    double f_paper;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    GateOptions options;
    uint64_t seed = 0;
    int draws = 20;

    std::string to_csv() const;  // header alpha2,p_sim,p_paper,f_sim,f_paper,options,seed
};

struct GridSpec {
    double start = -1.0;
    double stop = 1.0;
    double step = 0.01;

    std::vector<double> points() const;  // start, start+step, ..., capped at stop
    void validate() const;               // within [-1, 1], step > 0, start <= stop
};

/// Reference closed-form curves for the three-qubit gate.
double p_reference_curve(double alpha2, const GateOptions& opts);
double f_reference_curve(double alpha2, const GateOptions& opts);

/// For each grid alpha2: control-2 set to (alpha2, sqrt(1-alpha2^2)); p_sim
/// and f_sim averaged over `draws` deterministic pseudo-random coefficient
/// draws for the other qubits; reference columns from the closed forms.
/// Grid points evaluate independently (parallelized up to `threads`, order
/// of assembly fixed by grid index).
SweepTable sweep_alpha2(const GridSpec& grid, const GateOptions& opts, uint64_t seed = 7, int draws = 20,
                        int threads = 0);

/// (1/2) * integral of curve over [-1, 1], adaptive Simpson, abs tol 1e-9.
double average_over_alpha2(const std::function<double(double)>& curve, double abs_tol = 1e-9);

/// Deterministic, platform-independent pseudo-random qubit coefficients.
std::vector<QubitCoeffs> seeded_coefficient_draws(uint64_t seed, int count, int qubits_per_draw);

/// Haar-style random unitary on `dim` modes (Gaussian matrix, Gram-Schmidt),
/// from a deterministic stream.
std::vector<complexd> random_unitary(int dim, uint64_t seed);

struct OracleCheckResult {
    int trials = 0;
    int amplitudes_checked = 0;
    double max_deviation = 0.0;
};

/// Cross-validates creation-operator evolution against the permanent oracle:
/// random unitaries on `modes` modes, random input occupations of 1..max_photons
/// photons, every output amplitude compared.
OracleCheckResult oracle_check(int modes, int max_photons, int trials, uint64_t seed);

}  // namespace pgl

#endif
