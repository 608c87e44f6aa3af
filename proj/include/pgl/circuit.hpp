#ifndef PGL_CIRCUIT_HPP
#define PGL_CIRCUIT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgl/elements.hpp"
#include "pgl/fock.hpp"

namespace pgl {

enum class DetectionBasis { PolarizationResolved, NumberOnly };

/// A detector station on one spatial mode. `required_count` is the
/// coincidence condition; outcomes that do not meet it terminate the branch.
struct DetectionRule {
    std::string label;       // e.g. "D3"
    std::string mode;        // spatial label
    DetectionBasis basis = DetectionBasis::PolarizationResolved;
    int required_count = 1;
};

/// Conditional Pauli applied to a surviving mode when a detector reports a
/// given outcome ("H"/"V" for polarization-resolved stations, a count such as
/// "1" for number-only ones).
struct FeedForwardRule {
    std::string detection;   // DetectionRule label
    std::string outcome;
    ElementSpec action;      // SigmaX or SigmaZ on a named mode
};

/// Per-spatial-mode exact photon-count condition.
using CountPattern = std::map<std::string, int>;

struct PostSelectStep {
    std::string label;
    CountPattern pattern;
};

/// Named boundary where per-branch state snapshots are recorded. An optional
/// view pattern (exact counts plus at-most caps) restricts what the snapshot
/// shows without affecting the evolution; used to line snapshots up with
/// closed-form intermediate states.
struct CheckpointStep {
    std::string label;
    CountPattern view_exact;
    CountPattern view_at_most;
};

struct Step {
    enum class Type { Element, Detect, PostSelect, Checkpoint };
    Type type = Type::Element;
    ElementSpec element;                    // Type::Element
    std::string detection;                  // Type::Detect (label into detections)
    PostSelectStep post_select;             // Type::PostSelect
    CheckpointStep checkpoint;              // Type::Checkpoint

    static Step make_element(ElementSpec e);
    static Step make_detect(std::string detection_label);
    static Step make_post_select(PostSelectStep ps);
    static Step make_checkpoint(CheckpointStep cp);
};

struct OutputMode {
    std::string mode;    // physical spatial label carrying the qubit
    std::string alias;   // display name, e.g. "c_out"
};

struct Circuit {
    std::vector<std::string> registry;   // spatial labels
    std::vector<Step> placements;        // ordered
    std::vector<DetectionRule> detections;
    std::vector<FeedForwardRule> feed_forwards;
    std::vector<OutputMode> outputs;

    RegistryPtr make_registry() const;
    const DetectionRule& detection(const std::string& label) const;

    /// Structural checks: labels registered, detection modes disjoint from
    /// outputs, feed-forward triggers declared, elements compile.
    void validate() const;
};

/// What one detector reported in one branch.
struct DetectorClick {
    std::string outcome;   // "H", "V", or a count; "" while pending
    int count_h = 0;
    int count_v = 0;
    bool met = false;      // required_count satisfied
};

struct TracePoint {
    std::string checkpoint;
    FockState state;          // unnormalized; squared norm = cumulative probability
    double cumulative_probability;
    uint64_t id = 0;          // distinct per captured snapshot; copies into
                              // descendant branches share the id
};

/// One detector-outcome branch of a run. States are carried unnormalized so
/// that squared norms are cumulative probabilities; `state` in the final
/// outcome is normalized, with `probability` holding the branch weight.
struct BranchOutcome {
    std::map<std::string, DetectorClick> record;
    double probability = 0.0;
    FockState state;          // normalized; empty for zero-probability failures
    bool success = false;
    std::string failed_at;    // step label for failure branches
    bool recycled = false;    // produced by a rerouted second attempt
    std::vector<TracePoint> trace;
};

struct RunResult {
    std::vector<BranchOutcome> branches;

    double total_probability() const;    // sum over all branches (~1)
    double success_probability() const;  // sum over success branches
    std::vector<const BranchOutcome*> successes() const;

    /// All snapshots recorded for `label`, one per branch that reached it.
    std::vector<const TracePoint*> checkpoints(const std::string& label) const;
};

/// Seed for continuing a run from a saved branch (used by recycling).
struct BranchSeed {
    std::map<std::string, DetectorClick> record;
    FockState state;   // unnormalized
    bool recycled = false;
};

/// Applies placements in order, splitting into orthogonal branches at each
/// detection, applying matching feed-forwards, and finally partitioning every
/// surviving branch by the output coincidence condition (exactly one photon
/// per output spatial mode). Failure branches are materialized so that branch
/// probabilities sum to one.
RunResult run(const Circuit& circuit, const FockState& input);

/// Same engine, starting from prepared branches (detector history carried in).
RunResult run_branches(const Circuit& circuit, const std::vector<BranchSeed>& seeds);

/// Zeroes all kets violating the exact per-spatial-mode counts; returns the
/// normalized remainder and its squared-norm probability. An empty remainder
/// is reported as probability 0 with an empty state, not an error.
std::pair<FockState, double> post_select(const FockState& state, const CountPattern& pattern);

/// Unnormalized projection (exact counts and optional at-most caps).
FockState project_counts(const FockState& state, const CountPattern& exact, const CountPattern& at_most = {});

struct PolarizationOutcome {
    Pol pol;
    double probability;
    FockState collapsed;   // normalized, measured mode removed
};

/// Polarization measurement of a mode holding exactly one photon in every ket.
std::vector<PolarizationOutcome> measure_polarization(const FockState& state, const std::string& mode);

/// Relabel one spatial mode onto another (target must be empty); used when a
/// delayed photon is rerouted into a beam-splitter port for a second attempt.
FockState relabel_spatial(const FockState& state, const std::string& from, const std::string& to);

}  // namespace pgl

#endif
