#include "pgl/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pgl {

Step Step::make_element(ElementSpec e) {
    Step s;
    s.type = Type::Element;
    s.element = std::move(e);
    return s;
}
Step Step::make_detect(std::string detection_label) {
    Step s;
    s.type = Type::Detect;
    s.detection = std::move(detection_label);
    return s;
}
Step Step::make_post_select(PostSelectStep ps) {
    Step s;
    s.type = Type::PostSelect;
    s.post_select = std::move(ps);
    return s;
}
Step Step::make_checkpoint(CheckpointStep cp) {
    Step s;
    s.type = Type::Checkpoint;
    s.checkpoint = std::move(cp);
    return s;
}

RegistryPtr Circuit::make_registry() const { return std::make_shared<ModeRegistry>(registry); }

const DetectionRule& Circuit::detection(const std::string& label) const {
    for (const auto& d : detections)
        if (d.label == label) return d;
    throw Error(ErrorKind::Config, "undeclared detection '" + label + "'");
}

void Circuit::validate() const {
    RegistryPtr reg = make_registry();
    std::set<std::string> detection_modes;
    for (const auto& d : detections) {
        reg->spatial_index(d.mode);
        if (d.required_count < 0) throw Error(ErrorKind::Validation, "detection: negative required count");
        detection_modes.insert(d.mode);
    }
    for (const auto& o : outputs) {
        reg->spatial_index(o.mode);
        if (detection_modes.count(o.mode))
            throw Error(ErrorKind::Validation, "output mode '" + o.mode + "' collides with a detector");
    }
    for (const auto& ff : feed_forwards) {
        detection(ff.detection);
        compile_element(ff.action, reg);  // must compile to a valid unitary
    }
    for (const auto& step : placements) {
        switch (step.type) {
            case Step::Type::Element:
                compile_element(step.element, reg);
                break;
            case Step::Type::Detect:
                detection(step.detection);
                break;
            case Step::Type::PostSelect:
                for (const auto& [label, count] : step.post_select.pattern) {
                    reg->spatial_index(label);
                    if (count < 0) throw Error(ErrorKind::Validation, "post-selection: negative count");
                }
                break;
            case Step::Type::Checkpoint:
                for (const auto& [label, count] : step.checkpoint.view_exact) reg->spatial_index(label);
                for (const auto& [label, count] : step.checkpoint.view_at_most) reg->spatial_index(label);
                break;
        }
    }
}

double RunResult::total_probability() const {
    double p = 0.0;
    for (const auto& b : branches) p += b.probability;
    return p;
}

double RunResult::success_probability() const {
    double p = 0.0;
    for (const auto& b : branches)
        if (b.success) p += b.probability;
    return p;
}

std::vector<const BranchOutcome*> RunResult::successes() const {
    std::vector<const BranchOutcome*> out;
    for (const auto& b : branches)
        if (b.success) out.push_back(&b);
    return out;
}

std::vector<const TracePoint*> RunResult::checkpoints(const std::string& label) const {
    std::vector<const TracePoint*> out;
    for (const auto& b : branches)
        for (const auto& t : b.trace)
            if (t.checkpoint == label) out.push_back(&t);
    return out;
}

// ----------------------------------------------------------- projections

FockState project_counts(const FockState& state, const CountPattern& exact, const CountPattern& at_most) {
    const ModeRegistry& reg = state.registry();
    std::vector<std::pair<int, int>> exact_idx, cap_idx;
    for (const auto& [label, count] : exact) exact_idx.emplace_back(reg.spatial_index(label), count);
    for (const auto& [label, count] : at_most) cap_idx.emplace_back(reg.spatial_index(label), count);

    FockState kept(state.registry_ptr(), state.photon_number());
    for (const auto& [ket, amp] : state.terms()) {
        bool ok = true;
        for (const auto& [idx, count] : exact_idx)
            if (ket.spatial_total(idx) != count) { ok = false; break; }
        if (ok)
            for (const auto& [idx, count] : cap_idx)
                if (ket.spatial_total(idx) > count) { ok = false; break; }
        if (ok) kept.add_term(ket, amp);
    }
    return kept;
}

std::pair<FockState, double> post_select(const FockState& state, const CountPattern& pattern) {
    FockState kept = project_counts(state, pattern);
    double p = kept.norm_squared();
    if (p <= 0.0) return {std::move(kept), 0.0};
    kept.scale(1.0 / std::sqrt(p));
    return {std::move(kept), p};
}

std::vector<PolarizationOutcome> measure_polarization(const FockState& state, const std::string& mode) {
    const ModeRegistry& reg = state.registry();
    const int spatial = reg.spatial_index(mode);
    const int mode_h = reg.mode_of(spatial, Pol::H);

    FockState part_h(state.registry_ptr(), std::max(0, state.photon_number() - 1));
    FockState part_v(state.registry_ptr(), std::max(0, state.photon_number() - 1));
    for (const auto& [ket, amp] : state.terms()) {
        if (ket.spatial_total(spatial) != 1)
            throw Error(ErrorKind::Precondition,
                        "measure_polarization: mode '" + mode + "' does not hold exactly one photon");
        if (ket.count(mode_h) == 1)
            part_h.add_term(ket.without_spatial(spatial), amp);
        else
            part_v.add_term(ket.without_spatial(spatial), amp);
    }

    std::vector<PolarizationOutcome> outcomes;
    for (auto [pol, part] : {std::pair<Pol, FockState*>{Pol::H, &part_h}, {Pol::V, &part_v}}) {
        double p = part->norm_squared();
        if (p <= 0.0) continue;
        FockState collapsed = *part;
        collapsed.scale(1.0 / std::sqrt(p));
        outcomes.push_back({pol, p, std::move(collapsed)});
    }
    return outcomes;
}

FockState relabel_spatial(const FockState& state, const std::string& from, const std::string& to) {
    const ModeRegistry& reg = state.registry();
    const int si_from = reg.spatial_index(from), si_to = reg.spatial_index(to);
    FockState out(state.registry_ptr(), state.photon_number());
    for (const auto& [ket, amp] : state.terms()) {
        if (ket.spatial_total(si_to) != 0)
            throw Error(ErrorKind::Precondition, "relabel_spatial: target mode occupied");
        BasisKet moved = ket;
        for (Pol p : {Pol::H, Pol::V}) {
            int c = ket.count(reg.mode_of(si_from, p));
            if (c > 0) moved = moved.with_added(reg.mode_of(si_from, p), -c).with_added(reg.mode_of(si_to, p), c);
        }
        out.add_term(moved, amp);
    }
    return out;
}

// ----------------------------------------------------------------- engine

namespace {

struct LiveBranch {
    std::map<std::string, DetectorClick> record;
    FockState state;  // unnormalized
    bool recycled = false;
    std::vector<TracePoint> trace;
};

// Split a live branch by the (nH, nV) photon count of one spatial mode.
// Returns groups in a deterministic order: counts ascending by (total, nV).
std::vector<std::pair<std::pair<int, int>, FockState>> split_by_counts(const FockState& state, int spatial) {
    const ModeRegistry& reg = state.registry();
    const int mode_h = reg.mode_of(spatial, Pol::H), mode_v = reg.mode_of(spatial, Pol::V);
    std::map<std::pair<int, int>, FockState> groups;
    for (const auto& [ket, amp] : state.terms()) {
        std::pair<int, int> key{ket.count(mode_h), ket.count(mode_v)};
        auto it = groups.find(key);
        if (it == groups.end())
            it = groups.emplace(key, FockState(state.registry_ptr(), state.photon_number())).first;
        it->second.add_term(ket, amp);
    }
    std::vector<std::pair<std::pair<int, int>, FockState>> out;
    out.reserve(groups.size());
    for (auto& [key, part] : groups) out.emplace_back(key, std::move(part));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        int ta = a.first.first + a.first.second, tb = b.first.first + b.first.second;
        if (ta != tb) return ta < tb;
        return a.first < b.first;
    });
    return out;
}

FockState remove_detected(const FockState& state, int spatial) {
    FockState out(state.registry_ptr(), state.photon_number() - state.terms().begin()->first.spatial_total(spatial));
    for (const auto& [ket, amp] : state.terms()) out.add_term(ket.without_spatial(spatial), amp);
    return out;
}

}  // namespace

RunResult run_branches(const Circuit& circuit, const std::vector<BranchSeed>& seeds) {
    RegistryPtr reg = circuit.make_registry();
    RunResult result;
    uint64_t next_snapshot_id = 1;

    std::vector<LiveBranch> live;
    for (const auto& seed : seeds) {
        if (!(seed.state.registry() == *reg))
            throw Error(ErrorKind::Config, "run: input registry differs from the circuit's");
        live.push_back({seed.record, seed.state, seed.recycled, {}});
    }

    auto fail_branch = [&](LiveBranch&& b, const std::string& where) {
        BranchOutcome out;
        out.record = std::move(b.record);
        out.probability = b.state.norm_squared();
        if (out.probability <= 0.0) return;
        b.state.scale(1.0 / std::sqrt(out.probability));
        out.state = std::move(b.state);
        out.success = false;
        out.failed_at = where;
        out.recycled = b.recycled;
        out.trace = std::move(b.trace);
        result.branches.push_back(std::move(out));
    };

    for (const auto& step : circuit.placements) {
        switch (step.type) {
            case Step::Type::Element: {
                ModeUnitary u = compile_element(step.element, reg);
                for (auto& b : live) b.state = apply_mode_unitary(b.state, u);
                break;
            }
            case Step::Type::Checkpoint: {
                for (auto& b : live) {
                    FockState view = (step.checkpoint.view_exact.empty() && step.checkpoint.view_at_most.empty())
                                         ? b.state
                                         : project_counts(b.state, step.checkpoint.view_exact,
                                                          step.checkpoint.view_at_most);
                    double p = view.norm_squared();
                    b.trace.push_back({step.checkpoint.label, std::move(view), p, next_snapshot_id++});
                }
                break;
            }
            case Step::Type::PostSelect: {
                std::vector<LiveBranch> next;
                for (auto& b : live) {
                    FockState kept = project_counts(b.state, step.post_select.pattern);
                    FockState dropped(b.state.registry_ptr(), b.state.photon_number());
                    for (const auto& [ket, amp] : b.state.terms())
                        if (kept.amplitude(ket) == complexd{0.0, 0.0}) dropped.add_term(ket, amp);
                    if (dropped.norm_squared() > 0.0) {
                        LiveBranch failed{b.record, std::move(dropped), b.recycled, b.trace};
                        fail_branch(std::move(failed), "postselect:" + step.post_select.label);
                    }
                    if (kept.norm_squared() > 0.0) {
                        b.state = std::move(kept);
                        next.push_back(std::move(b));
                    }
                }
                live.swap(next);
                break;
            }
            case Step::Type::Detect: {
                const DetectionRule& rule = circuit.detection(step.detection);
                const int spatial = reg->spatial_index(rule.mode);
                std::vector<LiveBranch> next;
                for (auto& b : live) {
                    auto groups = split_by_counts(b.state, spatial);
                    for (auto& [counts, part] : groups) {
                        auto [n_h, n_v] = counts;
                        const int total = n_h + n_v;
                        DetectorClick click;
                        click.count_h = n_h;
                        click.count_v = n_v;
                        click.met = (total == rule.required_count);
                        if (rule.basis == DetectionBasis::PolarizationResolved)
                            click.outcome = (click.met && total == 1)
                                                ? (n_h > 0 ? "H" : "V")
                                                : "(" + std::to_string(n_h) + "," + std::to_string(n_v) + ")";
                        else
                            click.outcome = std::to_string(total);

                        LiveBranch child{b.record, std::move(part), b.recycled, b.trace};
                        child.record[rule.label] = click;
                        if (!click.met) {
                            fail_branch(std::move(child), "detect:" + rule.label);
                            continue;
                        }
                        if (total > 0) child.state = remove_detected(child.state, spatial);
                        for (const auto& ff : circuit.feed_forwards) {
                            if (ff.detection == rule.label && ff.outcome == click.outcome)
                                child.state = apply_mode_unitary(child.state, compile_element(ff.action, reg));
                        }
                        next.push_back(std::move(child));
                    }
                }
                live.swap(next);
                break;
            }
        }
    }

    // Final coincidence: exactly one photon in each output spatial mode.
    CountPattern coincidence;
    for (const auto& o : circuit.outputs) coincidence[o.mode] = 1;
    for (auto& b : live) {
        FockState kept = project_counts(b.state, coincidence);
        FockState dropped(b.state.registry_ptr(), b.state.photon_number());
        for (const auto& [ket, amp] : b.state.terms())
            if (kept.amplitude(ket) == complexd{0.0, 0.0}) dropped.add_term(ket, amp);
        if (dropped.norm_squared() > 0.0) {
            LiveBranch failed{b.record, std::move(dropped), b.recycled, b.trace};
            fail_branch(std::move(failed), "coincidence");
        }
        double p = kept.norm_squared();
        if (p <= 0.0) continue;
        BranchOutcome out;
        out.record = std::move(b.record);
        out.probability = p;
        kept.scale(1.0 / std::sqrt(p));
        out.state = std::move(kept);
        out.success = true;
        out.recycled = b.recycled;
        out.trace = std::move(b.trace);
        result.branches.push_back(std::move(out));
    }
    return result;
}

RunResult run(const Circuit& circuit, const FockState& input) {
    BranchSeed seed{{}, input, false};
    return run_branches(circuit, {seed});
}

}  // namespace pgl
