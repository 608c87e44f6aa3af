#include "pgl/reference_states.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pgl {

namespace {

const double R2 = std::sqrt(2.0);

// One printed term: coefficient times a product of single-mode creation ops.
struct RefTerm {
    complexd c;
    std::vector<std::pair<std::string, Pol>> modes;
};
using Factor = std::vector<RefTerm>;

Factor qubit_factor(const std::string& label, complexd a, complexd b) {
    Factor f;
    if (a != complexd{0.0, 0.0}) f.push_back({a, {{label, Pol::H}}});
    if (b != complexd{0.0, 0.0}) f.push_back({b, {{label, Pol::V}}});
    return f;
}

Factor diag_factor(const std::string& label) { return qubit_factor(label, 1.0 / R2, 1.0 / R2); }

Factor product(const Factor& x, const Factor& y) {
    Factor out;
    for (const auto& tx : x) {
        for (const auto& ty : y) {
            RefTerm t{tx.c * ty.c, tx.modes};
            t.modes.insert(t.modes.end(), ty.modes.begin(), ty.modes.end());
            out.push_back(std::move(t));
        }
    }
    return out;
}

FockState to_state(RegistryPtr reg, const Factor& terms) {
    int photons = terms.empty() ? 0 : static_cast<int>(terms.front().modes.size());
    FockState s(reg, photons);
    for (const auto& t : terms) {
        BasisKet ket;
        complexd amp = t.c;
        for (const auto& [label, pol] : t.modes) {
            int mode = reg->mode(label, pol);
            // repeated creation operators on one mode pick up sqrt(n!) weights
            int before = ket.count(mode);
            ket = ket.with_added(mode, 1);
            amp *= std::sqrt(static_cast<double>(before + 1));
        }
        s.add_term(ket, amp);
    }
    return s;
}

struct Coeffs {
    complexd a1, b1, a2, b2, a3, b3;
};

Coeffs unpack(GateKind kind, const std::vector<QubitCoeffs>& q) {
    Coeffs c{};
    c.a1 = q.at(0).alpha;
    c.b1 = q.at(0).beta;
    c.a2 = q.at(1).alpha;
    c.b2 = q.at(1).beta;
    if (kind == GateKind::Toffoli) {
        c.a3 = q.at(2).alpha;
        c.b3 = q.at(2).beta;
    }
    return c;
}

using M = std::vector<std::pair<std::string, Pol>>;
const Pol H = Pol::H;
const Pol V = Pol::V;

// ---- two-qubit gate -----------------------------------------------------

std::optional<FockState> cpf_reference(RegistryPtr reg, const Coeffs& k, const std::string& cp) {
    if (cp == "input") {
        Factor f = product(product(qubit_factor("c_in", k.a1, k.b1), diag_factor("a")),
                           qubit_factor("t_in", k.a2, k.b2));
        return to_state(reg, f);
    }
    if (cp == "after-pbs1") {
        Factor parity = {{k.a1 / R2, M{{"1", H}, {"2", H}}},
                         {k.b1 / R2, M{{"1", H}, {"1", V}}},
                         {k.a1 / R2, M{{"2", H}, {"2", V}}},
                         {k.b1 / R2, M{{"1", V}, {"2", V}}}};
        return to_state(reg, product(parity, qubit_factor("t_in", k.a2, k.b2)));
    }
    if (cp == "after-pbs1-postselect") {
        Factor parity = {{k.a1, M{{"1", H}, {"2", H}}}, {k.b1, M{{"1", V}, {"2", V}}}};
        return to_state(reg, product(parity, qubit_factor("t_in", k.a2, k.b2)));
    }
    if (cp == "after-pbs2-block") {
        Factor f;
        auto add = [&](complexd c, const M& m) { f.push_back({c, m}); };
        // kept rows, one photon in each of 3 and 4
        add(0.5 * k.a1 * k.a2, M{{"1", H}, {"4", H}, {"3", H}});
        add(0.5 * k.a1 * k.b2, M{{"1", H}, {"4", V}, {"3", H}});
        add(0.5 * k.b1 * k.a2, M{{"1", V}, {"4", H}, {"3", H}});
        add(-0.5 * k.b1 * k.b2, M{{"1", V}, {"4", V}, {"3", H}});
        add(0.5 * k.a1 * k.a2, M{{"1", H}, {"4", H}, {"3", V}});
        add(-0.5 * k.a1 * k.b2, M{{"1", H}, {"4", V}, {"3", V}});
        add(0.5 * k.b1 * k.a2, M{{"1", V}, {"4", H}, {"3", V}});
        add(0.5 * k.b1 * k.b2, M{{"1", V}, {"4", V}, {"3", V}});
        // two photons in mode 3: (H3+V3)(H3-V3) expands to sqrt2(|2H> - |2V>)
        add(0.5 * k.a1 * k.a2, M{{"1", H}, {"3", H}, {"3", H}});
        add(-0.5 * k.a1 * k.a2, M{{"1", H}, {"3", V}, {"3", V}});
        add(-0.5 * k.b1 * k.a2, M{{"1", V}, {"3", H}, {"3", H}});
        add(0.5 * k.b1 * k.a2, M{{"1", V}, {"3", V}, {"3", V}});
        // two photons in mode 4
        add(k.a1 * k.b2 / R2, M{{"1", H}, {"4", H}, {"4", V}});
        add(k.b1 * k.b2 / R2, M{{"1", V}, {"4", H}, {"4", V}});
        return to_state(reg, f);
    }
    if (cp == "after-postselect-34") {
        Factor f;
        auto add = [&](complexd c, const M& m) { f.push_back({c / R2, m}); };
        add(k.a1 * k.a2, M{{"1", H}, {"4", H}, {"3", H}});
        add(k.a1 * k.b2, M{{"1", H}, {"4", V}, {"3", H}});
        add(k.b1 * k.a2, M{{"1", V}, {"4", H}, {"3", H}});
        add(-k.b1 * k.b2, M{{"1", V}, {"4", V}, {"3", H}});
        add(k.a1 * k.a2, M{{"1", H}, {"4", H}, {"3", V}});
        add(-k.a1 * k.b2, M{{"1", H}, {"4", V}, {"3", V}});
        add(k.b1 * k.a2, M{{"1", V}, {"4", H}, {"3", V}});
        add(k.b1 * k.b2, M{{"1", V}, {"4", V}, {"3", V}});
        return to_state(reg, f);
    }
    if (cp == "after-feed-forward") {
        Factor f = {{k.a1 * k.a2, M{{"1", H}, {"4", H}}},
                    {k.a1 * k.b2, M{{"1", H}, {"4", V}}},
                    {k.b1 * k.a2, M{{"1", V}, {"4", H}}},
                    {-k.b1 * k.b2, M{{"1", V}, {"4", V}}}};
        return to_state(reg, f);
    }
    return std::nullopt;
}

// ---- three-qubit gate ---------------------------------------------------

std::optional<FockState> toffoli_reference(RegistryPtr reg, const Coeffs& k, const GateOptions& opts,
                                           const std::string& cp) {
    const std::string bs_out = opts.with_bs ? "5'" : "5";
    Factor rest = product(diag_factor("a2"), qubit_factor("t_in", k.a3, k.b3));

    if (cp == "input") {
        Factor f = product(qubit_factor("c1_in", k.a1, k.b1), diag_factor("a1"));
        f = product(f, qubit_factor("c2_in", k.a2, k.b2));
        f = product(f, product(diag_factor("a2"), qubit_factor("t_in", k.a3, k.b3)));
        return to_state(reg, f);
    }
    if (cp == "after-pbs1") {
        Factor parity = {{k.a1 / R2, M{{"1", H}, {"2", H}}},
                         {k.b1 / R2, M{{"1", H}, {"1", V}}},
                         {k.a1 / R2, M{{"2", H}, {"2", V}}},
                         {k.b1 / R2, M{{"1", V}, {"2", V}}}};
        Factor f = product(parity, qubit_factor("c2_in", k.a2, k.b2));
        return to_state(reg, product(f, rest));
    }
    if (cp == "after-pbs1-postselect") {
        Factor parity = {{k.a1, M{{"1", H}, {"2", H}}}, {k.b1, M{{"1", V}, {"2", V}}}};
        Factor f = product(parity, qubit_factor("c2_in", k.a2, k.b2));
        return to_state(reg, product(f, rest));
    }
    if (cp == "after-pbs3-block") {
        // printed form: the one-photon group at full weight, the two-photon
        // group at half weight
        Factor core;
        auto add = [&](complexd c, const M& m) { core.push_back({c / (2.0 * R2), m}); };
        add(k.a1 * k.a2, M{{"1", H}, {"4", H}, {"6", H}});
        add(k.b1 * k.a2, M{{"1", V}, {"4", H}, {"6", H}});
        add(k.a1 * k.a2, M{{"1", H}, {"4", H}, {"6", V}});
        add(k.b1 * k.a2, M{{"1", V}, {"4", H}, {"6", V}});
        add(k.a1 * k.a2, M{{"1", H}, {"4", H}, {"5", H}});
        add(-k.b1 * k.a2, M{{"1", V}, {"4", H}, {"5", H}});
        add(-k.a1 * k.a2, M{{"1", H}, {"4", H}, {"5", V}});
        add(k.b1 * k.a2, M{{"1", V}, {"4", H}, {"5", V}});
        add(0.5 * k.a1 * k.b2, M{{"1", H}, {"5", V}, {"6", H}});
        add(0.5 * k.b1 * k.b2, M{{"1", V}, {"5", H}, {"6", H}});
        add(0.5 * k.a1 * k.b2, M{{"1", H}, {"5", H}, {"6", V}});
        add(0.5 * k.b1 * k.b2, M{{"1", V}, {"5", V}, {"6", V}});
        return to_state(reg, product(core, rest));
    }
    if (cp == "after-bs" && opts.with_bs) {
        Factor core;
        auto add = [&](complexd c, const M& m) { core.push_back({c, m}); };
        const complexd w1 = 1.0 / (2.0 * R2);
        for (const char* six : {"H", "V"}) {
            Pol p6 = six[0] == 'H' ? H : V;
            // the reflected-path kets swap polarization between the two blocks
            Pol pv = six[0] == 'H' ? V : H;
            Pol ph = six[0] == 'H' ? H : V;
            add(w1 * k.a1 * k.a2, M{{"1", H}, {"4", H}, {"6", p6}});
            add(w1 * k.b1 * k.a2, M{{"1", V}, {"4", H}, {"6", p6}});
            add(w1 * k.a1 * k.b2, M{{"1", H}, {"5'", pv}, {"6", p6}});
            add(w1 * k.b1 * k.b2, M{{"1", V}, {"5'", ph}, {"6", p6}});
            add(w1 * k.a1 * k.b2, M{{"1", H}, {"5''", pv}, {"6", p6}});
            add(w1 * k.b1 * k.b2, M{{"1", V}, {"5''", ph}, {"6", p6}});
        }
        for (const char* five : {"5'", "5''"}) {
            add(0.25 * k.a1 * k.a2, M{{"1", H}, {"4", H}, {five, H}});
            add(-0.25 * k.a1 * k.a2, M{{"1", H}, {"4", H}, {five, V}});
            add(-0.25 * k.b1 * k.a2, M{{"1", V}, {"4", H}, {five, H}});
            add(0.25 * k.b1 * k.a2, M{{"1", V}, {"4", H}, {five, V}});
        }
        return to_state(reg, product(core, rest));
    }
    if (cp == "pre-pbs5") {
        Factor core = {{k.a1 * k.a2 / R2, M{{"1", H}, {"4", H}}},
                       {k.a1 * k.b2 / R2, M{{"1", H}, {bs_out, V}}},
                       {k.b1 * k.a2 / R2, M{{"1", V}, {"4", H}}},
                       {k.b1 * k.b2 / R2, M{{"1", V}, {bs_out, H}}}};
        return to_state(reg, product(core, rest));
    }
    if (cp == "after-pbs5-postselect") {
        Factor core = {{k.a1 * k.a2, M{{"1", H}, {"4", H}, {"8", V}}},
                       {k.a1 * k.b2, M{{"1", H}, {"7", V}, {"8", V}}},
                       {k.b1 * k.a2, M{{"1", V}, {"4", H}, {"8", V}}},
                       {k.b1 * k.b2, M{{"1", V}, {"7", H}, {"8", H}}}};
        return to_state(reg, product(core, qubit_factor("t_in", k.a3, k.b3)));
    }
    if (cp == "after-pbs6-block" || cp == "final") {
        const complexd g[8] = {k.a1 * k.a2 * k.a3, k.a1 * k.a2 * k.b3, k.a1 * k.b2 * k.a3,
                               k.a1 * k.b2 * k.b3, k.b1 * k.a2 * k.a3, k.b1 * k.a2 * k.b3,
                               k.b1 * k.b2 * k.a3, k.b1 * k.b2 * k.b3};
        auto one = [&](int i) { return (i & 4) ? V : H; };
        auto nine = [&](int i) { return (i & 2) ? V : H; };
        // target flipped when both controls are V
        auto eleven_ideal = [&](int i) {
            bool flip = (i & 4) && (i & 2);
            bool v = (i & 1) != 0;
            return (v != flip) ? V : H;
        };
        if (cp == "final") {
            Factor f;
            for (int i = 0; i < 8; ++i)
                f.push_back({g[i], M{{"1", one(i)}, {"9", nine(i)}, {"11", eleven_ideal(i)}}});
            return to_state(reg, f);
        }
        Factor f;
        auto flip_pol = [](Pol p) { return p == H ? V : H; };
        for (int i = 0; i < 8; ++i) {
            Pol p11 = eleven_ideal(i);
            // transmitted pair: modes 9, 11, 12
            f.push_back({0.5 * g[i], M{{"1", one(i)}, {"9", nine(i)}, {"11", p11}, {"12", V}}});
            f.push_back({0.5 * g[i], M{{"1", one(i)}, {"9", nine(i)}, {"11", flip_pol(p11)}, {"12", H}}});
            // reflected pair: photon in 10, polarization swapped, sign on the
            // double-V-control terms
            complexd c10 = (i & 4) && (i & 2) ? -0.5 * g[i] : 0.5 * g[i];
            Pol p10 = flip_pol(nine(i));
            Pol p11r = (i & 1) ? V : H;
            f.push_back({c10, M{{"1", one(i)}, {"10", p10}, {"11", p11r}, {"12", V}}});
            f.push_back({c10, M{{"1", one(i)}, {"10", p10}, {"11", flip_pol(p11r)}, {"12", H}}});
        }
        return to_state(reg, f);
    }
    return std::nullopt;
}

}  // namespace

std::optional<FockState> reference_checkpoint_state(const GateCircuits& gate,
                                                    const std::vector<QubitCoeffs>& qubits,
                                                    const std::string& checkpoint) {
    Coeffs k = unpack(gate.kind, qubits);
    RegistryPtr reg = gate.main.make_registry();
    if (gate.kind == GateKind::CPF) return cpf_reference(reg, k, checkpoint);
    return toffoli_reference(reg, k, gate.options, checkpoint);
}

std::optional<double> reference_checkpoint_probability(const GateCircuits& gate,
                                                       const std::vector<QubitCoeffs>& qubits,
                                                       const std::string& checkpoint) {
    if (gate.kind == GateKind::CPF) {
        if (checkpoint == "input" || checkpoint == "after-pbs1") return 1.0;
        if (checkpoint == "after-pbs1-postselect" || checkpoint == "after-pbs2-block") return 0.5;
        if (checkpoint == "after-postselect-34" || checkpoint == "after-feed-forward") return 0.25;
        return std::nullopt;
    }
    const double x = std::norm(qubits.at(1).alpha);
    const bool bs = gate.options.with_bs;
    if (checkpoint == "input" || checkpoint == "after-pbs1") return 1.0;
    if (checkpoint == "after-pbs1-postselect") return 0.5;
    if (checkpoint == "after-pbs3-block") return (1.0 + x) / 4.0;
    if (checkpoint == "after-bs") return bs ? std::optional<double>(0.5) : std::nullopt;
    if (checkpoint == "pre-pbs5") return bs ? (1.0 + x) / 8.0 : 0.25;
    if (checkpoint == "after-pbs5-postselect") return bs ? (1.0 + x) / 16.0 : 0.125;
    if (checkpoint == "after-pbs6-block") return bs ? (1.0 + x) / 32.0 : 1.0 / 16.0;
    if (checkpoint == "final") return bs ? (1.0 + x) / 64.0 : 1.0 / 32.0;
    return std::nullopt;
}

std::vector<std::string> referenced_checkpoints(GateKind kind) {
    if (kind == GateKind::CPF)
        return {"input", "after-pbs1", "after-pbs1-postselect", "after-pbs2-block", "after-postselect-34",
                "after-feed-forward"};
    return {"input", "after-pbs1", "after-pbs1-postselect", "after-pbs3-block", "after-bs",
            "pre-pbs5", "after-pbs5-postselect", "after-pbs6-block", "final"};
}

CheckpointDiff diff_checkpoint(const GateCircuits& gate, const std::vector<QubitCoeffs>& qubits,
                               const std::string& checkpoint) {
    CheckpointDiff out;
    out.checkpoint = checkpoint;

    FockState input = encode_input(gate, qubits);
    RunResult result = run_gate(gate, input);

    // Reference expressions describe the primary attempt; rerouted branches
    // carry their own snapshots but are not diffed here.
    std::vector<const TracePoint*> points;
    for (const auto& b : result.branches) {
        if (b.recycled) continue;
        for (const auto& t : b.trace)
            if (t.checkpoint == checkpoint) points.push_back(&t);
    }
    // A branch's trace is shared with the failure branches split off later;
    // keep one snapshot per capture.
    std::vector<const TracePoint*> unique;
    std::set<uint64_t> seen;
    for (const auto* p : points)
        if (seen.insert(p->id).second) unique.push_back(p);
    if (unique.empty()) throw Error(ErrorKind::Config, "unknown checkpoint '" + checkpoint + "'");

    out.instances = static_cast<int>(unique.size());
    for (const auto* p : unique) out.cumulative_probability += p->cumulative_probability;
    out.reference_probability = reference_checkpoint_probability(gate, qubits, checkpoint);

    auto ref = reference_checkpoint_state(gate, qubits, checkpoint);
    if (!ref) return out;
    out.has_reference = true;

    auto [ref_norm, ref_n2] = normalize(*ref);
    (void)ref_n2;

    // Diff the worst instance (post-feed-forward instances should all agree
    // with the same reference).
    double worst = -1.0;
    for (const auto* p : unique) {
        if (p->state.norm_squared() <= 0.0) continue;
        auto [sim, n2] = normalize(p->state);
        (void)n2;
        // align global phase on the reference's largest ket
        const BasisKet* anchor = nullptr;
        double best = 0.0;
        for (const auto& [ket, amp] : ref_norm.terms())
            if (std::abs(amp) > best) { best = std::abs(amp); anchor = &ket; }
        complexd s_amp = anchor ? sim.amplitude(*anchor) : complexd{0.0, 0.0};
        complexd r_amp = anchor ? ref_norm.amplitude(*anchor) : complexd{0.0, 0.0};
        FockState aligned = sim;
        if (std::abs(s_amp) > 0.0 && std::abs(r_amp) > 0.0)
            aligned.scale((r_amp / std::abs(r_amp)) * (std::abs(s_amp) / s_amp));

        std::vector<KetDiff> kets;
        double max_diff = 0.0;
        std::map<BasisKet, std::pair<complexd, complexd>> rows;
        for (const auto& [ket, amp] : aligned.terms()) rows[ket].first = amp;
        for (const auto& [ket, amp] : ref_norm.terms()) rows[ket].second = amp;
        for (const auto& [ket, pair] : rows) {
            double d = std::abs(pair.first - pair.second);
            kets.push_back({ket.str(input.registry()), pair.first, pair.second, d});
            max_diff = std::max(max_diff, d);
        }
        if (max_diff > worst) {
            worst = max_diff;
            out.max_abs_diff = max_diff;
            out.kets = std::move(kets);
        }
    }
    return out;
}

}  // namespace pgl
