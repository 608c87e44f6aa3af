#include "pgl/analysis.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <thread>

namespace pgl {

double success_probability(const RunResult& result) { return result.success_probability(); }

double gate_fidelity(const RunResult& result, const Circuit& circuit, const LogicalState& ideal) {
    double total = 0.0, weighted = 0.0;
    for (const auto& b : result.branches) {
        if (!b.success) continue;
        LogicalState decoded = decode_output(b.state, circuit);
        weighted += b.probability * state_fidelity(decoded, ideal);
        total += b.probability;
    }
    if (total <= 0.0) throw Error(ErrorKind::ZeroNorm, "gate_fidelity: no success branch");
    return weighted / total;
}

std::vector<TruthTableEntry> truth_table(GateKind kind, const GateOptions& opts) {
    GateCircuits gate = build_gate(kind, opts);
    const int n = kind == GateKind::CPF ? 2 : 3;
    const int dim = 1 << n;
    std::vector<TruthTableEntry> table(dim);
    for (int x = 0; x < dim; ++x) {
        std::vector<QubitCoeffs> qubits;
        for (int q = n - 1; q >= 0; --q) qubits.push_back(QubitCoeffs::basis((x >> q) & 1));
        RunResult r = run_gate(gate, encode_input(gate, qubits));
        TruthTableEntry& entry = table[x];
        entry.success_probability = r.success_probability();
        entry.output_populations.assign(dim, 0.0);
        for (const auto& b : r.branches) {
            if (!b.success) continue;
            LogicalState decoded = decode_output(b.state, gate.main);
            double n2 = decoded.norm_squared();
            for (int y = 0; y < dim; ++y)
                entry.output_populations[y] += b.probability * std::norm(decoded.amplitudes[y]) / n2;
        }
        if (entry.success_probability > 0.0)
            for (double& p : entry.output_populations) p /= entry.success_probability;
    }
    return table;
}

// ----------------------------------------------------------------- curves

double p_reference_curve(double alpha2, const GateOptions& opts) {
    const double x = alpha2 * alpha2;
    if (opts.with_bs && !opts.recycle) return (1.0 + x) / 64.0;
    return (1.0 + x) * (2.0 - x) / 64.0;
}

double f_reference_curve(double alpha2, const GateOptions& opts) {
    if (opts.with_bs) return 1.0;
    const double x = alpha2 * alpha2;
    return 1.0 - x + x / std::sqrt(2.0 - x);
}

// ----------------------------------------------------------------- RNG

namespace {

uint64_t splitmix64(uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double unit_double(uint64_t& s) { return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<QubitCoeffs> seeded_coefficient_draws(uint64_t seed, int count, int qubits_per_draw) {
    std::vector<QubitCoeffs> out;
    out.reserve(static_cast<std::size_t>(count) * qubits_per_draw);
    uint64_t s = seed ^ 0xD1B54A32D192ED03ull;
    for (int i = 0; i < count * qubits_per_draw; ++i) {
        double theta = 2.0 * std::numbers::pi * unit_double(s);
        out.push_back({std::cos(theta), std::sin(theta)});
    }
    return out;
}

// ----------------------------------------------------------------- sweep

std::vector<double> GridSpec::points() const {
    validate();
    std::vector<double> pts;
    for (double x = start; x <= stop + 1e-12; x += step) pts.push_back(std::min(x, stop));
    if (!pts.empty() && pts.back() < stop - 1e-12) pts.push_back(stop);
    return pts;
}

void GridSpec::validate() const {
    if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid: step must be positive");
    if (start > stop) throw Error(ErrorKind::InvalidArgument, "grid: start exceeds stop");
    if (start < -1.0 - 1e-12 || stop > 1.0 + 1e-12)
        throw Error(ErrorKind::InvalidArgument, "grid: alpha2 must stay within [-1, 1]");
}

SweepTable sweep_alpha2(const GridSpec& grid, const GateOptions& opts, uint64_t seed, int draws, int threads) {
    opts.validate();
    if (draws < 1) throw Error(ErrorKind::InvalidArgument, "sweep: draws must be >= 1");
    std::vector<double> pts = grid.points();

    SweepTable table;
    table.options = opts;
    table.seed = seed;
    table.draws = draws;
    table.rows.resize(pts.size());

    GateCircuits gate = build_gate(GateKind::Toffoli, opts);

    auto eval_point = [&](std::size_t i) {
        const double a2 = pts[i];
        const double b2 = std::sqrt(std::max(0.0, 1.0 - a2 * a2));
        // decorrelate the draw stream from the grid index deterministically
        uint64_t point_seed = seed;
        for (std::size_t k = 0; k <= i; ++k) splitmix64(point_seed);
        std::vector<QubitCoeffs> stream = seeded_coefficient_draws(point_seed, draws, 2);

        double p_total = 0.0, f_total = 0.0;
        for (int d = 0; d < draws; ++d) {
            std::vector<QubitCoeffs> qubits = {stream[2 * d], {a2, b2}, stream[2 * d + 1]};
            RunResult r = run_gate(gate, encode_input(gate, qubits));
            p_total += r.success_probability();
            f_total += gate_fidelity(r, gate.main, ideal_output(GateKind::Toffoli, qubits));
        }
        table.rows[i] = {a2, p_total / draws, p_reference_curve(a2, opts), f_total / draws,
                         f_reference_curve(a2, opts)};
    };

    int n_threads = threads;
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(pts.size())));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < pts.size(); ++i) eval_point(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < pts.size(); i += n_threads) eval_point(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return table;
}

std::string SweepTable::to_csv() const {
    std::ostringstream os;
    os << "alpha2,p_sim,p_paper,f_sim,f_paper,options,seed\n";
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    std::string opt = std::string("bs=") + (options.with_bs ? "1" : "0") +
                      ";recycle=" + (options.recycle ? "1" : "0") +
                      ";ff=" + (options.apply_feed_forward ? "1" : "0") + ";draws=" + std::to_string(draws);
    for (const auto& r : rows) {
        os << fmt(r.alpha2) << ',' << fmt(r.p_sim) << ',' << fmt(r.p_paper) << ',' << fmt(r.f_sim) << ','
           << fmt(r.f_paper) << ',' << opt << ',' << seed << "\n";
    }
    return os.str();
}

// ------------------------------------------------------------- quadrature

// ------------------------------------------------------------- oracle

std::vector<complexd> random_unitary(int dim, uint64_t seed) {
    if (dim < 1) throw Error(ErrorKind::InvalidArgument, "random_unitary: dim must be positive");
    uint64_t s = seed ^ 0xA0761D6478BD642Full;
    auto gauss = [&] {
        // Box-Muller from the deterministic stream
        double u1 = std::max(unit_double(s), 1e-300);
        double u2 = unit_double(s);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    std::vector<complexd> m(dim * dim);
    for (auto& v : m) v = complexd{gauss(), gauss()};
    // Gram-Schmidt on columns
    for (int c = 0; c < dim; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            complexd dot{0.0, 0.0};
            for (int r = 0; r < dim; ++r) dot += std::conj(m[r * dim + prev]) * m[r * dim + c];
            for (int r = 0; r < dim; ++r) m[r * dim + c] -= dot * m[r * dim + prev];
        }
        double n2 = 0.0;
        for (int r = 0; r < dim; ++r) n2 += std::norm(m[r * dim + c]);
        double inv = 1.0 / std::sqrt(n2);
        for (int r = 0; r < dim; ++r) m[r * dim + c] *= inv;
    }
    return m;
}

OracleCheckResult oracle_check(int modes, int max_photons, int trials, uint64_t seed) {
    if (modes < 1 || modes > 6) throw Error(ErrorKind::InvalidArgument, "oracle_check: modes in [1,6]");
    if (max_photons < 1 || max_photons > 5)
        throw Error(ErrorKind::InvalidArgument, "oracle_check: photons in [1,5]");
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "oracle_check: trials must be positive");

    std::vector<std::string> labels;
    for (int i = 0; i < modes; ++i) labels.push_back("m" + std::to_string(i));
    RegistryPtr reg = std::make_shared<ModeRegistry>(labels);
    std::vector<int> mode_ids;
    for (int i = 0; i < modes; ++i) mode_ids.push_back(reg->mode("m" + std::to_string(i), Pol::H));

    OracleCheckResult out;
    out.trials = trials;
    uint64_t s = seed ^ 0x243F6A8885A308D3ull;
    for (int t = 0; t < trials; ++t) {
        ModeUnitary u(reg, mode_ids, mode_ids, random_unitary(modes, splitmix64(s)));
        int photons = 1 + static_cast<int>(splitmix64(s) % static_cast<uint64_t>(max_photons));
        BasisKet in;
        for (int p = 0; p < photons; ++p)
            in = in.with_added(mode_ids[splitmix64(s) % static_cast<uint64_t>(modes)], 1);

        FockState evolved = apply_mode_unitary(FockState::single_ket(reg, in), u);
        for (const auto& [ket, amp] : evolved.terms()) {
            complexd oracle = permanent_amplitude(u, in, ket);
            out.max_deviation = std::max(out.max_deviation, std::abs(amp - oracle));
            ++out.amplitudes_checked;
        }
    }
    return out;
}

// ------------------------------------------------------------- quadrature

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw Error(ErrorKind::InvalidArgument, "average_over_alpha2: non-finite sample");
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double average_over_alpha2(const std::function<double(double)>& curve, double abs_tol) {
    const double a = -1.0, b = 1.0;
    const double fa = curve(a), fb = curve(b), fm = curve(0.0);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw Error(ErrorKind::InvalidArgument, "average_over_alpha2: non-finite sample");
    const double whole = simpson(a, b, fa, fm, fb);
    return 0.5 * adaptive(curve, a, b, fa, fm, fb, whole, abs_tol, 48);
}

}  // namespace pgl
