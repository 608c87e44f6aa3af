#include "pgl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pgl {

// ---------------------------------------------------------------- registry

ModeRegistry::ModeRegistry(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    auto last = std::unique(labels_.begin(), labels_.end());
    if (last != labels_.end())
        throw Error(ErrorKind::Validation, "duplicate spatial label in registry");
    for (std::size_t i = 0; i < labels_.size(); ++i)
        index_of_[labels_[i]] = static_cast<int>(i);
}

bool ModeRegistry::has_label(const std::string& label) const { return index_of_.count(label) != 0; }

int ModeRegistry::spatial_index(const std::string& label) const {
    auto it = index_of_.find(label);
    if (it == index_of_.end())
        throw Error(ErrorKind::Registry, "unknown spatial label '" + label + "'");
    return it->second;
}

// ---------------------------------------------------------------- basis ket

int BasisKet::count(int mode) const {
    for (const auto& [m, c] : occ_)
        if (m == mode) return c;
    return 0;
}

int BasisKet::spatial_total(int spatial_index) const {
    int total = 0;
    for (const auto& [m, c] : occ_)
        if (m / 2 == spatial_index) total += c;
    return total;
}

int BasisKet::total_photons() const {
    int total = 0;
    for (const auto& [m, c] : occ_) total += c;
    return total;
}

BasisKet BasisKet::with_added(int mode, int delta) const {
    BasisKet out;
    bool placed = false;
    for (const auto& [m, c] : occ_) {
        if (m == mode) {
            int nc = c + delta;
            if (nc < 0) throw Error(ErrorKind::Precondition, "negative photon count");
            if (nc > 0) out.occ_.emplace_back(m, static_cast<uint8_t>(nc));
            placed = true;
        } else {
            if (!placed && m > mode && delta != 0) {
                if (delta < 0) throw Error(ErrorKind::Precondition, "negative photon count");
                out.occ_.emplace_back(static_cast<uint16_t>(mode), static_cast<uint8_t>(delta));
                placed = true;
            }
            out.occ_.emplace_back(m, c);
        }
    }
    if (!placed && delta != 0) {
        if (delta < 0) throw Error(ErrorKind::Precondition, "negative photon count");
        out.occ_.emplace_back(static_cast<uint16_t>(mode), static_cast<uint8_t>(delta));
    }
    return out;
}

BasisKet BasisKet::without_spatial(int spatial_index) const {
    BasisKet out;
    for (const auto& [m, c] : occ_)
        if (m / 2 != spatial_index) out.occ_.emplace_back(m, c);
    return out;
}

std::string BasisKet::str(const ModeRegistry& reg) const {
    if (occ_.empty()) return "|vac>";
    std::ostringstream os;
    for (const auto& [m, c] : occ_) {
        os << "|" << pol_char(reg.pol_of_mode(m));
        if (c > 1) os << "x" << int(c);
        os << ">_" << reg.label(m / 2);
    }
    return os.str();
}

// ---------------------------------------------------------------- state

FockState::FockState() : photon_number_(0) {
    static const RegistryPtr empty = std::make_shared<ModeRegistry>(std::vector<std::string>{});
    reg_ = empty;
}

FockState::FockState(RegistryPtr reg, int photon_number) : reg_(std::move(reg)), photon_number_(photon_number) {
    if (!reg_) throw Error(ErrorKind::InvalidArgument, "null registry");
    if (photon_number_ < 0) throw Error(ErrorKind::InvalidArgument, "negative photon number");
}

FockState FockState::single_ket(RegistryPtr reg, const BasisKet& ket, complexd amp) {
    FockState s(std::move(reg), ket.total_photons());
    s.add_term(ket, amp);
    return s;
}

void FockState::add_term(const BasisKet& ket, complexd amp) {
    if (ket.total_photons() != photon_number_)
        throw Error(ErrorKind::Sector, "ket photon number differs from the state's sector");
    auto [it, inserted] = terms_.emplace(ket, amp);
    if (!inserted) it->second += amp;
}

complexd FockState::amplitude(const BasisKet& ket) const {
    auto it = terms_.find(ket);
    return it == terms_.end() ? complexd{0.0, 0.0} : it->second;
}

double FockState::norm_squared() const {
    double total = 0.0;
    for (const auto& [ket, amp] : terms_) total += std::norm(amp);
    return total;
}

void FockState::scale(complexd factor) {
    for (auto& [ket, amp] : terms_) amp *= factor;
}

void FockState::prune(double eps) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < eps)
            it = terms_.erase(it);
        else
            ++it;
    }
}

FockState& FockState::operator+=(const FockState& other) {
    if (photon_number_ != other.photon_number_)
        throw Error(ErrorKind::Sector, "cannot add states from different photon-number sectors");
    for (const auto& [ket, amp] : other.terms_) add_term(ket, amp);
    return *this;
}

FockState tensor(const FockState& a, const FockState& b) {
    if (!(a.registry() == b.registry()))
        throw Error(ErrorKind::Registry, "tensor: registries differ");
    FockState out(a.reg_, a.photon_number_ + b.photon_number_);
    for (const auto& [ka, va] : a.terms_) {
        for (const auto& [kb, vb] : b.terms_) {
            BasisKet merged = ka;
            for (const auto& [m, c] : kb.occupations()) {
                if (merged.count(m) != 0)
                    throw Error(ErrorKind::Precondition, "tensor: overlapping occupied modes");
                merged = merged.with_added(m, c);
            }
            out.add_term(merged, va * vb);
        }
    }
    return out;
}

std::string FockState::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [ket, amp] : terms_) {
        if (!first) os << " + ";
        os << "(" << amp.real();
        if (amp.imag() != 0.0) os << (amp.imag() < 0 ? "" : "+") << amp.imag() << "i";
        os << ")" << ket.str(*reg_);
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------- unitary

ModeUnitary::ModeUnitary(RegistryPtr reg, std::vector<int> in_modes, std::vector<int> out_modes,
                         std::vector<complexd> row_major)
    : reg_(std::move(reg)), in_modes_(std::move(in_modes)), out_modes_(std::move(out_modes)), mat_(std::move(row_major)) {
    if (!reg_) throw Error(ErrorKind::InvalidArgument, "null registry");
    const std::size_t n = in_modes_.size();
    if (out_modes_.size() != n || mat_.size() != n * n)
        throw Error(ErrorKind::Validation, "mode unitary: dimension mismatch");
    for (int m : in_modes_)
        if (m < 0 || m >= reg_->mode_count())
            throw Error(ErrorKind::Registry, "mode unitary: input mode out of range");
    for (int m : out_modes_)
        if (m < 0 || m >= reg_->mode_count())
            throw Error(ErrorKind::Registry, "mode unitary: output mode out of range");
    auto no_dupes = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!no_dupes(in_modes_) || !no_dupes(out_modes_))
        throw Error(ErrorKind::Validation, "mode unitary: repeated mode");
    if (unitarity_defect() >= kUnitaryEps)
        throw Error(ErrorKind::Validation, "mode unitary: matrix is not unitary");
}

double ModeUnitary::unitarity_defect() const {
    const int n = dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            complexd dot{0.0, 0.0};
            for (int i = 0; i < n; ++i) dot += std::conj(entry(i, a)) * entry(i, b);
            if (a == b) dot -= 1.0;
            worst = std::max(worst, std::abs(dot));
        }
    }
    return worst;
}

ModeUnitary ModeUnitary::adjoint() const {
    const int n = dim();
    std::vector<complexd> m(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i * n + j] = std::conj(entry(j, i));
    return ModeUnitary(reg_, out_modes_, in_modes_, std::move(m));
}

// ------------------------------------------------------------- application

namespace {

// Monomial in creation operators over the unitary's output modes.
using OutOcc = std::vector<uint8_t>;

}  // namespace

FockState apply_mode_unitary(const FockState& state, const ModeUnitary& u) {
    if (!(state.registry() == u.registry()))
        throw Error(ErrorKind::Registry, "apply_mode_unitary: registries differ");
    const int n = u.dim();
    const auto& in_modes = u.in_modes();
    const auto& out_modes = u.out_modes();

    std::vector<bool> is_input(state.registry().mode_count(), false);
    for (int m : in_modes) is_input[m] = true;

    FockState result(state.registry_ptr(), state.photon_number());
    for (const auto& [ket, amp] : state.terms()) {
        // Occupations on the unitary's input modes; the remainder passes through.
        std::vector<int> n_in(n, 0);
        BasisKet rest = ket;
        for (int j = 0; j < n; ++j) {
            int c = ket.count(in_modes[j]);
            if (c > 0) {
                n_in[j] = c;
                rest = rest.with_added(in_modes[j], -c);
            }
        }
        for (int m : out_modes) {
            if (!is_input[m] && rest.count(m) != 0)
                throw Error(ErrorKind::Precondition,
                            "apply_mode_unitary: output mode '" + state.registry().mode_name(m) +
                                "' already occupied");
        }

        complexd base = amp;
        for (int j = 0; j < n; ++j) base /= std::sqrt(factorial(n_in[j]));

        std::map<OutOcc, complexd> poly;
        poly[OutOcc(n, 0)] = base;
        for (int j = 0; j < n; ++j) {
            for (int rep = 0; rep < n_in[j]; ++rep) {
                std::map<OutOcc, complexd> next;
                for (const auto& [occ, coeff] : poly) {
                    for (int i = 0; i < n; ++i) {
                        complexd uij = u.entry(i, j);
                        if (uij == complexd{0.0, 0.0}) continue;
                        OutOcc grown = occ;
                        ++grown[i];
                        next[grown] += coeff * uij;
                    }
                }
                poly.swap(next);
            }
        }

        for (const auto& [occ, coeff] : poly) {
            complexd value = coeff;
            BasisKet out_ket = rest;
            for (int i = 0; i < n; ++i) {
                if (occ[i] == 0) continue;
                value *= std::sqrt(factorial(occ[i]));
                out_ket = out_ket.with_added(out_modes[i], occ[i]);
            }
            result.add_term(out_ket, value);
        }
    }
    result.prune();
    return result;
}

complexd inner_product(const FockState& a, const FockState& b) {
    if (a.photon_number() != b.photon_number()) return {0.0, 0.0};
    if (!(a.registry() == b.registry()))
        throw Error(ErrorKind::Registry, "inner_product: registries differ");
    // iterate over the smaller map
    const FockState& small = a.term_count() <= b.term_count() ? a : b;
    const FockState& large = a.term_count() <= b.term_count() ? b : a;
    const bool small_is_a = &small == &a;
    complexd total{0.0, 0.0};
    for (const auto& [ket, amp] : small.terms()) {
        complexd other = large.amplitude(ket);
        if (other == complexd{0.0, 0.0}) continue;
        total += small_is_a ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return total;
}

std::pair<FockState, double> normalize(const FockState& state) {
    double n2 = state.norm_squared();
    if (n2 <= 0.0) throw Error(ErrorKind::ZeroNorm, "normalize: zero state");
    FockState out = state;
    out.scale(1.0 / std::sqrt(n2));
    return {std::move(out), n2};
}

// ---------------------------------------------------------------- permanent

complexd permanent(const std::vector<complexd>& a, int n) {
    if (n == 0) return {1.0, 0.0};
    if (n < 0 || n > 16) throw Error(ErrorKind::InvalidArgument, "permanent: size out of range");
    // Ryser: perm(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} A_ij
    complexd total{0.0, 0.0};
    const uint32_t full = (1u << n) - 1;
    for (uint32_t s = 1; s <= full; ++s) {
        complexd prod{1.0, 0.0};
        for (int i = 0; i < n; ++i) {
            complexd row_sum{0.0, 0.0};
            for (int j = 0; j < n; ++j)
                if (s & (1u << j)) row_sum += a[i * n + j];
            prod *= row_sum;
        }
        int bits = __builtin_popcount(s);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

complexd permanent_amplitude(const ModeUnitary& u, const BasisKet& in, const BasisKet& out) {
    if (in.total_photons() != out.total_photons())
        throw Error(ErrorKind::Sector, "permanent_amplitude: photon numbers differ");
    const int n = u.dim();
    auto occupancy = [&](const BasisKet& ket, const std::vector<int>& modes) {
        std::vector<int> occ(modes.size(), 0);
        int covered = 0;
        for (std::size_t k = 0; k < modes.size(); ++k) {
            occ[k] = ket.count(modes[k]);
            covered += occ[k];
        }
        if (covered != ket.total_photons())
            throw Error(ErrorKind::Registry, "permanent_amplitude: ket occupies modes outside the unitary");
        return occ;
    };
    std::vector<int> n_in = occupancy(in, u.in_modes());
    std::vector<int> n_out = occupancy(out, u.out_modes());

    std::vector<int> cols, rows;
    for (int j = 0; j < n; ++j) cols.insert(cols.end(), n_in[j], j);
    for (int i = 0; i < n; ++i) rows.insert(rows.end(), n_out[i], i);
    const int p = static_cast<int>(cols.size());

    std::vector<complexd> sub(p * p);
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) sub[r * p + c] = u.entry(rows[r], cols[c]);

    complexd perm = permanent(sub, p);
    double norm = 1.0;
    for (int j = 0; j < n; ++j) norm *= factorial(n_in[j]);
    for (int i = 0; i < n; ++i) norm *= factorial(n_out[i]);
    return perm / std::sqrt(norm);
}

}  // namespace pgl
