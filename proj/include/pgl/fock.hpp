#ifndef PGL_FOCK_HPP
#define PGL_FOCK_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pgl/common.hpp"

namespace pgl {

enum class Pol : uint8_t { H = 0, V = 1 };

inline char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

/// Interned table of the circuit's spatial labels. Labels are sorted
/// lexicographically at construction so that mode indices give a canonical
/// ordering of (spatial_label, polarization) pairs, H before V.
class ModeRegistry {
  public:
    explicit ModeRegistry(std::vector<std::string> labels);

    int spatial_count() const { return static_cast<int>(labels_.size()); }
    int mode_count() const { return 2 * spatial_count(); }

    bool has_label(const std::string& label) const;
    int spatial_index(const std::string& label) const;  // throws Registry error
    const std::string& label(int spatial_index) const { return labels_.at(spatial_index); }

    int mode(const std::string& label, Pol p) const { return 2 * spatial_index(label) + static_cast<int>(p); }
    int mode_of(int spatial_index, Pol p) const { return 2 * spatial_index + static_cast<int>(p); }
    int spatial_of_mode(int mode) const { return mode / 2; }
    Pol pol_of_mode(int mode) const { return static_cast<Pol>(mode % 2); }
    std::string mode_name(int mode) const { return labels_.at(mode / 2) + ":" + pol_char(pol_of_mode(mode)); }

    const std::vector<std::string>& labels() const { return labels_; }
    bool operator==(const ModeRegistry& other) const { return labels_ == other.labels_; }

  private:
    std::vector<std::string> labels_;           // sorted, unique
    std::map<std::string, int> index_of_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

/// One occupation-number basis ket in canonical form: occupied modes only,
/// sorted by mode index. Equality and ordering are lexicographic on the
/// occupation list, which makes state maps deterministic.
class BasisKet {
  public:
    BasisKet() = default;

    static BasisKet vacuum() { return BasisKet(); }

    int count(int mode) const;
    int spatial_total(int spatial_index) const;  // H + V occupation of one spatial label
    int total_photons() const;
    bool empty() const { return occ_.empty(); }

    BasisKet with_added(int mode, int delta) const;   // delta may be negative; canonical result
    BasisKet without_spatial(int spatial_index) const;

    const std::vector<std::pair<uint16_t, uint8_t>>& occupations() const { return occ_; }

    bool operator==(const BasisKet& other) const { return occ_ == other.occ_; }
    bool operator<(const BasisKet& other) const { return occ_ < other.occ_; }

    std::string str(const ModeRegistry& reg) const;

  private:
    // (mode index, photon count), sorted by mode index, counts >= 1
    std::vector<std::pair<uint16_t, uint8_t>> occ_;
};

/// Sparse superposition over a fixed-photon-number sector.
class FockState {
  public:
    FockState();  // empty zero-photon state over an empty registry
    FockState(RegistryPtr reg, int photon_number);

    static FockState single_ket(RegistryPtr reg, const BasisKet& ket, complexd amp = 1.0);

    const ModeRegistry& registry() const { return *reg_; }
    RegistryPtr registry_ptr() const { return reg_; }
    int photon_number() const { return photon_number_; }

    const std::map<BasisKet, complexd>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const BasisKet& ket, complexd amp);  // validates photon sector
    complexd amplitude(const BasisKet& ket) const;

    double norm_squared() const;
    void scale(complexd factor);
    void prune(double eps = kPruneEps);

    FockState& operator+=(const FockState& other);

    /// Tensor product; photon numbers add, registries must match.
    friend FockState tensor(const FockState& a, const FockState& b);

    std::string str() const;

  private:
    RegistryPtr reg_;
    int photon_number_;
    std::map<BasisKet, complexd> terms_;
};

/// A unitary map from a list of input modes to a list of output modes
/// (same list in the common case of a wave plate; disjoint lists when an
/// element relabels spatial ports, as every beam-splitter class element does).
/// Column j of the matrix expands a creation operator on in_modes[j] over
/// creation operators on out_modes.
class ModeUnitary {
  public:
    ModeUnitary(RegistryPtr reg, std::vector<int> in_modes, std::vector<int> out_modes,
                std::vector<complexd> row_major);

    int dim() const { return static_cast<int>(in_modes_.size()); }
    const std::vector<int>& in_modes() const { return in_modes_; }
    const std::vector<int>& out_modes() const { return out_modes_; }
    complexd entry(int row, int col) const { return mat_[row * dim() + col]; }
    const ModeRegistry& registry() const { return *reg_; }

    ModeUnitary adjoint() const;

    /// max-norm of U†U - I; validated < kUnitaryEps at construction.
    double unitarity_defect() const;

  private:
    RegistryPtr reg_;
    std::vector<int> in_modes_;
    std::vector<int> out_modes_;
    std::vector<complexd> mat_;
};

/// Bosonic evolution by creation-operator substitution:
/// a†_{in_j} -> sum_i U_{ij} a†_{out_i}, expanded with sqrt(n!) weights.
/// Norm is preserved to kUnitaryEps. Modes outside the unitary pass through;
/// output modes that are not also input modes must be unoccupied.
FockState apply_mode_unitary(const FockState& state, const ModeUnitary& u);

/// <a|b>; zero when the photon-number sectors differ.
complexd inner_product(const FockState& a, const FockState& b);

/// Returns (state / norm, norm^2). Throws ZeroNorm on an empty state.
std::pair<FockState, double> normalize(const FockState& state);

/// Independent transition-amplitude oracle: <out|U|in> via the permanent of
/// the occupation-repeated submatrix, perm computed by exact Ryser summation.
complexd permanent_amplitude(const ModeUnitary& u, const BasisKet& in, const BasisKet& out);

/// Exact permanent of a dense n x n matrix (n <= 16), Ryser's formula.
complexd permanent(const std::vector<complexd>& row_major, int n);

}  // namespace pgl

#endif
