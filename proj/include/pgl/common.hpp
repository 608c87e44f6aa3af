#ifndef PGL_COMMON_HPP
#define PGL_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace pgl {

using complexd = std::complex<double>;

// Amplitudes below this magnitude are dropped from sparse states.
inline constexpr double kPruneEps = 1e-14;
// Tolerance for unitarity and normalization checks on compiled elements.
inline constexpr double kUnitaryEps = 1e-12;

enum class ErrorKind {
    InvalidArgument,
    Registry,      // unknown spatial label / mode
    Validation,    // non-unitary matrix, inconsistent wiring, bad options
    ZeroNorm,
    Sector,        // photon-number mismatch
    Precondition,  // operation called on a state violating its contract
    Config,        // circuit/input mismatch
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline double factorial(int n) {
    static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800};
    if (n < 0 || n > 10)
        throw Error(ErrorKind::InvalidArgument, "factorial: out of supported range");
    return table[n];
}

}  // namespace pgl

#endif
