#pragma once
// Scalar layer. Geometry runs on long double (~18 significant digits, enough
// for every geometric tolerance in this project, all of which are >= 1e-12).
// The moment / Hankel / zero-extraction pipeline runs on an MPFR-backed real
// with runtime precision P >= 50 digits, immutable per computation context.

#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <stdexcept>
#include <string>

namespace qde {

using real = long double;
using cplx = std::complex<real>;

inline constexpr real PI = 3.14159265358979323846264338327950288L;

// All spec-level failures ("bracket invalid", "boundary angle", "increase
// precision", ...) are reported through this type with a descriptive message.
struct Error : std::runtime_error {
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

namespace mpn {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

// Sets the default construction precision (decimal digits) for Real and
// restores the previous value on scope exit. Values keep the precision they
// were created with; a context never mixes precisions.
class DigitsGuard {
 public:
  explicit DigitsGuard(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~DigitsGuard() { Real::default_precision(saved_); }
  DigitsGuard(const DigitsGuard&) = delete;
  DigitsGuard& operator=(const DigitsGuard&) = delete;

 private:
  unsigned saved_;
};

inline Real pi_value() {
  // atan honours the active default precision.
  return 4 * atan(Real(1));
}

}  // namespace mpn

}  // namespace qde
