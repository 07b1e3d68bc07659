#pragma once

// Scalar types used throughout the library. Every numeric routine is a
// template on `Real`; the complex type is always std::complex<Real>.

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace runckel {

namespace mp = boost::multiprecision;

/// Binary floating point with a `Bits`-bit mantissa. Expression templates
/// are disabled so the type behaves like a plain value inside std::complex
/// and Eigen.
template <unsigned Bits>
using BinaryFloat = mp::number<mp::cpp_bin_float<Bits, mp::digit_base_2>, mp::et_off>;

using Real128 = BinaryFloat<128>;
using Real256 = BinaryFloat<256>;

template <typename Real>
using Complex = std::complex<Real>;

/// Mantissa width of `Real` in bits (53 for double).
template <typename Real>
constexpr int mantissa_bits() {
  return std::numeric_limits<Real>::digits;
}

template <typename Real>
Real pi() {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<Real>(3.14159265358979323846264338327950288L);
  } else {
    return boost::math::constants::pi<Real>();
  }
}

template <typename Real>
bool is_finite(const Real& x) {
  using std::isfinite;
  using boost::multiprecision::isfinite;
  return isfinite(x);
}

template <typename Real>
bool is_finite(const Complex<Real>& z) {
  return is_finite(z.real()) && is_finite(z.imag());
}

/// Unit-circle point e^{2 pi i k / p}, exact at the quarter turns.
template <typename Real>
Complex<Real> root_of_unity(long k, long p) {
  if (p <= 0) throw std::domain_error("root_of_unity: p must be positive");
  long m = k % p;
  if (m < 0) m += p;
  if (4 * m == 0) return {Real(1), Real(0)};
  if (4 * m == p) return {Real(0), Real(1)};
  if (2 * m == p) return {Real(-1), Real(0)};
  if (4 * m == 3 * p) return {Real(0), Real(-1)};
  using std::cos;
  using std::sin;
  const Real angle = Real(2) * pi<Real>() * Real(m) / Real(p);
  return {cos(angle), sin(angle)};
}

/// Precision choices exposed to the command line.
enum class Precision : int { Double = 53, Bits128 = 128, Bits256 = 256 };

inline Precision precision_from_bits(int bits) {
  switch (bits) {
    case 53: return Precision::Double;
    case 128: return Precision::Bits128;
    case 256: return Precision::Bits256;
    default:
      throw std::invalid_argument("precision must be one of 53, 128, 256 (got " +
                                  std::to_string(bits) + ")");
  }
}

template <typename Real>
struct ScalarTag {
  using type = Real;
};

/// Calls `fn(ScalarTag<Real>{})` with the scalar type selected by `precision`.
template <typename Fn>
decltype(auto) with_precision(Precision precision, Fn&& fn) {
  switch (precision) {
    case Precision::Bits128: return fn(ScalarTag<Real128>{});
    case Precision::Bits256: return fn(ScalarTag<Real256>{});
    case Precision::Double: break;
  }
  return fn(ScalarTag<double>{});
}

template <typename Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

}  // namespace runckel
