#pragma once

// Riemann sphere arithmetic: points of C ∪ {∞}, the chordal metric and
// linear-fractional maps t ↦ (a t + b) / (c t + d).

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "runckel/scalar.hpp"

namespace runckel {

/// Raised when repeated composition has exhausted the working precision
/// (the normalized coefficient matrix became singular).
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A point of the extended complex plane. Finite values always have finite
/// components; anything that overflows becomes the single point at infinity.
template <typename Real>
class ExtendedComplex {
 public:
  ExtendedComplex() = default;
  ExtendedComplex(const Complex<Real>& z) : value_(z), infinite_(!runckel::is_finite(z)) {  // NOLINT
    if (infinite_) value_ = Complex<Real>();
  }
  ExtendedComplex(const Real& x) : ExtendedComplex(Complex<Real>(x, Real(0))) {}  // NOLINT
  ExtendedComplex(double x)  // NOLINT
    requires(!std::is_same_v<Real, double>)
      : ExtendedComplex(Complex<Real>(Real(x), Real(0))) {}

  static ExtendedComplex infinity() {
    ExtendedComplex p;
    p.infinite_ = true;
    return p;
  }

  /// num / den, with den == 0 mapped to ∞. `num` and `den` must not both vanish.
  static ExtendedComplex ratio(const Complex<Real>& num, const Complex<Real>& den) {
    if (den == Complex<Real>()) return infinity();
    return ExtendedComplex(num / den);
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  /// The finite value. Throws for ∞.
  const Complex<Real>& value() const {
    if (infinite_) throw std::domain_error("ExtendedComplex: value() of the point at infinity");
    return value_;
  }

  Real real() const { return value().real(); }
  Real imag() const { return value().imag(); }

  friend bool operator==(const ExtendedComplex& x, const ExtendedComplex& y) {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
    return x.value_ == y.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedComplex& x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  Complex<Real> value_{};
  bool infinite_ = false;
};

template <typename Real>
ExtendedComplex<Real> conj(const ExtendedComplex<Real>& x) {
  if (x.is_infinite()) return x;
  return ExtendedComplex<Real>(std::conj(x.value()));
}

/// sqrt(1 + |x|^2) without overflow for large |x|.
template <typename Real>
Real sphere_radius_factor(const Complex<Real>& x) {
  using std::abs;
  using std::sqrt;
  const Real m = abs(x);
  if (m <= Real(1)) return sqrt(Real(1) + m * m);
  const Real inv = Real(1) / m;
  return m * sqrt(Real(1) + inv * inv);
}

/// Chordal distance 2|x - y| / sqrt((1 + |x|^2)(1 + |y|^2)), with
/// σ(x, ∞) = 2 / sqrt(1 + |x|^2). Always in [0, 2].
template <typename Real>
Real chordal(const ExtendedComplex<Real>& x, const ExtendedComplex<Real>& y) {
  using std::abs;
  if (x.is_infinite() && y.is_infinite()) return Real(0);
  if (x.is_infinite()) return Real(2) / sphere_radius_factor(y.value());
  if (y.is_infinite()) return Real(2) / sphere_radius_factor(x.value());
  const Real d = Real(2) * abs(x.value() - y.value()) /
                 (sphere_radius_factor(x.value()) * sphere_radius_factor(y.value()));
  return std::min(d, Real(2));
}

/// Linear-fractional map t ↦ (a t + b) / (c t + d), stored projectively with
/// the largest coefficient modulus scaled to 1.
///
/// The determinant is carried alongside the coefficients and updated
/// multiplicatively. Near-constant maps (the normal state of a convergent
/// continued fraction) have ad - bc cancel to zero in floating point long
/// before the true determinant leaves the exponent range.
template <typename Real>
class FracMap {
 public:
  using Matrix = Eigen::Matrix<Complex<Real>, 2, 2>;

  /// Identity map.
  FracMap() : m_(Matrix::Identity()), det_(Real(1)) {}

  FracMap(const Complex<Real>& a, const Complex<Real>& b, const Complex<Real>& c, const Complex<Real>& d) {
    m_ << a, b, c, d;
    det_ = a * d - b * c;
    if (det_ == Complex<Real>() || !is_finite(det_))
      throw std::domain_error("FracMap: degenerate map (ad - bc = 0)");
    const Real s = max_modulus();
    if (s != Real(1)) {
      m_ /= Complex<Real>(s);
      det_ /= Complex<Real>(s * s);
    }
  }

  explicit FracMap(const Matrix& m) : FracMap(m(0, 0), m(0, 1), m(1, 0), m(1, 1)) {}

  static FracMap identity() { return FracMap(); }

  const Complex<Real>& a() const { return m_(0, 0); }
  const Complex<Real>& b() const { return m_(0, 1); }
  const Complex<Real>& c() const { return m_(1, 0); }
  const Complex<Real>& d() const { return m_(1, 1); }
  const Matrix& matrix() const { return m_; }

  /// ad - bc of the stored (normalized) coefficients.
  const Complex<Real>& determinant() const { return det_; }

  /// Largest coefficient modulus; 1 for every map built through the public API.
  Real max_modulus() const { return m_.cwiseAbs().maxCoeff(); }

  /// m1 ∘ m2. `step` labels the PrecisionError raised when the normalized
  /// determinant underflows to zero.
  friend FracMap compose(const FracMap& m1, const FracMap& m2, std::size_t step = 0) {
    FracMap out;
    out.m_.noalias() = m1.m_ * m2.m_;
    const Real s = out.max_modulus();
    if (!(s > Real(0)) || !is_finite(s)) throw PrecisionError("compose: coefficient product lost all precision", step);
    out.m_ /= Complex<Real>(s);
    out.det_ = m1.det_ * m2.det_ / Complex<Real>(s * s);
    if (out.det_ == Complex<Real>()) throw PrecisionError("compose: normalized determinant underflowed to zero", step);
    return out;
  }

  /// Rescales so the largest coefficient modulus is 1; the map is unchanged.
  friend FracMap normalize(const FracMap& m) {
    FracMap out = m;
    const Real s = out.max_modulus();
    if (s != Real(1)) {
      out.m_ /= Complex<Real>(s);
      out.det_ /= Complex<Real>(s * s);
    }
    return out;
  }

  /// The map with conjugated coefficients: t ↦ conj(m(conj(t))).
  friend FracMap conj(const FracMap& m) {
    FracMap out;
    out.m_ = m.m_.conjugate();
    out.det_ = std::conj(m.det_);
    return out;
  }

 private:
  Matrix m_;
  Complex<Real> det_;
};

/// Projective rescaling of an arbitrary non-degenerate coefficient matrix.
template <typename Real>
FracMap<Real> from_unnormalized(const typename FracMap<Real>::Matrix& m) {
  return FracMap<Real>(m);
}

/// Applies the map on the sphere: m(∞) = a / c, poles go to ∞.
template <typename Real>
ExtendedComplex<Real> apply(const FracMap<Real>& m, const ExtendedComplex<Real>& t) {
  if (t.is_infinite()) return ExtendedComplex<Real>::ratio(m.a(), m.c());
  const Complex<Real>& x = t.value();
  return ExtendedComplex<Real>::ratio(m.a() * x + m.b(), m.c() * x + m.d());
}


}  // namespace runckel
