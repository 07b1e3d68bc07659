#pragma once

// Real Schur parameter sequences, the disc approximants [w; t_l, ..., t_k]
// and the unit-circle recurrences for their numerators and denominators.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "runckel/scalar.hpp"
#include "runckel/sphere.hpp"

namespace runckel {

/// Tolerance used to decide that a point lies on the unit circle.
inline constexpr double kUnitCircleTolerance = 1e-12;

template <typename Real>
bool on_unit_circle(const Complex<Real>& r, double tol = kUnitCircleTolerance) {
  using std::abs;
  return abs(abs(r) - Real(1)) <= Real(tol);
}

/// True for r = ±1 (up to the unit-circle tolerance).
template <typename Real>
bool is_real_unit(const Complex<Real>& r, double tol = kUnitCircleTolerance) {
  using std::abs;
  return abs(r - Complex<Real>(1)) <= Real(tol) || abs(r + Complex<Real>(1)) <= Real(tol);
}

/// Sequence of real Schur parameters t_0, t_1, ... with |t_i| < 1.
template <typename Real>
class SchurSeq {
 public:
  struct Finite {
    std::vector<Real> values;
  };
  /// t_0 = 1/2, t_{p n} = 2 / (2n + 1), zero elsewhere: the parameters of (1 + w^p) / 2.
  struct EpRule {
    int p;
  };
  struct Constant {
    Real value;
  };
  using Descriptor = std::variant<Finite, EpRule, Constant>;

  static SchurSeq finite(std::vector<Real> values) {
    for (std::size_t i = 0; i < values.size(); ++i) check_parameter(values[i], i);
    return SchurSeq(Finite{std::move(values)});
  }

  /// Complex input is accepted only when every imaginary part is zero.
  static SchurSeq finite(std::span<const Complex<Real>> values) {
    std::vector<Real> real_values;
    real_values.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].imag() != Real(0))
        throw std::domain_error("SchurSeq: complex parameter at index " + std::to_string(i) +
                                "; only real parameters are supported");
      real_values.push_back(values[i].real());
    }
    return finite(std::move(real_values));
  }

  static SchurSeq ep_rule(int p) {
    if (p <= 0) throw std::domain_error("SchurSeq: e_p rule needs p >= 1");
    return SchurSeq(EpRule{p});
  }

  static SchurSeq constant(Real value) {
    check_parameter(value, 0);
    return SchurSeq(Constant{std::move(value)});
  }

  const Descriptor& descriptor() const { return descriptor_; }

  /// Number of available parameters, or nullopt for rule-based sequences.
  std::optional<std::size_t> size() const {
    if (const auto* f = std::get_if<Finite>(&descriptor_)) return f->values.size();
    return std::nullopt;
  }

  Real operator[](std::size_t i) const {
    Real t = std::visit([i](const auto& d) { return value_at(d, i); }, descriptor_);
    check_parameter(t, i);
    return t;
  }

  std::vector<Real> prefix(std::size_t count) const {
    std::vector<Real> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back((*this)[i]);
    return out;
  }

  /// Σ t_i^2 < ∞ (which forces t_i → 0). Finite lists count as padded with zeros.
  bool square_summable() const {
    if (const auto* c = std::get_if<Constant>(&descriptor_)) return c->value == Real(0);
    return true;
  }

 private:
  explicit SchurSeq(Descriptor d) : descriptor_(std::move(d)) {}

  static void check_parameter(const Real& t, std::size_t i) {
    using std::abs;
    if (!(abs(t) < Real(1)))
      throw std::domain_error("SchurSeq: |t_" + std::to_string(i) + "| must be < 1");
  }

  static Real value_at(const Finite& f, std::size_t i) {
    if (i >= f.values.size())
      throw std::out_of_range("SchurSeq: index " + std::to_string(i) + " past the end of a finite sequence");
    return f.values[i];
  }
  static Real value_at(const EpRule& e, std::size_t i) {
    if (i == 0) return Real(1) / Real(2);
    const auto p = static_cast<std::size_t>(e.p);
    if (i % p != 0) return Real(0);
    return Real(2) / Real(2 * (i / p) + 1);
  }
  static Real value_at(const Constant& c, std::size_t) { return c.value; }

  Descriptor descriptor_;
};

/// First `count` Schur parameters of e_p(w) = (1 + w^p) / 2.
template <typename Real>
std::vector<Real> e_p_params(int p, std::size_t count) {
  if (p <= 0) throw std::domain_error("e_p_params: p must be >= 1");
  if (count == 0) throw std::domain_error("e_p_params: count must be >= 1");
  return SchurSeq<Real>::ep_rule(p).prefix(count);
}

/// [w; t_0, ..., t_k] by the backward recursion
/// [w; t_l, ..., t_k] = (t_l + w X) / (1 + t_l w X), X = [w; t_{l+1}, ..., t_k].
/// |t_i| < 1 is required except for the last entry, which may be ±1.
template <typename Real>
ExtendedComplex<Real> approximant(const Complex<Real>& w, std::span<const Real> t) {
  using std::abs;
  if (t.empty()) throw std::domain_error("approximant: empty parameter list");
  if (!is_finite(w)) throw std::domain_error("approximant: w must be finite");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!(abs(t[i]) < Real(1))) throw std::domain_error("approximant: |t_" + std::to_string(i) + "| must be < 1");
  if (!(abs(t.back()) <= Real(1))) throw std::domain_error("approximant: final parameter must satisfy |t| <= 1");

  ExtendedComplex<Real> x(t.back());
  for (std::size_t l = t.size() - 1; l-- > 0;) {
    const Complex<Real> tl(t[l], Real(0));
    if (x.is_infinite()) {
      // (t_l + w X) / (1 + t_l w X) as X → ∞
      x = (w == Complex<Real>()) ? ExtendedComplex<Real>(tl) : ExtendedComplex<Real>::ratio(Complex<Real>(1), tl);
      continue;
    }
    const Complex<Real> wx = w * x.value();
    x = ExtendedComplex<Real>::ratio(tl + wx, Complex<Real>(1) + tl * wx);
  }
  return x;
}

template <typename Real>
ExtendedComplex<Real> approximant(const Complex<Real>& w, const std::vector<Real>& t) {
  return approximant(w, std::span<const Real>(t));
}

/// Numerators/denominators of [r; t_0, ..., t_n] on |r| = 1:
///   A_0 = 1, C_0 = t_0,
///   A_{n+1} = A_n + t_{n+1} r^{n+1} conj(C_n),  C_{n+1} = C_n + t_{n+1} r^{n+1} conj(A_n),
///   Ã_n = A_n + r^{n+1} conj(C_n),               C̃_n = C_n + r^{n+1} conj(A_n),
/// with P_n = Π_{k<=n} (1 - t_k^2).
///
/// A, C, Ã, C̃ are stored divided by `scale` (all four share it), so the
/// true values are `scale * A` etc.; P is stored unscaled.
template <typename Real>
struct BoundaryState {
  std::size_t n = 0;
  Complex<Real> r;
  Complex<Real> r_power;  // r^{n+1}
  Complex<Real> A, C, A_mod, C_mod;
  Real P;
  Real scale = Real(1);

  Complex<Real> ratio() const { return C / A; }

  /// P_n / |A_n|^2 in terms of the stored (scaled) values.
  Real scaled_P() const { return P / (scale * scale); }
};

namespace detail {

template <typename Real>
void require_unimodular(const Complex<Real>& r, const char* who) {
  if (!on_unit_circle(r)) throw std::domain_error(std::string(who) + ": |r| must be 1");
}

template <typename Real>
void refresh_modified(BoundaryState<Real>& s) {
  s.A_mod = s.A + s.r_power * std::conj(s.C);
  s.C_mod = s.C + s.r_power * std::conj(s.A);
}

}  // namespace detail

template <typename Real>
BoundaryState<Real> boundary_init(const Real& t0, const Complex<Real>& r) {
  using std::abs;
  detail::require_unimodular(r, "boundary_init");
  if (!(abs(t0) < Real(1))) throw std::domain_error("boundary_init: |t_0| must be < 1");
  BoundaryState<Real> s;
  s.r = r;
  s.r_power = r;
  s.A = Complex<Real>(1);
  s.C = Complex<Real>(t0);
  s.P = Real(1) - t0 * t0;
  detail::refresh_modified(s);
  return s;
}

/// Advances (A_n, C_n) to index n + 1. With `rescale`, the four stored
/// coefficients are divided by their largest modulus, which keeps long
/// traces in range; every ratio and the identities are unaffected.
template <typename Real>
BoundaryState<Real> boundary_step(const BoundaryState<Real>& state, const Real& t_next, const Complex<Real>& r,
                                  bool rescale = true) {
  using std::abs;
  detail::require_unimodular(r, "boundary_step");
  if (abs(r - state.r) > Real(kUnitCircleTolerance))
    throw std::domain_error("boundary_step: r differs from the point the state was built for");
  if (!(abs(t_next) < Real(1))) throw std::domain_error("boundary_step: |t| must be < 1");

  BoundaryState<Real> s = state;
  const Complex<Real> k = t_next * s.r_power;
  s.A = state.A + k * std::conj(state.C);
  s.C = state.C + k * std::conj(state.A);
  s.P = state.P * (Real(1) - t_next * t_next);
  s.n = state.n + 1;
  s.r_power = state.r_power * s.r;
  s.r_power /= abs(s.r_power);
  detail::refresh_modified(s);

  if (rescale) {
    Real m = abs(s.A);
    for (const auto* v : {&s.C, &s.A_mod, &s.C_mod}) m = std::max(m, Real(abs(*v)));
    if (m > Real(1)) {
      const Complex<Real> inv(Real(1) / m);
      s.A *= inv;
      s.C *= inv;
      s.A_mod *= inv;
      s.C_mod *= inv;
      s.scale *= m;
    }
  }
  return s;
}

/// [r; t_0, ..., t_n, 1] = C̃_n / Ã_n.
template <typename Real>
ExtendedComplex<Real> modified_approximant(const BoundaryState<Real>& s) {
  return ExtendedComplex<Real>::ratio(s.C_mod, s.A_mod);
}

template <typename Real>
struct RunckelCheck {
  bool is_runckel = false;
  /// |[r; t_0, ..., t_n] - 1| for n = 0 .. n_max - 1.
  std::vector<Real> residuals;
};

/// Checks that [r; t_0, ..., t_n] → 1: the residual must stay below `tol`
/// over the last `window` indices before n_max.
template <typename Real>
RunckelCheck<Real> runckel_check(const SchurSeq<Real>& seq, const Complex<Real>& r, std::size_t n_max,
                                 const Real& tol, std::size_t window = 50) {
  using std::abs;
  detail::require_unimodular(r, "runckel_check");
  if (is_real_unit(r)) throw std::domain_error("runckel_check: r = ±1 is excluded");
  if (n_max == 0) throw std::domain_error("runckel_check: n_max must be >= 1");

  RunckelCheck<Real> out;
  out.residuals.reserve(n_max);
  auto state = boundary_init(seq[0], r);
  out.residuals.push_back(abs(state.ratio() - Complex<Real>(1)));
  for (std::size_t n = 1; n < n_max; ++n) {
    state = boundary_step(state, seq[n], r);
    out.residuals.push_back(abs(state.ratio() - Complex<Real>(1)));
  }
  const std::size_t k = std::min(window, n_max);
  out.is_runckel = true;
  for (std::size_t n = n_max - k; n < n_max; ++n)
    if (!(out.residuals[n] < tol)) out.is_runckel = false;
  return out;
}

}  // namespace runckel
