#pragma once

// Stieltjes g-fractions
//
//   1 / (1 - g_1 z / (1 - g_2 (1 - g_1) z / (1 - g_3 (1 - g_2) z / (1 - ...))))
//
// evaluated as compositions H_n = h_0 ∘ h_1 ∘ ... ∘ h_n of the maps
// h_i(t) = a_i / (1 + t), a_0 = 1, a_i = -b_i z, b_1 = g_1,
// b_i = g_i (1 - g_{i-1}); plus the conformal maps between the cut plane
// C \ [1, ∞) and the unit disc that tie them to Schur parameters.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "runckel/scalar.hpp"
#include "runckel/schur.hpp"
#include "runckel/sphere.hpp"

namespace runckel {

/// Coefficient source g_1, g_2, ... with every g_i in (0, 1).
template <typename Real>
class GFraction {
 public:
  struct Finite {
    std::vector<Real> g;  // g[0] holds g_1
  };
  struct Constant {
    Real g;
  };
  /// g_k = (1 - t_{k-1}) / 2 for a Schur sequence t.
  struct FromSchur {
    SchurSeq<Real> t;
  };
  using Descriptor = std::variant<Finite, Constant, FromSchur>;

  static GFraction finite(std::vector<Real> g) {
    for (std::size_t i = 0; i < g.size(); ++i) check_g(g[i], i + 1);
    return GFraction(Finite{std::move(g)});
  }

  static GFraction constant(Real g) {
    check_g(g, 1);
    return GFraction(Constant{std::move(g)});
  }

  static GFraction from_schur(SchurSeq<Real> t) { return GFraction(FromSchur{std::move(t)}); }

  /// The fraction attached to e_p(w) = (1 + w^p) / 2.
  static GFraction e_p(int p) { return from_schur(SchurSeq<Real>::ep_rule(p)); }

  const Descriptor& descriptor() const { return descriptor_; }

  /// Number of available coefficients, or nullopt for rule-based sources.
  std::optional<std::size_t> size() const {
    if (const auto* f = std::get_if<Finite>(&descriptor_)) return f->g.size();
    if (const auto* s = std::get_if<FromSchur>(&descriptor_)) return s->t.size();
    return std::nullopt;
  }

  /// g_i, i >= 1.
  Real g(std::size_t i) const {
    if (i == 0) throw std::out_of_range("GFraction: coefficients start at g_1");
    Real v = std::visit([i](const auto& d) { return value_at(d, i); }, descriptor_);
    check_g(v, i);
    return v;
  }

  /// b_1 = g_1, b_i = g_i (1 - g_{i-1}).
  Real b(std::size_t i) const {
    Real v = (i == 1) ? g(1) : g(i) * (Real(1) - g(i - 1));
    if (!(v > Real(0) && v < Real(1)))
      throw std::domain_error("GFraction: b_" + std::to_string(i) + " outside (0, 1)");
    return v;
  }

  /// Schur parameter t_{k-1} = 1 - 2 g_k.
  Real schur_parameter(std::size_t k_minus_1) const { return Real(1) - Real(2) * g(k_minus_1 + 1); }

 private:
  explicit GFraction(Descriptor d) : descriptor_(std::move(d)) {}

  static void check_g(const Real& g, std::size_t i) {
    if (!(g > Real(0) && g < Real(1)))
      throw std::domain_error("GFraction: g_" + std::to_string(i) + " must lie in (0, 1)");
  }

  static Real value_at(const Finite& f, std::size_t i) {
    if (i > f.g.size())
      throw std::out_of_range("GFraction: g_" + std::to_string(i) + " past the end of a finite fraction");
    return f.g[i - 1];
  }
  static Real value_at(const Constant& c, std::size_t) { return c.g; }
  static Real value_at(const FromSchur& s, std::size_t i) { return (Real(1) - s.t[i - 1]) / Real(2); }

  Descriptor descriptor_;
};

/// [a_0, ..., a_{count-1}] with a_0 = 1 and a_i = -b_i z.
template <typename Real>
std::vector<Complex<Real>> partial_numerators(const GFraction<Real>& f, const Complex<Real>& z, std::size_t count) {
  if (count == 0) throw std::domain_error("partial_numerators: count must be >= 1");
  std::vector<Complex<Real>> a;
  a.reserve(count);
  a.emplace_back(Real(1));
  for (std::size_t i = 1; i < count; ++i) a.push_back(-f.b(i) * z);
  return a;
}

template <typename Real>
GFraction<Real> g_from_schur(const std::vector<Real>& t) {
  std::vector<Real> g;
  g.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    using std::abs;
    if (!(abs(t[i]) < Real(1))) throw std::domain_error("g_from_schur: |t_" + std::to_string(i) + "| must be < 1");
    g.push_back((Real(1) - t[i]) / Real(2));
  }
  return GFraction<Real>::finite(std::move(g));
}

template <typename Real>
std::vector<Real> schur_from_g(const GFraction<Real>& f, std::size_t count) {
  std::vector<Real> t;
  t.reserve(count);
  for (std::size_t k = 0; k < count; ++k) t.push_back(f.schur_parameter(k));
  return t;
}

/// Forward sweep over H_0, H_1, ...: keeps one normalized FracMap so that
/// every tail (0, ∞ or a probe) is available at the same index.
template <typename Real>
class ApproximantSweep {
 public:
  ApproximantSweep(GFraction<Real> f, const Complex<Real>& z) : f_(std::move(f)), z_(z) {
    if (!is_finite(z)) throw std::domain_error("ApproximantSweep: z must be finite");
    map_ = FracMap<Real>(Complex<Real>(0), Complex<Real>(1), Complex<Real>(1), Complex<Real>(1));
  }

  std::size_t index() const { return n_; }
  const Complex<Real>& z() const { return z_; }
  const GFraction<Real>& fraction() const { return f_; }

  /// H_n as a map. Not meaningful when z == 0 and n >= 1 (see value()).
  const FracMap<Real>& map() const { return map_; }

  /// H_n(tail).
  ExtendedComplex<Real> value(const ExtendedComplex<Real>& tail) const {
    // h_i ≡ 0 for i >= 1 when z = 0, so H_n ≡ h_0(0) = 1.
    if (n_ > 0 && degenerate_z()) return ExtendedComplex<Real>(Real(1));
    return apply(map_, tail);
  }

  void advance() {
    ++n_;
    if (degenerate_z()) return;
    const Complex<Real> a = -f_.b(n_) * z_;
    map_ = compose(map_, FracMap<Real>(Complex<Real>(0), a, Complex<Real>(1), Complex<Real>(1)), n_);
  }

 private:
  bool degenerate_z() const { return z_ == Complex<Real>(); }

  GFraction<Real> f_;
  Complex<Real> z_;
  FracMap<Real> map_;
  std::size_t n_ = 0;
};

/// H_n(z; tail). Throws PrecisionError (carrying the step) when the
/// composition becomes singular in the working precision.
template <typename Real>
ExtendedComplex<Real> evaluate(const GFraction<Real>& f, const ExtendedComplex<Real>& z, std::size_t n,
                               const ExtendedComplex<Real>& tail) {
  if (z.is_infinite()) throw std::domain_error("evaluate: z must be finite");
  ApproximantSweep<Real> sweep(f, z.value());
  for (std::size_t i = 0; i < n; ++i) sweep.advance();
  return sweep.value(tail);
}

template <typename Real>
struct TraceRecord {
  std::size_t n;
  ExtendedComplex<Real> value_at_0;
  ExtendedComplex<Real> value_at_inf;
  ExtendedComplex<Real> value_at_probe;
  ExtendedComplex<Real> probe;
};

/// Records for n = 0 .. n_max, consecutive from 0.
template <typename Real>
using ApproximantTrace = std::vector<TraceRecord<Real>>;

template <typename Real>
using ProbeFn = std::function<ExtendedComplex<Real>(std::size_t)>;

/// One forward pass recording H_n(z; 0), H_n(z; ∞) and H_n(z; probe(n)).
/// Without a probe the probe column repeats the 0 tail.
template <typename Real>
ApproximantTrace<Real> approximant_trace(const GFraction<Real>& f, const Complex<Real>& z, std::size_t n_max,
                                         const ProbeFn<Real>& probe = {}) {
  ApproximantTrace<Real> trace;
  trace.reserve(n_max + 1);
  ApproximantSweep<Real> sweep(f, z);
  const auto zero = ExtendedComplex<Real>(Real(0));
  for (std::size_t n = 0;; ++n) {
    TraceRecord<Real> rec{n, sweep.value(zero), sweep.value(ExtendedComplex<Real>::infinity()), {}, zero};
    if (probe) rec.probe = probe(n);
    rec.value_at_probe = probe ? sweep.value(rec.probe) : rec.value_at_0;
    trace.push_back(std::move(rec));
    if (n == n_max) break;
    sweep.advance();
  }
  return trace;
}

/// Cut plane → disc, w = -1 + 2 (1 - sqrt(1 - z)) / z. With s = sqrt(1 - z)
/// (principal branch, s > 0 for real z < 1) this is (1 - s) / (1 + s) =
/// z / (1 + s)^2, the last form free of cancellation near z = 0. On the cut
/// the limit from the upper half plane is taken.
template <typename Real>
Complex<Real> w_of_z(const Complex<Real>& z) {
  using std::sqrt;
  const bool on_cut = z.imag() == Real(0) && z.real() > Real(1);
  const Complex<Real> s = on_cut ? Complex<Real>(Real(0), -sqrt(z.real() - Real(1)))
                                 : sqrt(Complex<Real>(Real(1) - z.real(), -z.imag()));
  const Complex<Real> q = Complex<Real>(1) + s;
  return z / (q * q);
}

/// Disc → plane, z = 4 w / (1 + w)^2; w = -1 goes to ∞.
template <typename Real>
ExtendedComplex<Real> z_of_w(const Complex<Real>& w) {
  const Complex<Real> q = Complex<Real>(1) + w;
  return ExtendedComplex<Real>::ratio(Real(4) * w, q * q);
}

/// Image of a unimodular r ≠ ±1 on the singular line: 2 / (1 + Re r) > 1.
template <typename Real>
Real runckel_z(const Complex<Real>& r) {
  if (!on_unit_circle(r)) throw std::domain_error("runckel_z: |r| must be 1");
  if (is_real_unit(r)) throw std::domain_error("runckel_z: r = ±1 is excluded");
  return Real(2) / (Real(1) + r.real());
}

/// l_{n+1}(w; t) = -2 (1 - g_{n+1}) (1 - t) w / ((1 - w t)(1 + w)), the tail that
/// turns H_{n+1} into the disc approximant with tail t.
template <typename Real>
Complex<Real> tail_probe(const GFraction<Real>& f, std::size_t n, const Complex<Real>& w, const Real& t) {
  const Complex<Real> one(1);
  if (!is_finite(w)) throw std::domain_error("tail_probe: w must be finite");
  if (w == -one) throw std::domain_error("tail_probe: w = -1");
  if (w * t == one) throw std::domain_error("tail_probe: w t = 1");
  const Real g = f.g(n + 1);
  return Real(-2) * (Real(1) - g) * (Real(1) - t) * w / ((one - w * t) * (one + w));
}

/// ((1 + w) / (1 - w)) ((1 - w E) / (1 + w E)) with E = [w; e_params...]:
/// the g-fraction value at z_of_w(w), computed on the disc side.
template <typename Real>
ExtendedComplex<Real> correspondence_value(const std::vector<Real>& e_params, const Complex<Real>& w) {
  using std::abs;
  const Complex<Real> one(1);
  if (!(abs(w) < Real(1))) throw std::domain_error("correspondence_value: |w| must be < 1");
  const ExtendedComplex<Real> e = approximant(w, e_params);
  if (e.is_infinite()) {
    // (1 - w E) / (1 + w E) → -1
    return w == Complex<Real>() ? ExtendedComplex<Real>(one) : ExtendedComplex<Real>(-(one + w) / (one - w));
  }
  const Complex<Real> we = w * e.value();
  const ExtendedComplex<Real> q = ExtendedComplex<Real>::ratio(one - we, one + we);
  if (q.is_infinite()) return q;
  return ExtendedComplex<Real>((one + w) / (one - w) * q.value());
}

}  // namespace runckel
