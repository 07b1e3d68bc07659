#pragma once

// Randomized, seeded verification of the algebraic identities linking disc
// approximants, their unit-circle recurrences and g-fraction approximants.
// Each check is its own oracle: both sides are computed by independent routes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "runckel/analysis.hpp"
#include "runckel/gfraction.hpp"
#include "runckel/scalar.hpp"
#include "runckel/schur.hpp"
#include "runckel/sphere.hpp"

namespace runckel {

struct IdentityResult {
  std::string name;
  std::size_t trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct IdentitySuiteOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t max_n = 50;
  double tolerance = 1e-10;
  /// Perturbs one coefficient on one side of every identity (negative control).
  bool inject_fault = false;
};

inline bool all_passed(const std::vector<IdentityResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.passed; });
}

namespace detail {

inline constexpr double kFault = 1e-6;
/// Padding length that makes the cut-plane g-fraction converge to roundoff for |w| <= 0.8.
inline constexpr std::size_t kCorrespondencePadding = 400;

/// Padding enough to push |w|^k below 1e-40 and no further: a longer tail only
/// drives the normalized determinant towards underflow.
template <typename Real>
std::size_t correspondence_padding(const Complex<Real>& w) {
  using std::abs;
  using std::log10;
  const double rho = to_double(abs(w));
  if (!(rho > 1e-300)) return 1;
  const double k = std::ceil(40.0 / -std::log10(rho));
  return std::min<std::size_t>(kCorrespondencePadding, static_cast<std::size_t>(std::max(1.0, k)));
}

template <typename Real>
class TrialSampler {
 public:
  explicit TrialSampler(std::uint64_t seed) : rng_(seed) {}

  Real uniform(double lo, double hi) { return Real(std::uniform_real_distribution<double>(lo, hi)(rng_)); }

  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  std::vector<Real> parameters(std::size_t count, double bound) {
    std::vector<Real> t(count);
    for (auto& x : t) x = uniform(-bound, bound);
    return t;
  }

  Complex<Real> disc_point(double max_radius) {
    using std::cos;
    using std::sin;
    const Real rho = uniform(0.0, max_radius);
    const Real theta = uniform(0.0, 2.0) * pi<Real>();
    return {rho * cos(theta), rho * sin(theta)};
  }

  /// Unimodular point away from ±1.
  Complex<Real> circle_point() {
    using std::cos;
    using std::sin;
    Real theta = uniform(0.05, 0.95) * pi<Real>();
    if (index(0, 1) == 1) theta = -theta;
    return {cos(theta), sin(theta)};
  }

 private:
  std::mt19937_64 rng_;
};

template <typename Real>
double relative_gap(const Complex<Real>& x, const Complex<Real>& y, const Real& reference) {
  using std::abs;
  return to_double(abs(x - y) / reference);
}

template <typename Real>
IdentityResult run_identity(const std::string& name, const IdentitySuiteOptions& opts, auto&& trial) {
  IdentityResult out{name, opts.trials, 0.0, opts.tolerance, true};
  for (std::size_t i = 0; i < opts.trials; ++i) {
    const double residual = trial();
    if (!(residual <= out.max_residual)) out.max_residual = residual;  // NaN propagates
  }
  out.passed = out.max_residual < opts.tolerance;
  return out;
}

template <typename Real>
BoundaryState<Real> run_boundary(const std::vector<Real>& t, const Complex<Real>& r) {
  auto s = boundary_init(t[0], r);
  for (std::size_t k = 1; k < t.size(); ++k) s = boundary_step(s, t[k], r);
  return s;
}

}  // namespace detail

/// Runs every identity for `opts.trials` random trials in scalar type `Real`.
template <typename Real>
std::vector<IdentityResult> run_identity_suite(const IdentitySuiteOptions& opts = {}) {
  using detail::relative_gap;
  using std::abs;
  using std::norm;
  const Complex<Real> one(1);
  const Real fault = opts.inject_fault ? Real(detail::kFault) : Real(0);
  detail::TrialSampler<Real> rng(opts.seed);
  std::vector<IdentityResult> results;

  // ((1+w)/(1-w)) (1 - w S_n(w;t)) / (1 + w S_n(w;t)) = H_{n+1}(z(w); l_{n+1}(w;t))
  results.push_back(detail::run_identity<Real>("partial_approximants", opts, [&] {
    const std::size_t n = rng.index(0, opts.max_n);
    auto t = rng.parameters(n + 1, 0.9);
    const Complex<Real> w = rng.disc_point(0.9);
    const Real tail = rng.uniform(-0.9, 0.9);
    auto with_tail = t;
    with_tail.push_back(tail);
    const Complex<Real> s = approximant(w, with_tail).value();
    const ExtendedComplex<Real> lhs((one + w) / (one - w) * (one - w * s) / (one + w * s));
    t[0] += fault;
    const auto f = g_from_schur(t);
    const auto rhs = evaluate(f, z_of_w(w), n + 1, ExtendedComplex<Real>(tail_probe(f, n, w, tail)));
    return to_double(chordal(lhs, rhs));
  }));

  // t = 1 on the circle: ((1+r)/(1-r)) (1 - r[r;t_0..t_n,1]) / (1 + r[r;t_0..t_n,1]) = H_{n+1}(z_r; 0)
  results.push_back(detail::run_identity<Real>("unit_tail_on_circle", opts, [&] {
    const int p = static_cast<int>(rng.index(3, 12));
    const Complex<Real> r = root_of_unity<Real>(1, p);
    const std::size_t n = rng.index(0, opts.max_n);
    auto t = e_p_params<Real>(p, n + 2);
    auto closed = std::vector<Real>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n + 1));
    closed.push_back(Real(1));
    const ExtendedComplex<Real> m = approximant(r, closed);
    const ExtendedComplex<Real> lhs =
        m.is_infinite() ? ExtendedComplex<Real>(-(one + r) / (one - r))
                        : ExtendedComplex<Real>::ratio((one + r) * (one - r * m.value()), (one - r) * (one + r * m.value()));
    t[0] += fault;
    const auto rhs = evaluate(g_from_schur(t), ExtendedComplex<Real>(runckel_z(r)), n + 1, ExtendedComplex<Real>(Real(0)));
    return to_double(chordal(lhs, rhs));
  }));

  // C_n / A_n = [r; t_0..t_n] and C̃_n / Ã_n = [r; t_0..t_n, 1]
  results.push_back(detail::run_identity<Real>("boundary_ratios", opts, [&] {
    const std::size_t n = rng.index(0, opts.max_n);
    auto t = rng.parameters(n + 1, 0.5);
    const Complex<Real> r = rng.circle_point();
    const auto s = detail::run_boundary(t, r);
    t[0] += fault;
    auto closed = t;
    closed.push_back(Real(1));
    const Complex<Real> open_ref = approximant(r, t).value();
    const Complex<Real> closed_ref = approximant(r, closed).value();
    return std::max(relative_gap(s.ratio(), open_ref, std::max(Real(1), abs(open_ref))),
                    relative_gap(modified_approximant(s).value(), closed_ref, std::max(Real(1), abs(closed_ref))));
  }));

  // 1 - |C_n/A_n|^2 = P_n / |A_n|^2
  results.push_back(detail::run_identity<Real>("modulus_defect", opts, [&] {
    const std::size_t n = rng.index(0, opts.max_n);
    const auto t = rng.parameters(n + 1, 0.5);
    const Complex<Real> r = rng.circle_point();
    const auto s = detail::run_boundary(t, r);
    const Real lhs = Real(1) - norm(s.ratio());
    const Real rhs = s.scaled_P() * (Real(1) + fault) / norm(s.A);
    return to_double(abs(lhs - rhs) / abs(rhs));
  }));

  // C̃_n/Ã_n - C_n/A_n = r^{n+1} P_n / (A_n Ã_n)
  results.push_back(detail::run_identity<Real>("modified_difference", opts, [&] {
    const std::size_t n = rng.index(0, opts.max_n);
    const auto t = rng.parameters(n + 1, 0.5);
    const Complex<Real> r = rng.circle_point();
    const auto s = detail::run_boundary(t, r);
    const Complex<Real> lhs = s.C_mod / s.A_mod - s.ratio();
    const Complex<Real> rhs = s.r_power * s.scaled_P() * (Real(1) + fault) / (s.A * s.A_mod);
    return relative_gap(lhs, rhs, abs(rhs));
  }));

  // C̃_n = r^{n+1} conj(Ã_n)
  results.push_back(detail::run_identity<Real>("modified_symmetry", opts, [&] {
    const std::size_t n = rng.index(0, opts.max_n);
    const auto t = rng.parameters(n + 1, 0.9);
    const Complex<Real> r = rng.circle_point();
    const auto s = detail::run_boundary(t, r);
    Complex<Real> r_power = one;
    for (std::size_t k = 0; k <= n; ++k) r_power *= r;
    return relative_gap(s.C_mod, r_power * (Real(1) + fault) * std::conj(s.A_mod), abs(s.A_mod));
  }));

  // Disc-side value of e = [w; t_0..t_n] against the cut-plane g-fraction,
  // padded with g = 1/2 (Schur parameter 0) until it has converged.
  results.push_back(detail::run_identity<Real>("correspondence", opts, [&] {
    const std::size_t n = rng.index(0, opts.max_n);
    auto t = rng.parameters(n + 1, 0.9);
    const Complex<Real> w = rng.disc_point(0.8);
    const Complex<Real> lhs = correspondence_value(t, w).value();
    t[0] += fault;
    t.resize(n + 1 + detail::correspondence_padding(w), Real(0));
    const auto rhs = evaluate(g_from_schur(t), z_of_w(w), t.size(), ExtendedComplex<Real>(Real(0)));
    return relative_gap(lhs, rhs.value(), std::max(Real(1), abs(lhs)));
  }));

  // z -> w -> z on the cut plane and w -> z -> w on the disc
  results.push_back(detail::run_identity<Real>("conformal_round_trip", opts, [&] {
    Complex<Real> z;
    do {
      z = Complex<Real>(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0));
    } while (z.real() >= Real(1) && abs(z.imag()) < Real(1e-3));
    const Complex<Real> z_back = z_of_w(w_of_z(z)).value() * (Real(1) + fault);
    const Complex<Real> w = rng.disc_point(0.95);
    const Complex<Real> w_back = w_of_z(z_of_w(w).value());
    return std::max(relative_gap(z_back, z, std::max(Real(1), abs(z))), relative_gap(w_back, w, Real(1)));
  }));

  return results;
}

}  // namespace runckel
