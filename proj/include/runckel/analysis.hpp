#pragma once

// Convergence classification of g-fractions at Runckel points of the
// singular line: classical convergence (tails 0 and ∞), general convergence
// (tails u_n and conj(u_n)), oscillation between the two possible limits,
// and the e_p counterexample experiment.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "runckel/gfraction.hpp"
#include "runckel/scalar.hpp"
#include "runckel/schur.hpp"
#include "runckel/sphere.hpp"

namespace runckel {

enum class Verdict { ClassicalConvergent, GenerallyConvergentOnly, Oscillatory, Undecided };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ClassicalConvergent: return "CLASSICAL_CONVERGENT";
    case Verdict::GenerallyConvergentOnly: return "GENERALLY_CONVERGENT_ONLY";
    case Verdict::Oscillatory: return "OSCILLATORY";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

/// Raised when the probe sequences of a general-convergence run do not settle.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Real>
struct ConvergenceDiagnostics {
  static Real nan() { return std::numeric_limits<Real>::quiet_NaN(); }

  /// Max over the trailing window of |H_n(0) - L| and |H_n(∞) - L|, L = H_{n_max}(0).
  Real final_residual = nan();
  /// Trailing-half max of min(|H_n(0) - 1|, |H_{n+1}(0) - 1|).
  Real pair_min_residual = nan();
  /// Trailing-half max of |H_n(0) - 1|.
  Real raw_residual = nan();
  /// Trailing-half min of σ(u_n, v_n): the liminf estimate.
  Real sigma_liminf_estimate = nan();
  /// Trailing-window max of |H_n(u_n) - α| and |H_n(v_n) - α|.
  Real probe_residual = nan();
  /// Trailing-half max of dist(H_n(0), limit set).
  Real limit_set_distance = nan();
  std::size_t alternations = 0;
  std::array<std::size_t, 2> visits{0, 0};
  std::size_t n_used = 0;
};

template <typename Real>
struct ConvergenceReport {
  Verdict verdict = Verdict::Undecided;
  std::optional<ExtendedComplex<Real>> limit;
  /// Common limit α of the probe sequences, when they settle.
  std::optional<ExtendedComplex<Real>> general_limit;
  std::optional<std::array<ExtendedComplex<Real>, 2>> limit_set;
  ConvergenceDiagnostics<Real> diagnostics;
};

struct ClassifyOptions {
  std::size_t window = 50;
  std::size_t min_alternations = 10;
  /// σ(u_n, v_n) must stay above this for general convergence.
  double sigma_delta = 1e-6;
};

/// {1, ((1 + r) / (1 - r))^2}: the accumulation points of H_n(z_r; 0).
template <typename Real>
std::array<ExtendedComplex<Real>, 2> limit_set(const Complex<Real>& r) {
  if (!on_unit_circle(r)) throw std::domain_error("limit_set: |r| must be 1");
  if (is_real_unit(r)) throw std::domain_error("limit_set: r = ±1 is excluded");
  const Complex<Real> q = (Complex<Real>(1) + r) / (Complex<Real>(1) - r);
  return {ExtendedComplex<Real>(Real(1)), ExtendedComplex<Real>(q * q)};
}

namespace detail {

template <typename Real>
Real distance(const ExtendedComplex<Real>& x, const ExtendedComplex<Real>& y) {
  using std::abs;
  if (x.is_infinite() || y.is_infinite()) return std::numeric_limits<Real>::infinity();
  return abs(x.value() - y.value());
}

template <typename Real>
Real distance_to_one(const ExtendedComplex<Real>& x) {
  return distance(x, ExtendedComplex<Real>(Real(1)));
}

/// u_n = l_n(r; t_n) with t_n = 1 - 2 g_{n+1}; defined for n >= 1.
template <typename Real>
Complex<Real> runckel_probe(const GFraction<Real>& f, std::size_t n, const Complex<Real>& r) {
  return tail_probe(f, n - 1, r, f.schur_parameter(n));
}

template <typename Real>
struct Sample {
  ExtendedComplex<Real> h0, hinf, hu, hv;
};

/// Single forward pass behind classify and ramanujan_experiment.
template <typename Real>
ConvergenceReport<Real> run_classification(const GFraction<Real>& f, const Real& z, std::size_t n_max, const Real& tol,
                                           const std::optional<Complex<Real>>& r, const ClassifyOptions& opts,
                                           ApproximantTrace<Real>* trace) {
  using std::abs;
  if (n_max < 1000) throw std::domain_error("classify: n_max must be >= 1000");
  if (!(tol > Real(0))) throw std::domain_error("classify: tol must be positive");
  if (r) {
    const Real zr = runckel_z(*r);
    if (abs(z - zr) > Real(1e-12) * std::max(Real(1), abs(zr)))
      throw std::domain_error("classify: z does not match the Runckel point r (expected z = 2 / (1 + Re r))");
  }

  ConvergenceReport<Real> report;
  auto& diag = report.diagnostics;
  diag.n_used = n_max;
  if (r) report.limit_set = limit_set(*r);

  const std::size_t half = n_max / 2;
  const std::size_t window = std::clamp<std::size_t>(opts.window, 1, n_max);
  std::deque<Sample<Real>> tail;
  Real pair_min = 0, raw = 0, sigma_min = std::numeric_limits<Real>::infinity(), set_dist = 0;
  std::optional<ExtendedComplex<Real>> previous_h0;
  int last_visit = -1;

  if (trace) trace->reserve(n_max + 1);
  ApproximantSweep<Real> sweep(f, Complex<Real>(z));
  const ExtendedComplex<Real> zero(Real(0));
  for (std::size_t n = 0;; ++n) {
    Sample<Real> s{sweep.value(zero), sweep.value(ExtendedComplex<Real>::infinity()), {}, {}};
    ExtendedComplex<Real> u = zero;
    if (r && n >= 1) {
      u = ExtendedComplex<Real>(runckel_probe(f, n, *r));
      s.hu = sweep.value(u);
      s.hv = sweep.value(conj(u));
      if (n >= half) sigma_min = std::min(sigma_min, chordal(u, conj(u)));
    }
    if (trace) trace->push_back({n, s.h0, s.hinf, r && n >= 1 ? s.hu : s.h0, u});

    if (r) {
      const auto& set = *report.limit_set;
      const Real d1 = distance(s.h0, set[0]);
      const Real d2 = distance(s.h0, set[1]);
      for (int k = 0; k < 2; ++k) {
        if ((k == 0 ? d1 : d2) < tol) {
          ++diag.visits[k];
          if (last_visit != -1 && last_visit != k) ++diag.alternations;
          last_visit = k;
        }
      }
      if (n >= half) {
        set_dist = std::max(set_dist, std::min(d1, d2));
        raw = std::max(raw, distance_to_one(s.h0));
        if (previous_h0 && n - 1 >= half)
          pair_min = std::max(pair_min, std::min(distance_to_one(*previous_h0), distance_to_one(s.h0)));
      }
      previous_h0 = s.h0;
    }

    tail.push_back(std::move(s));
    if (tail.size() > window) tail.pop_front();
    if (n == n_max) break;
    sweep.advance();
  }

  const ExtendedComplex<Real> limit = tail.back().h0;
  diag.final_residual = 0;
  for (const auto& s : tail)
    diag.final_residual = std::max({diag.final_residual, distance(s.h0, limit), distance(s.hinf, limit)});
  const bool classical = limit.is_finite() && diag.final_residual < tol;

  bool general = false;
  if (r) {
    diag.pair_min_residual = pair_min;
    diag.raw_residual = raw;
    diag.limit_set_distance = set_dist;
    diag.sigma_liminf_estimate = sigma_min;
    const ExtendedComplex<Real> alpha = tail.back().hu;
    diag.probe_residual = 0;
    for (const auto& s : tail)
      diag.probe_residual = std::max({diag.probe_residual, distance(s.hu, alpha), distance(s.hv, alpha)});
    general = alpha.is_finite() && diag.probe_residual < tol && sigma_min > Real(opts.sigma_delta);
    if (general) report.general_limit = alpha;
  }

  if (classical) {
    report.verdict = Verdict::ClassicalConvergent;
    report.limit = limit;
  } else if (r && diag.alternations >= opts.min_alternations) {
    report.verdict = Verdict::Oscillatory;
  } else if (general) {
    report.verdict = Verdict::GenerallyConvergentOnly;
    report.limit = report.general_limit;
  } else {
    report.verdict = Verdict::Undecided;
  }
  return report;
}

}  // namespace detail

/// Classifies the behaviour of H_n(z; ·) over n = 0 .. n_max. With a Runckel
/// point r (z must then equal runckel_z(r)) the probe tails u_n, conj(u_n)
/// and the two-point limit set are tracked as well.
template <typename Real>
ConvergenceReport<Real> classify(const GFraction<Real>& f, const Real& z, std::size_t n_max, const Real& tol,
                                 const std::optional<Complex<Real>>& r = std::nullopt,
                                 const ClassifyOptions& opts = {}) {
  return detail::run_classification(f, z, n_max, tol, r, opts, static_cast<ApproximantTrace<Real>*>(nullptr));
}

/// m_n = min(|H_n(z_r; 0) - 1|, |H_{n+1}(z_r; 0) - 1|) for n = 0 .. n_max - 1.
template <typename Real>
std::vector<Real> paired_minimum_trace(const GFraction<Real>& f, const Complex<Real>& r, std::size_t n_max) {
  const Real z = runckel_z(r);
  std::vector<Real> out;
  out.reserve(n_max);
  ApproximantSweep<Real> sweep(f, Complex<Real>(z));
  const ExtendedComplex<Real> zero(Real(0));
  Real previous = detail::distance_to_one(sweep.value(zero));
  for (std::size_t n = 0; n < n_max; ++n) {
    sweep.advance();
    const Real current = detail::distance_to_one(sweep.value(zero));
    out.push_back(std::min(previous, current));
    previous = current;
  }
  return out;
}

template <typename Real>
struct GeneralConvergence {
  ExtendedComplex<Real> alpha;
  /// min over n >= n_max / 2 of σ(u_n, conj(u_n)).
  Real sigma_floor;
  /// Trailing-window max of |H_n(z_r; u_n) - α| and |H_n(z_r; conj(u_n)) - α|.
  Real probe_residual;
  /// |H_n(z_r; u_n) - 1| for n = 1 .. n_max (index n - 1).
  std::vector<Real> residuals;
};

/// Runs the tails u_n = l_n(r; t_n) and v_n = conj(u_n) through H_n(z_r; ·)
/// and returns their common limit with the chordal separation floor.
/// r must be a Runckel point of the Schur side of `f`.
template <typename Real>
GeneralConvergence<Real> general_convergence_probe(const GFraction<Real>& f, const Complex<Real>& r,
                                                   std::size_t n_max, const Real& tol, std::size_t window = 50) {
  using std::abs;
  if (n_max < 2) throw std::domain_error("general_convergence_probe: n_max must be >= 2");
  const Real z = runckel_z(r);
  const auto schur = SchurSeq<Real>::finite(schur_from_g(f, n_max + 1));
  if (!runckel_check(schur, r, n_max + 1, tol, window).is_runckel)
    throw std::domain_error("general_convergence_probe: r is not a Runckel point of the Schur parameters");

  GeneralConvergence<Real> out{ExtendedComplex<Real>(), std::numeric_limits<Real>::infinity(), Real(0), {}};
  out.residuals.reserve(n_max);
  std::deque<detail::Sample<Real>> tail;
  const std::size_t k = std::clamp<std::size_t>(window, 1, n_max);
  ApproximantSweep<Real> sweep(f, Complex<Real>(z));
  for (std::size_t n = 1; n <= n_max; ++n) {
    sweep.advance();
    const ExtendedComplex<Real> u(detail::runckel_probe(f, n, r));
    detail::Sample<Real> s{{}, {}, sweep.value(u), sweep.value(conj(u))};
    out.residuals.push_back(detail::distance_to_one(s.hu));
    if (n >= n_max / 2) out.sigma_floor = std::min(out.sigma_floor, chordal(u, conj(u)));
    tail.push_back(std::move(s));
    if (tail.size() > k) tail.pop_front();
  }
  out.alpha = tail.back().hu;
  for (const auto& s : tail)
    out.probe_residual = std::max({out.probe_residual, detail::distance(s.hu, out.alpha), detail::distance(s.hv, out.alpha)});

  const Real alpha_gap = detail::distance_to_one(out.alpha);
  if (!(out.probe_residual < tol) || !(alpha_gap < tol))
    throw ConvergenceError("general_convergence_probe: probe sequences did not settle (window residual " +
                           std::to_string(to_double(out.probe_residual)) + ", |alpha - 1| " +
                           std::to_string(to_double(alpha_gap)) + ", n_max " + std::to_string(n_max) + ")");
  return out;
}

template <typename Real>
struct RamanujanResult {
  int p;
  Complex<Real> r;
  Real z;
  /// lim b_i z_p = z_p / 4 (> 1/4).
  Real limit_numerator;
  /// b_{n_max} z_p, the last partial numerator actually used.
  Real last_numerator;
  ConvergenceReport<Real> report;
  ApproximantTrace<Real> trace;
  /// Odd p converged classically to 1; even p oscillated.
  bool matches_expectation;
};

/// Builds the e_p fraction at z_p = 1 / cos^2(π / p), whose partial numerators
/// tend to z_p / 4 > 1/4, and classifies it.
template <typename Real>
RamanujanResult<Real> ramanujan_experiment(int p, std::size_t n_max, const Real& tol = Real(1e-3),
                                           const ClassifyOptions& opts = {}) {
  using std::abs;
  if (p < 2) throw std::domain_error("ramanujan_experiment: p must be >= 2");
  if (p == 2) throw std::domain_error("ramanujan_experiment: p = 2 gives r = -1, which is not a Runckel point");

  RamanujanResult<Real> out;
  out.p = p;
  out.r = root_of_unity<Real>(1, p);
  out.z = runckel_z(out.r);
  out.limit_numerator = out.z / Real(4);
  if (!(out.limit_numerator > Real(1) / Real(4)))
    throw std::logic_error("ramanujan_experiment: limit of b_i z_p must exceed 1/4");
  const auto f = GFraction<Real>::e_p(p);
  out.last_numerator = f.b(std::max<std::size_t>(n_max, 1)) * out.z;
  out.report = detail::run_classification(f, out.z, n_max, tol, std::optional<Complex<Real>>(out.r), opts, &out.trace);

  const auto& rep = out.report;
  if (p % 2 == 1) {
    out.matches_expectation = rep.verdict == Verdict::ClassicalConvergent && rep.limit &&
                              detail::distance_to_one(*rep.limit) < tol;
  } else {
    out.matches_expectation = rep.verdict == Verdict::Oscillatory;
  }
  return out;
}

}  // namespace runckel
