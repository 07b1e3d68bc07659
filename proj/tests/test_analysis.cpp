#include <cmath>
#include <complex>
#include <optional>

#include "doctest.h"

#include "runckel/analysis.hpp"

using namespace runckel;
using C = Complex<double>;
using X = ExtendedComplex<double>;
using F = GFraction<double>;
using R = Real128;

TEST_CASE("limit set") {
  const auto i_set = limit_set(C(0, 1));
  CHECK(i_set[0].value() == C(1));
  CHECK(std::abs(i_set[1].value() - C(-1)) < 1e-15);
  const auto set3 = limit_set(root_of_unity<double>(1, 3));
  CHECK(std::abs(set3[1].value() - C(-1.0 / 3)) < 1e-15);
  for (int p = 3; p <= 9; ++p) CHECK(limit_set(root_of_unity<double>(1, p))[0].value() == C(1));
  CHECK_THROWS_AS(limit_set(C(1)), std::domain_error);
  CHECK_THROWS_AS(limit_set(C(-1)), std::domain_error);
  CHECK_THROWS_AS(limit_set(C(0.5)), std::domain_error);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::ClassicalConvergent) == "CLASSICAL_CONVERGENT");
  CHECK(to_string(Verdict::GenerallyConvergentOnly) == "GENERALLY_CONVERGENT_ONLY");
  CHECK(to_string(Verdict::Oscillatory) == "OSCILLATORY");
  CHECK(to_string(Verdict::Undecided) == "UNDECIDED");
}

TEST_CASE("classify the e_3 fraction at z = 4") {
  const C r = root_of_unity<double>(1, 3);
  const auto rep = classify(F::e_p(3), 4.0, 100000, 1e-3, std::optional<C>(r));
  CHECK(rep.verdict == Verdict::ClassicalConvergent);
  REQUIRE(rep.limit);
  CHECK(std::abs(rep.limit->value() - C(1)) < 1e-8);
  CHECK(rep.diagnostics.final_residual < 1e-3);
  CHECK(rep.diagnostics.n_used == 100000u);
  REQUIRE(rep.general_limit);
  CHECK(std::abs(rep.general_limit->value() - C(1)) < 1e-8);
  // Without r the point is classified from the 0 and ∞ tails alone.
  CHECK(classify(F::e_p(3), 4.0, 20000, 1e-3).verdict == Verdict::ClassicalConvergent);
}

TEST_CASE("classify the e_4 fraction at z = 2") {
  const auto rep = classify(GFraction<R>::e_p(4), R(2), 20000, R(1e-3), std::optional<Complex<R>>(Complex<R>(0, 1)));
  CHECK(rep.verdict == Verdict::Oscillatory);
  CHECK_FALSE(rep.limit);
  REQUIRE(rep.limit_set);
  CHECK(to_double(abs((*rep.limit_set)[1].value() + Complex<R>(1))) < 1e-30);
  CHECK(rep.diagnostics.alternations >= 10u);
  CHECK(rep.diagnostics.visits[0] >= 10u);
  CHECK(rep.diagnostics.visits[1] >= 10u);
  CHECK(rep.diagnostics.limit_set_distance < R(1e-6));
  CHECK(rep.diagnostics.pair_min_residual < rep.diagnostics.raw_residual);
  REQUIRE(rep.general_limit);
  CHECK(to_double(abs(rep.general_limit->value() - Complex<R>(1))) < 1e-6);
}

TEST_CASE("classify constant g = 1/2 at z = -3") {
  const auto rep = classify(GFraction<R>::constant(R(0.5)), R(-3), 1000, R(1e-3));
  CHECK(rep.verdict == Verdict::ClassicalConvergent);
  REQUIRE(rep.limit);
  CHECK(to_double(abs(rep.limit->value() - Complex<R>(R(1) / R(2)))) < 1e-30);
  // The geometric convergence drives the double-precision determinant to underflow.
  try {
    (void)classify(F::constant(0.5), -3.0, 1000, 1e-3);
    FAIL("expected a precision error");
  } catch (const PrecisionError& e) {
    CHECK(e.step() > 100u);
    CHECK(e.step() < 1000u);
  }
}

TEST_CASE("classify preconditions") {
  CHECK_THROWS_AS(classify(F::e_p(3), 4.0, 999, 1e-3), std::domain_error);
  CHECK_THROWS_AS(classify(F::e_p(3), 4.0, 1000, 0.0), std::domain_error);
  CHECK_THROWS_AS(classify(F::e_p(3), 3.0, 1000, 1e-3, std::optional<C>(root_of_unity<double>(1, 3))),
                  std::domain_error);
}

TEST_CASE("undecided when nothing settles") {
  // Constant coefficients on the cut: the periodic fraction is elliptic and never settles.
  const auto rep = classify(F::constant(0.5), 5.0, 1000, 1e-3);
  CHECK(rep.verdict == Verdict::Undecided);
  CHECK_FALSE(rep.limit);
}

TEST_CASE("paired minimum decays for e_4") {
  const auto m = paired_minimum_trace(GFraction<R>::e_p(4), Complex<R>(0, 1), 20000);
  REQUIRE(m.size() == 20000u);
  R tail_max = 0;
  for (std::size_t n = m.size() / 2; n < m.size(); ++n) tail_max = std::max(tail_max, m[n]);
  CHECK(tail_max < R(0.05));
  CHECK(tail_max < R(1e-7));
}

TEST_CASE("paired minimum is below the residual for e_3") {
  const C r = root_of_unity<double>(1, 3);
  const auto m = paired_minimum_trace(F::e_p(3), r, 5000);
  const auto trace = approximant_trace(F::e_p(3), C(runckel_z(r)), 5000);
  for (std::size_t n = 2; n < m.size(); ++n)
    CHECK(m[n] <= std::abs(trace[n].value_at_0.value() - C(1)));
  CHECK(m.back() < 1e-6);
}

TEST_CASE("general convergence probe") {
  const C r3 = root_of_unity<double>(1, 3);
  const auto g3 = general_convergence_probe(F::e_p(3), r3, 20000, 1e-3);
  CHECK(std::abs(g3.alpha.value() - C(1)) < 1e-6);
  CHECK(g3.sigma_floor == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(g3.residuals.size() == 20000u);

  // σ(u, conj u) = 2 |u - conj u| / (1 + |u|^2) = 4 |Im u| / (1 + |u|^2), straight from the tail values.
  const auto f3 = F::e_p(3);
  double direct = INFINITY;
  for (std::size_t n = 10000; n <= 20000; ++n) {
    const C u = tail_probe(f3, n - 1, r3, f3.schur_parameter(n));
    direct = std::min(direct, 4 * std::abs(u.imag()) / (1 + std::norm(u)));
  }
  CHECK(g3.sigma_floor == doctest::Approx(direct).epsilon(1e-12));

  const auto g4 = general_convergence_probe(GFraction<R>::e_p(4), Complex<R>(0, 1), 20000, R(1e-3));
  CHECK(to_double(abs(g4.alpha.value() - Complex<R>(1))) < 1e-6);
  CHECK(to_double(g4.sigma_floor) == doctest::Approx(4.0 / 3).epsilon(1e-6));
}

TEST_CASE("general convergence probe failures") {
  CHECK_THROWS_AS(general_convergence_probe(F::e_p(3), root_of_unity<double>(1, 5), 2000, 1e-3), std::domain_error);
  CHECK_THROWS_AS(general_convergence_probe(F::e_p(3), root_of_unity<double>(1, 3), 30, 1e-3, 10), std::domain_error);
  // At n = 2000 the Schur residual (1.1e-6) is inside the tolerance but the probe window (2.7e-6) is not.
  CHECK_THROWS_AS(general_convergence_probe(F::e_p(3), root_of_unity<double>(1, 3), 2000, 2e-6, 5),
                  ConvergenceError);
}

TEST_CASE("conjugate symmetry at Runckel points") {
  const auto f = F::e_p(5);
  const double z = runckel_z(root_of_unity<double>(1, 5));
  ApproximantSweep<double> sweep(f, C(z));
  const X t(C(0.3, -0.7));
  for (int n = 0; n < 500; ++n) {
    CHECK(chordal(sweep.value(conj(t)), conj(sweep.value(t))) == 0.0);
    sweep.advance();
  }
}

TEST_CASE("ramanujan experiment") {
  const auto p3 = ramanujan_experiment<double>(3, 100000);
  CHECK(p3.matches_expectation);
  CHECK(p3.report.verdict == Verdict::ClassicalConvergent);
  CHECK(p3.z == doctest::Approx(4.0));
  CHECK(p3.limit_numerator == doctest::Approx(1.0));
  CHECK(p3.limit_numerator > 0.25);
  CHECK(p3.trace.size() == 100001u);
  CHECK(p3.last_numerator == doctest::Approx(1.0).epsilon(1e-4));

  const auto p5 = ramanujan_experiment<double>(5, 100000);
  CHECK(p5.matches_expectation);
  CHECK(p5.report.verdict == Verdict::ClassicalConvergent);

  const auto p4 = ramanujan_experiment<R>(4, 20000);
  CHECK(p4.matches_expectation);
  CHECK(p4.report.verdict == Verdict::Oscillatory);

  CHECK_THROWS_AS(ramanujan_experiment<double>(1, 1000), std::domain_error);
  CHECK_THROWS_AS(ramanujan_experiment<double>(2, 1000), std::domain_error);
}
