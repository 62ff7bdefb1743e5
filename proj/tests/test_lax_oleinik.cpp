#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ergopt/convexity.hpp"
#include "ergopt/lax_oleinik.hpp"

using namespace ergopt;
using doctest::Approx;

namespace {

// Brute-force periodic orbit search with plain doubles, independent of the
// library's enumeration.
double brute_best_orbit(const FunctionSpec& f, int max_period) {
  double best = -1e300;
  for (int p = 1; p <= max_period; ++p) {
    const long den = (1L << p) - 1;
    for (long k = 0; k < den; ++k) {
      double acc = 0.0;
      long x = k;
      for (int j = 0; j < p; ++j) {
        acc += f(static_cast<double>(x) / den);
        x = (2 * x) % den;
      }
      best = std::max(best, acc / p);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("max transfer of cosine is |cos pi x|") {
  const auto m = max_transfer(cosine(1), 1024, 2);
  for (std::ptrdiff_t i = 0; i < 1024; ++i)
    CHECK(m.at(i) == Approx(std::abs(std::cos(kPi * m.node(i)))).epsilon(1e-14));

  // From grid data the odd preimages are interpolated: error <= h^2 f''/8.
  const auto g = max_transfer(sample(cosine(1), 1024), 2);
  const double bound = 4 * kPi * kPi / (8.0 * 1024 * 1024);
  for (std::ptrdiff_t i = 0; i < 1024; ++i) {
    CHECK(std::abs(g.at(i) - m.at(i)) <= bound);
    if (i % 2 == 0) CHECK(g.at(i) == Approx(m.at(i)).epsilon(1e-14));
  }
}

TEST_CASE("max transfer of a constant") {
  for (int d : {2, 3, 5}) {
    const auto m = max_transfer(sample(constant(1.5), 30 * 4), d);
    for (double v : m.values()) CHECK(v == 1.5);
  }
}

TEST_CASE("max transfer rejects d not dividing N") {
  CHECK_THROWS_AS(max_transfer(sample(cosine(1), 100), 3), std::invalid_argument);
  CHECK_THROWS_AS(max_transfer(sample(cosine(1), 100), 1), std::invalid_argument);
}

TEST_CASE("max transfer contracts eta by d^2") {
  const auto m = max_transfer(cosine(1), 4096, 2);
  CHECK(eta(m, {EtaMode::finite_difference, 4096, 1}).eta <= 4 * kPi * kPi / 4 + 1e-6);
  // From grid data the interpolated preimages add a grid-scale sawtooth;
  // with the wider delta floor what is left stays within 2% of eta(f).
  const auto g = max_transfer(sample(cosine(1), 4096), 2);
  CHECK(eta(g, {EtaMode::finite_difference, 4096, 8}).eta <= 4 * kPi * kPi * (0.25 + 0.02));
}

TEST_CASE("periodic orbit table") {
  SUBCASE("cosine: the fixed point") {
    const auto t = beta_lower_bound(cosine(1), 2, 12);
    CHECK(t.best_orbit().period == 1);
    CHECK(t.best_orbit().numerator == 0);
    CHECK(t.best_average() == 1.0);
  }
  SUBCASE("shifted cosine: {1/3, 2/3}") {
    const auto f = translate(0.5, cosine(1));
    const auto t = beta_lower_bound(f, 2, 12);
    CHECK(t.best_orbit().period == 2);
    CHECK(t.best_orbit().numerator == 1);
    CHECK(t.best_orbit().denominator == 3);
    CHECK(t.best_average() == Approx(0.5));
    CHECK(t.best_average() == Approx(brute_best_orbit(f, 12)).epsilon(1e-14));
  }
  SUBCASE("constant: every orbit averages c") {
    const auto t = beta_lower_bound(constant(0.7), 2, 8);
    for (const auto& o : t.orbits) CHECK(o.average == Approx(0.7));
  }
  SUBCASE("orbits are invariant and averages match") {
    const auto f = sum({cosine(1), scale(0.4, cosine(3, 0.2))});
    for (int d : {2, 3}) {
      const auto t = beta_lower_bound(f, d, d == 2 ? 10 : 6);
      std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
      for (const auto& o : t.orbits) {
        CHECK(seen.insert({o.numerator, o.denominator}).second);
        const auto pts = o.points(d);
        REQUIRE(pts.size() == static_cast<std::size_t>(o.period));
        std::set<double> s(pts.begin(), pts.end());
        for (double x : pts) {
          const double y = std::fmod(d * x, 1.0);
          CHECK(std::any_of(s.begin(), s.end(), [&](double z) { return std::abs(z - y) < 1e-12; }));
        }
        double acc = 0.0;
        for (double x : pts) acc += f(x);
        CHECK(o.average == Approx(acc / o.period).epsilon(1e-12));
      }
    }
  }
  SUBCASE("budget") {
    CHECK_THROWS_AS(beta_lower_bound(cosine(1), 2, 40), std::invalid_argument);
  }
}

TEST_CASE("solve a constant") {
  const auto s = solve_calibrated(constant(2.0), 64, {});
  CHECK(s.converged);
  CHECK(s.beta == 2.0);
  CHECK(s.residual == 0.0);
  CHECK(s.iterations == 1);
  for (double v : s.g.values()) CHECK(v == 0.0);
}

TEST_CASE("solve cosine at d = 2") {
  SolverOptions o;
  o.tol = 1e-9 * 2.0;
  const auto s = solve_calibrated(cosine(1), 4096, o);
  REQUIRE(s.converged);
  CHECK(std::abs(s.beta - 1.0) < 1e-6);
  CHECK(s.residual < 1e-6);
  CHECK(s.g.max() == 0.0);
  CHECK(std::abs(s.beta - beta_lower_bound(cosine(1), 2, 16).best_average()) < 1e-4);

  const TransferObservable f(cosine(1), 4096, 2);
  CHECK(calibration_residual(f, s.g, s.beta) == Approx(s.residual));
  CHECK(subaction_defect(f, s.g, s.beta) <= s.residual + 1e-15);

  EtaOptions eo;
  eo.mode = EtaMode::finite_difference;
  eo.min_delta_steps = 8;
  // Same allowance as the acceptance run: 2% of eta(f).
  CHECK(eta(s.g, eo).eta <= 4 * kPi * kPi / 3 + 0.02 * 4 * kPi * kPi);

  const auto jumps = one_sided_derivative_report(s.g);
  for (const auto& j : jumps.jumps) CHECK(j.magnitude > 0.0);
}

TEST_CASE("beta consistency across observables") {
  const std::vector<FunctionSpec> specs = {translate(0.5, cosine(1)), translate(0.3, cosine(1)),
                                           neg_square_extremal(),
                                           sum({cosine(1), scale(0.3, cosine(2, 0.1))})};
  for (const auto& f : specs) {
    SolverOptions o;
    o.tol = 1e-10;
    const auto s = solve_calibrated(f, 4096, o);
    REQUIRE(s.converged);
    CHECK(std::abs(s.beta - beta_lower_bound(f, 2, 16).best_average()) < 1e-4);
    CHECK(s.beta >= beta_lower_bound(f, 2, 16).best_average() - 1e-4);
  }
}

TEST_CASE("non-convergence is reported") {
  SolverOptions o;
  o.max_iter = 3;
  o.tol = 1e-14;
  const auto s = solve_calibrated(cosine(1), 4096, o);
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 3);
  CHECK(s.residual > 0.0);
}

TEST_CASE("calibration residual of a perturbed solution") {
  // 8-node grid, d = 2, f = cos: the exact pair is recomputed by hand.
  const auto f = sample(cosine(1), 8);
  const auto s = solve_calibrated(f, {});
  REQUIRE(s.converged);
  const double base = calibration_residual(f, s.g, s.beta, 2);
  CHECK(base < 1e-9);
  const double eps = 0.01;
  std::vector<double> v(s.g.values().begin(), s.g.values().end());
  v[3] += eps;
  CHECK(calibration_residual(f, GridFunction(v), s.beta, 2) >= eps / 2);
}

TEST_CASE("solve at d = 3") {
  SolverOptions o;
  o.d = 3;
  o.tol = 2e-9;
  const auto s = solve_calibrated(cosine(1), 3072, o);
  REQUIRE(s.converged);
  CHECK(std::abs(s.beta - 1.0) < 1e-6);
  CHECK_THROWS_AS(solve_calibrated(cosine(1), 4096, o), std::invalid_argument);
}

TEST_CASE("constant offset spread") {
  const auto g = sample(cosine(1), 64);
  const auto h = sample(sum({cosine(1), constant(3.0)}), 64);
  CHECK(constant_offset_spread(g, h) < 1e-14);
  CHECK(constant_offset_spread(g, sample(cosine(2), 64)) > 1.0);
}
