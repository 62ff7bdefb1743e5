#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"

using namespace ergopt;
using doctest::Approx;

namespace {

// Orbit from the Sturmian word formula directly: the j-th point is the
// binary expansion of the word rotated by j.
std::vector<double> word_orbit(int p, int q) {
  std::vector<int> s(q);
  for (int n = 0; n < q; ++n) s[n] = ((n + 1) * p) / q - (n * p) / q;
  std::vector<double> out;
  for (int j = 0; j < q; ++j) {
    double x = 0.0;
    for (int n = 0; n < q; ++n) x += s[(n + j) % q] * std::ldexp(1.0, q - 1 - n);
    out.push_back(x / (std::ldexp(1.0, q) - 1.0));
  }
  return out;
}

double brute_best(const FunctionSpec& f, int max_q) {
  double best = -1e300;
  for (int q = 1; q <= max_q; ++q)
    for (int p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      double acc = 0.0;
      for (double x : word_orbit(p, q)) acc += f(x);
      best = std::max(best, acc / q);
    }
  return best;
}

}  // namespace

TEST_CASE("small Sturmian measures") {
  const auto m0 = sturmian_measure(0, 1);
  CHECK(m0.orbit == std::vector<double>{0.0});
  CHECK(m0.word == "0");

  const auto m2 = sturmian_measure(1, 2);
  CHECK(m2.word == "01");
  CHECK(m2.numerators == std::vector<std::uint64_t>{1, 2});
  CHECK(m2.denominator == 3);

  const auto m3 = sturmian_measure(1, 3);
  CHECK(m3.word == "001");
  CHECK(m3.numerators == std::vector<std::uint64_t>{1, 2, 4});
  CHECK(m3.denominator == 7);
  CHECK(m3.weight() == Approx(1.0 / 3));
}

TEST_CASE("invalid rotation numbers") {
  CHECK_THROWS_AS(sturmian_measure(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(sturmian_measure(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(sturmian_measure(-1, 2), std::invalid_argument);
  CHECK_THROWS_AS(sturmian_measure(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(sturmian_measure(1, kMaxSturmianDenominator + 1), std::invalid_argument);
}

TEST_CASE("orbit matches the word formula and fits a semicircle") {
  for (auto [p, q] : reduced_fractions(30)) {
    const auto mu = sturmian_measure(p, q);
    const auto want = word_orbit(p, q);
    REQUIRE(mu.orbit.size() == want.size());
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(mu.orbit[j] == Approx(want[j]).epsilon(1e-12));
    CHECK(mu.span <= 0.5 + 1e-15);
    for (double x : mu.orbit) {
      const double off = std::fmod(x - mu.semicircle_start + 2.0, 1.0);
      CHECK(off <= 0.5 + 1e-12);
    }
  }
}

TEST_CASE("integrals") {
  CHECK(integrate(sturmian_measure(0, 1), cosine(1)) == 1.0);
  CHECK(integrate(sturmian_measure(1, 2), translate(0.5, cosine(1))) == Approx(0.5));
  CHECK(integrate(sturmian_measure(1, 2), constant(0.3)) == Approx(0.3));
}

TEST_CASE("best Sturmian") {
  const auto b = best_sturmian(cosine(1), 10);
  CHECK(b.measure.p == 0);
  CHECK(b.measure.q == 1);
  CHECK(b.value == 1.0);

  const auto f = translate(0.5, cosine(1));
  const auto h = best_sturmian(f, 10);
  CHECK(h.measure.p == 1);
  CHECK(h.measure.q == 2);
  CHECK(h.value == Approx(0.5));
  CHECK(h.value == Approx(brute_best(f, 10)).epsilon(1e-14));

  CHECK(best_sturmian(constant(0.25), 3).value == Approx(0.25));
  CHECK_THROWS_AS(best_sturmian(cosine(1), 0), std::invalid_argument);
}

TEST_CASE("minimizing and maximizing duality for antisymmetric specs") {
  // f(x + 1/2) = 2v - f(x): best Sturmian for -f is minus the minimum over
  // the family.
  const auto f = translate(0.13, antisymmetric_extension(piecewise_poly({0.0}, {{0.1, 1.0, -2.0}}), 0.05));
  double min_int = 1e300;
  for (auto [p, q] : reduced_fractions(20)) min_int = std::min(min_int, integrate(sturmian_measure(p, q), f));
  CHECK(best_sturmian(negate(f), 20).value == Approx(-min_int).epsilon(1e-14));
}

TEST_CASE("compute_R") {
  const auto z = compute_R(constant(1.0), sample(constant(2.0), 64));
  for (double v : z.values()) CHECK(v == 0.0);

  const auto r = compute_R(cosine(1), sample(constant(0.0), 256));
  for (std::ptrdiff_t i = 0; i < 256; ++i) {
    CHECK(r.at(i) == Approx(2 * std::cos(kTwoPi * r.node(i))).epsilon(1e-13));
    CHECK(r.at(i) + r.at(i + 128) == 0.0);
  }
  CHECK_THROWS_AS(compute_R(cosine(1), sample(cosine(1), 101)), std::invalid_argument);
}

TEST_CASE("certificate examples") {
  const std::size_t n = 1024;
  SUBCASE("2 cos 2pi x passes at (1/4, 3/4)") {
    const auto c = sturmian_certificate(sample(scale(2, cosine(1)), n), 1e-3, default_w_max(n));
    CHECK(c.status == CertificateStatus::pass);
    CHECK(c.pass);
    REQUIRE(c.antipodal_pair);
    CHECK(c.antipodal_pair->first == Approx(0.25).epsilon(1.0 / n));
    CHECK(c.antipodal_pair->second == Approx(0.75).epsilon(1.0 / n));
    CHECK(c.margin > 0.0);
  }
  SUBCASE("R = 0 fails") {
    const auto c = sturmian_certificate(sample(constant(0.0), n), 1e-3, default_w_max(n));
    CHECK(c.status == CertificateStatus::fail);
    CHECK_FALSE(c.pass);
  }
  SUBCASE("sin 4 pi x fails with four zeros") {
    const auto c = sturmian_certificate(sample(cosine(2, -0.25), n), 1e-3, default_w_max(n));
    CHECK(c.status == CertificateStatus::fail);
    CHECK(c.zero_set_arcs.size() == 4);
  }
  SUBCASE("sin 6 pi x fails with three antipodal pairs") {
    const auto c = sturmian_certificate(sample(cosine(3, -0.25), n), 1e-3, default_w_max(n));
    CHECK(c.status == CertificateStatus::fail);
    CHECK(c.zero_set_arcs.size() == 6);
  }
  SUBCASE("two zeros that are not antipodal") {
    const auto r = sample_fn([](double x) { return std::cos(kTwoPi * x) + 0.5; }, n);
    const auto c = sturmian_certificate(r, 1e-3, default_w_max(n));
    CHECK(c.status == CertificateStatus::fail);
    CHECK(c.zero_set_arcs.size() == 2);
  }
  SUBCASE("a wide band is inconclusive") {
    const auto c = sturmian_certificate(sample(scale(1e-3, cosine(1)), n), 3e-4, default_w_max(n));
    CHECK(c.status == CertificateStatus::inconclusive);
  }
  SUBCASE("zero arc through x = 0") {
    const auto c = sturmian_certificate(sample(scale(2, cosine(1, 0.25)), n), 1e-3, default_w_max(n));
    CHECK(c.status == CertificateStatus::pass);
    CHECK(c.zero_set_arcs.size() == 2);
  }
}

TEST_CASE("certificate for the solved cosine pair") {
  SolverOptions o;
  o.tol = 2e-9;
  const auto s = solve_calibrated(cosine(1), 4096, o);
  const auto c = sturmian_certificate(compute_R(cosine(1), s.g),
                                      default_epsilon_R(2 * kPi, s.g.lipschitz(), 4096),
                                      default_w_max(4096));
  CHECK(c.status == CertificateStatus::pass);
  CHECK(c.zero_set_arcs.size() == 2);
  CHECK(std::abs(s.beta - best_sturmian(cosine(1), 32).value) < 1e-4);
}

TEST_CASE("Bousch bound") {
  SolverOptions o;
  o.tol = 2e-9;
  const auto s = solve_calibrated(cosine(1), 4096, o);

  const auto flat = bousch_lower_bound(constant(1.0), s.g, 0.3, 3);
  CHECK(flat.branch_sum == 0.0);
  CHECK(flat.bound == flat.xi_star_g);

  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0;
    const auto b2 = bousch_lower_bound(cosine(1), s.g, x, 2);
    CHECK(b2.bound <= 2.0 + b2.xi_star_g + 1e-12);
    for (int n : {2, 3}) {
      const auto b = bousch_lower_bound(cosine(1), s.g, x, n);
      const double lhs = -2.0 * (s.g(x) - s.g(x + 0.5));
      CHECK(lhs <= b.bound + 10 * 2 * kPi / 4096);
    }
  }
  CHECK_THROWS_AS(bousch_lower_bound(cosine(1), s.g, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(bousch_lower_bound(cosine(1), s.g, 0.0, 21), std::invalid_argument);
}
