#include <doctest.h>

#include <cmath>
#include <random>

#include "ergopt/torus_fn.hpp"

using namespace ergopt;
using doctest::Approx;

TEST_CASE("cosine evaluation and periodicity") {
  const auto f = cosine(1);
  CHECK(f(0.0) == 1.0);
  CHECK(f(1.0) == 1.0);
  CHECK(translate(0.5, f)(0.0) == Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("sample at quarter nodes") {
  auto close = [](const GridFunction& g, std::vector<double> want) {
    REQUIRE(g.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(g.at(i) == Approx(want[i]).epsilon(1e-15));
  };
  close(sample(cosine(1), 4), {1, 0, -1, 0});
  close(sample(scale(2, cosine(1)), 4), {2, 0, -2, 0});
  close(sample(translate(0.25, cosine(1)), 4), {0, 1, 0, -1});
  CHECK_THROWS_AS(sample(cosine(1), 3), std::invalid_argument);
}

TEST_CASE("symbolic and grid derivatives") {
  CHECK(cosine(1).derivative()(0.25) == Approx(-2 * kPi));
  const auto g = sample(cosine(1), 4096);
  for (auto side : {DiffSide::left, DiffSide::right, DiffSide::central})
    CHECK(std::abs(grid_derivative(g, side)(0.25) + 2 * kPi) < 1e-2);

  const auto sq = close_profile({0.0}, {{0, 0, 1}}, 0.25);
  CHECK(sq.derivative()(0.125) == Approx(0.25));
}

TEST_CASE("derivative of a discontinuous piecewise polynomial is rejected") {
  const auto step = piecewise_poly({0.0, 0.5}, {{0.0}, {1.0}});
  CHECK(step.smoothness() == kDiscontinuous);
  CHECK_THROWS_AS(step.derivative(), SpecError);
}

TEST_CASE("declared smoothness is checked against the joins") {
  CHECK_THROWS_AS(piecewise_poly({0.0, 0.5}, {{0.0, 1.0}, {0.5, -1.0}}, 1), SpecError);
  CHECK_NOTHROW(piecewise_poly({0.0, 0.5}, {{0.0, 1.0}, {0.5, -1.0}}, 0));
}

TEST_CASE("translate shifts the argument") {
  const auto f = sum({cosine(1), scale(0.3, cosine(3, 0.1))});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), w = u(rng);
    CHECK(translate(w, f)(x) == Approx(f(x - w)).epsilon(1e-12));
  }
}

TEST_CASE("periodicity of every node kind") {
  const std::vector<FunctionSpec> specs = {
      cosine(2, 0.3),
      piecewise_poly({0.0, 0.5}, {{0.0, 1.0}, {0.5, -1.0}}),
      constant(3.0),
      negate(cosine(1)),
      neg_square_extremal(),
      antisymmetric_extension(piecewise_poly({0.0}, {{0.0, 0.0, 1.0}}), 0.5),
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& f : specs)
    for (int i = 0; i < 100; ++i) {
      const double x = std::ldexp(std::round(std::ldexp(u(rng), 20)), -20);
      CHECK(f(x) == f(x + 1.0));
    }
}

TEST_CASE("antisymmetric extension satisfies f(x) + f(x + 1/2) = 2v") {
  const auto f = antisymmetric_extension(piecewise_poly({0.0}, {{0.2, 1.0, -1.5}}), 0.7);
  for (int i = 0; i < 64; ++i) {
    const double x = i / 64.0 + 0.003;
    CHECK(f(x) + f(x + 0.5) == Approx(1.4).epsilon(1e-13));
  }
}

TEST_CASE("the -x^2 extremal") {
  const auto f = neg_square_extremal();
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.1) == Approx(-0.01));
  CHECK(f(-0.1) == Approx(-0.01));
  CHECK(f(0.25) == Approx(-0.0625));
  CHECK(f.smoothness() >= 1);
  CHECK(f.lipschitz_bound() >= 0.5);
  CHECK(f.lipschitz_bound() < 0.51);
}

TEST_CASE("close_profile is C1 and hits the end conditions") {
  const auto h = close_profile({0.0}, {{0, 0, 0.5}}, 0.25);
  CHECK(h.smoothness() >= 1);
  CHECK(h(0.1) == Approx(0.005));
  CHECK(h(0.25) == Approx(0.03125));
  CHECK(h.derivative()(0.25) == Approx(0.25));
  CHECK(std::abs(h.derivative()(0.999999)) < 1e-5);
}

TEST_CASE("grid evaluation") {
  const auto g = sample(cosine(1), 256);
  for (std::ptrdiff_t i = 0; i < 256; ++i) {
    CHECK(g(g.node(i)) == g.at(i));
    CHECK(g.at(i) == g.at(i + 256));
    CHECK(g.at(i) == g.at(i - 256));
    CHECK(g.at(i) == cosine(1)(i / 256.0));
  }
  CHECK(g(1.0 / 512) == Approx((g.at(0) + g.at(1)) / 2));
  CHECK(std::abs(g(0.3) - g(1.3)) < 1e-12);
}

TEST_CASE("refining the grid keeps old node values") {
  const auto f = sum({cosine(1), scale(0.2, cosine(5, 0.17))});
  const auto coarse = sample(f, 512), fine = sample(f, 1024);
  for (std::ptrdiff_t i = 0; i < 512; ++i) CHECK(fine.at(2 * i) == coarse.at(i));
}

TEST_CASE("grid derivative converges at first order") {
  const auto f = sum({cosine(1), scale(0.3, cosine(2, 0.1))});
  const auto df = f.derivative();
  auto err = [&](std::size_t n) {
    const auto d = grid_derivative(sample(f, n), DiffSide::right);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(d.at(i) - df(d.node(i))));
    return e;
  };
  const double e8 = err(256), e9 = err(512);
  CHECK(e9 < e8);
  CHECK(e8 / e9 == Approx(2.0).epsilon(0.1));
}

TEST_CASE("one-sided derivative report") {
  SUBCASE("smooth function has no jumps") {
    CHECK(one_sided_derivative_report(sample(cosine(1), 4096)).jumps.empty());
  }
  SUBCASE("tent kink") {
    const auto tent = sample_fn([](double x) { return std::abs(x - 0.5); }, 4096);
    const auto rep = one_sided_derivative_report(tent);
    REQUIRE(rep.jumps.size() == 1);
    CHECK(rep.jumps[0].x == 0.5);
    CHECK(rep.jumps[0].magnitude == Approx(2.0));
    CHECK(rep.jumps[0].right == Approx(1.0));
    CHECK(rep.jumps[0].left == Approx(-1.0));
  }
}
