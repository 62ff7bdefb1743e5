#include "ergopt/validation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergopt/convexity.hpp"
#include "ergopt/criteria.hpp"
#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"

namespace ergopt {
namespace {

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); r_.worst_slack = kNone; }

  void next_case() { ++r_.cases; }

  // Records allowed - observed; a negative slack is a violation.
  void expect(double slack, const std::string& what) {
    r_.worst_slack = std::min(r_.worst_slack, slack);
    if (!(slack >= 0.0)) {
      if (r_.violations == 0) r_.first_violation = fmt::format("{} (slack {:.3e})", what, slack);
      ++r_.violations;
    }
  }

  PropertyResult done() {
    if (r_.worst_slack == kNone) r_.worst_slack = 0.0;
    return r_;
  }

 private:
  static constexpr double kNone = std::numeric_limits<double>::infinity();
  PropertyResult r_;
};

double tol_for(double a, double b = 0.0) { return 1e-9 * (1.0 + std::abs(a) + std::abs(b)); }

GridFunction pointwise_max(const GridFunction& f, const GridFunction& g) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(f.at(i), g.at(i));
  return GridFunction(std::move(v));
}

GridFunction affine(const GridFunction& f, double a, double b) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f.at(i) + b;
  return GridFunction(std::move(v));
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.at(i) + g.at(i);
  return GridFunction(std::move(v));
}

}  // namespace

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

FunctionSpec random_spec(std::mt19937_64& rng) {
  const int terms = 1 + static_cast<int>(rng() % 3);
  std::vector<FunctionSpec> parts;
  for (int t = 0; t < terms; ++t) {
    const int k = 1 + static_cast<int>(rng() % 4);
    parts.push_back(scale(uniform(rng, -1.5, 1.5), translate(uniform(rng, 0.0, 1.0), cosine(k))));
  }
  if (rng() % 4 == 0)
    parts.push_back(scale(uniform(rng, -4.0, 4.0), translate(uniform(rng, 0.0, 1.0), neg_square_extremal())));
  return parts.size() == 1 ? parts.front() : sum(std::move(parts));
}

FunctionSpec random_class_B(std::mt19937_64& rng) {
  for (;;) {
    const double a = uniform(rng, 0.25, 4.0);
    const double a3 = uniform(rng, -0.01, 0.03);
    const double a5 = uniform(rng, -0.004, 0.004);
    auto f = scale(a, sum({cosine(1), scale(a3, cosine(3)), scale(a5, cosine(5))}));
    if (check_class_B(f, 1024).pass) return f;
  }
}

PropertyResult check_gamma_cone(const ValidationOptions& opt) {
  Tally t("gamma_cone_laws");
  std::mt19937_64 rng(opt.seed ^ 0x1);
  constexpr std::size_t n = 256;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    t.next_case();
    const auto fs = random_spec(rng);
    const auto gs = random_spec(rng);
    const double a = uniform(rng, 0.0, 3.0);
    const double b = uniform(rng, -2.0, 2.0);
    const auto f = sample(fs, n);
    const auto g = sample(gs, n);
    const auto fg = add(f, g);
    const auto mx = pointwise_max(f, g);
    const auto af = affine(f, a, b);

    // xi_point on the symbolic specs at a random x and delta.
    const double x = uniform(rng, 0.0, 1.0);
    const double delta = uniform(rng, 1e-3, 0.5);
    const double pf = xi_point(fs, x, delta), pg = xi_point(gs, x, delta);
    t.expect(pf + pg + tol_for(pf, pg) - xi_point(sum({fs, gs}), x, delta), "xi_point subadditive");
    const double pa = xi_point(sum({scale(a, fs), constant(b)}), x, delta);
    t.expect(tol_for(pa) - std::abs(pa - a * pf), "xi_point homogeneous");

    // Grid versions: node x, node-aligned delta, so every sup is exact.
    const std::size_t k = 1 + rng() % (n / 2);
    const double dk = static_cast<double>(k) / n;
    const std::size_t i = rng() % n;
    const double xi_x = static_cast<double>(i) / n;
    const double gf = xi_point(f, xi_x, dk), gg = xi_point(g, xi_x, dk);
    t.expect(std::max(gf, gg) + tol_for(gf, gg) - xi_point(mx, xi_x, dk), "xi_point max law");

    const double sf = xi_star(f, dk, n).value, sg = xi_star(g, dk, n).value;
    t.expect(sf + sg + tol_for(sf, sg) - xi_star(fg, dk, n).value, "xi_star subadditive");
    t.expect(std::max(sf, sg) + tol_for(sf, sg) - xi_star(mx, dk, n).value, "xi_star max law");
    const double sa = xi_star(af, dk, n).value;
    t.expect(tol_for(sa) - std::abs(sa - a * sf), "xi_star homogeneous");

    const double ef = eta(f, {EtaMode::finite_difference}).eta;
    const double eg = eta(g, {EtaMode::finite_difference}).eta;
    const double tol_e = 1e-9 * (1.0 + ef + eg) * n * n;
    t.expect(ef + eg + tol_e - eta(fg, {EtaMode::finite_difference}).eta, "eta subadditive");
    t.expect(std::max(ef, eg) + tol_e - eta(mx, {EtaMode::finite_difference}).eta, "eta max law");
    const double ea = eta(af, {EtaMode::finite_difference}).eta;
    t.expect(tol_e - std::abs(ea - a * ef), "eta homogeneous");
  }
  return t.done();
}

PropertyResult check_transfer_laws(const ValidationOptions& opt) {
  Tally t("max_transfer_monotone_and_shift");
  std::mt19937_64 rng(opt.seed ^ 0x2);
  constexpr std::size_t n = 384;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    t.next_case();
    const int d = c % 2 == 0 ? 2 : 3;
    const auto f = sample(random_spec(rng), n);
    std::vector<double> bump(n);
    for (double& v : bump) v = uniform(rng, 0.0, 0.5);
    const auto h = add(f, GridFunction(bump));
    const double shift = uniform(rng, -3.0, 3.0);
    const auto mf = max_transfer(f, d);
    const auto mh = max_transfer(h, d);
    const auto ms = max_transfer(affine(f, 1.0, shift), d);
    double mono = std::numeric_limits<double>::infinity(), dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mono = std::min(mono, mh.at(i) - mf.at(i));
      dev = std::max(dev, std::abs(ms.at(i) - mf.at(i) - shift));
    }
    t.expect(mono + 1e-12, fmt::format("monotonicity d={}", d));
    t.expect(1e-12 * (1.0 + std::abs(shift)) * 4.0 - dev, fmt::format("constant shift d={}", d));
  }
  return t.done();
}

PropertyResult check_transfer_defect(const ValidationOptions& opt) {
  Tally t("max_transfer_defect_contraction");
  std::mt19937_64 rng(opt.seed ^ 0x3);
  constexpr std::size_t n = 384;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    t.next_case();
    const auto f = random_spec(rng);
    for (int d : {2, 3}) {
      const auto mf = max_transfer(f, n, d);
      for (double delta : {0.125, 0.0625}) {
        const double lhs = xi_star(mf, delta, n).value;
        // Every preimage of a node lies on the d N grid.
        const double rhs = xi_star(f, delta / d, static_cast<std::size_t>(d) * n).value;
        t.expect(rhs + tol_for(rhs) - lhs, fmt::format("d={} delta={}", d, delta));
      }
    }
  }
  return t.done();
}

PropertyResult check_derivative_bound(const ValidationOptions& opt) {
  Tally t("derivative_drop_bound");
  std::mt19937_64 rng(opt.seed ^ 0x4);
  constexpr std::size_t n = 512;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    t.next_case();
    const auto f = random_spec(rng);
    const auto fp = f.derivative();
    const auto er = eta_second_derivative(f, 2048);
    for (double delta : {0.25, 0.5}) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        worst = std::min(worst, (er.eta + er.error_bound) * delta - (fp.eval(x) - fp.eval(x + delta)));
      }
      t.expect(worst + tol_for(er.eta), fmt::format("delta={}", delta));
    }
  }
  return t.done();
}

PropertyResult check_sturmian_orbits(const ValidationOptions&) {
  Tally t("sturmian_orbits_q_le_50");
  for (auto [p, q] : reduced_fractions(50)) {
    t.next_case();
    const auto mu = sturmian_measure(p, q);
    const auto den = mu.denominator;
    const auto last = mu.numerators.back();
    const auto closed = q == 1 ? last : (last << 1) % den;
    t.expect(closed == mu.numerators.front() ? 0.0 : -1.0, fmt::format("{}/{} closure", p, q));
    auto sorted = mu.numerators;
    std::sort(sorted.begin(), sorted.end());
    const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    t.expect(distinct ? 0.0 : -1.0, fmt::format("{}/{} exact period", p, q));
    t.expect(0.5 - mu.span, fmt::format("{}/{} semicircle", p, q));
    // Rotation number: the word has exactly p ones.
    const auto ones = std::count(mu.word.begin(), mu.word.end(), '1');
    t.expect(ones == p ? 0.0 : -1.0, fmt::format("{}/{} word weight", p, q));
  }
  return t.done();
}

PropertyResult check_bousch_inequality(const ValidationOptions& opt) {
  Tally t("bousch_reduction_inequality");
  constexpr std::size_t n = 4096;
  const auto f = cosine(1);
  SolverOptions so;
  so.tol = default_tolerance(f, n);
  const auto sol = solve_calibrated(f, n, so);
  std::mt19937_64 rng(opt.seed ^ 0x5);
  const double tol = 10.0 * (f.lipschitz_bound() + sol.g.lipschitz()) / static_cast<double>(n);
  for (std::size_t c = 0; c < opt.cases; ++c) {
    t.next_case();
    const std::size_t i = rng() % n;
    const double x = static_cast<double>(i) / n;
    const double lhs = -2.0 * (sol.g.at(static_cast<std::ptrdiff_t>(i)) - sol.g.at(static_cast<std::ptrdiff_t>(i + n / 2)));
    for (int k : {2, 3}) {
      const auto b = bousch_lower_bound(f, sol.g, x, k);
      t.expect(b.bound + tol - lhs, fmt::format("x={} n={}", x, k));
    }
  }
  return t.done();
}

PropertyResult check_periodicity(const ValidationOptions& opt) {
  Tally t("periodicity_and_refinement");
  std::mt19937_64 rng(opt.seed ^ 0x6);
  for (std::size_t c = 0; c < opt.cases; ++c) {
    t.next_case();
    const auto f = random_spec(rng);
    const double x = static_cast<double>(rng() % (1u << 20)) * 0x1.0p-20;
    t.expect(f.eval(x) == f.eval(x + 1.0) ? 0.0 : -std::abs(f.eval(x) - f.eval(x + 1.0)), "spec periodic");
    const auto g = sample(f, 128);
    const auto g2 = sample(f, 256);
    double dev = 0.0;
    for (std::size_t i = 0; i < 128; ++i) dev = std::max(dev, std::abs(g2.at(2 * i) - g.at(i)));
    t.expect(-dev, "refinement keeps old nodes");
    t.expect(1e-12 - std::abs(g.eval(x) - g.eval(x + 1.0)), "grid periodic");
  }
  return t.done();
}

std::vector<PropertyResult> run_property_suites(const ValidationOptions& opt) {
  return {check_gamma_cone(opt),       check_transfer_laws(opt),   check_transfer_defect(opt),
          check_derivative_bound(opt), check_sturmian_orbits(opt), check_bousch_inequality(opt),
          check_periodicity(opt)};
}

}  // namespace ergopt
