// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ergopt/convexity.hpp"
#include "ergopt/criteria.hpp"
#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"
#include "ergopt/torus_fn.hpp"
#include "ergopt/validation.hpp"

using namespace ergopt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

const double kEta = 4 * kPi * kPi;

FunctionSpec blend() { return sum({scale(0.998, cosine(1)), scale(0.002, cosine(3))}); }

Outcome eta_of_cosine() {
  const double sd = eta(cosine(1), {EtaMode::second_derivative, 4096, 1}).eta;
  const double fd = eta(cosine(1), {EtaMode::finite_difference, 4096, 1}).eta;
  const bool ok = std::abs(sd - kEta) <= 1e-9 && std::abs(fd - kEta) <= 0.01 * kEta;
  return {ok, fmt::format("second-derivative {:.12f}, finite-difference {:.6f}, 4pi^2 {:.12f}", sd,
                          fd, kEta)};
}

Outcome solve_cosine() {
  SolverOptions o;
  o.tol = default_tolerance(cosine(1), 4096);
  const auto s = solve_calibrated(cosine(1), 4096, o);
  const bool ok = s.converged && std::abs(s.beta - 1.0) <= 1e-6 && s.residual < 2e-6;
  return {ok, fmt::format("converged {}, beta {:.12f}, residual {:.3e}, {} iterations", s.converged,
                          s.beta, s.residual, s.iterations)};
}

Outcome transfer_inequalities() {
  std::mt19937_64 rng(20240611);
  const std::vector<std::pair<std::string, FunctionSpec>> specs = {
      {"cos", cosine(1)}, {"extremal", neg_square_extremal()}, {"random class B", random_class_B(rng)}};
  bool ok = true;
  double worst_eta = 1e300, worst_xi = 1e300, worst_raw = 1e300;
  for (const auto& [name, f] : specs) {
    const double eta_f = eta(f).eta;
    for (int d : {2, 3}) {
      const std::size_t n = d == 2 ? 4096 : 3072;
      SolverOptions o;
      o.d = d;
      o.tol = default_tolerance(f, n);
      const auto s = solve_calibrated(f, n, o);
      if (!s.converged) {
        ok = false;
        continue;
      }
      EtaOptions eo;
      eo.mode = EtaMode::finite_difference;
      eo.min_delta_steps = 8;
      const double eta_g = eta(s.g, eo).eta;
      const double eta_slack = eta_f / (d * d - 1) + 0.02 * eta_f - eta_g;
      worst_eta = std::min(worst_eta, eta_slack / eta_f);
      ok = ok && eta_slack >= 0.0;

      // xi*_delta(g) <= xi*_{delta/d}(f) + xi*_{delta/d}(g), with the
      // repository tolerance 10 (Lip f + Lip g) / N.
      const double tol = 10.0 * (f.lipschitz_bound() + s.g.lipschitz()) / static_cast<double>(n);
      for (double delta : {0.125, 0.25, 0.5}) {
        const auto lhs = xi_star(s.g, delta, n);
        const auto rf = xi_star(f, delta / d, n);
        const auto rg = xi_star(s.g, delta / d, n);
        const double slack = rf.value + rf.error_bound + rg.value - lhs.value + tol;
        worst_xi = std::min(worst_xi, slack);
        worst_raw = std::min(worst_raw, slack - tol - rf.error_bound);
        ok = ok && slack >= 0.0;
      }
    }
  }
  return {ok, fmt::format("worst eta slack {:.4f} eta(f), worst xi slack {:.3e} ({:.3e} before tolerance)",
                          worst_eta, worst_xi, worst_raw)};
}

Outcome bousch_scan() {
  ScanSettings s;
  const auto rows = scan_translates(cosine(1), 64, s);
  std::size_t pass = 0;
  double worst_beta = 0.0;
  for (const auto& r : rows) {
    pass += r.certificate_pass();
    worst_beta = std::max(worst_beta, std::abs(r.beta - r.sturmian_value));
  }
  const auto& r0 = rows[0];
  const auto& r32 = rows[32];
  const bool ends = r0.omega == 0.0 && r0.rotation_p == 0 && r0.rotation_q == 1 &&
                    std::abs(r0.beta - 1.0) < 1e-6 && r32.omega == 0.5 && r32.rotation_p == 1 &&
                    r32.rotation_q == 2 && std::abs(r32.beta - 0.5) < 1e-6;
  const bool ok = rows.size() == 64 && pass == 64 && worst_beta < 1e-4 && ends;
  return {ok, fmt::format("{}/{} certificates pass, max |beta - sturmian| {:.2e}, endpoints {}", pass,
                          rows.size(), worst_beta, ends ? "ok" : "wrong")};
}

Outcome kappa_gate() {
  const auto c = check_kappa(cosine(1));
  const auto e = check_kappa(neg_square_extremal());
  const double mc = c.margins.back().slack, me = e.margins.back().slack;
  const bool ok = c.pass && e.pass && mc > 5e-4 && mc < 6e-4 &&
                  std::abs(me - (1.0 / 32 - kKappa)) < 1e-9 && kKappa > 0.02480 && kKappa < 0.02481;
  return {ok, fmt::format("kappa {:.10f}, cos margin {:.6e}, extremal margin {:.6e}", kKappa, mc, me)};
}

Outcome cosine_like_scans() {
  const std::vector<std::pair<std::string, FunctionSpec>> specs = {
      {"cos", cosine(1)}, {"extremal", neg_square_extremal()}, {"blend", blend()}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, f] : specs) {
    const bool kappa = check_kappa(f).pass;
    std::size_t pass = 0;
    const auto rows = scan_translates(f, 16, {});
    for (const auto& r : rows) pass += r.certificate_pass();
    ok = ok && kappa && pass == rows.size();
    detail += fmt::format("{}{} kappa {} {}/{}", detail.empty() ? "" : "; ", name,
                          kappa ? "pass" : "fail", pass, rows.size());
  }
  return {ok, detail};
}

Outcome search_c_half_square() {
  const auto w = search_c(close_profile({0.0}, {{0, 0, 0.5}}, 0.25), 10000);
  bool ok = w.c && *w.c > 0.0 && *w.c < 0.25;
  double worst = 1e300;
  for (const auto& m : w.report.margins) worst = std::min(worst, m.slack);
  ok = ok && worst > 1e-4;
  return {ok, fmt::format("c {:.6f}, min(H1, H2) margin {:.6e}", w.c.value_or(-1.0), worst)};
}

Outcome property_suites() {
  ValidationOptions o;
  o.cases = 200;
  bool ok = true;
  std::size_t cases = 0, violations = 0, suites = 0;
  for (const auto& r : run_property_suites(o)) {
    ok = ok && r.ok() && r.cases >= 200;
    cases += r.cases;
    violations += r.violations;
    ++suites;
  }
  return {ok, fmt::format("{} suites, {} cases, {} violations", suites, cases, violations)};
}

Outcome uniqueness() {
  std::mt19937_64 rng(314159);
  bool ok = true;
  double worst = 0.0;
  std::size_t certified = 0;
  const std::vector<FunctionSpec> specs = {cosine(1), translate(0.3, cosine(1)),
                                           translate(0.55, cosine(1)), neg_square_extremal(),
                                           translate(0.7, blend())};
  for (const auto& f : specs) {
    const std::size_t n = 4096;
    SolverOptions o;
    o.tol = default_tolerance(f, n);
    const auto a = solve_calibrated(f, n, o);
    const auto cert = sturmian_certificate(
        compute_R(f, a.g), default_epsilon_R(f.lipschitz_bound(), a.g.lipschitz(), n),
        default_w_max(n));
    if (!a.converged || !cert.pass) continue;
    ++certified;
    // Random Lipschitz start: a few random trigonometric terms.
    std::vector<FunctionSpec> terms;
    for (int k = 1; k <= 4; ++k)
      terms.push_back(scale(uniform(rng, -1.0, 1.0), cosine(k, uniform(rng, 0.0, 1.0))));
    o.initial = sample(sum(terms), n);
    const auto b = solve_calibrated(f, n, o);
    const double spread = constant_offset_spread(a.g, b.g);
    worst = std::max(worst, spread / o.tol);
    ok = ok && b.converged && spread < 10 * o.tol;
  }
  ok = ok && certified == specs.size();
  return {ok, fmt::format("{} certified runs, worst spread {:.2f} tol", certified, worst)};
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {"A1", "eta of cosine", 1, eta_of_cosine},
      {"A2", "sub-action solve for cosine", 10, solve_cosine},
      {"A3", "transfer inequalities for eta and xi*", 60, transfer_inequalities},
      {"A4", "64 cosine translates are Sturmian", 300, bousch_scan},
      {"A5", "kappa gate", 1, kappa_gate},
      {"A6", "cosine-like scans", 300, cosine_like_scans},
      {"A7", "search_c on x^2/2", 1, search_c_half_square},
      {"A8", "property suites", 120, property_suites},
      {"A9", "uniqueness up to a constant", 30, uniqueness},
  };
  int failed = 0;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = out.pass && secs < c.budget_seconds;
    failed += !ok;
    fmt::print("{} {} {}: {} ({:.2f} s of {:.0f} s)\n", c.id, ok ? "PASS" : "FAIL", c.title,
               out.detail, secs, c.budget_seconds);
  }
  return failed == 0 ? 0 : 1;
}
