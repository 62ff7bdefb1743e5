#include "ergopt/criteria.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ergopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IntervalGrid {
  std::vector<double> x;
  double h = 0.0;
};

// M + 1 points spanning [a, b], M = ceil(grid_n (b - a)).
IntervalGrid interval_grid(double a, double b, std::size_t grid_n) {
  const double len = b - a;
  const auto m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(len * static_cast<double>(grid_n))));
  IntervalGrid g;
  g.h = len / static_cast<double>(m);
  g.x.reserve(m + 1);
  for (std::size_t j = 0; j <= m; ++j)
    g.x.push_back(a + len * static_cast<double>(j) / static_cast<double>(m));
  return g;
}

// Worst (smallest) value of slack over the points.
template <class F>
Margin worst(const std::string& name, const std::vector<double>& xs, const F& slack,
             double error_bound) {
  Margin m{name, kInf, error_bound, 0.0};
  for (double x : xs) {
    const double s = slack(x);
    if (s < m.slack) {
      m.slack = s;
      m.witness_x = x;
    }
  }
  return m;
}

ConvexityReport finite_eta(const FunctionSpec& f, std::size_t grid_n) {
  EtaOptions opt;
  opt.grid_n = grid_n;
  auto rep = eta(f, opt);
  if (rep.infinite) throw SpecError("criteria: eta(f) is infinite");
  return rep;
}

// Lipschitz bound of f' for error terms of a.e. derivative conditions;
// zero (nodes only) when f' has jumps.
double derivative_lipschitz(const FunctionSpec& fp, std::string& route) {
  const double l = fp.lipschitz_bound();
  if (std::isfinite(l)) {
    route = "symbolic derivative at nodes";
    return l;
  }
  route = "symbolic derivative at nodes (f' has jumps; a.e. check without error bound)";
  return 0.0;
}

double sampled_range(const FunctionSpec& f, std::size_t n) {
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f.eval(static_cast<double>(i) / static_cast<double>(n));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

Margin structural(const std::string& name, bool ok) { return {name, ok ? 1.0 : -1.0, 0.0, 0.0}; }

}  // namespace

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::theorem_sturm: return "theorem-sturm";
    case Criterion::class_A: return "class-A";
    case Criterion::class_B: return "class-B";
    case Criterion::kappa: return "kappa";
    case Criterion::search_c: return "lemma-sturm-search";
  }
  return "theorem-sturm";
}

Criterion parse_criterion(const std::string& s) {
  if (s == "sturm") return Criterion::theorem_sturm;
  if (s == "classA") return Criterion::class_A;
  if (s == "classB") return Criterion::class_B;
  if (s == "kappa") return Criterion::kappa;
  if (s == "search-c") return Criterion::search_c;
  throw std::invalid_argument("unknown criterion '" + s +
                              "' (expected sturm|classA|classB|kappa|search-c)");
}

void ClassAParams::validate() const {
  if (!(b - a > 0.0 && b - a < 0.5))
    throw std::invalid_argument("class-A parameters need a < b < a + 1/2");
}

void settle(CriterionReport& r) {
  bool all_pass = !r.margins.empty();
  bool any_fail = r.margins.empty();
  for (const auto& m : r.margins) {
    if (!(m.slack > m.error_bound)) all_pass = false;
    if (m.slack <= -m.error_bound) any_fail = true;
  }
  r.status = all_pass ? CertificateStatus::pass
             : any_fail ? CertificateStatus::fail
                        : CertificateStatus::inconclusive;
  r.pass = r.status == CertificateStatus::pass;
}

CriterionReport check_theorem_sturm(const FunctionSpec& f, double a, double b,
                                    std::size_t grid_n) {
  if (!(b > a && b < a + 0.5)) throw std::invalid_argument("theorem-sturm: need a < b < a + 1/2");
  const auto er = finite_eta(f, grid_n);
  const double eta_f = er.eta;
  const FunctionSpec fp = f.derivative();

  CriterionReport r;
  r.criterion = Criterion::theorem_sturm;
  r.eta = eta_f;
  r.grid_n = grid_n;
  const double lip = f.lipschitz_bound();

  const auto g1 = interval_grid(a, b, grid_n);
  auto s1 = [&](double x) {
    const double y0 = (x + 0.5) / 2.0;
    const double xi = std::max(xi_point(f, y0, 0.25), xi_point(f, y0 + 0.5, 0.25));
    return f.eval(x) - f.eval(x + 0.5) - 0.5 * xi - eta_f / 96.0;
  };
  r.margins.push_back(worst("R_positive", g1.x, s1, 3.0 * lip * g1.h / 2.0 + er.error_bound / 96.0));

  const auto g2 = interval_grid(b, a + 0.5, grid_n);
  const double lip_fp = derivative_lipschitz(fp, r.route);
  auto s2 = [&](double x) { return -eta_f / 6.0 - (fp.eval(x) - fp.eval(x + 0.5)); };
  r.margins.push_back(worst("R_derivative_negative", g2.x, s2, lip_fp * g2.h + er.error_bound / 6.0));

  r.values = {{"a", a}, {"b", b}, {"eta", eta_f}, {"eta_error_bound", er.error_bound}};
  r.tolerances = {{"grid_step_R_positive", g1.h}, {"grid_step_R_derivative", g2.h}};
  settle(r);
  return r;
}

CriterionReport check_class_A(const FunctionSpec& f, const ClassAParams& p, std::size_t grid_n) {
  p.validate();
  const auto er = finite_eta(f, grid_n);
  const double eta_f = er.eta;
  const FunctionSpec fp = f.derivative();

  CriterionReport r;
  r.criterion = Criterion::class_A;
  r.eta = eta_f;
  r.grid_n = grid_n;

  const double tol0 = 1e-10 * std::max(sampled_range(f, grid_n), 1.0);
  {
    std::vector<double> nodes(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i)
      nodes[i] = static_cast<double>(i) / static_cast<double>(grid_n);
    auto s0 = [&](double x) { return tol0 - std::abs(f.eval(x) + f.eval(x + 0.5) - 2.0 * p.v); };
    r.margins.push_back(worst("A0_antisymmetry", nodes, s0, 0.0));
  }

  const BoundedValue fmax = sup_of(f, grid_n);
  const auto g1 = interval_grid(p.a, p.b, grid_n);
  auto s1 = [&](double x) { return 2.0 * f.eval(x) - p.v - fmax.value - eta_f / 96.0; };
  r.margins.push_back(worst("A1_plateau", g1.x, s1,
                            f.lipschitz_bound() * g1.h + fmax.error_bound + er.error_bound / 96.0));

  const auto g2 = interval_grid(p.b, p.a + 0.5, grid_n);
  const double lip_fp = derivative_lipschitz(fp, r.route);
  auto s2 = [&](double x) { return -eta_f / 12.0 - fp.eval(x); };
  r.margins.push_back(worst("A2_descent", g2.x, s2, lip_fp * g2.h / 2.0 + er.error_bound / 12.0));

  r.values = {{"a", p.a}, {"b", p.b}, {"v", p.v}, {"eta", eta_f}, {"max_f", fmax.value}};
  r.tolerances = {{"A0_tolerance", tol0}, {"grid_step_A1", g1.h}, {"grid_step_A2", g2.h}};
  settle(r);
  return r;
}

CriterionReport check_class_B(const FunctionSpec& f, std::size_t grid_n) {
  CriterionReport r;
  r.criterion = Criterion::class_B;
  r.grid_n = grid_n;
  r.route = "symbolic second derivative";

  const double range = sampled_range(f, grid_n);
  const double tol0 = 1e-10 * std::max(range, 1.0);
  std::vector<double> nodes(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i)
    nodes[i] = static_cast<double>(i) / static_cast<double>(grid_n);

  {
    double lo = kInf, hi = -kInf;
    for (double x : nodes) {
      const double s = f.eval(x) + f.eval(x + 0.5);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    r.margins.push_back({"antipodal_sum_constant", tol0 - (hi - lo), 0.0, 0.0});
    r.values["antipodal_sum"] = 0.5 * (lo + hi);
  }
  r.margins.push_back(worst("even", nodes,
                            [&](double x) { return tol0 - std::abs(f.eval(x) - f.eval(-x)); }, 0.0));

  const bool smooth = f.smoothness() >= 1;
  r.margins.push_back(structural("c1_with_lipschitz_derivative", smooth));
  r.tolerances = {{"symmetry_tolerance", tol0}};
  if (!smooth) {
    r.note = "f is not C^1, so eta(f) from f'' is unavailable";
    settle(r);
    return r;
  }

  const FunctionSpec fp = f.derivative();
  const FunctionSpec fpp = fp.derivative();
  const auto er = eta_second_derivative(f, grid_n);
  r.eta = er.eta;
  r.margins.push_back(structural("eta_finite", std::isfinite(er.eta)));

  // Concavity on [-1/4, 1/4] as f' nonincreasing; this also holds across
  // breakpoints where f'' jumps.
  const auto gq = interval_grid(-0.25, 0.25, grid_n);
  const double tol_c = 1e-9 * std::max(er.eta, 1.0);
  {
    Margin m{"concave_on_quarter_window", kInf, 0.0, 0.0};
    double prev = fp.eval(gq.x.front());
    for (std::size_t j = 1; j < gq.x.size(); ++j) {
      const double cur = fp.eval(gq.x[j]);
      const double s = tol_c - (cur - prev);
      if (s < m.slack) {
        m.slack = s;
        m.witness_x = gq.x[j - 1];
      }
      prev = cur;
    }
    r.margins.push_back(m);
  }

  // ess sup f'' = -ess inf f'' = eta.
  const BoundedValue top = sup_of(fpp, grid_n);
  const BoundedValue bottom = inf_of(fpp, grid_n);
  const double tol_id = 1e-6 * std::max(er.eta, 1.0);
  r.margins.push_back({"eta_equals_max_f2", tol_id - std::abs(top.value - er.eta), 0.0, top.witness_x});
  r.margins.push_back(
      {"eta_equals_minus_min_f2", tol_id - std::abs(-bottom.value - er.eta), 0.0, bottom.witness_x});

  r.values["eta"] = er.eta;
  r.values["max_f2"] = top.value;
  r.values["min_f2"] = bottom.value;
  r.values["f_prime_at_0"] = fp.eval(0.0);
  r.tolerances["concavity_tolerance"] = tol_c;
  r.tolerances["eta_identity_tolerance"] = tol_id;
  settle(r);
  return r;
}

CriterionReport check_kappa(const FunctionSpec& f, std::size_t grid_n) {
  const CriterionReport b = check_class_B(f, grid_n);
  CriterionReport r;
  r.criterion = Criterion::kappa;
  r.grid_n = grid_n;
  r.eta = b.eta;
  r.values["kappa"] = kKappa;
  if (!b.pass) {
    for (auto m : b.margins) {
      m.name = "classB." + m.name;
      r.margins.push_back(m);
    }
    r.status = b.status;
    r.pass = false;
    r.note = "class-B hypothesis not satisfied; no kappa claim made";
    return r;
  }
  const double f0 = f.eval(0.0);
  const double fq = f.eval(0.25);
  const double ratio = (f0 - fq) / b.eta;
  const auto er = eta_second_derivative(f, grid_n);
  const double err = b.eta > 0.0 ? ratio * er.error_bound / b.eta : 0.0;
  r.margins.push_back({"ratio_above_kappa", ratio - kKappa, err, 0.25});
  r.values["ratio"] = ratio;
  r.values["f_at_0"] = f0;
  r.values["f_at_quarter"] = fq;
  r.values["eta"] = b.eta;
  r.route = b.route;
  settle(r);
  return r;
}

FunctionSpec window_profile(const FunctionSpec& f) {
  return sum({constant(f.eval(0.0)), negate(f)});
}

WindowSearch search_c(const FunctionSpec& h, std::size_t grid_n) {
  if (grid_n < 4) throw std::invalid_argument("search_c: grid must have at least 4 points");
  const FunctionSpec hp = h.derivative();
  const FunctionSpec hpp = hp.derivative();
  const double step = 0.25 / static_cast<double>(grid_n);

  // ess sup of h'' on [0, 1/4] from cell midpoints, which avoids reading
  // one-sided values at breakpoints from outside the window.
  double eta_h = -kInf;
  for (std::size_t j = 0; j < grid_n; ++j)
    eta_h = std::max(eta_h, hpp.eval((static_cast<double>(j) + 0.5) * step));
  eta_h = std::max(eta_h, 0.0);

  const double hq = h.eval(0.25);
  WindowSearch out;
  CriterionReport& r = out.report;
  r.criterion = Criterion::search_c;
  r.grid_n = grid_n;
  r.eta = eta_h;
  r.route = "exhaustive scan of c = j / (4 grid_n)";

  double best = -kInf, best_c = step, h1 = 0.0, h2 = 0.0;
  for (std::size_t j = 1; j < grid_n; ++j) {
    const double c = static_cast<double>(j) * step;
    const double m1 = hq - 2.0 * h.eval(c) - eta_h / 96.0;
    const double m2 = hp.eval(c) - eta_h / 12.0;
    const double m = std::min(m1, m2);
    if (m > best) {
      best = m;
      best_c = c;
      h1 = m1;
      h2 = m2;
    }
  }
  r.margins.push_back({"H1", h1, 0.0, best_c});
  r.margins.push_back({"H2", h2, 0.0, best_c});

  double hp_drop = 0.0;
  for (std::size_t j = 1; j <= grid_n; ++j)
    hp_drop = std::max(hp_drop, hp.eval(static_cast<double>(j - 1) * step) -
                                    hp.eval(static_cast<double>(j) * step));
  r.values = {{"c", best_c},
              {"eta", eta_h},
              {"h_at_quarter", hq},
              {"h_at_0", h.eval(0.0)},
              {"h_prime_at_0", hp.eval(0.0)},
              {"precondition_margin", hq - kKappa * eta_h},
              {"h_prime_max_drop", hp_drop},
              {"window_hint", kWindowHint}};
  r.tolerances = {{"c_step", step}};
  settle(r);
  if (r.pass) out.c = best_c;
  else r.note = "no c with both margins positive; preconditions may fail or the grid is too coarse";
  return out;
}

double default_tolerance(const FunctionSpec& f, std::size_t grid_n) {
  return std::max(1e-9 * sampled_range(f, grid_n), 1e-15);
}

std::vector<ScanRow> scan_translates(const FunctionSpec& f, std::size_t omega_count,
                                     const ScanSettings& s) {
  if (omega_count == 0) throw std::invalid_argument("scan_translates: omega count must be positive");
  std::vector<ScanRow> rows;
  rows.reserve(omega_count);
  for (std::size_t j = 0; j < omega_count; ++j) {
    ScanRow row;
    row.omega = static_cast<double>(j) / static_cast<double>(omega_count);
    const FunctionSpec fw = translate(row.omega, f);

    SolverOptions opt;
    opt.d = s.d;
    opt.tol = s.tol ? *s.tol : default_tolerance(fw, s.n);
    opt.max_iter = s.max_iter;
    opt.relaxation = s.relaxation;
    const auto sol = solve_calibrated(fw, s.n, opt);
    row.beta = sol.beta;
    row.residual = sol.residual;
    row.iterations = sol.iterations;
    row.converged = sol.converged;

    const auto best = best_sturmian(fw, s.max_q);
    row.rotation_p = best.measure.p;
    row.rotation_q = best.measure.q;
    row.sturmian_value = best.value;

    row.epsilon_R = s.epsilon_R ? *s.epsilon_R
                                : default_epsilon_R(fw.lipschitz_bound(), sol.g.lipschitz(), s.n);
    row.w_max = s.w_max ? *s.w_max : default_w_max(s.n);
    if (s.n % 2 == 0) {
      const auto cert = sturmian_certificate(compute_R(fw, sol.g), row.epsilon_R, row.w_max);
      row.certificate = cert.status;
      row.worst_margin = cert.margin;
      row.note = cert.note;
    } else {
      row.certificate = CertificateStatus::fail;
      row.note = "odd grid size, R undefined";
    }
    if (!sol.converged) {
      row.certificate = CertificateStatus::fail;
      row.note = "solver did not converge";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ergopt
