// ergopt: command-line front end.
//
// Exit status: 0 success or pass, 1 criterion fail, 2 inconclusive,
// 3 usage or convergence error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ergopt/convexity.hpp"
#include "ergopt/criteria.hpp"
#include "ergopt/io.hpp"
#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"
#include "ergopt/torus_fn.hpp"
#include "ergopt/validation.hpp"

namespace fs = std::filesystem;
using namespace ergopt;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kInconclusive = 2;
constexpr int kUsage = 3;

struct Config {
  std::string spec_path;
  int d = 2;
  std::size_t n = 4096;
  std::optional<double> tol;
  std::size_t max_iter = 100000;
  double relaxation = 0.5;
  int max_period = 16;
  int max_q = 32;
  std::size_t omega_count = 64;
  std::string out = "runs";
  std::uint64_t seed = 20240611;
  std::size_t cases = 200;
  // eta
  std::string mode = "auto";
  std::size_t min_delta_steps = 1;
  // sturmian
  std::optional<int> p, q;
  // check
  std::string criterion;
  std::optional<double> a, b, v;
  std::optional<std::size_t> grid_n;
};

// FNV-1a, only used to name output directories.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Run {
 public:
  Run(const std::string& command, const Config& cfg, const Json& spec) {
    config_ = {{"command", command},
               {"d", cfg.d},
               {"N", cfg.n},
               {"tol", cfg.tol ? Json(*cfg.tol) : Json(nullptr)},
               {"max_iter", cfg.max_iter},
               {"relaxation", cfg.relaxation},
               {"P", cfg.max_period},
               {"Q", cfg.max_q},
               {"omega_count", cfg.omega_count},
               {"seed", cfg.seed},
               {"cases", cfg.cases},
               {"spec", spec}};
    if (command == "eta") {
      config_["mode"] = cfg.mode;
      config_["min_delta_steps"] = cfg.min_delta_steps;
    }
    if (cfg.p) config_["p"] = *cfg.p;
    if (cfg.q) config_["q"] = *cfg.q;
    if (!cfg.criterion.empty()) config_["criterion"] = cfg.criterion;
    if (cfg.a) config_["a"] = *cfg.a;
    if (cfg.b) config_["b"] = *cfg.b;
    if (cfg.v) config_["v"] = *cfg.v;
    if (cfg.grid_n) config_["grid_n"] = *cfg.grid_n;
    dir_ = fs::path(cfg.out) / fmt::format("{}-{:016x}", command, fnv1a(config_.dump()));
    fs::create_directories(dir_);
    write("config.json", dump(config_));
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream os(dir_ / name, std::ios::binary);
    os << text;
  }
  const fs::path& dir() const { return dir_; }

 private:
  Json config_;
  fs::path dir_;
};

int status_code(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::pass: return kOk;
    case CertificateStatus::fail: return kFail;
    case CertificateStatus::inconclusive: return kInconclusive;
  }
  return kFail;
}

FunctionSpec need_spec(const Config& cfg) {
  if (cfg.spec_path.empty()) throw CLI::ValidationError("--spec", "a spec file is required");
  return load_spec(cfg.spec_path);
}

void check_grid(const Config& cfg) {
  if (cfg.d < 2) throw std::invalid_argument("--d must be at least 2");
  if (cfg.n < 4) throw std::invalid_argument("--N must be at least 4");
  if (cfg.n % static_cast<std::size_t>(cfg.d) != 0)
    throw std::invalid_argument(fmt::format("d = {} does not divide N = {}", cfg.d, cfg.n));
}

SolverOptions solver_options(const Config& cfg, const FunctionSpec& f) {
  SolverOptions o;
  o.d = cfg.d;
  o.tol = cfg.tol ? *cfg.tol : default_tolerance(f, cfg.n);
  o.max_iter = cfg.max_iter;
  o.relaxation = cfg.relaxation;
  if (!(o.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  return o;
}

int cmd_solve(const Config& cfg) {
  check_grid(cfg);
  const auto f = need_spec(cfg);
  const Run run("solve", cfg, to_json(f));
  const auto sol = solve_calibrated(f, cfg.n, solver_options(cfg, f));
  const auto orbits = beta_lower_bound(f, cfg.d, cfg.max_period);
  EtaOptions eo;
  eo.mode = EtaMode::finite_difference;
  eo.min_delta_steps = 8;
  const auto eta_g = eta(sol.g, eo);
  const double gap = sol.beta - orbits.best_average();

  Json out = to_json(sol);
  out["periodic_orbits"] = to_json(orbits);
  out["beta_minus_best_orbit"] = gap;
  out["beta_consistency_tolerance"] = 1e-4;
  out["eta_g"] = to_json(eta_g);
  out["eta_f"] = to_json(eta(f, {EtaMode::automatic, cfg.n, 1}));
  out["one_sided_derivatives"] = to_json(one_sided_derivative_report(sol.g));
  run.write("solution.json", dump(out));
  std::ostringstream csv;
  write_csv(csv, sol.g);
  run.write("g.csv", csv.str());

  fmt::print("beta {:.12g}  residual {:.3e}  iterations {}  converged {}\n", sol.beta,
             sol.residual, sol.iterations, sol.converged);
  fmt::print("best periodic orbit (P={}) {:.12g}, gap {:.3e}\n", cfg.max_period,
             orbits.best_average(), gap);
  fmt::print("{}\n", run.dir().string());
  if (!sol.converged) return kUsage;
  return std::abs(gap) <= 1e-4 ? kOk : kFail;
}

int cmd_eta(const Config& cfg) {
  const auto f = need_spec(cfg);
  const Run run("eta", cfg, to_json(f));
  EtaOptions eo;
  eo.mode = parse_eta_mode(cfg.mode);
  eo.grid_n = cfg.n;
  eo.min_delta_steps = cfg.min_delta_steps;
  const auto rep = eta(f, eo);
  run.write("eta.json", dump(to_json(rep)));
  fmt::print("eta {:.12g} ({}{}{})\n", rep.eta, to_string(rep.method),
             rep.lower_bound ? ", lower bound" : "", rep.infinite ? ", flagged infinite" : "");
  fmt::print("{}\n", run.dir().string());
  return kOk;
}

int cmd_sturmian(const Config& cfg) {
  if (cfg.p || cfg.q) {
    if (!(cfg.p && cfg.q)) throw CLI::ValidationError("--p/--q", "give both --p and --q");
    const auto mu = sturmian_measure(*cfg.p, *cfg.q);
    Json spec = nullptr;
    std::optional<FunctionSpec> f;
    if (!cfg.spec_path.empty()) {
      f = load_spec(cfg.spec_path);
      spec = to_json(*f);
    }
    const Run run("sturmian", cfg, spec);
    Json out = {{"measure", to_json(mu)}};
    if (f) out["integral"] = integrate(mu, *f);
    run.write("sturmian.json", dump(out));
    fmt::print("{}/{} word {} orbit starts at {}/{}\n", mu.p, mu.q, mu.word, mu.numerators.front(),
               mu.denominator);
    if (f) fmt::print("integral {:.12g}\n", out["integral"].get<double>());
    fmt::print("{}\n", run.dir().string());
    return kOk;
  }

  check_grid(cfg);
  if (cfg.n % 2 != 0) throw std::invalid_argument("--N must be even for the R function");
  const auto f = need_spec(cfg);
  const Run run("sturmian", cfg, to_json(f));
  const auto best = best_sturmian(f, cfg.max_q);
  const auto sol = solve_calibrated(f, cfg.n, solver_options(cfg, f));
  const auto cert = sturmian_certificate(
      compute_R(f, sol.g), default_epsilon_R(f.lipschitz_bound(), sol.g.lipschitz(), cfg.n),
      default_w_max(cfg.n));
  Json out = {{"best_sturmian", {{"measure", to_json(best.measure)}, {"value", best.value}}},
              {"solution", to_json(sol)},
              {"certificate", to_json(cert)},
              {"beta_minus_sturmian", sol.beta - best.value}};
  run.write("sturmian.json", dump(out));
  std::ostringstream csv;
  write_csv(csv, cert.R);
  run.write("R.csv", csv.str());
  fmt::print("best Sturmian {}/{} value {:.12g}; beta {:.12g}; certificate {}\n", best.measure.p,
             best.measure.q, best.value, sol.beta, to_string(cert.status));
  fmt::print("{}\n", run.dir().string());
  if (!sol.converged) return kUsage;
  return status_code(cert.status);
}

int cmd_check(const Config& cfg) {
  const auto f = need_spec(cfg);
  const Run run("check", cfg, to_json(f));
  const Criterion c = parse_criterion(cfg.criterion);
  CriterionReport rep;
  Json extra = Json::object();
  switch (c) {
    case Criterion::theorem_sturm:
      if (!cfg.a || !cfg.b) throw CLI::ValidationError("--a/--b", "sturm needs --a and --b");
      rep = check_theorem_sturm(f, *cfg.a, *cfg.b, cfg.grid_n.value_or(cfg.n));
      break;
    case Criterion::class_A:
      if (!cfg.a || !cfg.b || !cfg.v)
        throw CLI::ValidationError("--a/--b/--v", "classA needs --a, --b and --v");
      rep = check_class_A(f, {*cfg.a, *cfg.b, *cfg.v}, cfg.grid_n.value_or(cfg.n));
      break;
    case Criterion::class_B:
      rep = check_class_B(f, cfg.grid_n.value_or(cfg.n));
      break;
    case Criterion::kappa:
      rep = check_kappa(f, cfg.grid_n.value_or(cfg.n));
      break;
    case Criterion::search_c: {
      auto ws = search_c(f, cfg.grid_n.value_or(10000));
      rep = ws.report;
      extra["c"] = ws.c ? Json(*ws.c) : Json(nullptr);
      break;
    }
  }
  Json out = to_json(rep);
  for (const auto& [k, val] : extra.items()) out[k] = val;
  run.write("report.json", dump(out));
  fmt::print("{}: {}\n", to_string(rep.criterion), to_string(rep.status));
  for (const auto& m : rep.margins)
    fmt::print("  {:<32} slack {:+.6e}  error bound {:.3e}\n", m.name, m.slack, m.error_bound);
  for (const auto& [k, val] : rep.values) fmt::print("  {} = {:.12g}\n", k, val);
  if (!rep.note.empty()) fmt::print("  {}\n", rep.note);
  fmt::print("{}\n", run.dir().string());
  return status_code(rep.status);
}

int cmd_scan(const Config& cfg) {
  check_grid(cfg);
  const auto f = need_spec(cfg);
  const Run run("scan", cfg, to_json(f));
  ScanSettings s;
  s.n = cfg.n;
  s.d = cfg.d;
  s.tol = cfg.tol;
  s.max_iter = cfg.max_iter;
  s.relaxation = cfg.relaxation;
  s.max_q = cfg.max_q;
  const auto rows = scan_translates(f, cfg.omega_count, s);

  std::ostringstream csv;
  write_scan_csv(csv, rows);
  run.write("scan.csv", csv.str());
  std::size_t passed = 0, inconclusive = 0, beta_mismatch = 0;
  Json jrows = Json::array();
  for (const auto& r : rows) {
    passed += r.certificate_pass();
    inconclusive += r.certificate == CertificateStatus::inconclusive;
    beta_mismatch += std::abs(r.beta - r.sturmian_value) > 1e-4;
    jrows.push_back(to_json(r));
  }
  run.write("scan.json", dump({{"rows", jrows},
                               {"passed", passed},
                               {"inconclusive", inconclusive},
                               {"beta_mismatch", beta_mismatch},
                               {"beta_tolerance", 1e-4}}));
  fmt::print("{}/{} certificates pass, {} inconclusive, {} beta mismatches\n", passed, rows.size(),
             inconclusive, beta_mismatch);
  fmt::print("{}\n", run.dir().string());
  if (passed == rows.size() && beta_mismatch == 0) return kOk;
  if (passed + inconclusive == rows.size() && beta_mismatch == 0) return kInconclusive;
  return kFail;
}

int cmd_validate(const Config& cfg) {
  const Run run("validate", cfg, nullptr);
  ValidationOptions vo;
  vo.seed = cfg.seed;
  vo.cases = cfg.cases;
  const auto results = run_property_suites(vo);
  Json arr = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.ok();
    arr.push_back({{"name", r.name},
                   {"cases", r.cases},
                   {"violations", r.violations},
                   {"worst_slack", r.worst_slack},
                   {"first_violation", r.first_violation}});
    fmt::print("{:<36} {:>5} cases  {} violations\n", r.name, r.cases, r.violations);
  }
  run.write("validate.json", dump({{"seed", cfg.seed}, {"suites", arr}, {"ok", ok}}));
  fmt::print("{}\n", run.dir().string());
  return ok ? kOk : kFail;
}

void add_common(CLI::App* sub, Config& cfg, bool grid) {
  sub->add_option("--spec", cfg.spec_path, "JSON function spec file");
  sub->add_option("--out", cfg.out, "Root directory for run outputs")->capture_default_str();
  if (!grid) return;
  sub->add_option("--d", cfg.d, "Degree of x -> d x")->capture_default_str();
  sub->add_option("--N", cfg.n, "Grid size (d must divide N)")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "Solver tolerance (default 1e-9 * range(f))");
  sub->add_option("--max-iter", cfg.max_iter, "Solver iteration cap")->capture_default_str();
  sub->add_option("--relaxation", cfg.relaxation, "Averaging weight in (0, 1]")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ergodic optimization for x -> d x on the circle"};
  app.require_subcommand(1);
  Config cfg;

  auto* solve = app.add_subcommand("solve", "Solve for a calibrated sub-action");
  add_common(solve, cfg, true);
  solve->add_option("--P", cfg.max_period, "Periodic-orbit period cap")->capture_default_str();

  auto* eta_cmd = app.add_subcommand("eta", "Convexity defect eta(f)");
  add_common(eta_cmd, cfg, false);
  eta_cmd->add_option("--N", cfg.n, "Grid size")->capture_default_str();
  eta_cmd->add_option("--mode", cfg.mode, "auto|second_derivative|finite_difference")
      ->capture_default_str();
  eta_cmd->add_option("--min-delta-steps", cfg.min_delta_steps, "Smallest delta in grid steps")
      ->capture_default_str();

  auto* st = app.add_subcommand("sturmian", "Sturmian measures and the antipodal-zero certificate");
  add_common(st, cfg, true);
  st->add_option("--p", cfg.p, "Rotation number numerator");
  st->add_option("--q", cfg.q, "Rotation number denominator");
  st->add_option("--Q", cfg.max_q, "Denominator cap for the best Sturmian search")
      ->capture_default_str();

  auto* check = app.add_subcommand("check", "Check one sufficient condition");
  add_common(check, cfg, false);
  check->add_option("--criterion", cfg.criterion, "sturm|classA|classB|kappa|search-c")->required();
  check->add_option("--a", cfg.a, "Window start a");
  check->add_option("--b", cfg.b, "Window end b");
  check->add_option("--v", cfg.v, "Antisymmetry level v");
  check->add_option("--N", cfg.n, "Grid size")->capture_default_str();
  check->add_option("--grid-n", cfg.grid_n, "Checker grid (default N; 10000 for search-c)");

  auto* scan = app.add_subcommand("scan", "Certify translates f(x - omega)");
  add_common(scan, cfg, true);
  scan->add_option("--omega-count", cfg.omega_count, "Number of translates")->capture_default_str();
  scan->add_option("--Q", cfg.max_q, "Denominator cap for the best Sturmian search")
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Run the seeded property suites");
  validate->add_option("--out", cfg.out, "Root directory for run outputs")->capture_default_str();
  validate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  validate->add_option("--cases", cfg.cases, "Cases per suite")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*eta_cmd) return cmd_eta(cfg);
    if (*st) return cmd_sturmian(cfg);
    if (*check) return cmd_check(cfg);
    if (*scan) return cmd_scan(cfg);
    if (*validate) return cmd_validate(cfg);
  } catch (const SpecError& e) {
    fmt::print(stderr, "spec error: {}\n", e.what());
    return kUsage;
  } catch (const CLI::ParseError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  }
  return kUsage;
}
