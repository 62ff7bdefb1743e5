#pragma once

// Checkers for the sufficient conditions for a Sturmian maximizing measure:
// the two-inequality test, classes A and B, the kappa gate on class B and
// the search for the symmetric window (-c, c).
//
// A checker never claims that the Sturmian property fails; a failed check
// only means its hypothesis is not satisfied.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergopt/convexity.hpp"
#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"
#include "ergopt/torus_fn.hpp"

namespace ergopt {

/// 7/96 - sqrt(3)/36.
inline const double kKappa = 7.0 / 96.0 - std::sqrt(3.0) / 36.0;
/// (5 - 2 sqrt(3)) / 12, where the window search expects c to sit.
inline const double kWindowHint = (5.0 - 2.0 * std::sqrt(3.0)) / 12.0;

enum class Criterion { theorem_sturm, class_A, class_B, kappa, search_c };
std::string to_string(Criterion c);
/// Accepts sturm, classA, classB, kappa, search-c.
Criterion parse_criterion(const std::string& s);

struct ClassAParams {
  double a = 0.0;
  double b = 0.0;
  double v = 0.0;
  /// Throws std::invalid_argument unless 0 < b - a < 1/2.
  void validate() const;
};

/// Slack of one named inequality: the worst value of lhs - rhs (or of the
/// allowed deviation minus the observed one) over the checked points.
struct Margin {
  std::string name;
  double slack = 0.0;
  double error_bound = 0.0;
  double witness_x = 0.0;
};

struct CriterionReport {
  Criterion criterion = Criterion::theorem_sturm;
  /// pass: every slack exceeds its error bound. fail: some slack is at most
  /// minus its error bound. Anything else is inconclusive.
  CertificateStatus status = CertificateStatus::fail;
  bool pass = false;
  std::vector<Margin> margins;
  double eta = 0.0;
  std::size_t grid_n = 0;
  std::map<std::string, double> values;
  std::map<std::string, double> tolerances;
  std::string route;
  std::string note;
};

/// Fills status and pass from the margins.
void settle(CriterionReport& r);

/// Checks on [a, b] (M + 1 points, M = ceil(grid_n (b - a))):
///   f(x) - f(x + 1/2) - 1/2 max_{y in T^-1(x + 1/2)} xi_{1/4}^y(f) > eta/96
/// and on [b, a + 1/2] at nodes of the symbolic derivative:
///   f'(x) - f'(x + 1/2) < -eta/6.
/// Throws SpecError when eta is infinite or f is not differentiable.
CriterionReport check_theorem_sturm(const FunctionSpec& f, double a, double b,
                                    std::size_t grid_n = 4096);

/// (A0) f(x) + f(x + 1/2) = 2v at N nodes within 1e-10 * max(range, 1);
/// (A1) 2 f(x) - v - max f > eta/96 on [a, b];
/// (A2) f'(x) < -eta/12 on [b, a + 1/2].
CriterionReport check_class_A(const FunctionSpec& f, const ClassAParams& p,
                              std::size_t grid_n = 4096);

/// f + f(. + 1/2) constant, f even, eta finite, f' nonincreasing on
/// [-1/4, 1/4], and max f'' = -min f'' = eta.
CriterionReport check_class_B(const FunctionSpec& f, std::size_t grid_n = 4096);

/// (f(0) - f(1/4)) / eta > kappa, after check_class_B. A class-B failure is
/// propagated as fail with the class-B margins attached.
CriterionReport check_kappa(const FunctionSpec& f, std::size_t grid_n = 4096);

struct WindowSearch {
  std::optional<double> c;
  CriterionReport report;
};

/// Scans c = j / (4 grid_n), 0 < j < grid_n, for
///   (H1) h(1/4) - 2 h(c) > eta/96,   (H2) h'(c) > eta/12,
/// eta = ess sup of h'' on [0, 1/4]. Returns the c with the largest
/// smaller margin; the margins are those of that c.
WindowSearch search_c(const FunctionSpec& h, std::size_t grid_n = 10000);

/// h = f(0) - f, the profile whose window search proves the kappa gate.
FunctionSpec window_profile(const FunctionSpec& f);

struct ScanSettings {
  std::size_t n = 4096;
  int d = 2;
  /// Solver tolerance; 1e-9 * range(f) when absent.
  std::optional<double> tol;
  std::size_t max_iter = 100000;
  double relaxation = 0.5;
  int max_q = 32;
  /// Certificate tolerances; the sturmian defaults when absent.
  std::optional<double> epsilon_R;
  std::optional<double> w_max;
};

struct ScanRow {
  double omega = 0.0;
  double beta = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  int rotation_p = 0;
  int rotation_q = 1;
  double sturmian_value = 0.0;
  CertificateStatus certificate = CertificateStatus::fail;
  double worst_margin = 0.0;
  double epsilon_R = 0.0;
  double w_max = 0.0;
  std::string note;

  bool certificate_pass() const { return certificate == CertificateStatus::pass; }
};

/// For omega = j / omega_count: solve for f(. - omega), certify R and find
/// the best Sturmian measure. Non-convergence is recorded in the row.
std::vector<ScanRow> scan_translates(const FunctionSpec& f, std::size_t omega_count,
                                     const ScanSettings& s = {});

/// Solver tolerance used when none is given: 1e-9 * range(f), floored at
/// 1e-15.
double default_tolerance(const FunctionSpec& f, std::size_t grid_n = 4096);

}  // namespace ergopt
