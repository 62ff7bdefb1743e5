#pragma once

// Convexity-defect functionals on the circle.
//
//   xi_delta^x(f) = max{2 f(x) - f(x + delta) - f(x - delta), 0}
//   xi*_delta(f)  = sup_x xi_delta^x(f)
//   eta(f)        = sup_{delta > 0} delta^-2 xi*_delta(f)
//
// eta(f) is the least a >= 0 making f(x) + a x^2 / 2 convex on R.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "ergopt/torus_fn.hpp"

namespace ergopt {

template <TorusFunction F>
double xi_point(const F& f, double x, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("xi_point: delta must be positive");
  const double s = 2.0 * f.eval(x) - f.eval(x + delta) - f.eval(x - delta);
  return s > 0.0 ? s : 0.0;
}

/// A grid supremum together with its discretization-error bound. The true
/// supremum lies in [value, value + error_bound].
struct BoundedValue {
  double value = 0.0;
  double error_bound = 0.0;
  double witness_x = 0.0;
};

/// Maximum of xi_point over search_n uniformly spaced x. The error bound is
/// Lip(f) * 2 / search_n, except for a grid function searched on its own
/// nodes at a node-aligned delta, where the maximum is exact.
template <TorusFunction F>
BoundedValue xi_star(const F& f, double delta, std::size_t search_n) {
  if (!(delta > 0.0)) throw std::invalid_argument("xi_star: delta must be positive");
  if (search_n == 0) throw std::invalid_argument("xi_star: search_n must be positive");
  BoundedValue out;
  for (std::size_t i = 0; i < search_n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(search_n);
    const double v = xi_point(f, x, delta);
    if (v > out.value) {
      out.value = v;
      out.witness_x = x;
    }
  }
  out.error_bound = lipschitz_of(f) * 2.0 / static_cast<double>(search_n);
  if constexpr (std::is_same_v<F, GridFunction>) {
    const double steps = delta * static_cast<double>(f.size());
    if (search_n == f.size() && std::abs(steps - std::round(steps)) < 1e-9)
      out.error_bound = 0.0;
  }
  return out;
}

enum class EtaMode { automatic, second_derivative, finite_difference };
enum class EtaMethod { second_derivative, finite_difference };

std::string to_string(EtaMethod m);
EtaMode parse_eta_mode(const std::string& s);

struct EtaOptions {
  EtaMode mode = EtaMode::automatic;
  std::size_t grid_n = 4096;
  /// Finite-difference route: smallest delta is min_delta_steps / N.
  std::size_t min_delta_steps = 1;
};

struct DeltaEntry {
  double delta = 0.0;
  double xi_star = 0.0;
  double error_bound = 0.0;
  double witness_x = 0.0;
};

struct EtaWitness {
  double x = 0.0;
  double delta = 0.0;  ///< 0 for the second-derivative route
  double ratio = 0.0;
};

struct ConvexityReport {
  double eta = 0.0;
  bool infinite = false;
  EtaMethod method = EtaMethod::second_derivative;
  /// Finite-difference values only bound eta from below.
  bool lower_bound = false;
  double error_bound = 0.0;
  std::size_t grid_n = 0;
  std::size_t min_delta_steps = 1;
  std::vector<DeltaEntry> delta_table;
  std::vector<EtaWitness> witnesses;
};

ConvexityReport eta(const FunctionSpec& f, const EtaOptions& opt = {});
ConvexityReport eta(const GridFunction& g, const EtaOptions& opt = {});

/// eta from the second derivative: max(0, -min f''), with the grid minimum
/// refined locally.
ConvexityReport eta_second_derivative(const FunctionSpec& f, std::size_t grid_n);

/// Finite-difference eta over delta = k/N, min_steps <= k <= N/2.
ConvexityReport eta_finite_difference(const GridFunction& g, std::size_t min_steps = 1);

/// Supremum of f over the circle from a grid search with local refinement.
BoundedValue sup_of(const FunctionSpec& f, std::size_t grid_n);
BoundedValue inf_of(const FunctionSpec& f, std::size_t grid_n);

}  // namespace ergopt
