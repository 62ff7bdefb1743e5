#pragma once

// The max-transfer operator of x -> d x on the circle,
//
//   (M_d f)(x) = max_{0 <= k < d} f((x + k) / d),
//
// and the calibrated sub-action equation g + beta = M_d(f + g).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergopt/torus_fn.hpp"

namespace ergopt {

/// Preimage geometry of an N-point grid under x -> d x. The preimage
/// (i/N + k)/d sits at fractional index (i + kN)/d; it is a node when d | i
/// and lies between two nodes otherwise.
class PreimageStencil {
 public:
  PreimageStencil(std::size_t n, int d);

  std::size_t size() const { return n_; }
  int degree() const { return d_; }

  /// Lower node index and interpolation weight of the upper node.
  std::size_t lower(std::size_t i, int k) const { return lower_[i * d_ + k]; }
  double weight(std::size_t i, int k) const { return weight_[i * d_ + k]; }
  double point(std::size_t i, int k) const;

  double interpolate(std::span<const double> v, std::size_t i, int k) const {
    const std::size_t j = lower(i, k);
    const double w = weight(i, k);
    const double a = v[j];
    if (w == 0.0) return a;
    return a + w * (v[j + 1 == n_ ? 0 : j + 1] - a);
  }

 private:
  std::size_t n_;
  int d_;
  std::vector<std::size_t> lower_;
  std::vector<double> weight_;
};

/// Max-transfer on a grid. Off-node preimages use linear interpolation.
/// Throws std::invalid_argument unless d >= 2 and d | N.
GridFunction max_transfer(const GridFunction& f, int d);

/// Max-transfer of a closed-form observable, evaluated exactly at every
/// preimage of the N grid nodes.
GridFunction max_transfer(const FunctionSpec& f, std::size_t n, int d);

/// An observable tabulated at the grid nodes and at all d preimages of
/// each node, which is everything the sub-action iteration touches.
class TransferObservable {
 public:
  TransferObservable(const FunctionSpec& f, std::size_t n, int d);
  TransferObservable(const GridFunction& f, int d);

  const PreimageStencil& stencil() const { return stencil_; }
  std::size_t size() const { return stencil_.size(); }
  int degree() const { return stencil_.degree(); }
  std::span<const double> at_nodes() const { return nodes_; }
  double at_preimage(std::size_t i, int k) const { return preimage_[i * degree() + k]; }
  double range() const;

  /// out[i] = max_k (f + g)((x_i + k) / d), g interpolated.
  void apply(std::span<const double> g, std::span<double> out) const;

 private:
  PreimageStencil stencil_;
  std::vector<double> nodes_;
  std::vector<double> preimage_;
};

/// Stops once both the sup-norm step and the geometric estimate of the
/// remaining distance to the fixed point are below tol.
struct SolverOptions {
  int d = 2;
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  /// Krasnoselskii-Mann averaging weight in (0, 1]; 1 is the plain
  /// normalized iteration.
  double relaxation = 0.5;
  /// Starting point; zero when absent.
  std::optional<GridFunction> initial;
};

struct SubactionSolution {
  GridFunction g;  ///< normalized so that max g = 0
  double beta = 0.0;
  /// sup over nodes of |M_d(f + g) - g - beta|.
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double last_step = 0.0;
  /// last_step * r / (1 - r), r the worst of the last four step ratios.
  double error_estimate = 0.0;
  int d = 2;
  double tol = 0.0;
  double relaxation = 0.5;
};

SubactionSolution solve_calibrated(const TransferObservable& f, const SolverOptions& opt = {});
SubactionSolution solve_calibrated(const FunctionSpec& f, std::size_t n,
                                   const SolverOptions& opt = {});
SubactionSolution solve_calibrated(const GridFunction& f, const SolverOptions& opt = {});

double calibration_residual(const TransferObservable& f, const GridFunction& g, double beta);
double calibration_residual(const GridFunction& f, const GridFunction& g, double beta, int d);

/// max over nodes of f + g - g o T_d - beta. For an exact sub-action this
/// is <= 0; for a computed one it is bounded by the residual.
double subaction_defect(const TransferObservable& f, const GridFunction& g, double beta);

/// sup - inf of g1 - g2: zero iff they differ by a constant.
double constant_offset_spread(const GridFunction& g1, const GridFunction& g2);

struct PeriodicOrbit {
  int period = 1;
  /// The orbit is {numerator * d^j mod denominator} / denominator,
  /// numerator the smallest element.
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double average = 0.0;
  std::vector<double> points(int d) const;
};

struct PeriodicOrbitTable {
  int d = 2;
  int max_period = 0;
  std::vector<PeriodicOrbit> orbits;  ///< ordered by period, then numerator
  std::size_t best = 0;
  const PeriodicOrbit& best_orbit() const { return orbits.at(best); }
  double best_average() const { return best_orbit().average; }
};

inline constexpr std::uint64_t kDefaultOrbitBudget = std::uint64_t{1} << 25;

/// Enumerates every periodic orbit of period <= max_period via the points
/// k / (d^p - 1). Throws std::invalid_argument when d^max_period exceeds
/// the budget.
PeriodicOrbitTable beta_lower_bound(const FunctionSpec& f, int d, int max_period,
                                    std::uint64_t budget = kDefaultOrbitBudget);
PeriodicOrbitTable beta_lower_bound(const GridFunction& f, int d, int max_period,
                                    std::uint64_t budget = kDefaultOrbitBudget);

}  // namespace ergopt
