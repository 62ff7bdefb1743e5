#include "ergopt/lax_oleinik.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergopt {
namespace {

void check_degree(std::size_t n, int d) {
  if (d < 2) throw std::invalid_argument("max-transfer: degree d must be at least 2");
  if (n < 4) throw std::invalid_argument("max-transfer: grid size must be at least 4");
  if (n % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("max-transfer: d = " + std::to_string(d) +
                                " does not divide N = " + std::to_string(n));
}

void normalize_max_zero(std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  for (double& x : v) x -= m;
}

template <TorusFunction F>
PeriodicOrbitTable enumerate_orbits(const F& f, int d, int max_period, std::uint64_t budget) {
  if (d < 2) throw std::invalid_argument("beta_lower_bound: d must be at least 2");
  if (max_period < 1) throw std::invalid_argument("beta_lower_bound: max period must be >= 1");
  std::uint64_t top = 1;
  for (int p = 0; p < max_period; ++p) {
    top *= static_cast<std::uint64_t>(d);
    if (top > budget)
      throw std::invalid_argument("beta_lower_bound: d^P exceeds the enumeration budget of " +
                                  std::to_string(budget) + " points");
  }

  PeriodicOrbitTable table;
  table.d = d;
  table.max_period = max_period;
  const auto ud = static_cast<std::uint64_t>(d);
  std::uint64_t dp = 1;
  double best = -std::numeric_limits<double>::infinity();
  for (int p = 1; p <= max_period; ++p) {
    dp *= ud;
    const std::uint64_t den = dp - 1;
    for (std::uint64_t k = 0; k < den; ++k) {
      // Keep k only if its orbit has exact period p and k is its minimum.
      bool canonical = true;
      std::uint64_t x = k;
      for (int s = 1; s < p; ++s) {
        x = (x * ud) % den;
        if (x <= k) {
          canonical = false;
          break;
        }
      }
      if (!canonical) continue;
      double acc = 0.0;
      x = k;
      for (int s = 0; s < p; ++s) {
        acc += f.eval(static_cast<double>(x) / static_cast<double>(den));
        x = (x * ud) % den;
      }
      PeriodicOrbit orb{p, k, den, acc / p};
      if (orb.average > best) {
        best = orb.average;
        table.best = table.orbits.size();
      }
      table.orbits.push_back(orb);
    }
  }
  return table;
}

}  // namespace

PreimageStencil::PreimageStencil(std::size_t n, int d) : n_(n), d_(d) {
  check_degree(n, d);
  lower_.resize(n * d);
  weight_.resize(n * d);
  const auto ud = static_cast<std::size_t>(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      const std::size_t num = i + static_cast<std::size_t>(k) * n;
      lower_[i * ud + k] = num / ud;
      weight_[i * ud + k] = static_cast<double>(num % ud) / static_cast<double>(d);
    }
  }
}

double PreimageStencil::point(std::size_t i, int k) const {
  return static_cast<double>(i + static_cast<std::size_t>(k) * n_) /
         static_cast<double>(static_cast<std::size_t>(d_) * n_);
}

GridFunction max_transfer(const GridFunction& f, int d) {
  const PreimageStencil st(f.size(), d);
  std::vector<double> out(f.size());
  const auto v = f.values();
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m = st.interpolate(v, i, 0);
    for (int k = 1; k < d; ++k) m = std::max(m, st.interpolate(v, i, k));
    out[i] = m;
  }
  return GridFunction(std::move(out));
}

GridFunction max_transfer(const FunctionSpec& f, std::size_t n, int d) {
  const PreimageStencil st(n, d);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = f.eval(st.point(i, 0));
    for (int k = 1; k < d; ++k) m = std::max(m, f.eval(st.point(i, k)));
    out[i] = m;
  }
  return GridFunction(std::move(out));
}

TransferObservable::TransferObservable(const FunctionSpec& f, std::size_t n, int d)
    : stencil_(n, d), nodes_(n), preimage_(n * static_cast<std::size_t>(d)) {
  for (std::size_t i = 0; i < n; ++i) {
    nodes_[i] = f.eval(static_cast<double>(i) / static_cast<double>(n));
    for (int k = 0; k < d; ++k) preimage_[i * d + k] = f.eval(stencil_.point(i, k));
  }
}

TransferObservable::TransferObservable(const GridFunction& f, int d)
    : stencil_(f.size(), d),
      nodes_(f.values().begin(), f.values().end()),
      preimage_(f.size() * static_cast<std::size_t>(d)) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int k = 0; k < d; ++k) preimage_[i * d + k] = stencil_.interpolate(nodes_, i, k);
}

double TransferObservable::range() const {
  auto [lo, hi] = std::minmax_element(nodes_.begin(), nodes_.end());
  return *hi - *lo;
}

void TransferObservable::apply(std::span<const double> g, std::span<double> out) const {
  const std::size_t n = size();
  const int d = degree();
  for (std::size_t i = 0; i < n; ++i) {
    const double* fp = &preimage_[i * d];
    double m = fp[0] + stencil_.interpolate(g, i, 0);
    for (int k = 1; k < d; ++k) m = std::max(m, fp[k] + stencil_.interpolate(g, i, k));
    out[i] = m;
  }
}

SubactionSolution solve_calibrated(const TransferObservable& f, const SolverOptions& opt) {
  const std::size_t n = f.size();
  if (opt.d != f.degree())
    throw std::invalid_argument("solve_calibrated: observable was tabulated for another d");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_calibrated: tol must be positive");
  if (!(opt.relaxation > 0.0 && opt.relaxation <= 1.0))
    throw std::invalid_argument("solve_calibrated: relaxation must lie in (0, 1]");

  std::vector<double> g(n, 0.0);
  if (opt.initial) {
    if (opt.initial->size() != n)
      throw std::invalid_argument("solve_calibrated: initial guess has the wrong grid size");
    g.assign(opt.initial->values().begin(), opt.initial->values().end());
    normalize_max_zero(g);
  }
  std::vector<double> m(n), next(n);
  const double tau = opt.relaxation;
  std::array<double, 4> ratios;
  ratios.fill(0.999);
  double prev_step = 0.0;

  SubactionSolution sol;
  sol.d = opt.d;
  sol.tol = opt.tol;
  sol.relaxation = tau;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    f.apply(g, m);
    const double c = *std::max_element(m.begin(), m.end());
    for (std::size_t i = 0; i < n; ++i) next[i] = (1.0 - tau) * g[i] + tau * (m[i] - c);
    normalize_max_zero(next);
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) step = std::max(step, std::abs(next[i] - g[i]));
    g.swap(next);
    sol.iterations = it;
    sol.last_step = step;
    // Geometric tail bound from the worst recent contraction ratio.
    ratios[it % ratios.size()] = prev_step > 0.0 ? std::min(step / prev_step, 0.999) : 0.999;
    prev_step = step;
    const double rho = *std::max_element(ratios.begin(), ratios.end());
    sol.error_estimate = step * rho / (1.0 - rho);
    if (step < opt.tol && sol.error_estimate < opt.tol) {
      sol.converged = true;
      break;
    }
  }

  // beta is the centre of [min, max] of M(f + g) - g; both ends bound the
  // discrete eigenvalue.
  f.apply(g, m);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, m[i] - g[i]);
    hi = std::max(hi, m[i] - g[i]);
  }
  sol.beta = 0.5 * (lo + hi);
  sol.residual = 0.5 * (hi - lo);
  sol.g = GridFunction(std::move(g));
  return sol;
}

SubactionSolution solve_calibrated(const FunctionSpec& f, std::size_t n, const SolverOptions& opt) {
  return solve_calibrated(TransferObservable(f, n, opt.d), opt);
}

SubactionSolution solve_calibrated(const GridFunction& f, const SolverOptions& opt) {
  return solve_calibrated(TransferObservable(f, opt.d), opt);
}

double calibration_residual(const TransferObservable& f, const GridFunction& g, double beta) {
  if (g.size() != f.size())
    throw std::invalid_argument("calibration_residual: grid sizes differ");
  std::vector<double> m(g.size());
  f.apply(g.values(), m);
  double r = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    r = std::max(r, std::abs(m[i] - g.values()[i] - beta));
  return r;
}

double calibration_residual(const GridFunction& f, const GridFunction& g, double beta, int d) {
  return calibration_residual(TransferObservable(f, d), g, beta);
}

double subaction_defect(const TransferObservable& f, const GridFunction& g, double beta) {
  const std::size_t n = f.size();
  if (g.size() != n) throw std::invalid_argument("subaction_defect: grid sizes differ");
  const auto fv = f.at_nodes();
  const auto d = static_cast<std::size_t>(f.degree());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double image = g.values()[(d * i) % n];
    worst = std::max(worst, fv[i] + g.values()[i] - image - beta);
  }
  return worst;
}

double constant_offset_spread(const GridFunction& g1, const GridFunction& g2) {
  if (g1.size() != g2.size()) throw std::invalid_argument("constant_offset_spread: sizes differ");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    const double diff = g1.values()[i] - g2.values()[i];
    lo = std::min(lo, diff);
    hi = std::max(hi, diff);
  }
  return hi - lo;
}

std::vector<double> PeriodicOrbit::points(int d) const {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(period));
  std::uint64_t x = numerator;
  for (int s = 0; s < period; ++s) {
    pts.push_back(static_cast<double>(x) / static_cast<double>(denominator));
    x = (x * static_cast<std::uint64_t>(d)) % denominator;
  }
  return pts;
}

PeriodicOrbitTable beta_lower_bound(const FunctionSpec& f, int d, int max_period,
                                    std::uint64_t budget) {
  return enumerate_orbits(f, d, max_period, budget);
}

PeriodicOrbitTable beta_lower_bound(const GridFunction& f, int d, int max_period,
                                    std::uint64_t budget) {
  return enumerate_orbits(f, d, max_period, budget);
}

}  // namespace ergopt
