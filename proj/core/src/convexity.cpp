#include "ergopt/convexity.hpp"

#include <algorithm>
#include <limits>

namespace ergopt {
namespace {

// Golden-section search for the minimum of f on [lo, hi].
template <class F>
std::pair<double, double> golden_min(const F& f, double lo, double hi, int iters = 80) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iters && b - a > 1e-15; ++k) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

struct GridMin {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

template <class F>
GridMin grid_min(const F& f, std::size_t n) {
  GridMin m;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    const double v = f(x);
    if (v < m.value) m = {x, v};
  }
  return m;
}

template <class F>
GridMin refined_min(const F& f, std::size_t n) {
  GridMin m = grid_min(f, n);
  const double h = 1.0 / static_cast<double>(n);
  auto [x, v] = golden_min(f, m.x - h, m.x + h);
  if (v < m.value) m = {wrap01(x), v};
  return m;
}

std::vector<DeltaEntry> dyadic_delta_table(const GridFunction& g) {
  std::vector<DeltaEntry> table;
  const auto n = g.size();
  for (std::size_t k = n / 2; k >= 1; k /= 2) {
    const double delta = static_cast<double>(k) / static_cast<double>(n);
    auto b = xi_star(g, delta, n);
    table.push_back({delta, b.value, b.error_bound, b.witness_x});
    if (table.size() >= 12) break;
  }
  return table;
}

}  // namespace

std::string to_string(EtaMethod m) {
  return m == EtaMethod::second_derivative ? "second_derivative" : "finite_difference";
}

EtaMode parse_eta_mode(const std::string& s) {
  if (s == "auto") return EtaMode::automatic;
  if (s == "second_derivative") return EtaMode::second_derivative;
  if (s == "finite_difference") return EtaMode::finite_difference;
  throw std::invalid_argument("unknown eta mode '" + s +
                              "' (expected auto|second_derivative|finite_difference)");
}

BoundedValue inf_of(const FunctionSpec& f, std::size_t grid_n) {
  auto eval = [&f](double x) { return f.eval(x); };
  const GridMin coarse = grid_min(eval, grid_n);
  const GridMin fine = refined_min(eval, grid_n);
  const double h = 1.0 / static_cast<double>(grid_n);
  const double floor_bound = coarse.value - f.lipschitz_bound() * h / 2.0;
  return {fine.value, std::max(0.0, fine.value - floor_bound), fine.x};
}

BoundedValue sup_of(const FunctionSpec& f, std::size_t grid_n) {
  auto neg = negate(f);
  BoundedValue b = inf_of(neg, grid_n);
  b.value = -b.value;
  return b;
}

ConvexityReport eta_second_derivative(const FunctionSpec& f, std::size_t grid_n) {
  if (f.smoothness() < 1)
    throw SpecError("eta: second-derivative route needs a C^1 spec with Lipschitz derivative");
  if (grid_n < 8) throw std::invalid_argument("eta: grid size must be at least 8");
  const FunctionSpec f2 = f.derivative().derivative();
  auto eval = [&f2](double x) { return f2.eval(x); };

  const GridMin fine = refined_min(eval, grid_n);
  const GridMin coarse = grid_min(eval, grid_n / 2);

  ConvexityReport rep;
  rep.method = EtaMethod::second_derivative;
  rep.grid_n = grid_n;
  rep.eta = std::max(0.0, -fine.value);
  // A posteriori: how much the minimum moved between N/2, N and refinement.
  rep.error_bound = rep.eta > 0.0 ? std::abs(coarse.value - fine.value) : 0.0;
  rep.witnesses.push_back({fine.x, 0.0, rep.eta});
  rep.delta_table = dyadic_delta_table(sample(f, grid_n));
  return rep;
}

ConvexityReport eta_finite_difference(const GridFunction& g, std::size_t min_steps) {
  const std::size_t n = g.size();
  if (n < 4) throw std::invalid_argument("eta: grid size must be at least 4");
  if (min_steps < 1 || min_steps > n / 2)
    throw std::invalid_argument("eta: min_delta_steps must lie in [1, N/2]");
  const auto v = g.values();
  const auto sn = static_cast<std::ptrdiff_t>(n);
  const double nn = static_cast<double>(n);

  ConvexityReport rep;
  rep.method = EtaMethod::finite_difference;
  rep.lower_bound = true;
  rep.grid_n = n;
  rep.min_delta_steps = min_steps;

  EtaWitness best{0.0, static_cast<double>(min_steps) / nn, 0.0};
  auto ratio_at = [&](std::size_t k, EtaWitness* w) {
    double worst = 0.0;
    std::ptrdiff_t arg = 0;
    const auto sk = static_cast<std::ptrdiff_t>(k);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
      const double xi = 2.0 * v[i] - v[(i + sk) % sn] - v[((i - sk) % sn + sn) % sn];
      if (xi > worst) {
        worst = xi;
        arg = i;
      }
    }
    const double delta = static_cast<double>(k) / nn;
    const double r = worst / (delta * delta);
    if (w && r > w->ratio) *w = {static_cast<double>(arg) / nn, delta, r};
    return r;
  };

  for (std::size_t k = min_steps; k <= n / 2; ++k) ratio_at(k, &best);
  rep.eta = best.ratio;
  rep.witnesses.push_back(best);

  // Ratios that keep doubling as delta halves indicate a concave kink.
  if (4 * min_steps <= n / 2) {
    const double r1 = ratio_at(min_steps, nullptr);
    const double r2 = ratio_at(2 * min_steps, nullptr);
    const double r4 = ratio_at(4 * min_steps, nullptr);
    rep.infinite = r1 > 0.0 && r1 >= 1.5 * r2 && r2 >= 1.5 * r4 && r4 > 0.0;
  }
  rep.delta_table = dyadic_delta_table(g);
  return rep;
}

ConvexityReport eta(const FunctionSpec& f, const EtaOptions& opt) {
  const bool smooth_enough = f.smoothness() >= 1;
  switch (opt.mode) {
    case EtaMode::second_derivative:
      return eta_second_derivative(f, opt.grid_n);
    case EtaMode::finite_difference:
      return eta_finite_difference(sample(f, opt.grid_n), opt.min_delta_steps);
    case EtaMode::automatic:
      break;
  }
  return smooth_enough ? eta_second_derivative(f, opt.grid_n)
                       : eta_finite_difference(sample(f, opt.grid_n), opt.min_delta_steps);
}

ConvexityReport eta(const GridFunction& g, const EtaOptions& opt) {
  if (opt.mode == EtaMode::second_derivative)
    throw std::invalid_argument("eta: grid functions have no symbolic second derivative");
  return eta_finite_difference(g, opt.min_delta_steps);
}

}  // namespace ergopt
