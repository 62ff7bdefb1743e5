#include "ergopt/torus_fn.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ergopt {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// cos(2*pi*t) with quadrant reduction so quarter-period values come out
// exact.
double cos_turns(double t) {
  t = wrap01(t);
  const double q = std::round(4.0 * t);
  const double r = kTwoPi * (t - 0.25 * q);
  switch (static_cast<int>(q) % 4) {
    case 0: return std::cos(r);
    case 1: return -std::sin(r);
    case 2: return -std::cos(r);
    default: return std::sin(r);
  }
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k)
    d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

double piece_length(const PiecewisePolyNode& p, std::size_t j) {
  const auto n = p.breaks.size();
  return (j + 1 < n ? p.breaks[j + 1] : p.breaks[0] + 1.0) - p.breaks[j];
}

// Highest m such that the derivatives of order 0..m agree across every join.
int measure_join_smoothness(const PiecewisePolyNode& p) {
  const auto n = p.breaks.size();
  std::size_t max_deg = 0;
  double scale = 1.0;
  for (const auto& c : p.coeffs) {
    max_deg = std::max(max_deg, c.size() - 1);
    for (double v : c) scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-9 * scale;
  int level = kAnalytic;
  for (std::size_t j = 0; j < n; ++j) {
    auto left = p.coeffs[j];
    auto right = p.coeffs[(j + 1) % n];
    const double len = piece_length(p, j);
    int join = kAnalytic;
    for (std::size_t m = 0; m <= max_deg; ++m) {
      if (std::abs(horner(left, len) - horner(right, 0.0)) > tol) {
        join = static_cast<int>(m) - 1;
        break;
      }
      left = poly_derivative(left);
      right = poly_derivative(right);
    }
    level = std::min(level, join);
  }
  return level;
}

double eval_pwpoly(const PiecewisePolyNode& p, double x) {
  x = wrap01(x);
  const auto& b = p.breaks;
  auto it = std::upper_bound(b.begin(), b.end(), x);
  if (it == b.begin()) {
    const auto last = b.size() - 1;
    return horner(p.coeffs[last], x + 1.0 - b[last]);
  }
  const auto j = static_cast<std::size_t>(it - b.begin()) - 1;
  return horner(p.coeffs[j], x - b[j]);
}

// Crude bound sum_k |c_k| t^k for t in [0, len].
double poly_abs_bound(const std::vector<double>& c, double len) {
  double bound = 0.0, power = 1.0;
  for (double ck : c) {
    bound += std::abs(ck) * power;
    power *= len;
  }
  return bound;
}

// sup |p'| on local [lo, hi]: sampled maximum plus the sampling slack
// sup|p''| * spacing / 2, never above the crude bound.
double derivative_sup(const std::vector<double>& c, double lo, double hi) {
  const auto d1 = poly_derivative(c);
  const auto d2 = poly_derivative(d1);
  constexpr int kSamples = 64;
  double m = 0.0;
  for (int k = 0; k <= kSamples; ++k)
    m = std::max(m, std::abs(horner(d1, lo + (hi - lo) * k / kSamples)));
  const double slack = poly_abs_bound(d2, hi) * (hi - lo) / (2.0 * kSamples);
  return std::min(m + slack, poly_abs_bound(d1, hi));
}

// Lipschitz bound of a continuous piecewise polynomial on [lo, hi] in [0, 1].
double pwpoly_lipschitz(const PiecewisePolyNode& p, double lo = 0.0, double hi = 1.0) {
  double lip = 0.0;
  const auto n = p.coeffs.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double start = p.breaks[j];
    const double end = start + piece_length(p, j);
    // The piece covers [start, end); for the last piece, end may pass 1 and
    // wrap onto [0, breaks[0]).
    for (double shift : {0.0, 1.0}) {
      const double a = std::max(start, lo + shift);
      const double b = std::min(end, hi + shift);
      if (a < b) lip = std::max(lip, derivative_sup(p.coeffs[j], a - start, b - start));
    }
  }
  return lip;
}

// Lipschitz bound of the half profile on [0, 1/2], the only part an
// antisymmetric extension evaluates.
double half_lipschitz(const FunctionSpec& half) {
  if (const auto* p = std::get_if<PiecewisePolyNode>(&half.node().value))
    return pwpoly_lipschitz(*p, 0.0, 0.5);
  return half.lipschitz_bound();
}

int antisymmetric_smoothness(const AntisymmetricExtensionNode& a) {
  const int inner = a.half.smoothness();
  if (inner < 0) return kDiscontinuous;
  const double h0 = a.half.eval(0.0);
  const double hh = a.half.eval(0.5);
  const double scale = std::max({1.0, std::abs(h0), std::abs(hh), std::abs(a.v)});
  if (std::abs(h0 + hh - 2.0 * a.v) > 1e-9 * scale) return kDiscontinuous;
  // k-th derivative glue: h^(k)(0) + h^(k)(1/2) = 0.
  const int checked = std::min(inner, 3);
  FunctionSpec d = a.half;
  for (int k = 1; k <= checked; ++k) {
    d = d.derivative();
    const double d0 = d.eval(0.0);
    const double dh = d.eval(0.5);
    const double s = std::max({1.0, std::abs(d0), std::abs(dh)});
    if (std::abs(d0 + dh) > 1e-9 * s) return k - 1;
  }
  return inner;
}

}  // namespace

FunctionSpec::FunctionSpec(std::shared_ptr<const SpecNode> node)
    : node_(std::move(node)) {
  std::visit(
      overloaded{
          [&](const CosineNode& c) {
            smoothness_ = kAnalytic;
            lipschitz_ = kTwoPi * std::abs(c.frequency);
          },
          [&](const PiecewisePolyNode& p) {
            smoothness_ = measure_join_smoothness(p);
            lipschitz_ = smoothness_ < 0 ? std::numeric_limits<double>::infinity()
                                         : pwpoly_lipschitz(p);
          },
          [&](const SumNode& s) {
            smoothness_ = kAnalytic;
            lipschitz_ = 0.0;
            for (const auto& t : s.terms) {
              smoothness_ = std::min(smoothness_, t.smoothness());
              lipschitz_ += t.lipschitz_bound();
            }
          },
          [&](const ScaleNode& s) {
            smoothness_ = s.inner.smoothness();
            lipschitz_ = s.factor == 0.0 ? 0.0 : std::abs(s.factor) * s.inner.lipschitz_bound();
          },
          [&](const TranslateNode& t) {
            smoothness_ = t.inner.smoothness();
            lipschitz_ = t.inner.lipschitz_bound();
          },
          [&](const NegateNode& n) {
            smoothness_ = n.inner.smoothness();
            lipschitz_ = n.inner.lipschitz_bound();
          },
          [&](const AntisymmetricExtensionNode& a) {
            smoothness_ = antisymmetric_smoothness(a);
            lipschitz_ = smoothness_ < 0 ? std::numeric_limits<double>::infinity()
                                         : half_lipschitz(a.half);
          },
      },
      node_->value);
}

FunctionSpec make_spec(SpecNode node) {
  return FunctionSpec(std::make_shared<const SpecNode>(std::move(node)));
}

double FunctionSpec::eval(double x) const {
  return std::visit(
      overloaded{
          [&](const CosineNode& c) {
            return cos_turns(static_cast<double>(c.frequency) * wrap01(x) + c.phase);
          },
          [&](const PiecewisePolyNode& p) { return eval_pwpoly(p, x); },
          [&](const SumNode& s) {
            double acc = 0.0;
            for (const auto& t : s.terms) acc += t.eval(x);
            return acc;
          },
          [&](const ScaleNode& s) { return s.factor * s.inner.eval(x); },
          [&](const TranslateNode& t) { return t.inner.eval(wrap01(x) - t.omega); },
          [&](const NegateNode& n) { return -n.inner.eval(x); },
          [&](const AntisymmetricExtensionNode& a) {
            const double u = wrap01(x);
            return u < 0.5 ? a.half.eval(u) : 2.0 * a.v - a.half.eval(u - 0.5);
          },
      },
      node_->value);
}

FunctionSpec FunctionSpec::derivative() const {
  if (smoothness_ < 0)
    throw SpecError("derivative of a discontinuous " + kind() + " node is undefined");
  return std::visit(
      overloaded{
          [](const CosineNode& c) {
            // d/dx cos(2 pi (kx + p)) = 2 pi k cos(2 pi (kx + p + 1/4))
            return scale(kTwoPi * c.frequency, cosine(c.frequency, wrap01(c.phase + 0.25)));
          },
          [](const PiecewisePolyNode& p) {
            std::vector<std::vector<double>> d;
            d.reserve(p.coeffs.size());
            for (const auto& c : p.coeffs) d.push_back(poly_derivative(c));
            return piecewise_poly(p.breaks, std::move(d));
          },
          [](const SumNode& s) {
            std::vector<FunctionSpec> terms;
            terms.reserve(s.terms.size());
            for (const auto& t : s.terms) terms.push_back(t.derivative());
            return sum(std::move(terms));
          },
          [](const ScaleNode& s) { return scale(s.factor, s.inner.derivative()); },
          [](const TranslateNode& t) { return translate(t.omega, t.inner.derivative()); },
          [](const NegateNode& n) { return negate(n.inner.derivative()); },
          [](const AntisymmetricExtensionNode& a) {
            return antisymmetric_extension(a.half.derivative(), 0.0);
          },
      },
      node_->value);
}

std::string FunctionSpec::kind() const {
  return std::visit(overloaded{
                        [](const CosineNode&) { return std::string("cos"); },
                        [](const PiecewisePolyNode&) { return std::string("pwpoly"); },
                        [](const SumNode&) { return std::string("sum"); },
                        [](const ScaleNode&) { return std::string("scale"); },
                        [](const TranslateNode&) { return std::string("translate"); },
                        [](const NegateNode&) { return std::string("negate"); },
                        [](const AntisymmetricExtensionNode&) { return std::string("antisym"); },
                    },
                    node_->value);
}

FunctionSpec cosine(int frequency, double phase) {
  if (frequency <= 0) throw SpecError("cos: frequency must be a positive integer");
  if (!std::isfinite(phase)) throw SpecError("cos: phase must be finite");
  return make_spec(SpecNode{CosineNode{frequency, phase}});
}

FunctionSpec piecewise_poly(std::vector<double> breaks,
                            std::vector<std::vector<double>> coeffs,
                            std::optional<int> declared) {
  if (breaks.empty()) throw SpecError("pwpoly: at least one breakpoint is required");
  if (coeffs.size() != breaks.size())
    throw SpecError("pwpoly: need one coefficient list per breakpoint");
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    if (!(breaks[j] >= 0.0 && breaks[j] < 1.0))
      throw SpecError("pwpoly: breakpoints must lie in [0, 1)");
    if (j > 0 && !(breaks[j] > breaks[j - 1]))
      throw SpecError("pwpoly: breakpoints must be strictly increasing");
    if (coeffs[j].empty()) throw SpecError("pwpoly: empty coefficient list");
    for (double c : coeffs[j])
      if (!std::isfinite(c)) throw SpecError("pwpoly: non-finite coefficient");
  }
  PiecewisePolyNode node{std::move(breaks), std::move(coeffs)};
  auto spec = make_spec(SpecNode{std::move(node)});
  if (declared && spec.smoothness() < *declared) {
    std::ostringstream os;
    os << "pwpoly: declared C" << *declared << " but pieces only join with smoothness "
       << spec.smoothness();
    throw SpecError(os.str());
  }
  return spec;
}

FunctionSpec constant(double c) { return piecewise_poly({0.0}, {{c}}); }

FunctionSpec sum(std::vector<FunctionSpec> terms) {
  if (terms.empty()) throw SpecError("sum: needs at least one term");
  return make_spec(SpecNode{SumNode{std::move(terms)}});
}

FunctionSpec scale(double factor, FunctionSpec inner) {
  if (!std::isfinite(factor)) throw SpecError("scale: factor must be finite");
  return make_spec(SpecNode{ScaleNode{factor, std::move(inner)}});
}

FunctionSpec translate(double omega, FunctionSpec inner) {
  if (!std::isfinite(omega)) throw SpecError("translate: omega must be finite");
  return make_spec(SpecNode{TranslateNode{wrap01(omega), std::move(inner)}});
}

FunctionSpec negate(FunctionSpec inner) {
  return make_spec(SpecNode{NegateNode{std::move(inner)}});
}

FunctionSpec antisymmetric_extension(FunctionSpec half, double v) {
  if (!std::isfinite(v)) throw SpecError("antisym: v must be finite");
  return make_spec(SpecNode{AntisymmetricExtensionNode{std::move(half), v}});
}

FunctionSpec close_profile(std::vector<double> breaks, std::vector<std::vector<double>> coeffs,
                           double end) {
  if (breaks.empty() || breaks.size() != coeffs.size())
    throw SpecError("close_profile: need one coefficient list per breakpoint");
  if (!(end > breaks.back() && end < breaks.front() + 1.0))
    throw SpecError("close_profile: end must follow the last breakpoint");
  const double t_end = end - breaks.back();
  const double y0 = horner(coeffs.back(), t_end);
  const double m0 = horner(poly_derivative(coeffs.back()), t_end);
  const double y1 = horner(coeffs.front(), 0.0);
  const double m1 = horner(poly_derivative(coeffs.front()), 0.0);
  const double len = breaks.front() + 1.0 - end;
  const double c2 = (3.0 * (y1 - y0) - (2.0 * m0 + m1) * len) / (len * len);
  const double c3 = (2.0 * (y0 - y1) + (m0 + m1) * len) / (len * len * len);
  breaks.push_back(end);
  coeffs.push_back({y0, m0, c2, c3});
  return piecewise_poly(std::move(breaks), std::move(coeffs));
}

FunctionSpec neg_square_extremal() {
  // Half profile on [0, 1/2]: -x^2 up to 1/4, then -1/8 + (1/2 - x)^2.
  // The piece on [1/2, 1) is a cubic Hermite return to (0, 0) so the
  // profile is itself periodic C^1; the extension never evaluates it.
  auto half = piecewise_poly({0.0, 0.25, 0.5},
                             {{0.0, 0.0, -1.0},
                              {-1.0 / 16.0, -0.5, 1.0},
                              {-1.0 / 8.0, 0.0, 1.5, -2.0}},
                             1);
  return antisymmetric_extension(std::move(half), -1.0 / 16.0);
}

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("GridFunction: empty value array");
}

double GridFunction::eval(double x) const {
  const auto n = static_cast<double>(size());
  const double u = wrap01(x) * n;
  const double fl = std::floor(u);
  const double frac = u - fl;
  const auto i = static_cast<std::ptrdiff_t>(fl);
  constexpr double snap = 1e-9;
  if (frac < snap) return at(i);
  if (frac > 1.0 - snap) return at(i + 1);
  return (1.0 - frac) * at(i) + frac * at(i + 1);
}

double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::lipschitz() const {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(size());
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(at(i + 1) - at(i)));
  return m * static_cast<double>(n);
}

GridFunction sample(const FunctionSpec& f, std::size_t n) {
  if (n < 4) throw std::invalid_argument("sample: grid size must be at least 4");
  return sample_fn([&f](double x) { return f.eval(x); }, n);
}

GridFunction grid_derivative(const GridFunction& g, DiffSide side) {
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  if (n < 4) throw std::invalid_argument("grid_derivative: grid size must be at least 4");
  const double inv_h = static_cast<double>(n);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    switch (side) {
      case DiffSide::right: d[i] = (g.at(i + 1) - g.at(i)) * inv_h; break;
      case DiffSide::left: d[i] = (g.at(i) - g.at(i - 1)) * inv_h; break;
      case DiffSide::central: d[i] = (g.at(i + 1) - g.at(i - 1)) * 0.5 * inv_h; break;
    }
  }
  return GridFunction(std::move(d));
}

double default_jump_threshold(const GridFunction& g) {
  return 10.0 * g.lipschitz() / static_cast<double>(g.size());
}

OneSidedDerivativeReport one_sided_derivative_report(const GridFunction& g,
                                                     std::optional<double> jump_threshold) {
  OneSidedDerivativeReport rep;
  rep.jump_threshold = jump_threshold.value_or(default_jump_threshold(g));
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  const double inv_h = static_cast<double>(n);
  rep.most_negative_jump = std::numeric_limits<double>::infinity();
  double prev_central = (g.at(0) - g.at(-2)) * 0.5 * inv_h;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double right = (g.at(i + 1) - g.at(i)) * inv_h;
    const double left = (g.at(i) - g.at(i - 1)) * inv_h;
    const double jump = right - left;
    rep.most_negative_jump = std::min(rep.most_negative_jump, jump);
    if (jump > rep.jump_threshold)
      rep.jumps.push_back({static_cast<std::size_t>(i), g.node(i), right, left, jump});
    const double central = 0.5 * (right + left);
    rep.total_variation += std::abs(central - prev_central);
    prev_central = central;
  }
  return rep;
}

}  // namespace ergopt
