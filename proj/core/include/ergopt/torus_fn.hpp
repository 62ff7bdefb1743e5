#pragma once

// Real-valued functions on the circle T = R/Z.
//
// FunctionSpec is an immutable closed-form expression tree with exact
// evaluation and exact symbolic derivatives. GridFunction is a uniform
// N-point sampling with periodic linear interpolation.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ergopt {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Number of continuous derivatives. kDiscontinuous marks a jump in the
/// function itself; kAnalytic stands in for "all of them".
inline constexpr int kDiscontinuous = -1;
inline constexpr int kAnalytic = 1000;

/// Thrown for malformed or unsupported function descriptions.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduces x to [0, 1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

struct SpecNode;

class FunctionSpec {
 public:
  /// Evaluates at x, reduced mod 1.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  /// Exact symbolic derivative. Throws SpecError for discontinuous input.
  FunctionSpec derivative() const;

  int smoothness() const { return smoothness_; }

  /// Upper bound on the Lipschitz constant (sup |f'|); +inf when
  /// discontinuous.
  double lipschitz_bound() const { return lipschitz_; }

  const SpecNode& node() const { return *node_; }
  std::string kind() const;

 private:
  friend FunctionSpec make_spec(SpecNode node);
  explicit FunctionSpec(std::shared_ptr<const SpecNode> node);

  std::shared_ptr<const SpecNode> node_;
  int smoothness_ = kAnalytic;
  double lipschitz_ = 0.0;
};

/// cos(2*pi*(frequency*x + phase)); phase is measured in turns.
struct CosineNode {
  int frequency = 1;
  double phase = 0.0;
};

/// Piece j covers [breaks[j], breaks[j+1]) and the last piece wraps to
/// breaks[0] + 1. Coefficients are in the local variable t = x - breaks[j],
/// lowest degree first. A piece evaluates with its right neighbour's value
/// at a shared breakpoint.
struct PiecewisePolyNode {
  std::vector<double> breaks;
  std::vector<std::vector<double>> coeffs;
};

struct SumNode {
  std::vector<FunctionSpec> terms;
};

struct ScaleNode {
  double factor = 1.0;
  FunctionSpec inner;
};

/// x -> inner(x - omega).
struct TranslateNode {
  double omega = 0.0;
  FunctionSpec inner;
};

struct NegateNode {
  FunctionSpec inner;
};

/// half on [0, 1/2), extended by f(x + 1/2) = 2v - f(x).
struct AntisymmetricExtensionNode {
  FunctionSpec half;
  double v = 0.0;
};

struct SpecNode {
  std::variant<CosineNode, PiecewisePolyNode, SumNode, ScaleNode, TranslateNode,
               NegateNode, AntisymmetricExtensionNode>
      value;
};

FunctionSpec make_spec(SpecNode node);

FunctionSpec cosine(int frequency, double phase = 0.0);
/// Smoothness is measured from the joins. When `declared` is given, joins
/// that fall short of it are rejected with SpecError.
FunctionSpec piecewise_poly(std::vector<double> breaks,
                            std::vector<std::vector<double>> coeffs,
                            std::optional<int> declared = std::nullopt);
FunctionSpec constant(double c);
FunctionSpec sum(std::vector<FunctionSpec> terms);
FunctionSpec scale(double factor, FunctionSpec inner);
FunctionSpec translate(double omega, FunctionSpec inner);
FunctionSpec negate(FunctionSpec inner);
FunctionSpec antisymmetric_extension(FunctionSpec half, double v);

/// Piecewise polynomial given on [breaks[0], end], closed into a periodic
/// C^1 function by a cubic Hermite piece on [end, breaks[0] + 1). Used for
/// profiles that only matter on a sub-interval.
FunctionSpec close_profile(std::vector<double> breaks, std::vector<std::vector<double>> coeffs,
                           double end);

/// The class-B observable equal to -x^2 on [0, 1/4], even, with
/// f(x) + f(x + 1/2) = -1/8. It is C^1 with f'' = -2 on (-1/4, 1/4) and +2
/// elsewhere.
FunctionSpec neg_square_extremal();

/// Uniform periodic sampling value[i] = f(i/N).
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double node(std::ptrdiff_t i) const {
    return static_cast<double>(i) / static_cast<double>(size());
  }
  /// Periodic index access.
  double at(std::ptrdiff_t i) const {
    auto n = static_cast<std::ptrdiff_t>(size());
    auto r = i % n;
    return values_[static_cast<std::size_t>(r < 0 ? r + n : r)];
  }
  std::span<const double> values() const { return values_; }

  /// Linear interpolation; exact at grid nodes.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  double max() const;
  double min() const;
  /// max |value[i+1] - value[i]| * N.
  double lipschitz() const;

 private:
  std::vector<double> values_;
};

template <class F>
concept TorusFunction = requires(const F& f, double x) {
  { f.eval(x) } -> std::convertible_to<double>;
};

inline double lipschitz_of(const FunctionSpec& f) { return f.lipschitz_bound(); }
inline double lipschitz_of(const GridFunction& g) { return g.lipschitz(); }

GridFunction sample(const FunctionSpec& f, std::size_t n);

template <class F>
  requires std::invocable<const F&, double>
GridFunction sample_fn(const F& f, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = f(static_cast<double>(i) / static_cast<double>(n));
  return GridFunction(std::move(v));
}

enum class DiffSide { left, right, central };

/// Difference quotients at spacing 1/N.
GridFunction grid_derivative(const GridFunction& g, DiffSide side);

struct DerivativeJump {
  std::size_t index = 0;
  double x = 0.0;
  double right = 0.0;  ///< forward difference quotient
  double left = 0.0;   ///< backward difference quotient
  double magnitude = 0.0;
};

struct OneSidedDerivativeReport {
  std::vector<DerivativeJump> jumps;
  double jump_threshold = 0.0;
  /// Most negative right-minus-left difference over all nodes.
  double most_negative_jump = 0.0;
  double total_variation = 0.0;  ///< of the central difference quotients
};

/// Default kink threshold 10 * Lip(g) / N.
double default_jump_threshold(const GridFunction& g);

OneSidedDerivativeReport one_sided_derivative_report(
    const GridFunction& g, std::optional<double> jump_threshold = std::nullopt);

}  // namespace ergopt
