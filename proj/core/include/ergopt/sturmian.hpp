#pragma once

// Sturmian measures of the doubling map and the antipodal-zero test on
//
//   R(x) = f(x) + g(x) - f(x + 1/2) - g(x + 1/2).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergopt/convexity.hpp"
#include "ergopt/torus_fn.hpp"

namespace ergopt {

/// The periodic Sturmian measure of rotation number p/q: uniform weights
/// on a doubling orbit of length q contained in a closed semicircle.
struct SturmianMeasure {
  int p = 0;
  int q = 1;
  std::string word;  ///< s_n = floor((n+1)p/q) - floor(np/q), n < q
  std::uint64_t denominator = 1;           ///< 2^q - 1
  std::vector<std::uint64_t> numerators;  ///< orbit in dynamical order
  std::vector<double> orbit;
  /// Closed arc [semicircle_start, semicircle_start + 1/2] holding the orbit.
  double semicircle_start = 0.0;
  /// Length of the smallest arc containing the orbit (<= 1/2).
  double span = 0.0;

  double weight() const { return 1.0 / q; }
};

inline constexpr int kMaxSturmianDenominator = 62;

/// Throws std::invalid_argument unless 0 <= p < q (or p/q = 0/1),
/// gcd(p, q) = 1 and q <= 62.
SturmianMeasure sturmian_measure(int p, int q);

template <TorusFunction F>
double integrate(const SturmianMeasure& mu, const F& f) {
  double acc = 0.0;
  for (double x : mu.orbit) acc += f.eval(x);
  return acc / static_cast<double>(mu.q);
}

/// Every reduced p/q with q <= max_q, ordered by q then p.
std::vector<std::pair<int, int>> reduced_fractions(int max_q);

struct BestSturmian {
  SturmianMeasure measure;
  double value = 0.0;
};

/// Largest Sturmian integral over denominators <= max_q; ties keep the
/// first in (q, p) order.
template <TorusFunction F>
BestSturmian best_sturmian(const F& f, int max_q) {
  if (max_q < 1) throw std::invalid_argument("best_sturmian: Q must be at least 1");
  BestSturmian best{sturmian_measure(0, 1), -std::numeric_limits<double>::infinity()};
  for (auto [p, q] : reduced_fractions(max_q)) {
    auto mu = sturmian_measure(p, q);
    const double v = integrate(mu, f);
    if (v > best.value) best = {std::move(mu), v};
  }
  return best;
}

/// Node-exact R; antisymmetric by construction. Throws for odd N or
/// mismatched sizes.
GridFunction compute_R(const FunctionSpec& f, const GridFunction& g);
GridFunction compute_R(const GridFunction& f, const GridFunction& g);

enum class CertificateStatus { pass, fail, inconclusive };
std::string to_string(CertificateStatus s);

/// A maximal arc of nodes with |R| <= epsilon, or a sign change between
/// two adjacent nodes outside the band.
struct ZeroArc {
  double start = 0.0;
  double width = 0.0;
  double zero = 0.0;  ///< estimated zero location
};

struct Arc {
  double start = 0.0;
  double width = 0.0;
};

struct SturmianCertificate {
  GridFunction R;
  std::vector<ZeroArc> zero_set_arcs;
  CertificateStatus status = CertificateStatus::fail;
  bool pass = false;
  std::optional<std::pair<double, double>> antipodal_pair;
  Arc positivity_arc;
  double epsilon_R = 0.0;
  double w_max = 0.0;
  /// min of |R| - epsilon_R over nodes farther than w_max from every zero
  /// arc; -inf when no such node exists.
  double margin = -std::numeric_limits<double>::infinity();
  std::string note;
};

/// 10 * (Lip f + Lip g) / N.
double default_epsilon_R(double lip_f, double lip_g, std::size_t n);
/// 64 / N.
double default_w_max(std::size_t n);

/// Never throws on the shape of R: an R that is not antisymmetric within
/// 1e-12 fails with a note.
SturmianCertificate sturmian_certificate(const GridFunction& R, double epsilon_R, double w_max);

struct BouschBound {
  double bound = 0.0;
  double branch_sum = 0.0;  ///< the max over preimage branches
  double xi_star_g = 0.0;   ///< xi*_{2^-n}(g) on the grid of g
  std::size_t best_branch = 0;
};

/// Right-hand side of
///   -2 (g(x) - g(x + 1/2)) <= max_{y in T^-(n-1)(x + 1/2)}
///        sum_{k=2}^{n} xi_{2^-k}^{T^{n-k} y}(f) + xi*_{2^-n}(g)
/// for the doubling map. Requires 2 <= n <= 20.
BouschBound bousch_lower_bound(const FunctionSpec& f, const GridFunction& g, double x, int n);

}  // namespace ergopt
