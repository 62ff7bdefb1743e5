#pragma once

// Seeded randomized property suites. Every suite is deterministic for a
// fixed seed and reports how many cases it ran and how many violated the
// property.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ergopt/torus_fn.hpp"

namespace ergopt {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  /// Smallest (allowed - observed) over all cases; negative on violation.
  double worst_slack = 0.0;
  std::string first_violation;

  bool ok() const { return violations == 0 && cases > 0; }
};

struct ValidationOptions {
  std::uint64_t seed = 20240611;
  std::size_t cases = 200;
};

/// Uniform double in [lo, hi) from the top 53 bits of one draw, so results
/// do not depend on the standard library's distributions.
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Sum of 1-3 scaled, translated cosines of frequency <= 4, sometimes with
/// a scaled translate of the -x^2 extremal. Always C^1 with Lipschitz
/// derivative.
FunctionSpec random_spec(std::mt19937_64& rng);

/// a (cos 2pi x + a3 cos 6pi x + a5 cos 10pi x), a > 0, with a3, a5 drawn
/// until the result passes check_class_B.
FunctionSpec random_class_B(std::mt19937_64& rng);

/// gamma(f + g) <= gamma(f) + gamma(g), gamma(max{f, g}) <= max, and
/// gamma(a f + b) = a gamma(f) for xi_point, xi_star and grid eta.
PropertyResult check_gamma_cone(const ValidationOptions& opt);
/// f <= h implies M_d f <= M_d h; M_d(f + c) = M_d f + c; d in {2, 3}.
PropertyResult check_transfer_laws(const ValidationOptions& opt);
/// xi*_delta(M_d f) <= xi*_{delta/d}(f), d in {2, 3}, delta in {1/8, 1/16}.
PropertyResult check_transfer_defect(const ValidationOptions& opt);
/// f'(x) - f'(x + delta) <= eta(f) delta, delta in {1/4, 1/2}.
PropertyResult check_derivative_bound(const ValidationOptions& opt);
/// Orbit closure, exact period and semicircle support for every reduced
/// p/q with q <= 50.
PropertyResult check_sturmian_orbits(const ValidationOptions& opt);
/// -2 (g(x) - g(x + 1/2)) <= bousch_lower_bound at n in {2, 3} for the
/// solved cosine pair.
PropertyResult check_bousch_inequality(const ValidationOptions& opt);
/// eval(x) = eval(x + 1) exactly at dyadic x; sampling at 2N keeps the
/// values at the old nodes.
PropertyResult check_periodicity(const ValidationOptions& opt);

std::vector<PropertyResult> run_property_suites(const ValidationOptions& opt = {});

}  // namespace ergopt
