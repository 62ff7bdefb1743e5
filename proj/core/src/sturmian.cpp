#include "ergopt/sturmian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ergopt {

SturmianMeasure sturmian_measure(int p, int q) {
  if (q < 1 || q > kMaxSturmianDenominator)
    throw std::invalid_argument("sturmian_measure: q must lie in [1, 62]");
  if (p < 0 || p >= q)
    throw std::invalid_argument("sturmian_measure: need 0 <= p < q");
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("sturmian_measure: " + std::to_string(p) + "/" +
                                std::to_string(q) + " is not in lowest terms");

  SturmianMeasure mu;
  mu.p = p;
  mu.q = q;
  mu.denominator = (std::uint64_t{1} << q) - 1;
  std::uint64_t x = 0;
  for (int n = 0; n < q; ++n) {
    const auto s = static_cast<std::uint64_t>((static_cast<std::int64_t>(n + 1) * p) / q -
                                              (static_cast<std::int64_t>(n) * p) / q);
    mu.word.push_back(s ? '1' : '0');
    x = (x << 1) | s;
  }
  if (mu.denominator == 1) x = 0;  // q = 1: the fixed point 0
  mu.numerators.reserve(q);
  mu.orbit.reserve(q);
  for (int n = 0; n < q; ++n) {
    mu.numerators.push_back(x);
    mu.orbit.push_back(static_cast<double>(x) / static_cast<double>(mu.denominator));
    x = (x << 1) % mu.denominator;
  }

  // Smallest enclosing arc: complement of the largest circular gap.
  std::vector<std::uint64_t> sorted = mu.numerators;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t best_gap = sorted.front() + mu.denominator - sorted.back();
  std::size_t start = 0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const std::uint64_t gap = sorted[i] - sorted[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      start = i;
    }
  }
  const std::uint64_t span = mu.denominator - best_gap;
  mu.semicircle_start = static_cast<double>(sorted[start]) / static_cast<double>(mu.denominator);
  mu.span = static_cast<double>(span) / static_cast<double>(mu.denominator);
  if (q == 1) mu.span = 0.0;
  if (2 * span > mu.denominator)
    throw std::logic_error("sturmian_measure: orbit does not fit in a semicircle");
  return mu;
}

std::vector<std::pair<int, int>> reduced_fractions(int max_q) {
  std::vector<std::pair<int, int>> out{{0, 1}};
  for (int q = 2; q <= std::min(max_q, kMaxSturmianDenominator); ++q)
    for (int p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  return out;
}

namespace {

GridFunction antisymmetric_difference(std::span<const double> f, const GridFunction& g) {
  const std::size_t n = g.size();
  if (n % 2 != 0) throw std::invalid_argument("compute_R: grid size must be even");
  if (f.size() != n) throw std::invalid_argument("compute_R: grid sizes differ");
  std::vector<double> a(n), r(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = f[i] + g.values()[i];
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    r[i] = a[i] - a[i + half];
    r[i + half] = -r[i];
  }
  return GridFunction(std::move(r));
}

}  // namespace

GridFunction compute_R(const FunctionSpec& f, const GridFunction& g) {
  if (g.size() % 2 != 0) throw std::invalid_argument("compute_R: grid size must be even");
  const auto fs = sample(f, g.size());
  return antisymmetric_difference(fs.values(), g);
}

GridFunction compute_R(const GridFunction& f, const GridFunction& g) {
  return antisymmetric_difference(f.values(), g);
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::pass: return "pass";
    case CertificateStatus::fail: return "fail";
    case CertificateStatus::inconclusive: return "inconclusive";
  }
  return "fail";
}

double default_epsilon_R(double lip_f, double lip_g, std::size_t n) {
  return 10.0 * (lip_f + lip_g) / static_cast<double>(n);
}

double default_w_max(std::size_t n) { return 64.0 / static_cast<double>(n); }

SturmianCertificate sturmian_certificate(const GridFunction& R, double epsilon_R, double w_max) {
  const std::size_t n = R.size();
  if (n % 2 != 0) throw std::invalid_argument("sturmian_certificate: grid size must be even");
  const auto v = R.values();
  bool antisymmetric = true;
  for (std::size_t i = 0; i < n / 2; ++i)
    if (std::abs(v[i] + v[i + n / 2]) > 1e-12 * (1.0 + std::abs(v[i]))) antisymmetric = false;

  SturmianCertificate cert;
  cert.R = R;
  cert.epsilon_R = epsilon_R;
  cert.w_max = w_max;
  const double h = 1.0 / static_cast<double>(n);

  // Slots 2i are nodes, 2i+1 the edges (i, i+1).
  const std::size_t slots = 2 * n;
  std::vector<char> mark(slots, 0);
  auto near_zero = [&](std::size_t i) { return std::abs(v[i % n]) <= epsilon_R; };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    mark[2 * i] = near_zero(i);
    const bool both = near_zero(i) && near_zero(j);
    const bool crossing = !near_zero(i) && !near_zero(j) && (v[i] > 0) != (v[j] > 0);
    mark[2 * i + 1] = both || crossing;
  }

  if (std::all_of(mark.begin(), mark.end(), [](char c) { return c != 0; })) {
    cert.zero_set_arcs.push_back({0.0, 1.0, 0.0});
    cert.status = CertificateStatus::fail;
    cert.note = "R vanishes on the whole circle";
    return cert;
  }

  // Walk runs starting just after an unmarked slot.
  std::size_t origin = 0;
  while (mark[origin]) ++origin;
  std::vector<std::pair<std::size_t, std::size_t>> runs;  // first slot, length
  for (std::size_t s = 1; s <= slots; ++s) {
    const std::size_t slot = (origin + s) % slots;
    if (!mark[slot]) continue;
    if (!runs.empty() && (runs.back().first + runs.back().second) % slots == slot)
      ++runs.back().second;
    else
      runs.emplace_back(slot, 1);
  }

  for (auto [first, len] : runs) {
    const std::size_t last = first + len - 1;
    // Node slot 2i sits at i*h; edge slot 2i+1 spans [i*h, (i+1)*h].
    const double lo = static_cast<double>(first / 2) * h;
    const double hi = static_cast<double>(last / 2) * h + (last % 2 == 1 ? h : 0.0);
    ZeroArc arc{wrap01(lo), hi - lo, 0.0};
    if (len == 1 && first % 2 == 1) {
      const std::size_t i = first / 2;
      const double a = v[i], b = v[(i + 1) % n];
      arc.zero = wrap01(lo + h * a / (a - b));
    } else {
      arc.zero = wrap01(lo + 0.5 * (hi - lo));
    }
    cert.zero_set_arcs.push_back(arc);
  }

  // Margin away from the zero arcs.
  auto circ_dist = [](double a, double b) {
    const double d = std::abs(wrap01(a - b));
    return std::min(d, 1.0 - d);
  };
  double margin = std::numeric_limits<double>::infinity();
  bool any_far = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * h;
    bool far = true;
    for (const auto& a : cert.zero_set_arcs) {
      const double d = std::min({circ_dist(x, a.start), circ_dist(x, a.start + a.width),
                                 circ_dist(x, a.zero)});
      const bool inside = wrap01(x - a.start) <= a.width;
      if (inside || d <= w_max) {
        far = false;
        break;
      }
    }
    if (far) {
      any_far = true;
      margin = std::min(margin, std::abs(v[i]) - epsilon_R);
    }
  }
  if (any_far) cert.margin = margin;

  // Longest run of nodes with R > epsilon.
  {
    std::size_t best_start = 0, best_len = 0;
    std::size_t k = 0;
    while (k < n && v[k] > epsilon_R) ++k;  // start scanning after a break
    for (std::size_t s = 1; s <= n; ++s) {
      const std::size_t i = (k + s) % n;
      if (v[i] > epsilon_R) {
        std::size_t len = 0;
        std::size_t j = i;
        while (len < n && v[j] > epsilon_R) {
          ++len;
          j = (j + 1) % n;
        }
        if (len > best_len) {
          best_len = len;
          best_start = i;
        }
        s += len;
      }
    }
    if (best_len > 0)
      cert.positivity_arc = {static_cast<double>(best_start) * h,
                             static_cast<double>(best_len - 1) * h};
  }

  const auto& arcs = cert.zero_set_arcs;
  if (arcs.size() != 2) {
    cert.status = CertificateStatus::fail;
    cert.note = std::to_string(arcs.size()) + " zero arcs";
    if (!antisymmetric) cert.note += "; R is not antisymmetric";
    return cert;
  }
  if (!antisymmetric) {
    cert.status = CertificateStatus::fail;
    cert.note = "R is not antisymmetric";
    return cert;
  }
  const double sep = circ_dist(arcs[0].zero, arcs[1].zero + 0.5);
  if (sep > h + 1e-12) {
    cert.status = CertificateStatus::fail;
    cert.note = "zero arcs are not antipodal";
    return cert;
  }
  const double x0 = arcs[0].zero < 0.5 ? arcs[0].zero : arcs[1].zero;
  cert.antipodal_pair = std::make_pair(x0, x0 + 0.5);
  if (arcs[0].width > w_max || arcs[1].width > w_max) {
    cert.status = CertificateStatus::inconclusive;
    cert.note = "single antipodal pair, but zero band wider than w_max at this N";
    return cert;
  }
  cert.status = CertificateStatus::pass;
  cert.pass = true;
  return cert;
}

BouschBound bousch_lower_bound(const FunctionSpec& f, const GridFunction& g, double x, int n) {
  if (n < 2) throw std::invalid_argument("bousch_lower_bound: n must be at least 2");
  if (n > 20) throw std::invalid_argument("bousch_lower_bound: n > 20 enumerates too many branches");
  const std::size_t branches = std::size_t{1} << (n - 1);
  BouschBound out;
  out.branch_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < branches; ++j) {
    double s = 0.0;
    for (int k = 2; k <= n; ++k) {
      // T^{n-k} y = (x + 1/2 + j) / 2^{k-1} mod 1
      const double pt = wrap01((x + 0.5 + static_cast<double>(j)) / std::ldexp(1.0, k - 1));
      s += xi_point(f, pt, std::ldexp(1.0, -k));
    }
    if (s > out.branch_sum) {
      out.branch_sum = s;
      out.best_branch = j;
    }
  }
  out.xi_star_g = xi_star(g, std::ldexp(1.0, -n), g.size()).value;
  out.bound = out.branch_sum + out.xi_star_g;
  return out;
}

}  // namespace ergopt
