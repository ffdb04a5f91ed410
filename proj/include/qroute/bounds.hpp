#pragma once

// Vertex expansion, routing-time lower bounds, BFS horizons and spectral
// quantities. Logarithms are base 2 throughout.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qroute/graph.hpp"
#include "qroute/rational.hpp"

namespace qroute {

/// Raised when an exact computation would exceed its size cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kMaxExactExpansionVertices = 24;

/// |δX| / min(|X|, |V \ X|) for a nonempty proper subset X.
inline Rational cut_ratio(const ArchGraph& g, const std::vector<Vertex>& x) {
  const int s = static_cast<int>(x.size());
  if (s == 0 || s >= g.size()) throw std::invalid_argument("cut_ratio: X must be a nonempty proper subset");
  const int boundary = static_cast<int>(vertex_boundary(g, x).size());
  return {boundary, std::min(s, g.size() - s)};
}

struct ExpansionResult {
  Rational value;
  std::vector<Vertex> witness;
};

/// Exact vertex expansion by exhaustive subset search.
///
/// Subsets are visited in Gray-code order so each step flips one vertex and
/// updates neighbour counts in O(deg). Only |X| <= N/2 is scored, using
/// min(|δX|, |δX̄|) / |X|, which covers both sides of every cut. Among
/// argmin cuts the one with the smallest bitmask is returned.
inline ExpansionResult vertex_expansion_exact(const ArchGraph& g) {
  const int n = g.size();
  if (n > kMaxExactExpansionVertices)
    throw CapacityError("exact vertex expansion is limited to " + std::to_string(kMaxExactExpansionVertices) +
                        " vertices (graph has " + std::to_string(n) +
                        "); use vertex_expansion_bounds instead");
  if (n < 2) throw std::invalid_argument("vertex expansion needs at least two vertices");

  std::vector<int> deg(n), cnt(n, 0);
  for (Vertex v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::uint32_t mask = 0;
  int bx = 0;   // |δX|
  int bxc = 0;  // |δX̄|: members of X with a neighbour outside
  std::int64_t best_num = 1, best_den = 0;  // sentinel: +infinity
  std::uint32_t best_mask = 0;
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);

  auto consider = [&](std::int64_t num, std::int64_t den, std::uint32_t wmask) {
    const __int128 lhs = static_cast<__int128>(num) * (best_den == 0 ? 1 : best_den);
    const __int128 rhs = static_cast<__int128>(best_num) * den;
    if (best_den == 0 || lhs < rhs || (lhs == rhs && wmask < best_mask)) {
      best_num = num;
      best_den = den;
      best_mask = wmask;
    }
  };

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int x = std::countr_zero(i);
    const std::uint32_t bit = 1u << x;
    if (!(mask & bit)) {
      if (cnt[x] > 0) --bx;
      if (cnt[x] < deg[x]) ++bxc;
      mask |= bit;
      for (Vertex w : g.neighbors(x)) {
        ++cnt[w];
        if (mask >> w & 1u) {
          if (cnt[w] == deg[w]) --bxc;
        } else if (cnt[w] == 1) {
          ++bx;
        }
      }
    } else {
      if (cnt[x] < deg[x]) --bxc;
      mask &= ~bit;
      if (cnt[x] > 0) ++bx;
      for (Vertex w : g.neighbors(x)) {
        --cnt[w];
        if (mask >> w & 1u) {
          if (cnt[w] == deg[w] - 1) ++bxc;
        } else if (cnt[w] == 0) {
          --bx;
        }
      }
    }
    const int s = std::popcount(mask);
    if (2 * s > n) continue;
    consider(bx, s, mask);
    consider(bxc, s, full ^ mask);
  }

  ExpansionResult r{Rational(best_num, best_den), {}};
  for (Vertex v = 0; v < n; ++v)
    if (best_mask >> v & 1u) r.witness.push_back(v);
  return r;
}

struct ExpansionInterval {
  Rational lower;
  Rational upper;
  bool exact = false;
  std::vector<Vertex> witness;  // cut attaining `upper`
  std::string witness_kind;     // "exhaustive", "hyperplane", "hamming_ball", "bit_fixing", "bfs_disk", "trivial"
};

namespace detail {

inline void offer_cut(const ArchGraph& g, std::vector<Vertex> x, const std::string& kind, ExpansionInterval& out) {
  if (x.empty() || static_cast<int>(x.size()) >= g.size()) return;
  const Rational r = cut_ratio(g, x);
  if (r < out.upper) {
    out.upper = r;
    out.witness = std::move(x);
    out.witness_kind = kind;
  }
}

/// BFS disks of every radius around v.
inline std::vector<std::vector<Vertex>> disks(const ArchGraph& g, Vertex v) {
  auto dist = bfs_distances(g, v);
  const int ecc = *std::max_element(dist.begin(), dist.end());
  std::vector<std::vector<Vertex>> out;
  for (int k = 0; k < ecc; ++k) {
    std::vector<Vertex> d;
    for (Vertex u = 0; u < g.size(); ++u)
      if (dist[u] <= k) d.push_back(u);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace detail

/// Vertices of Q_d in simplicial order: by Hamming weight, then x before y
/// when the lowest bit of x ^ y is set in x. Initial segments of this order
/// have the smallest vertex boundary among sets of their size, and include
/// every Hamming ball around 0.
inline std::vector<Vertex> simplicial_order(int d) {
  std::vector<Vertex> order(std::size_t{1} << d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [](Vertex a, Vertex b) {
    const int wa = std::popcount(static_cast<unsigned>(a)), wb = std::popcount(static_cast<unsigned>(b));
    if (wa != wb) return wa < wb;
    if (a == b) return false;
    const unsigned low = static_cast<unsigned>(a ^ b) & (0u - static_cast<unsigned>(a ^ b));
    return (static_cast<unsigned>(a) & low) != 0;
  });
  return order;
}

/// Family cuts from the structure of the graph.
inline ExpansionInterval family_witness_cuts(const ArchGraph& g) {
  const int n = g.size();
  ExpansionInterval out{Rational(2, n), Rational(1), false, {}, "trivial"};
  if (g.is_family("grid")) {
    const int side = g.family()->param("n");
    std::vector<Vertex> x;
    for (Vertex v = 0; v < n; ++v)
      if (v % side < side / 2) x.push_back(v);
    detail::offer_cut(g, x, "hyperplane", out);
  }
  if (g.is_family("hypercube")) {
    const auto order = simplicial_order(g.family()->param("d"));
    std::vector<Vertex> seg;
    for (int m = 0; 2 * (m + 1) <= n; ++m) {
      seg.push_back(order[m]);
      auto sorted = seg;
      std::sort(sorted.begin(), sorted.end());
      detail::offer_cut(g, sorted, "hamming_ball", out);
    }
  }
  if (g.is_family("butterfly")) {
    const int r = g.family()->param("r");
    const int rows = 1 << r;
    for (int j = 0; j < r; ++j) {
      std::vector<Vertex> x;
      for (Vertex v = 0; v < n; ++v)
        if (!((v % rows) >> j & 1)) x.push_back(v);
      detail::offer_cut(g, x, "bit_fixing", out);
    }
  }
  for (Vertex v = 0; v < n; ++v)
    for (auto& d : detail::disks(g, v)) detail::offer_cut(g, d, "bfs_disk", out);
  return out;
}

/// Interval containing c(G). Exact when the graph is small enough and
/// `allow_exact` is set; otherwise [2/N, best witness cut].
inline ExpansionInterval vertex_expansion_bounds(const ArchGraph& g, bool allow_exact = true) {
  if (g.size() < 2) throw std::invalid_argument("vertex expansion needs at least two vertices");
  ExpansionInterval out = family_witness_cuts(g);
  if (allow_exact && g.size() <= kMaxExactExpansionVertices) {
    auto ex = vertex_expansion_exact(g);
    out.lower = ex.value;
    if (ex.value < out.upper) {
      out.upper = ex.value;
      out.witness = ex.witness;
      out.witness_kind = "exhaustive";
    }
    out.exact = true;
  }
  return out;
}

/// Smallest integer >= 2/c - 1.
inline int iso_lower_bound(const Rational& c) {
  if (c <= Rational(0)) throw std::invalid_argument("iso_lower_bound: c must be positive");
  if (c > Rational(1)) throw std::invalid_argument("iso_lower_bound: c must be at most 1");
  const std::int64_t num = 2 * c.den() - c.num();
  const std::int64_t den = c.num();
  return static_cast<int>((num + den - 1) / den);
}

/// 2 log(N/2) / log(1 + c) + 2.
inline double diam_expansion_rhs(int n, double c) {
  if (n < 2) throw std::invalid_argument("diam_expansion_rhs: N must be >= 2");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("diam_expansion_rhs: c must lie in (0, 1]");
  return 2.0 * std::log2(n / 2.0) / std::log2(1.0 + c) + 2.0;
}
inline double diam_expansion_rhs(int n, const Rational& c) { return diam_expansion_rhs(n, c.to_double()); }

struct HorizonProfile {
  Vertex v = 0;
  int horizon = 0;            // largest k with |D(v,k)| <= N/2
  std::vector<int> circles;   // |C(v,k)|, k = 0..ecc(v)
  std::vector<int> disks;     // |D(v,k)|
  std::optional<bool> growth_holds;  // |C(v,k)| >= c |D(v,k-1)| for 1 <= k <= horizon+1
};

inline HorizonProfile horizon_profile(const ArchGraph& g, Vertex v, std::optional<Rational> c = std::nullopt) {
  HorizonProfile p;
  p.v = v;
  auto dist = bfs_distances(g, v);
  const int ecc = *std::max_element(dist.begin(), dist.end());
  p.circles.assign(ecc + 1, 0);
  for (int d : dist) ++p.circles[d];
  int acc = 0;
  for (int k = 0; k <= ecc; ++k) {
    acc += p.circles[k];
    p.disks.push_back(acc);
  }
  const int n = g.size();
  p.horizon = 0;
  for (int k = 0; k <= ecc; ++k)
    if (2 * p.disks[k] <= n) p.horizon = k;
  if (c) {
    bool ok = true;
    for (int k = 1; k <= std::min(p.horizon + 1, ecc); ++k)
      ok = ok && Rational(p.circles[k]) >= *c * Rational(p.disks[k - 1]);
    p.growth_holds = ok;
  }
  return p;
}

struct SpectralReport {
  double lambda2 = 0.0;
  Rational degree_ratio;
  double expander_figure = 0.0;  // d* log²N / λ²
};

/// Algebraic connectivity of the combinatorial Laplacian via a dense
/// symmetric eigensolver.
inline SpectralReport spectral(const ArchGraph& g) {
  const int n = g.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (Vertex v = 0; v < n; ++v) lap(v, v) = g.degree(v);
  for (const Edge& e : g.edges()) {
    lap(e.u, e.v) = -1.0;
    lap(e.v, e.u) = -1.0;
  }
  SpectralReport r;
  if (n >= 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap, Eigen::EigenvaluesOnly);
    r.lambda2 = std::max(0.0, es.eigenvalues()(1));
  }
  r.degree_ratio = n >= 2 ? Rational(g.max_degree(), g.min_degree()) : Rational(1);
  const double lg = std::log2(static_cast<double>(n));
  r.expander_figure = r.lambda2 > 0 ? r.degree_ratio.to_double() * lg * lg / (r.lambda2 * r.lambda2) : 0.0;
  return r;
}

/// Up-to-constant figures bounding the worst-case teleportation advantage:
/// N·c from the cut bound, and √N + log N / c from the diameter route.
struct AdvantageFigures {
  double cut_figure = 0.0;
  double diameter_figure = 0.0;
  double min = 0.0;
};

inline AdvantageFigures advantage_upper_bounds(int n, const Rational& c) {
  if (c <= Rational(0)) throw std::invalid_argument("advantage_upper_bounds: c must be positive");
  AdvantageFigures f;
  f.cut_figure = n * c.to_double();
  f.diameter_figure = std::sqrt(static_cast<double>(n)) + std::log2(static_cast<double>(n)) / c.to_double();
  f.min = std::min(f.cut_figure, f.diameter_figure);
  return f;
}

struct BoundsReport {
  int n = 0;
  ExpansionInterval c;
  int diam = 0;
  int iso_lb = 0;   // from the exact c, or the upper end of the interval
  int diam_lb = 0;
  double expansion_rhs = 0.0;  // diam_expansion_rhs(N, c)
  SpectralReport spectral;
  AdvantageFigures advantage;
};

inline BoundsReport bounds_report(const ArchGraph& g, bool allow_exact = true) {
  BoundsReport r;
  r.n = g.size();
  r.c = vertex_expansion_bounds(g, allow_exact);
  r.diam = diameter(g);
  r.iso_lb = iso_lower_bound(r.c.upper);
  r.diam_lb = r.diam;
  r.expansion_rhs = diam_expansion_rhs(r.n, r.c.upper);
  r.spectral = spectral(g);
  r.advantage = advantage_upper_bounds(r.n, r.c.upper);
  return r;
}

inline nlohmann::json rational_to_json(const Rational& q) { return {{"num", q.num()}, {"den", q.den()}}; }

inline nlohmann::json bounds_to_json(const BoundsReport& r) {
  nlohmann::json c{{"lower", rational_to_json(r.c.lower)},
                   {"upper", rational_to_json(r.c.upper)},
                   {"exact", r.c.exact},
                   {"witness_cut", r.c.witness},
                   {"witness_kind", r.c.witness_kind}};
  if (r.c.exact) c["value"] = rational_to_json(r.c.lower);
  return {{"n", r.n},
          {"c", c},
          {"diam", r.diam},
          {"iso_lb", r.iso_lb},
          {"diam_lb", r.diam_lb},
          {"diam_expansion_rhs", r.expansion_rhs},
          {"lambda2", r.spectral.lambda2},
          {"degree_ratio", rational_to_json(r.spectral.degree_ratio)},
          {"expander_figure", r.spectral.expander_figure},
          {"advantage_figures",
           {{"cut", r.advantage.cut_figure}, {"diameter", r.advantage.diameter_figure}, {"min", r.advantage.min}}}};
}

}  // namespace qroute
