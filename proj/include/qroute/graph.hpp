#pragma once

// Architecture graphs, permutations on their vertices, and the basic graph
// queries used by the routers and the bounds module.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qroute {

using Vertex = int;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Which generator produced a graph, so routers and cut witnesses can
/// specialize. Graphs loaded from JSON carry no family.
struct Family {
  std::string kind;
  std::map<std::string, int> params;

  int param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw std::logic_error("family '" + kind + "' has no parameter '" + key + "'");
    return it->second;
  }
};

/// Simple connected undirected graph with a uniform per-vertex ancilla budget.
class ArchGraph {
 public:
  ArchGraph(int n, std::vector<Edge> edges, int ancilla_budget = 6,
            std::vector<std::vector<int>> labels = {}, std::optional<Family> family = std::nullopt)
      : n_(n), edges_(std::move(edges)), budget_(ancilla_budget), labels_(std::move(labels)),
        family_(std::move(family)) {
    if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
    if (budget_ < 0) throw std::invalid_argument("ancilla budget must be nonnegative");
    std::sort(edges_.begin(), edges_.end());
    adj_.assign(n_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u < 0 || e.v >= n_) throw std::invalid_argument("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
      if (i > 0 && edges_[i - 1] == e)
        throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    if (!labels_.empty()) {
      if (static_cast<int>(labels_.size()) != n_) throw std::invalid_argument("label count must equal vertex count");
      std::set<std::vector<int>> seen(labels_.begin(), labels_.end());
      if (static_cast<int>(seen.size()) != n_) throw std::invalid_argument("vertex labels must be unique");
    }
    if (!is_connected()) throw std::invalid_argument("graph is not connected");
  }

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  int degree(Vertex v) const { return static_cast<int>(adj_.at(v).size()); }
  int ancilla_budget() const { return budget_; }
  const std::vector<std::vector<int>>& labels() const { return labels_; }
  const std::optional<Family>& family() const { return family_; }
  bool is_family(const std::string& kind) const { return family_ && family_->kind == kind; }

  bool adjacent(Vertex a, Vertex b) const {
    if (a < 0 || a >= n_ || b < 0 || b >= n_) return false;
    const auto& nb = adj_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool contains(Vertex v) const { return v >= 0 && v < n_; }

  int max_degree() const {
    int d = 0;
    for (const auto& nb : adj_) d = std::max(d, static_cast<int>(nb.size()));
    return d;
  }
  int min_degree() const {
    int d = n_;
    for (const auto& nb : adj_) d = std::min(d, static_cast<int>(nb.size()));
    return d;
  }

  ArchGraph with_budget(int budget) const {
    ArchGraph g = *this;
    if (budget < 0) throw std::invalid_argument("ancilla budget must be nonnegative");
    g.budget_ = budget;
    return g;
  }

 private:
  bool is_connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex y : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
    }
    return count == n_;
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
  int budget_;
  std::vector<std::vector<int>> labels_;
  std::optional<Family> family_;
};

// ---------------------------------------------------------------------------
// Permutation

/// Bijection on 0..n-1; image[i] is where the token starting at i must go.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Vertex> image) : image_(std::move(image)) {
    std::vector<char> hit(image_.size(), 0);
    for (Vertex x : image_) {
      if (x < 0 || x >= static_cast<Vertex>(image_.size()) || hit[x])
        throw std::invalid_argument("permutation image is not a bijection");
      hit[x] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<Vertex> im(n);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  int size() const { return static_cast<int>(image_.size()); }
  Vertex operator()(Vertex i) const { return image_.at(i); }
  const std::vector<Vertex>& image() const { return image_; }

  std::vector<Vertex> support() const {
    std::vector<Vertex> s;
    for (int i = 0; i < size(); ++i)
      if (image_[i] != i) s.push_back(i);
    return s;
  }
  bool is_identity() const { return support().empty(); }

  Permutation inverse() const {
    std::vector<Vertex> inv(image_.size());
    for (int i = 0; i < size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
  }

  /// Apply *this first, then `next`.
  Permutation then(const Permutation& next) const {
    if (next.size() != size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<Vertex> im(image_.size());
    for (int i = 0; i < size(); ++i) im[i] = next(image_[i]);
    return Permutation(std::move(im));
  }

  /// Disjoint cycles of length >= 2, each starting at its smallest element
  /// and listed in order i, pi(i), pi(pi(i)), ...
  std::vector<std::vector<Vertex>> cycles() const {
    std::vector<std::vector<Vertex>> out;
    std::vector<char> seen(image_.size(), 0);
    for (int i = 0; i < size(); ++i) {
      if (seen[i] || image_[i] == i) continue;
      std::vector<Vertex> cyc;
      for (Vertex x = i; !seen[x]; x = image_[x]) {
        seen[x] = 1;
        cyc.push_back(x);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Vertex> image_;
};

// ---------------------------------------------------------------------------
// Queries

inline std::vector<int> bfs_distances(const ArchGraph& g, Vertex src) {
  std::vector<int> dist(g.size(), -1);
  std::queue<Vertex> q;
  dist.at(src) = 0;
  q.push(src);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    for (Vertex y : g.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  return dist;
}

inline int eccentricity(const ArchGraph& g, Vertex v) {
  auto d = bfs_distances(g, v);
  return *std::max_element(d.begin(), d.end());
}

inline int diameter(const ArchGraph& g) {
  int best = 0;
  for (Vertex v = 0; v < g.size(); ++v) best = std::max(best, eccentricity(g, v));
  return best;
}

/// Minimum-eccentricity vertex, lowest index on ties.
inline Vertex center(const ArchGraph& g) {
  Vertex best = 0;
  int best_ecc = eccentricity(g, 0);
  for (Vertex v = 1; v < g.size(); ++v) {
    int e = eccentricity(g, v);
    if (e < best_ecc) {
      best_ecc = e;
      best = v;
    }
  }
  return best;
}

/// Next hop from every vertex toward `target`: the lowest-index neighbor one
/// step closer. next_hop[target] == target.
inline std::vector<Vertex> next_hops(const ArchGraph& g, Vertex target) {
  auto dist = bfs_distances(g, target);
  std::vector<Vertex> hop(g.size(), target);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (v == target) continue;
    for (Vertex w : g.neighbors(v))
      if (dist[w] == dist[v] - 1) {
        hop[v] = w;
        break;
      }
  }
  return hop;
}

/// Lexicographically smallest shortest path from u to v (inclusive).
inline std::vector<Vertex> shortest_path(const ArchGraph& g, Vertex u, Vertex v) {
  if (!g.contains(u) || !g.contains(v)) throw std::out_of_range("shortest_path: vertex out of range");
  auto hop = next_hops(g, v);
  std::vector<Vertex> path{u};
  while (path.back() != v) path.push_back(hop[path.back()]);
  return path;
}

/// Outside neighbours of X.
inline std::vector<Vertex> vertex_boundary(const ArchGraph& g, const std::vector<Vertex>& x) {
  std::vector<char> in(g.size(), 0), out(g.size(), 0);
  for (Vertex v : x) in.at(v) = 1;
  for (Vertex v : x)
    for (Vertex w : g.neighbors(v))
      if (!in[w]) out[w] = 1;
  std::vector<Vertex> res;
  for (Vertex v = 0; v < g.size(); ++v)
    if (out[v]) res.push_back(v);
  return res;
}

/// Breadth-first spanning tree; parent[root] == -1.
inline std::vector<Vertex> bfs_parents(const ArchGraph& g, Vertex root) {
  std::vector<Vertex> parent(g.size(), -2);
  std::queue<Vertex> q;
  parent.at(root) = -1;
  q.push(root);
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    for (Vertex y : g.neighbors(x))
      if (parent[y] == -2) {
        parent[y] = x;
        q.push(y);
      }
  }
  return parent;
}

inline std::vector<Edge> spanning_tree(const ArchGraph& g, Vertex root) {
  auto parent = bfs_parents(g, root);
  std::vector<Edge> tree;
  for (Vertex v = 0; v < g.size(); ++v)
    if (parent[v] >= 0) tree.emplace_back(v, parent[v]);
  std::sort(tree.begin(), tree.end());
  return tree;
}

inline bool is_tree(const ArchGraph& g) { return static_cast<int>(g.edges().size()) == g.size() - 1; }

/// Vertex order along the path if g is a path graph (starting at the lower
/// index endpoint), otherwise nullopt.
inline std::optional<std::vector<Vertex>> path_order(const ArchGraph& g) {
  if (!is_tree(g) || g.max_degree() > 2) return std::nullopt;
  Vertex start = 0;
  if (g.size() > 1) {
    for (Vertex v = 0; v < g.size(); ++v)
      if (g.degree(v) == 1) {
        start = v;
        break;
      }
  }
  std::vector<Vertex> order{start};
  Vertex prev = -1;
  while (static_cast<int>(order.size()) < g.size()) {
    Vertex cur = order.back();
    for (Vertex w : g.neighbors(cur))
      if (w != prev) {
        prev = cur;
        order.push_back(w);
        break;
      }
  }
  return order;
}

inline bool is_complete(const ArchGraph& g) {
  return static_cast<long>(g.edges().size()) == static_cast<long>(g.size()) * (g.size() - 1) / 2;
}

// ---------------------------------------------------------------------------
// Generators

constexpr int kDefaultAncillaBudget = 6;

inline ArchGraph path_graph(int n, int budget = kDefaultAncillaBudget) {
  if (n < 1) throw std::invalid_argument("path: n must be >= 1");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return ArchGraph(n, std::move(e), budget, {}, Family{"path", {{"n", n}}});
}

inline ArchGraph cycle_graph(int n, int budget = kDefaultAncillaBudget) {
  if (n < 3) throw std::invalid_argument("cycle: n must be >= 3");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return ArchGraph(n, std::move(e), budget, {}, Family{"cycle", {{"n", n}}});
}

inline ArchGraph complete_graph(int n, int budget = kDefaultAncillaBudget) {
  if (n < 1) throw std::invalid_argument("complete: n must be >= 1");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return ArchGraph(n, std::move(e), budget, {}, Family{"complete", {{"n", n}}});
}

/// Star with center 0 and `leaves` leaves.
inline ArchGraph star_graph(int leaves, int budget = kDefaultAncillaBudget) {
  if (leaves < 1) throw std::invalid_argument("star: needs at least one leaf");
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return ArchGraph(leaves + 1, std::move(e), budget, {}, Family{"star", {{"n", leaves}}});
}

/// Wheel with rim 0..n-1 (a cycle) and hub n.
inline ArchGraph wheel_graph(int rim, int budget = kDefaultAncillaBudget) {
  if (rim < 3) throw std::invalid_argument("wheel: rim size N must be >= 3");
  std::vector<Edge> e;
  for (int i = 0; i < rim; ++i) {
    e.emplace_back(i, (i + 1) % rim);
    e.emplace_back(i, rim);
  }
  return ArchGraph(rim + 1, std::move(e), budget, {}, Family{"wheel", {{"n", rim}}});
}

inline int bit_length(std::uint64_t a) {
  int len = 0;
  while (a) {
    ++len;
    a >>= 1;
  }
  return len;
}

/// Ladder L(n): layers of complete graphs K_1, K_2, ..., K_{2^{n-1}}, with
/// adjacent layers fully connected. Vertex index = binary address - 1;
/// label = {layer, address}.
inline ArchGraph ladder_graph(int n, int budget = kDefaultAncillaBudget) {
  if (n < 1 || n > 20) throw std::invalid_argument("ladder: n must be in [1, 20]");
  const int count = (1 << n) - 1;
  std::vector<Edge> e;
  std::vector<std::vector<int>> labels;
  for (int a = 1; a <= count; ++a) {
    labels.push_back({bit_length(a), a});
    for (int b = a + 1; b <= count; ++b) {
      int la = bit_length(a), lb = bit_length(b);
      if (la == lb || lb - la == 1) e.emplace_back(a - 1, b - 1);
    }
  }
  return ArchGraph(count, std::move(e), budget, std::move(labels), Family{"ladder", {{"n", n}}});
}

/// Cartesian product; vertex (a, b) has index a + |g1| * b.
inline ArchGraph cartesian_product(const ArchGraph& g1, const ArchGraph& g2, int budget,
                                   std::optional<Family> family = std::nullopt) {
  const int n1 = g1.size(), n2 = g2.size();
  std::vector<Edge> e;
  for (int b = 0; b < n2; ++b)
    for (const Edge& x : g1.edges()) e.emplace_back(x.u + n1 * b, x.v + n1 * b);
  for (int a = 0; a < n1; ++a)
    for (const Edge& y : g2.edges()) e.emplace_back(a + n1 * y.u, a + n1 * y.v);
  std::vector<std::vector<int>> labels;
  if (!g1.labels().empty() || !g2.labels().empty()) {
    for (int b = 0; b < n2; ++b)
      for (int a = 0; a < n1; ++a) {
        std::vector<int> l = g1.labels().empty() ? std::vector<int>{a} : g1.labels()[a];
        std::vector<int> r = g2.labels().empty() ? std::vector<int>{b} : g2.labels()[b];
        l.insert(l.end(), r.begin(), r.end());
        labels.push_back(std::move(l));
      }
  }
  if (!family) family = Family{"product", {{"n1", n1}, {"n2", n2}}};
  return ArchGraph(n1 * n2, std::move(e), budget, std::move(labels), std::move(family));
}

/// d-dimensional grid P_n^{□d}; index = sum_i x_i n^i, label = coordinates.
inline ArchGraph grid_graph(int n, int d, int budget = kDefaultAncillaBudget) {
  if (n < 1) throw std::invalid_argument("grid: n must be >= 1");
  if (d < 1) throw std::invalid_argument("grid: d must be >= 1");
  double total = std::pow(static_cast<double>(n), d);
  if (total > 1e6) throw std::invalid_argument("grid: too many vertices");
  std::vector<std::vector<int>> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = {i};
  ArchGraph g(n, path_graph(n).edges(), budget, n > 1 ? coords : std::vector<std::vector<int>>{{0}},
              Family{"grid", {{"n", n}, {"d", 1}}});
  for (int k = 2; k <= d; ++k)
    g = cartesian_product(ArchGraph(n, path_graph(n).edges(), budget, coords), g, budget,
                          Family{"grid", {{"n", n}, {"d", k}}});
  return g;
}

/// Hypercube Q_d; vertex index is the bit string, label = {index}.
inline ArchGraph hypercube_graph(int d, int budget = kDefaultAncillaBudget) {
  if (d < 1 || d > 20) throw std::invalid_argument("hypercube: d must be in [1, 20]");
  const int n = 1 << d;
  std::vector<Edge> e;
  for (int w = 0; w < n; ++w)
    for (int b = 0; b < d; ++b)
      if (!(w & (1 << b))) e.emplace_back(w, w | (1 << b));
  return ArchGraph(n, std::move(e), budget, {}, Family{"hypercube", {{"d", d}}});
}

/// Cyclic butterfly B_r: vertex (w, i) has index i * 2^r + w and label
/// {w, i}; (w, i) ~ (v, i+1 mod r) iff w == v or w ^ v == 1 << i.
inline ArchGraph butterfly_graph(int r, int budget = kDefaultAncillaBudget) {
  if (r < 2 || r > 16) throw std::invalid_argument("butterfly: r must be in [2, 16]");
  const int rows = 1 << r;
  auto idx = [rows](int w, int i) { return i * rows + w; };
  std::set<Edge> e;
  std::vector<std::vector<int>> labels(r * rows);
  for (int i = 0; i < r; ++i)
    for (int w = 0; w < rows; ++w) {
      labels[idx(w, i)] = {w, i};
      const int j = (i + 1) % r;
      e.emplace(idx(w, i), idx(w, j));
      e.emplace(idx(w, i), idx(w ^ (1 << i), j));
    }
  return ArchGraph(r * rows, std::vector<Edge>(e.begin(), e.end()), budget, std::move(labels),
                   Family{"butterfly", {{"r", r}}});
}

/// Dispatch by family name. Recognized keys: n, d, r.
inline ArchGraph generate_graph(const std::string& kind, const std::map<std::string, int>& params,
                                int budget = kDefaultAncillaBudget) {
  auto get = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument(kind + ": missing parameter '" + key + "'");
    return it->second;
  };
  if (kind == "path") return path_graph(get("n"), budget);
  if (kind == "cycle") return cycle_graph(get("n"), budget);
  if (kind == "complete") return complete_graph(get("n"), budget);
  if (kind == "star") return star_graph(get("n"), budget);
  if (kind == "wheel") return wheel_graph(get("n"), budget);
  if (kind == "ladder") return ladder_graph(get("n"), budget);
  if (kind == "grid") return grid_graph(get("n"), get("d"), budget);
  if (kind == "hypercube") return hypercube_graph(get("d"), budget);
  if (kind == "butterfly") return butterfly_graph(get("r"), budget);
  throw std::invalid_argument("unknown graph family '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Permutation families

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection so the
/// stream is identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

inline void shuffle_in_place(std::vector<Vertex>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

inline Permutation random_permutation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vertex> im(n);
  std::iota(im.begin(), im.end(), 0);
  shuffle_in_place(im, rng);
  return Permutation(std::move(im));
}

/// Random permutation moving exactly k tokens (k != 1).
inline Permutation random_sparse_permutation(int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n || k == 1) throw std::invalid_argument("sparse permutation: k must be 0 or in [2, n]");
  std::mt19937_64 rng(seed);
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), 0);
  shuffle_in_place(all, rng);
  std::vector<Vertex> chosen(all.begin(), all.begin() + k);
  std::sort(chosen.begin(), chosen.end());
  std::vector<Vertex> target = chosen;
  bool deranged = false;
  while (!deranged && k > 0) {
    shuffle_in_place(target, rng);
    deranged = true;
    for (int i = 0; i < k; ++i) deranged = deranged && target[i] != chosen[i];
  }
  std::vector<Vertex> im(n);
  std::iota(im.begin(), im.end(), 0);
  for (int i = 0; i < k; ++i) im[chosen[i]] = target[i];
  return Permutation(std::move(im));
}

/// Number of nested outer pairs exchanged by the rainbow permutation:
/// floor(n^alpha), capped at n/2.
inline int rainbow_pairs(int n, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("rainbow: alpha must lie in [0, 1]");
  long m = static_cast<long>(std::floor(std::pow(static_cast<double>(n), alpha) + 1e-9));
  return static_cast<int>(std::min<long>(m, n / 2));
}

struct PermutationParams {
  double alpha = 0.5;
  int l = 1;
  int shift = 1;
  int k = 2;
  std::uint64_t seed = 0;
};

/// Named permutation families. "diam" exchanges the lexicographically first
/// diametral pair (0 and n-1 on a path).
inline Permutation generate_permutation(const std::string& kind, const ArchGraph& g,
                                        const PermutationParams& p = {}) {
  const int n = g.size();
  std::vector<Vertex> im(n);
  std::iota(im.begin(), im.end(), 0);
  if (kind == "identity") return Permutation(im);
  if (kind == "diam") {
    const int dia = diameter(g);
    for (Vertex u = 0; u < n; ++u) {
      auto d = bfs_distances(g, u);
      for (Vertex v = u + 1; v < n; ++v)
        if (d[v] == dia) {
          std::swap(im[u], im[v]);
          return Permutation(im);
        }
    }
    return Permutation(im);
  }
  if (kind == "rainbow") {
    if (!path_order(g)) throw std::invalid_argument("rainbow permutation requires a path graph");
    const auto order = *path_order(g);
    const int m = rainbow_pairs(n, p.alpha);
    for (int i = 0; i < m; ++i) std::swap(im[order[i]], im[order[n - 1 - i]]);
    return Permutation(im);
  }
  if (kind == "reflection") {
    for (int i = 0; i < n; ++i) im[i] = n - 1 - i;
    return Permutation(im);
  }
  if (kind == "shift" || kind == "cyclic_shift") {
    const int s = ((p.shift % n) + n) % n;
    for (int i = 0; i < n; ++i) im[i] = (i + s) % n;
    return Permutation(im);
  }
  if (kind == "random") return random_permutation(n, p.seed);
  if (kind == "sparse" || kind == "random_k") return random_sparse_permutation(n, p.k, p.seed);
  if (kind == "wheel") {
    if (!g.is_family("wheel")) throw std::invalid_argument("wheel permutation requires a wheel graph");
    const int rim = g.family()->param("n");
    if (p.l < 1 || rim % p.l != 0) throw std::invalid_argument("wheel permutation: l must divide N");
    const int seg = rim / p.l;
    if (seg < 2) throw std::invalid_argument("wheel permutation: N/l must be at least 2");
    for (int j = 0; j < p.l; ++j) std::swap(im[j * seg], im[(j + 1) * seg - 1]);
    return Permutation(im);
  }
  throw std::invalid_argument("unknown permutation kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json graph_to_json(const ArchGraph& g) {
  nlohmann::json j;
  j["n"] = g.size();
  j["ancilla_budget"] = g.ancilla_budget();
  auto edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = edges;
  if (!g.labels().empty()) j["labels"] = g.labels();
  return j;
}

inline ArchGraph graph_from_json(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("graph JSON: edge must be [u, v]");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  std::vector<std::vector<int>> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::vector<int>>>();
  return ArchGraph(j.at("n").get<int>(), std::move(edges), j.value("ancilla_budget", kDefaultAncillaBudget),
                   std::move(labels));
}

inline std::string graph_to_dot(const ArchGraph& g) {
  std::ostringstream os;
  os << "graph G {\n";
  for (Vertex v = 0; v < g.size(); ++v) os << "  " << v << ";\n";
  for (const Edge& e : g.edges()) os << "  " << e.u << " -- " << e.v << ";\n";
  os << "}\n";
  return os.str();
}

inline nlohmann::json permutation_to_json(const Permutation& p) { return {{"image", p.image()}}; }

inline Permutation permutation_from_json(const nlohmann::json& j) {
  return Permutation(j.at("image").get<std::vector<Vertex>>());
}

/// FNV-1a over the canonical graph JSON, as 16 hex digits.
inline std::string graph_hash(const ArchGraph& g) {
  const std::string s = graph_to_json(g).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace qroute
