#pragma once

// Swap-only routers. Convention: the token starting at v must end at pi(v).

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/graph.hpp"
#include "qroute/schedule.hpp"

namespace qroute {

namespace detail {

/// Odd-even transposition sort along a vertex sequence. `at[v]` is the token
/// on v, `dest[t]` its target vertex (which must lie on the sequence).
/// Rounds with no swap are skipped. Updates `at`.
inline std::vector<Timestep> oet_sequence(const std::vector<Vertex>& seq, std::vector<int>& at,
                                          const std::vector<Vertex>& dest) {
  const int m = static_cast<int>(seq.size());
  std::vector<int> key(m);
  {
    std::vector<std::pair<Vertex, int>> pos;
    for (int i = 0; i < m; ++i) pos.emplace_back(seq[i], i);
    std::sort(pos.begin(), pos.end());
    for (int i = 0; i < m; ++i) {
      auto it = std::lower_bound(pos.begin(), pos.end(), std::make_pair(dest[at[seq[i]]], -1));
      if (it == pos.end() || it->first != dest[at[seq[i]]])
        throw std::logic_error("oet: token destination lies off the sequence");
      key[i] = it->second;
    }
  }
  std::vector<Timestep> out;
  int quiet = 0;
  for (int round = 0; quiet < 2; ++round) {
    Timestep t;
    for (int i = round % 2; i + 1 < m; i += 2) {
      if (key[i] > key[i + 1]) {
        std::swap(key[i], key[i + 1]);
        std::swap(at[seq[i]], at[seq[i + 1]]);
        t.ops.push_back(SwapEdge{std::min(seq[i], seq[i + 1]), std::max(seq[i], seq[i + 1])});
      }
    }
    if (t.ops.empty()) {
      ++quiet;
    } else {
      quiet = 0;
      out.push_back(std::move(t));
    }
    if (round > 2 * m + 4) throw std::logic_error("oet: did not converge");
  }
  return out;
}

inline std::vector<int> identity_placement(int n) {
  std::vector<int> at(n);
  std::iota(at.begin(), at.end(), 0);
  return at;
}

inline Schedule wrap(std::vector<Timestep> steps) {
  Schedule s;
  s.timesteps = std::move(steps);
  return s;
}

}  // namespace detail

/// Odd-even transposition on a path graph; depth <= n.
inline Schedule route_path_oet(const ArchGraph& g, const Permutation& pi) {
  auto order = path_order(g);
  if (!order) throw std::invalid_argument("route_path_oet: graph is not a path");
  if (pi.size() != g.size()) throw std::invalid_argument("route_path_oet: permutation size mismatch");
  auto at = detail::identity_placement(g.size());
  return detail::wrap(detail::oet_sequence(*order, at, pi.image()));
}

/// Complete graph: each cycle (a_0 ... a_{m-1}) with pi(a_i) = a_{i+1} is the
/// product of the reflections i -> -i and j -> 1 - j, one matching each.
inline Schedule route_complete(const ArchGraph& g, const Permutation& pi) {
  if (!is_complete(g)) throw std::invalid_argument("route_complete: graph is not complete");
  if (pi.size() != g.size()) throw std::invalid_argument("route_complete: permutation size mismatch");
  Timestep r1, r2;
  for (const auto& cyc : pi.cycles()) {
    const int m = static_cast<int>(cyc.size());
    for (int i = 1; i < m - i; ++i) r1.ops.push_back(SwapEdge{std::min(cyc[i], cyc[m - i]), std::max(cyc[i], cyc[m - i])});
    for (int j = 0; j < m; ++j) {
      const int p = ((1 - j) % m + m) % m;
      if (j < p) r2.ops.push_back(SwapEdge{std::min(cyc[j], cyc[p]), std::max(cyc[j], cyc[p])});
    }
  }
  Schedule s;
  if (!r1.ops.empty()) s.timesteps.push_back(std::move(r1));
  if (!r2.ops.empty()) s.timesteps.push_back(std::move(r2));
  return s;
}

// ---------------------------------------------------------------------------
// Trees

namespace detail {

struct TreeRouter {
  const std::vector<std::vector<Vertex>>& adj;  // tree adjacency
  std::vector<int>& at;                          // token on each vertex
  const std::vector<Vertex>& dest;               // target of each token
  std::vector<int> comp;                         // component label, -1 = retired
  int next_label = 0;

  std::vector<Timestep> route(const std::vector<Vertex>& verts) {
    bool settled = true;
    for (Vertex v : verts) settled = settled && dest[at[v]] == v;
    if (settled || verts.size() < 2) return {};
    const int label = next_label++;
    for (Vertex v : verts) comp[v] = label;

    if (is_path(verts, label)) return oet_sequence(path_sequence(verts, label), at, dest);

    const Vertex c = centroid(verts, label);
    std::vector<std::vector<Vertex>> parts;
    std::vector<int> part_of(adj.size(), -1);
    for (Vertex r : adj[c]) {
      if (comp[r] != label) continue;
      parts.emplace_back();
      collect(r, c, label, parts.back());
      for (Vertex v : parts.back()) part_of[v] = static_cast<int>(parts.size()) - 1;
    }
    std::vector<Timestep> steps = exchange(c, parts, part_of, label);
    comp[c] = -1;
    std::vector<std::vector<Timestep>> lanes;
    for (auto& p : parts) lanes.push_back(route(p));
    auto rest = merge_parallel(lanes);
    steps.insert(steps.end(), rest.begin(), rest.end());
    return steps;
  }

  bool is_path(const std::vector<Vertex>& verts, int label) const {
    for (Vertex v : verts) {
      int d = 0;
      for (Vertex w : adj[v]) d += comp[w] == label ? 1 : 0;
      if (d > 2) return false;
    }
    return true;
  }

  std::vector<Vertex> path_sequence(const std::vector<Vertex>& verts, int label) const {
    Vertex start = verts.front();
    for (Vertex v : verts) {
      int d = 0;
      for (Vertex w : adj[v]) d += comp[w] == label ? 1 : 0;
      if (d <= 1) {
        start = v;
        break;
      }
    }
    std::vector<Vertex> seq{start};
    Vertex prev = -1, cur = start;
    while (seq.size() < verts.size()) {
      Vertex nxt = -1;
      for (Vertex w : adj[cur])
        if (comp[w] == label && w != prev) nxt = w;
      prev = cur;
      cur = nxt;
      seq.push_back(cur);
    }
    return seq;
  }

  void collect(Vertex root, Vertex from, int label, std::vector<Vertex>& out) const {
    std::vector<std::pair<Vertex, Vertex>> stack{{root, from}};
    while (!stack.empty()) {
      auto [v, p] = stack.back();
      stack.pop_back();
      out.push_back(v);
      for (Vertex w : adj[v])
        if (w != p && comp[w] == label) stack.emplace_back(w, v);
    }
    std::sort(out.begin(), out.end());
  }

  Vertex centroid(const std::vector<Vertex>& verts, int label) const {
    const int n = static_cast<int>(verts.size());
    // iterative DFS from verts[0] for subtree sizes
    std::vector<Vertex> order, parent(adj.size(), -1);
    std::vector<Vertex> stack{verts.front()};
    parent[verts.front()] = verts.front();
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (Vertex w : adj[v])
        if (comp[w] == label && parent[w] == -1) {
          parent[w] = v;
          stack.push_back(w);
        }
    }
    std::vector<int> size(adj.size(), 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if (*it != verts.front()) size[parent[*it]] += size[*it];
    Vertex best = -1;
    int best_worst = n + 1;
    for (Vertex v : verts) {
      int worst = n - size[v];
      for (Vertex w : adj[v])
        if (comp[w] == label && parent[w] == v) worst = std::max(worst, size[w]);
      if (worst < best_worst || (worst == best_worst && v < best)) {
        best_worst = worst;
        best = v;
      }
    }
    return best;
  }

  /// Move every token into the part (or the centroid) containing its target.
  /// Tokens belonging elsewhere bubble towards the part roots; the centroid
  /// trades with one root per step.
  std::vector<Timestep> exchange(Vertex c, const std::vector<std::vector<Vertex>>& parts,
                                 const std::vector<int>& part_of, int label) {
    const int k = static_cast<int>(parts.size());
    std::vector<Vertex> roots(k);
    std::vector<int> depth(adj.size(), -1);
    std::vector<Vertex> parent(adj.size(), -1);
    std::vector<Vertex> bfs{c};
    depth[c] = 0;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
      Vertex v = bfs[i];
      for (Vertex w : adj[v])
        if (comp[w] == label && depth[w] == -1) {
          depth[w] = depth[v] + 1;
          parent[w] = v;
          bfs.push_back(w);
          if (v == c) roots[part_of[w]] = w;
        }
    }
    auto target_part = [&](Vertex v) { return dest[at[v]] == c ? -1 : part_of[dest[at[v]]]; };
    auto bad = [&](Vertex v) { return target_part(v) != part_of[v]; };
    auto remaining = [&]() {
      for (Vertex v : bfs)
        if (v != c && bad(v)) return true;
      return dest[at[c]] != c;
    };

    std::vector<Timestep> out;
    std::vector<char> busy(adj.size(), 0);
    const std::size_t cap = 8 * bfs.size() + 16;
    while (remaining()) {
      if (out.size() > cap) throw std::logic_error("tree exchange made no progress");
      Timestep t;
      std::fill(busy.begin(), busy.end(), 0);
      auto do_swap = [&](Vertex a, Vertex b) {
        std::swap(at[a], at[b]);
        busy[a] = busy[b] = 1;
        t.ops.push_back(SwapEdge{std::min(a, b), std::max(a, b)});
      };
      // centroid move
      const int want = target_part(c);
      if (want >= 0) {
        if (bad(roots[want])) do_swap(c, roots[want]);
      } else {
        // the centroid's own token is home; admit the lowest waiting root
        for (int j = 0; j < k; ++j)
          if (bad(roots[j])) {
            do_swap(c, roots[j]);
            break;
          }
      }
      // bubble inside parts, shallow first
      for (Vertex p : bfs) {
        if (p == c || busy[p] || bad(p)) continue;
        for (Vertex w : adj[p])
          if (parent[w] == p && !busy[w] && comp[w] == label && bad(w)) {
            do_swap(p, w);
            break;
          }
      }
      out.push_back(std::move(t));
    }
    return out;
  }
};

inline std::vector<Timestep> route_tree_steps(int n, const std::vector<Edge>& tree_edges, std::vector<int>& at,
                                              const std::vector<Vertex>& dest, const std::vector<Vertex>& verts) {
  std::vector<std::vector<Vertex>> adj(n);
  for (const Edge& e : tree_edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  TreeRouter tr{adj, at, dest, std::vector<int>(n, -1)};
  return tr.route(verts);
}

/// Vertex set touched by `edges`, checked to form a tree that is a subgraph of g.
inline std::vector<Vertex> tree_vertices(const ArchGraph& g, const std::vector<Edge>& edges) {
  std::vector<Vertex> verts;
  for (const Edge& e : edges) {
    if (!g.adjacent(e.u, e.v))
      throw std::invalid_argument("tree edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not in the graph");
    verts.push_back(e.u);
    verts.push_back(e.v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (edges.size() + 1 != verts.size() && !(edges.empty() && verts.empty()))
    throw std::invalid_argument("edge set is not a tree");
  // connectivity via union-find
  std::vector<int> uf(g.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
  for (const Edge& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a == b) throw std::invalid_argument("edge set is not a tree (cycle)");
    uf[a] = b;
  }
  return verts;
}

}  // namespace detail

/// Route on a subtree of g given by `tree_edges`. Tokens outside the tree must
/// be fixed by pi, and pi must map tree vertices to tree vertices. Recursive
/// centroid splitting: tokens are exchanged into the correct part, then the
/// parts are routed in parallel. Path-shaped pieces use odd-even transposition.
inline Schedule route_tree(const ArchGraph& g, const std::vector<Edge>& tree_edges, const Permutation& pi) {
  if (pi.size() != g.size()) throw std::invalid_argument("route_tree: permutation size mismatch");
  auto verts = detail::tree_vertices(g, tree_edges);
  std::vector<char> in(g.size(), 0);
  for (Vertex v : verts) in[v] = 1;
  for (Vertex v = 0; v < g.size(); ++v)
    if (pi(v) != v && (!in[v] || !in[pi(v)]))
      throw std::invalid_argument("route_tree: permutation moves a token outside the tree");
  auto at = detail::identity_placement(g.size());
  return detail::wrap(detail::route_tree_steps(g.size(), tree_edges, at, pi.image(), verts));
}

inline Schedule route_tree(const ArchGraph& tree, const Permutation& pi) {
  if (!is_tree(tree)) throw std::invalid_argument("route_tree: graph is not a tree");
  if (tree.size() == 1) return {};
  return route_tree(tree, tree.edges(), pi);
}

// ---------------------------------------------------------------------------
// Cartesian products

Schedule route_generic(const ArchGraph& g, const Permutation& pi);

namespace detail {

/// Split an n1-regular bipartite multigraph into n1 perfect matchings. Left
/// vertices are fibers b, right vertices target fibers b'; each token is one
/// edge. Returns the matching index of every token. Tokens with prefer[t] == j
/// are tried first when matching j is built.
inline std::vector<int> decompose_regular(int n1, int n2, const std::vector<std::vector<int>>& tokens_of_left,
                                          const std::vector<int>& right_of_token, const std::vector<int>& prefer) {
  std::vector<int> assigned(right_of_token.size(), -1);
  for (int j = 0; j < n1; ++j) {
    std::vector<int> owner(n2, -1), via(n2, -1);  // right -> (left, token)
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int b) -> bool {
      for (int pass = 0; pass < 2; ++pass)
        for (int t : tokens_of_left[b]) {
          if (assigned[t] >= 0 || (prefer[t] == j) != (pass == 0)) continue;
          const int r = right_of_token[t];
          if (seen[r]) continue;
          seen[r] = 1;
          if (owner[r] < 0 || augment(owner[r])) {
            owner[r] = b;
            via[r] = t;
            return true;
          }
        }
      return false;
    };
    for (int b = 0; b < n2; ++b) {
      seen.assign(n2, 0);
      if (!augment(b)) throw std::logic_error("regular bipartite multigraph has no perfect matching");
    }
    for (int r = 0; r < n2; ++r) assigned[via[r]] = j;
  }
  return assigned;
}

/// Run a factor router on every fiber and overlay the results.
/// `lift(copy, u)` maps factor vertex u of copy `copy` to a product vertex.
template <class Lift>
std::vector<Timestep> route_fibers(const ArchGraph& factor, int copies, const std::vector<Permutation>& perms,
                                   Lift lift) {
  std::vector<std::vector<Timestep>> lanes;
  for (int c = 0; c < copies; ++c) {
    if (perms[c].is_identity()) continue;
    Schedule s = route_generic(factor, perms[c]);
    std::vector<Timestep> lane;
    for (const auto& t : s.timesteps) {
      Timestep m;
      for (const auto& op : t.ops) {
        const auto* e = std::get_if<SwapEdge>(&op);
        if (!e) throw std::logic_error("factor router emitted a non-swap primitive");
        Vertex a = lift(c, e->u), b = lift(c, e->v);
        m.ops.push_back(SwapEdge{std::min(a, b), std::max(a, b)});
      }
      lane.push_back(std::move(m));
    }
    lanes.push_back(std::move(lane));
  }
  return merge_parallel(lanes);
}

}  // namespace detail

/// Route on G1 x G2 (vertex (a, b) has index a + |G1| b) in three phases:
/// G1-fibers, G2-copies, G1-fibers. Phase-1 targets come from a perfect
/// matching decomposition so that phase 2 is a permutation in every copy.
inline Schedule route_product(const ArchGraph& g1, const ArchGraph& g2, const Permutation& pi) {
  const int n1 = g1.size(), n2 = g2.size(), n = n1 * n2;
  if (pi.size() != n) throw std::invalid_argument("route_product: permutation size mismatch");
  std::vector<std::vector<int>> tokens_of_left(n2);
  std::vector<int> right(n), prefer(n);
  for (int t = 0; t < n; ++t) {
    tokens_of_left[t / n1].push_back(t);
    right[t] = pi(t) / n1;
    prefer[t] = t % n1;
  }
  const auto j = detail::decompose_regular(n1, n2, tokens_of_left, right, prefer);

  std::vector<std::vector<Vertex>> p1(n2, std::vector<Vertex>(n1)), p3(n2, std::vector<Vertex>(n1));
  std::vector<std::vector<Vertex>> p2(n1, std::vector<Vertex>(n2));
  for (int t = 0; t < n; ++t) {
    const int a = t % n1, b = t / n1, a2 = pi(t) % n1, b2 = pi(t) / n1;
    p1[b][a] = j[t];
    p2[j[t]][b] = b2;
    p3[b2][j[t]] = a2;
  }
  auto perms = [](const std::vector<std::vector<Vertex>>& imgs) {
    std::vector<Permutation> out;
    for (const auto& im : imgs) out.emplace_back(im);
    return out;
  };
  auto fiber = [n1](int b, Vertex a) { return a + n1 * b; };
  auto copy = [n1](int a, Vertex b) { return a + n1 * b; };
  Schedule s;
  s.append(detail::route_fibers(g1, n2, perms(p1), fiber));
  s.append(detail::route_fibers(g2, n1, perms(p2), copy));
  s.append(detail::route_fibers(g1, n2, perms(p3), fiber));
  return s;
}

namespace detail {

/// Factors (G1, G2) when g is a recognised product family.
inline std::optional<std::pair<ArchGraph, ArchGraph>> product_factors(const ArchGraph& g) {
  std::optional<std::pair<ArchGraph, ArchGraph>> f;
  if (g.is_family("grid") && g.family()->param("d") >= 2) {
    const int side = g.family()->param("n"), d = g.family()->param("d");
    if (side >= 2) f.emplace(path_graph(side, g.ancilla_budget()), grid_graph(side, d - 1, g.ancilla_budget()));
  } else if (g.is_family("hypercube") && g.family()->param("d") >= 2) {
    const int d = g.family()->param("d");
    f.emplace(complete_graph(2, g.ancilla_budget()), hypercube_graph(d - 1, g.ancilla_budget()));
  }
  if (f && cartesian_product(f->first, f->second, g.ancilla_budget()).edges() != g.edges()) f.reset();
  return f;
}

}  // namespace detail

/// Dispatch to the specialised router for the family, else route on a BFS
/// spanning tree rooted at the center.
inline Schedule route_generic(const ArchGraph& g, const Permutation& pi) {
  if (pi.size() != g.size()) throw std::invalid_argument("route_generic: permutation size mismatch");
  if (pi.is_identity()) return {};
  if (is_complete(g)) return route_complete(g, pi);
  if (path_order(g)) return route_path_oet(g, pi);
  if (auto f = detail::product_factors(g)) return route_product(f->first, f->second, pi);
  if (is_tree(g)) return route_tree(g, g.edges(), pi);
  return route_tree(g, spanning_tree(g, center(g)), pi);
}

// ---------------------------------------------------------------------------
// Wheel

struct WheelRouting {
  Schedule schedule;
  std::string branch;  // "hub" or "rim"
  int hub_depth = 0;
  int rim_depth = 0;
  int optimum_floor = 0;  // min{2l, N/l - 1}
};

namespace detail {

inline int wheel_rim(const ArchGraph& w) {
  if (!w.is_family("wheel")) throw std::invalid_argument("wheel router requires a wheel graph");
  return w.family()->param("n");
}

inline int wheel_segment(int rim, int l) {
  if (l < 1 || rim % l != 0 || rim / l < 2) throw std::invalid_argument("wheel router: l must divide N with N/l >= 2");
  return rim / l;
}

}  // namespace detail

/// Pairs routed one after another through the hub, three swaps each.
inline Schedule route_wheel_hub(const ArchGraph& w, int l) {
  const int rim = detail::wheel_rim(w), seg = detail::wheel_segment(rim, l);
  const Vertex hub = rim;
  Schedule s;
  for (int j = 0; j < l; ++j) {
    const Vertex p = j * seg, q = (j + 1) * seg - 1;
    s.push(SwapEdge{p, hub});
    s.push(SwapEdge{q, hub});
    s.push(SwapEdge{p, hub});
  }
  return s;
}

/// Pairs exchanged in parallel along their own rim arcs.
inline Schedule route_wheel_rim(const ArchGraph& w, int l) {
  const int rim = detail::wheel_rim(w), seg = detail::wheel_segment(rim, l);
  auto at = detail::identity_placement(w.size());
  std::vector<Vertex> dest(w.size());
  std::iota(dest.begin(), dest.end(), 0);
  std::vector<std::vector<Timestep>> lanes;
  for (int j = 0; j < l; ++j) {
    std::vector<Vertex> arc;
    for (int i = j * seg; i < (j + 1) * seg; ++i) arc.push_back(i);
    std::swap(dest[arc.front()], dest[arc.back()]);
    lanes.push_back(detail::oet_sequence(arc, at, dest));
  }
  return detail::wrap(merge_parallel(lanes));
}

/// The cheaper of the hub and rim protocols for the wheel permutation with l pairs.
inline WheelRouting route_wheel(const ArchGraph& w, int l) {
  const int rim = detail::wheel_rim(w);
  WheelRouting r;
  Schedule hub = route_wheel_hub(w, l), arc = route_wheel_rim(w, l);
  r.hub_depth = depth(hub);
  r.rim_depth = depth(arc);
  r.optimum_floor = std::min(2 * l, rim / l - 1);
  if (r.hub_depth < r.rim_depth) {
    r.branch = "hub";
    r.schedule = std::move(hub);
  } else {
    r.branch = "rim";
    r.schedule = std::move(arc);
  }
  return r;
}

}  // namespace qroute
