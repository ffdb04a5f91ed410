#pragma once

// Sparse routing with ancillas: trains, token clusters and the three-phase
// gather / tree-route / ungather scheme.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/graph.hpp"
#include "qroute/schedule.hpp"
#include "qroute/swap_router.hpp"

namespace qroute {

/// Tokens on a path, listed tail first. `ahead` is the vertex the head moves
/// into; it must be adjacent to the head.
struct Train {
  std::vector<Vertex> vertices;
  Vertex ahead = -1;
};

/// A connected group of occupied vertices in the next-hop forest towards the
/// gathering vertex. `trains[0]` is the train that moves next.
struct TokenCluster {
  Vertex root = -1;
  std::vector<Vertex> vertices;
  std::vector<Train> trains;
  bool settled = false;  // contains the gathering vertex
};

struct TrainAdvance {
  TokenState state;
  std::vector<Timestep> steps;  // always 5
};

/// Shift a train one vertex forward in exactly five timesteps:
/// local, edge, local, edge, local. Each train vertex past the tail and the
/// vertex ahead use their lowest free ancilla; the data slot ahead must be
/// null and the tail ends null.
inline TrainAdvance advance_train(const ArchGraph& g, const TokenState& st, const Train& train) {
  const auto& tv = train.vertices;
  if (tv.empty()) throw std::invalid_argument("advance_train: empty train");
  std::vector<Vertex> pos = tv;
  pos.push_back(train.ahead);
  const int l = static_cast<int>(tv.size());
  for (Vertex v : pos)
    if (!g.contains(v)) throw std::invalid_argument("advance_train: unknown vertex " + std::to_string(v));
  for (int i = 0; i < l; ++i)
    if (!g.adjacent(pos[i], pos[i + 1]))
      throw std::invalid_argument("advance_train: train is not a path ending next to its target");
  for (Vertex v : tv)
    if (st.data(v) == kNullToken) throw std::invalid_argument("advance_train: train vertex holds no token");
  if (st.data(train.ahead) != kNullToken)
    throw std::invalid_argument("advance_train: head blocked by token " + std::to_string(st.data(train.ahead)) +
                                " at vertex " + std::to_string(train.ahead));
  std::vector<int> anc(l + 1, -1);
  for (int i = 1; i <= l; ++i) {
    anc[i] = st.first_free_ancilla(pos[i]);
    if (anc[i] < 0) throw std::invalid_argument("advance_train: no free ancilla at vertex " + std::to_string(pos[i]));
  }
  auto local = [&](int i) { return SwapLocal{pos[i], 0, anc[i]}; };
  auto edge = [&](int i) { return SwapEdge{std::min(pos[i], pos[i + 1]), std::max(pos[i], pos[i + 1])}; };
  std::vector<Timestep> steps(5);
  for (int i = 1; i < l; i += 2) steps[0].ops.push_back(local(i));
  for (int i = 0; i + 1 <= l; i += 2) {
    steps[1].ops.push_back(edge(i));
    steps[2].ops.push_back(local(i + 1));
  }
  for (int i = 1; i <= l; i += 2) {
    if (i + 1 <= l) steps[3].ops.push_back(edge(i));
    steps[4].ops.push_back(local(i));
  }
  TrainAdvance out{st, steps};
  for (std::size_t k = 0; k < steps.size(); ++k) apply_timestep(g, out.state, steps[k], k);
  return out;
}

namespace detail {

/// Occupied vertices grouped into clusters. `occupied(v)` marks vertices
/// whose data slot holds a token that is being gathered.
inline std::vector<TokenCluster> find_clusters(const ArchGraph& g, const std::vector<Vertex>& hop, Vertex r,
                                               const std::vector<char>& occupied) {
  const int n = g.size();
  std::vector<std::vector<Vertex>> kids(n);
  for (Vertex v = 0; v < n; ++v)
    if (v != r && occupied[v] && occupied[hop[v]]) kids[hop[v]].push_back(v);
  std::vector<TokenCluster> out;
  for (Vertex v = 0; v < n; ++v) {
    if (!occupied[v] || (v != r && occupied[hop[v]])) continue;
    TokenCluster c;
    c.root = v;
    c.settled = v == r;
    std::vector<Vertex> stack{v};
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      c.vertices.push_back(x);
      for (Vertex y : kids[x]) stack.push_back(y);
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    // path decomposition, each path descending through the lowest child
    std::vector<Vertex> starts{v};
    for (std::size_t s = 0; s < starts.size(); ++s) {
      std::vector<Vertex> chain{starts[s]};
      while (!kids[chain.back()].empty()) {
        const auto& ks = kids[chain.back()];
        for (std::size_t i = 1; i < ks.size(); ++i) starts.push_back(ks[i]);
        chain.push_back(ks.front());
      }
      std::reverse(chain.begin(), chain.end());
      Train t{chain, chain.back() == r ? -1 : hop[chain.back()]};
      c.trains.push_back(std::move(t));
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<Vertex> hop_towards(const ArchGraph& g, Vertex r) { return next_hops(g, r); }

}  // namespace detail

/// Clusters of the tokens selected by `marked` (by token id) around r.
inline std::vector<TokenCluster> token_clusters(const ArchGraph& g, const TokenState& st, Vertex r,
                                                const std::vector<char>& marked) {
  std::vector<char> occ(g.size(), 0);
  for (Vertex v = 0; v < g.size(); ++v) occ[v] = st.data(v) != kNullToken && marked.at(st.data(v));
  return detail::find_clusters(g, detail::hop_towards(g, r), r, occ);
}

struct ClusterStep {
  TokenState state;
  std::vector<Timestep> steps;  // 5, possibly empty when nothing moves
  std::vector<TokenCluster> clusters;
  int advanced = 0;
};

/// One round of cluster movement: every unsettled cluster advances its lead
/// train one vertex towards r. When two clusters want the same vertex the
/// one with the lower root index goes first; the other joins it next round.
inline ClusterStep step_clusters(const ArchGraph& g, const TokenState& st, Vertex r,
                                 const std::vector<char>& marked) {
  auto clusters = token_clusters(g, st, r, marked);
  ClusterStep out{st, std::vector<Timestep>(5), {}, 0};
  std::vector<char> claimed(g.size(), 0);
  for (const auto& c : clusters) {
    if (c.settled) continue;
    const Train& t = c.trains.front();
    if (claimed[t.ahead]) continue;
    claimed[t.ahead] = 1;
    auto adv = advance_train(g, out.state, t);
    out.state = std::move(adv.state);
    for (int k = 0; k < 5; ++k)
      out.steps[k].ops.insert(out.steps[k].ops.end(), adv.steps[k].ops.begin(), adv.steps[k].ops.end());
    ++out.advanced;
  }
  out.clusters = token_clusters(g, out.state, r, marked);
  return out;
}

struct SparseRouting {
  Schedule schedule;
  Vertex root = -1;
  int k = 0;
  int cluster_rounds = 0;
  int phase1_depth = 0;
  int phase2_depth = 0;
  int phase3_depth = 0;
};

/// Three phases: gather the marked tokens into a tree around the center,
/// route on that tree, then undo the gathering. Unmarked tokens sit in
/// ancilla slot 1 throughout, so trains need a second ancilla.
inline SparseRouting sparse_route(const ArchGraph& g, const Permutation& pi) {
  if (pi.size() != g.size()) throw std::invalid_argument("sparse_route: permutation size mismatch");
  if (g.ancilla_budget() < 2)
    throw std::invalid_argument(
        "sparse_route: needs 2 ancillas per vertex (one parks the unmarked token, one carries the train)");
  SparseRouting res;
  const int n = g.size();
  const auto support = pi.support();
  res.k = static_cast<int>(support.size());
  res.root = center(g);
  if (support.empty()) return res;

  std::vector<char> marked(n, 0);
  for (Vertex v : support) marked[v] = 1;

  TokenState st = TokenState::initial(g);
  std::vector<Timestep> phase1;
  {
    Timestep hide;
    for (Vertex v = 0; v < n; ++v)
      if (!marked[v]) hide.ops.push_back(SwapLocal{v, 0, 1});
    if (!hide.ops.empty()) {
      apply_timestep(g, st, hide, 0);
      phase1.push_back(std::move(hide));
    }
  }
  const int cap = 4 * (diameter(g) + res.k) + 16;
  for (;;) {
    auto clusters = token_clusters(g, st, res.root, marked);
    if (clusters.size() == 1 && clusters.front().settled) break;
    if (res.cluster_rounds >= cap) throw std::logic_error("sparse_route: gathering did not converge");
    auto step = step_clusters(g, st, res.root, marked);
    if (step.advanced == 0) throw std::logic_error("sparse_route: no cluster could advance");
    st = std::move(step.state);
    for (auto& t : step.steps)
      if (!t.ops.empty()) phase1.push_back(std::move(t));
    ++res.cluster_rounds;
  }

  // tree on the gathered tokens and the induced permutation
  const auto hop = detail::hop_towards(g, res.root);
  std::vector<Vertex> where(n, -1);  // token -> vertex
  std::vector<Edge> tree;
  for (Vertex v = 0; v < n; ++v) {
    const int tok = st.data(v);
    if (tok == kNullToken || !marked[tok]) continue;
    where[tok] = v;
    if (v != res.root) tree.emplace_back(std::min(v, hop[v]), std::max(v, hop[v]));
  }
  std::vector<Vertex> img(n);
  std::iota(img.begin(), img.end(), 0);
  for (Vertex v : support) img[where[v]] = where[pi(v)];
  Schedule phase2 = res.k >= 2 ? route_tree(g, tree, Permutation(img)) : Schedule{};

  std::vector<Timestep> phase3(phase1.rbegin(), phase1.rend());
  res.schedule.append(phase1);
  res.schedule.append(phase2);
  res.schedule.append(phase3);
  res.phase1_depth = depth(detail::wrap(phase1));
  res.phase2_depth = depth(phase2);
  res.phase3_depth = res.phase1_depth;
  return res;
}

}  // namespace qroute
