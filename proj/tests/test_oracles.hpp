#pragma once

// Independent reference computations for the tests. Deliberately naive:
// dense matrices, Floyd-Warshall, plain subset loops, direct permutation
// tracking. None of it calls into the library's algorithms.

#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "qroute/graph.hpp"
#include "qroute/schedule.hpp"

namespace oracle {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::vector<std::vector<bool>> adjacency_matrix(const qroute::ArchGraph& g) {
  std::vector<std::vector<bool>> a(g.size(), std::vector<bool>(g.size(), false));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = true;
  return a;
}

inline std::vector<std::vector<int>> floyd_warshall(const qroute::ArchGraph& g) {
  const int n = g.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline int diameter(const qroute::ArchGraph& g) {
  int m = 0;
  for (auto& row : floyd_warshall(g))
    for (int x : row) m = std::max(m, x);
  return m;
}

/// Boundary size of the subset encoded by mask, straight from the definition.
inline int boundary_size(const std::vector<std::vector<bool>>& adj, std::uint32_t mask) {
  const int n = static_cast<int>(adj.size());
  int b = 0;
  for (int v = 0; v < n; ++v) {
    if (mask >> v & 1u) continue;
    for (int u = 0; u < n; ++u)
      if ((mask >> u & 1u) && adj[u][v]) {
        ++b;
        break;
      }
  }
  return b;
}

/// Exact expansion as (num, den) in lowest terms, every nonempty proper
/// subset scored on its own with no symmetry shortcuts.
inline std::pair<std::int64_t, std::int64_t> brute_expansion(const qroute::ArchGraph& g) {
  const int n = g.size();
  auto adj = adjacency_matrix(g);
  std::int64_t bn = 1, bd = 0;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    int s = __builtin_popcount(mask);
    std::int64_t num = boundary_size(adj, mask), den = std::min(s, n - s);
    if (bd == 0 || num * bd < bn * den) {
      bn = num;
      bd = den;
    }
  }
  std::int64_t gcd = std::gcd(bn, bd);
  return {bn / gcd, bd / gcd};
}

/// Data tokens after a sequence of plain edge swaps: out[v] = token at v.
inline std::vector<int> run_edge_swaps(int n, const std::vector<std::pair<int, int>>& swaps) {
  std::vector<int> at(n);
  std::iota(at.begin(), at.end(), 0);
  for (auto [u, v] : swaps) std::swap(at[u], at[v]);
  return at;
}

/// Routing target for token placement: token i must end at pi(i).
inline std::vector<int> target_placement(const std::vector<int>& image) {
  std::vector<int> at(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) at[image[i]] = static_cast<int>(i);
  return at;
}

/// Replays a swap-only schedule on plain arrays. Returns the realized image
/// (token i ends at image[i]) or an empty vector if any layer uses a non-edge,
/// reuses a vertex, or contains a non-swap primitive.
inline std::vector<int> replay_swaps(const qroute::ArchGraph& g, const qroute::Schedule& s) {
  const int n = g.size();
  auto adj = adjacency_matrix(g);
  std::vector<int> at(n);
  std::iota(at.begin(), at.end(), 0);
  for (const auto& t : s.timesteps) {
    std::vector<char> used(n, 0);
    for (const auto& op : t.ops) {
      const auto* e = std::get_if<qroute::SwapEdge>(&op);
      if (!e || e->u < 0 || e->v >= n || e->u >= n || e->v < 0 || !adj[e->u][e->v] || used[e->u] || used[e->v])
        return {};
      used[e->u] = used[e->v] = 1;
      std::swap(at[e->u], at[e->v]);
    }
  }
  std::vector<int> image(n);
  for (int v = 0; v < n; ++v) image[at[v]] = v;
  return image;
}

/// Number of layers with at least one edge swap.
inline int swap_layers(const qroute::Schedule& s) {
  int d = 0;
  for (const auto& t : s.timesteps) {
    bool any = false;
    for (const auto& op : t.ops) any = any || std::holds_alternative<qroute::SwapEdge>(op);
    d += any ? 1 : 0;
  }
  return d;
}

/// Replays any schedule on plain arrays (data + `budget` ancillas per
/// vertex). Bell halves are counted here from scratch: 1 per path end, 2 per
/// interior vertex, doubled for swaps, and must fit in the free ancillas.
/// Returns the realized image, or empty on any violation or if ancillas are
/// not clear at the end.
inline std::vector<int> replay_any(const qroute::ArchGraph& g, const qroute::Schedule& s) {
  const int n = g.size(), b = g.ancilla_budget();
  auto adj = adjacency_matrix(g);
  std::vector<std::vector<int>> cell(n, std::vector<int>(b + 1, -1));
  for (int v = 0; v < n; ++v) cell[v][0] = v;
  for (const auto& t : s.timesteps) {
    for (const auto& op : t.ops) {
      if (const auto* e = std::get_if<qroute::SwapEdge>(&op)) {
        if (!adj[e->u][e->v]) return {};
        std::swap(cell[e->u][0], cell[e->v][0]);
      } else if (const auto* l = std::get_if<qroute::SwapLocal>(&op)) {
        if (l->s1 < 0 || l->s2 < 0 || l->s1 > b || l->s2 > b || l->s1 == l->s2) return {};
        std::swap(cell[l->v][l->s1], cell[l->v][l->s2]);
      } else {
        const auto& r = std::get<qroute::TeleRound>(op);
        std::vector<int> need(n, 0);
        std::vector<char> src(n, 0);
        for (const auto& tr : r.transfers) {
          const auto& p = tr.path;
          if (p.size() < 2) return {};
          for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (!adj[p[i]][p[i + 1]]) return {};
          int w = tr.kind == qroute::TransferKind::Swap ? 2 : 1;
          for (std::size_t i = 0; i < p.size(); ++i) need[p[i]] += (i == 0 || i + 1 == p.size()) ? w : 2 * w;
          if (src[p.front()]) return {};
          src[p.front()] = 1;
          if (tr.kind == qroute::TransferKind::Swap) {
            if (src[p.back()]) return {};
            src[p.back()] = 1;
          }
        }
        for (int v = 0; v < n; ++v) {
          int free = 0;
          for (int k = 1; k <= b; ++k) free += cell[v][k] == -1;
          if (need[v] > free) return {};
        }
        auto next = cell;
        for (int v = 0; v < n; ++v)
          if (src[v]) next[v][0] = -1;
        for (const auto& tr : r.transfers) {
          int a = tr.path.front(), z = tr.path.back();
          if (tr.kind == qroute::TransferKind::Swap) {
            next[z][0] = cell[a][0];
            next[a][0] = cell[z][0];
          } else {
            if (next[z][tr.dst_slot] != -1) return {};
            next[z][tr.dst_slot] = cell[a][0];
          }
        }
        cell = std::move(next);
      }
    }
  }
  std::vector<int> image(n, -1);
  for (int v = 0; v < n; ++v) {
    for (int k = 1; k <= b; ++k)
      if (cell[v][k] != -1) return {};
    if (cell[v][0] < 0) return {};
    image[cell[v][0]] = v;
  }
  return image;
}

}  // namespace oracle
