#pragma once

// Teleportation routing: ladder canonical paths, a Bell-budgeted greedy
// round packer, swap simulation of a single round, and the swap/teleport
// depth ratio.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qroute/graph.hpp"
#include "qroute/rational.hpp"
#include "qroute/schedule.hpp"
#include "qroute/sparse_router.hpp"
#include "qroute/swap_router.hpp"

namespace qroute {

// ---------------------------------------------------------------------------
// Ladder

/// Canonical path between two ladder addresses of L(n), in addresses.
/// Walks up from the lower address through the intermediate vertices
/// 2^(len(u)+i-1) + u, i = 1..d-1, where d is the layer distance.
inline std::vector<int> canonical_path(int n, int u, int v) {
  const int top = (1 << n) - 1;
  if (u < 1 || u > top || v < 1 || v > top)
    throw std::invalid_argument("canonical_path: addresses must lie in [1, " + std::to_string(top) + "]");
  if (u == v) throw std::invalid_argument("canonical_path: endpoints coincide");
  const bool flip = u > v;
  if (flip) std::swap(u, v);
  const int lu = bit_length(static_cast<std::uint64_t>(u));
  const int d = bit_length(static_cast<std::uint64_t>(v)) - lu;
  std::vector<int> path{u};
  for (int i = 1; i < d; ++i) path.push_back((1 << (lu + i - 1)) + u);
  path.push_back(v);
  if (flip) std::reverse(path.begin(), path.end());
  return path;
}

inline int ladder_order(const ArchGraph& g) {
  if (!g.is_family("ladder")) throw std::invalid_argument("expected a ladder graph");
  return g.family()->param("n");
}

/// One round of canonical-path moves, P(u, pi(u)) for every moved u.
inline Schedule ladder_schedule(const ArchGraph& g, const Permutation& pi) {
  const int n = ladder_order(g);
  if (pi.size() != g.size()) throw std::invalid_argument("ladder_schedule: permutation size mismatch");
  if (g.ancilla_budget() < 6)
    throw std::invalid_argument("ladder_schedule: needs 6 ancillas per vertex (4 paths meet at a vertex, 6 Bell halves)");
  Schedule s;
  if (pi.is_identity()) return s;
  TeleRound round;
  for (Vertex u : pi.support()) {
    Transfer t;
    for (int a : canonical_path(n, u + 1, pi(u) + 1)) t.path.push_back(a - 1);
    round.transfers.push_back(std::move(t));
  }
  const auto inc = path_incidence(g.size(), round);
  const auto load = round_loads(g.size(), round);
  for (Vertex v = 0; v < g.size(); ++v) {
    if (inc[v] > 4) throw std::logic_error("ladder_schedule: " + std::to_string(inc[v]) + " paths meet at vertex " + std::to_string(v));
    if (load[v] > 6) throw std::logic_error("ladder_schedule: load " + std::to_string(load[v]) + " at vertex " + std::to_string(v));
  }
  s.push(std::move(round));
  return s;
}

// ---------------------------------------------------------------------------
// Greedy rounds

namespace detail {

/// Shortest s-t path whose vertices can still take the Bell halves it
/// needs: w at the ends (plus `extra` at t), 2w inside. Empty if none.
inline std::vector<Vertex> capacity_path(const ArchGraph& g, const std::vector<int>& cap, Vertex s, Vertex t,
                                         int w, int extra) {
  if (cap[s] < w || cap[t] < w + extra) return {};
  std::vector<Vertex> par(g.size(), -1);
  std::deque<Vertex> q{s};
  par[s] = s;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    for (Vertex y : g.neighbors(x)) {
      if (par[y] >= 0) continue;
      if (y == t) {
        par[y] = x;
        std::vector<Vertex> p{t};
        for (Vertex z = x; z != s; z = par[z]) p.push_back(z);
        p.push_back(s);
        std::reverse(p.begin(), p.end());
        return p;
      }
      if (cap[y] < 2 * w) continue;
      par[y] = x;
      q.push_back(y);
    }
  }
  return {};
}

inline void charge(std::vector<int>& cap, const std::vector<Vertex>& p, int w, int extra) {
  for (std::size_t i = 0; i < p.size(); ++i) cap[p[i]] -= (i == 0 || i + 1 == p.size()) ? w : 2 * w;
  cap[p.back()] -= extra;
}

/// Plan transfers into a scratch capacity vector; commit only if all fit.
inline bool try_place(const ArchGraph& g, std::vector<int>& cap, const std::vector<std::pair<Vertex, Vertex>>& moves,
                      TransferKind kind, std::vector<Transfer>& out) {
  std::vector<int> trial = cap;
  std::vector<Transfer> got;
  const int w = kind == TransferKind::Swap ? 2 : 1;
  for (auto [s, t] : moves) {
    auto p = capacity_path(g, trial, s, t, w, 0);
    if (p.empty()) return false;
    charge(trial, p, w, 0);
    got.push_back(Transfer{std::move(p), kind, 0});
  }
  cap = std::move(trial);
  out.insert(out.end(), got.begin(), got.end());
  return true;
}

/// Can pairs (a, b) still be joined when `blocked` vertices may only be
/// path endpoints?
inline bool joinable(const ArchGraph& g, const std::vector<char>& blocked, Vertex a, Vertex b) {
  std::vector<char> seen(g.size(), 0);
  std::deque<Vertex> q{a};
  seen[a] = 1;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    if (x == b) return true;
    if (x != a && blocked[x]) continue;
    for (Vertex y : g.neighbors(x))
      if (!seen[y]) {
        seen[y] = 1;
        q.push_back(y);
      }
  }
  return false;
}

}  // namespace detail

/// Packs teleportations of pi's cycles into rounds using at most `budget`
/// ancillas per vertex. Longest transfer first, then lowest source. A cycle
/// that never fits in one round is opened by parking one token in an
/// ancilla at its destination; the rest then drains as a chain.
inline Schedule greedy_schedule(const ArchGraph& g, const Permutation& pi, int budget) {
  const int n = g.size();
  if (pi.size() != n) throw std::invalid_argument("greedy_schedule: permutation size mismatch");
  if (budget < 2)
    throw std::invalid_argument("greedy_schedule: budget must be at least 2 (path interiors hold 2 Bell halves)");
  if (budget > g.ancilla_budget())
    throw std::invalid_argument("greedy_schedule: budget exceeds the graph's ancilla budget");
  Schedule out;
  TokenState st = TokenState::initial(g);
  std::vector<Vertex> target(n, -1);
  std::vector<int> len(n, 0);
  for (Vertex v : pi.support()) {
    target[v] = pi(v);
    len[v] = bfs_distances(g, v)[pi(v)];
  }
  struct Parked {
    Vertex v;
    int slot;
  };
  std::vector<Parked> parked;
  std::vector<int> parked_at(n, 0);
  const int round_cap = 8 * n + 16 + 3 * n * n;
  int rounds = 0;

  for (;;) {
    Timestep locals;
    std::erase_if(parked, [&](const Parked& p) {
      if (st.data(p.v) != kNullToken) return false;
      locals.ops.push_back(SwapLocal{p.v, 0, p.slot});
      --parked_at[p.v];
      return true;
    });
    if (!locals.ops.empty()) {
      apply_timestep(g, st, locals, out.size());
      out.timesteps.push_back(locals);
    }
    const bool any = std::any_of(target.begin(), target.end(), [](Vertex t) { return t >= 0; });
    if (!any) {
      if (!parked.empty()) throw std::logic_error("greedy_schedule: parked token without a free data slot");
      break;
    }
    if (++rounds > round_cap) throw std::logic_error("greedy_schedule: round limit exceeded");

    std::vector<int> base(n);
    for (Vertex v = 0; v < n; ++v) base[v] = budget - parked_at[v];
    std::vector<int> cap = base;

    // chains (tail first) and cycles of the pending moves
    struct Unit {
      bool cycle = false;
      std::vector<Vertex> seq;
      int key = 0;
      Vertex low = 0;
    };
    std::vector<char> has_pred(n, 0), seen(n, 0);
    for (Vertex v = 0; v < n; ++v)
      if (target[v] >= 0) has_pred[target[v]] = 1;
    std::vector<Unit> units;
    auto finish = [&](Unit u) {
      for (Vertex x : u.seq) u.key = std::max(u.key, len[x]);
      u.low = *std::min_element(u.seq.begin(), u.seq.end());
      units.push_back(std::move(u));
    };
    for (Vertex v = 0; v < n; ++v) {
      if (target[v] < 0 || has_pred[v]) continue;
      Unit u;
      for (Vertex x = v; target[x] >= 0; x = target[x]) {
        seen[x] = 1;
        u.seq.push_back(x);
      }
      finish(std::move(u));
    }
    for (Vertex v = 0; v < n; ++v) {
      if (target[v] < 0 || seen[v]) continue;
      Unit u;
      u.cycle = true;
      for (Vertex x = v; !seen[x]; x = target[x]) {
        seen[x] = 1;
        u.seq.push_back(x);
      }
      finish(std::move(u));
    }
    std::sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
      return a.key != b.key ? a.key > b.key : a.low < b.low;
    });

    TeleRound round;
    std::vector<Vertex> done;
    std::vector<Parked> new_parked;
    std::vector<const Unit*> unfit;
    auto place_cycle = [&](std::vector<int>& c, const Unit& u, std::vector<Transfer>& sink) {
      std::vector<std::pair<Vertex, Vertex>> moves;
      for (Vertex x : u.seq) moves.emplace_back(x, target[x]);
      if (u.seq.size() == 2 && detail::try_place(g, c, {moves[0]}, TransferKind::Swap, sink)) return true;
      return detail::try_place(g, c, moves, TransferKind::Move, sink);
    };
    for (const auto& u : units) {
      if (u.cycle) {
        if (place_cycle(cap, u, round.transfers)) {
          done.insert(done.end(), u.seq.begin(), u.seq.end());
        } else {
          std::vector<int> empty = base;
          std::vector<Transfer> sink;
          if (!place_cycle(empty, u, sink)) unfit.push_back(&u);
        }
        continue;
      }
      // chain: drain from the free end backwards
      for (auto it = u.seq.rbegin(); it != u.seq.rend(); ++it) {
        if (!detail::try_place(g, cap, {{*it, target[*it]}}, TransferKind::Move, round.transfers)) break;
        done.push_back(*it);
      }
    }
    // at budget 2 a parked token blocks its vertex for path interiors, so
    // only one is allowed at a time
    const Unit* fallback = nullptr;
    for (const Unit* u : unfit) {
      if (budget == 2 && (!parked.empty() || !new_parked.empty())) break;
      const auto& a = u->seq;
      const int m = static_cast<int>(a.size());
      bool candidate = false;
      for (int j = 0; j < m; ++j) {
        const Vertex into = a[j], from = a[(j + m - 1) % m];
        if (parked_at[into] > 0) continue;
        int slot = -1;
        for (int s = 1; s <= budget && slot < 0; ++s)
          if (st.at(into, s) == kNullToken) slot = s;
        if (slot < 0) continue;
        if (base[into] - 1 < 2) {
          // the chain left behind must not need `into` as an interior vertex
          std::vector<char> blocked(n, 0);
          for (Vertex v = 0; v < n; ++v) blocked[v] = base[v] - (v == into ? 1 : 0) < 2;
          bool ok = true;
          for (int i = 0; i < m && ok; ++i)
            if (a[i] != from) ok = detail::joinable(g, blocked, a[i], target[a[i]]);
          if (!ok) continue;
        }
        candidate = true;
        auto p = detail::capacity_path(g, cap, from, into, 1, 1);
        if (p.empty()) continue;
        detail::charge(cap, p, 1, 1);
        round.transfers.push_back(Transfer{std::move(p), TransferKind::Move, slot});
        new_parked.push_back({into, slot});
        done.push_back(from);
        break;
      }
      if (!candidate && parked.empty() && new_parked.empty()) {
        fallback = u;
        break;
      }
    }
    if (round.transfers.empty() && !fallback) {
      if (!locals.ops.empty()) continue;
      throw std::logic_error("greedy_schedule: no transfer fits the budget");
    }
    if (!round.transfers.empty()) {
      Timestep ts{{std::move(round)}};
      apply_timestep(g, st, ts, out.size());
      out.timesteps.push_back(std::move(ts));
    }
    for (Vertex v : done) target[v] = -1;
    for (const auto& p : new_parked) {
      parked.push_back(p);
      ++parked_at[p.v];
    }
    if (fallback) {
      // no safe parking spot: walk the cycle with single-edge swap transfers
      std::vector<Vertex> im(n);
      std::iota(im.begin(), im.end(), 0);
      for (Vertex x : fallback->seq) im[x] = target[x];
      for (const auto& layer : route_generic(g, Permutation(im)).timesteps) {
        TeleRound r;
        for (const auto& op : layer.ops) {
          const auto& e = std::get<SwapEdge>(op);
          r.transfers.push_back(Transfer{{e.u, e.v}, TransferKind::Swap, 0});
        }
        if (r.transfers.empty()) continue;
        Timestep ts{{std::move(r)}};
        apply_timestep(g, st, ts, out.size());
        out.timesteps.push_back(std::move(ts));
        ++rounds;
      }
      for (Vertex x : fallback->seq) target[x] = -1;
    }
  }
  return out;
}

inline Schedule greedy_schedule(const ArchGraph& g, const Permutation& pi) {
  return greedy_schedule(g, pi, g.ancilla_budget());
}

// ---------------------------------------------------------------------------
// Swap simulation of one round

namespace detail {

/// Swap-route the cycles of sigma that use `transfers`, one tree per
/// connected piece of the union of their paths, pieces in parallel.
inline std::vector<Timestep> union_tree_route(const ArchGraph& g, const std::vector<Transfer>& transfers,
                                              const Permutation& sigma) {
  const int n = g.size();
  std::vector<std::vector<Vertex>> adj(n);
  std::vector<char> on(n, 0);
  for (const auto& t : transfers)
    for (std::size_t i = 0; i + 1 < t.path.size(); ++i) {
      adj[t.path[i]].push_back(t.path[i + 1]);
      adj[t.path[i + 1]].push_back(t.path[i]);
      on[t.path[i]] = on[t.path[i + 1]] = 1;
    }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<char> seen(n, 0);
  std::vector<std::vector<Timestep>> lanes;
  for (Vertex r = 0; r < n; ++r) {
    if (!on[r] || seen[r]) continue;
    std::vector<Edge> tree;
    std::vector<Vertex> comp{r};
    seen[r] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (Vertex y : adj[comp[i]])
        if (!seen[y]) {
          seen[y] = 1;
          comp.push_back(y);
          tree.emplace_back(std::min(comp[i], y), std::max(comp[i], y));
        }
    std::vector<Vertex> img(n);
    std::iota(img.begin(), img.end(), 0);
    bool moves = false;
    for (Vertex v : comp) {
      img[v] = sigma(v);
      moves = moves || img[v] != v;
    }
    if (moves) lanes.push_back(route_tree(g, tree, Permutation(img)).timesteps);
  }
  return merge_parallel(lanes);
}

}  // namespace detail

struct RoundSimulation {
  Schedule schedule;
  int threshold = 0;  // transfers longer than this count as long
  int short_cycles = 0;
  int long_cycles = 0;
  bool long_via_sparse = false;
  int short_depth = 0;
  int long_depth = 0;
};

/// Swap-only schedule with the same effect on data slots as `round`. Cycles
/// made of short transfers are tree-routed along their own paths; cycles
/// with a long transfer go to whichever of that and sparse routing is
/// shallower.
inline RoundSimulation simulate_round_detailed(const ArchGraph& g, const TeleRound& round) {
  const int n = g.size();
  RoundSimulation res;
  res.threshold = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const Permutation sigma = round_permutation(n, round);
  if (sigma.is_identity()) return res;
  std::vector<int> by_vertex(n, -1);
  for (std::size_t i = 0; i < round.transfers.size(); ++i) {
    const auto& t = round.transfers[i];
    by_vertex[t.source()] = static_cast<int>(i);
    if (t.kind == TransferKind::Swap) by_vertex[t.destination()] = static_cast<int>(i);
  }
  std::vector<Transfer> short_t, long_t;
  std::vector<Vertex> short_im(n), long_im(n);
  std::iota(short_im.begin(), short_im.end(), 0);
  std::iota(long_im.begin(), long_im.end(), 0);
  for (const auto& cyc : sigma.cycles()) {
    bool is_long = false;
    for (Vertex v : cyc) is_long = is_long || round.transfers.at(by_vertex[v]).length() > res.threshold;
    auto& ts = is_long ? long_t : short_t;
    auto& im = is_long ? long_im : short_im;
    for (Vertex v : cyc) {
      im[v] = sigma(v);
      const auto& t = round.transfers[by_vertex[v]];
      if (t.source() == v) ts.push_back(t);
    }
    ++(is_long ? res.long_cycles : res.short_cycles);
  }
  auto short_steps = detail::union_tree_route(g, short_t, Permutation(short_im));
  std::vector<Timestep> long_steps;
  if (!long_t.empty()) {
    long_steps = detail::union_tree_route(g, long_t, Permutation(long_im));
    if (g.ancilla_budget() >= 2) {
      auto sp = sparse_route(g, Permutation(long_im));
      if (depth(sp.schedule) < depth(detail::wrap(long_steps))) {
        long_steps = sp.schedule.timesteps;
        res.long_via_sparse = true;
      }
    }
  }
  res.short_depth = depth(detail::wrap(short_steps));
  res.long_depth = depth(detail::wrap(long_steps));
  res.schedule.append(short_steps);
  res.schedule.append(long_steps);
  return res;
}

inline Schedule simulate_round_with_swaps(const ArchGraph& g, const TeleRound& round) {
  return simulate_round_detailed(g, round).schedule;
}

// ---------------------------------------------------------------------------
// Advantage

struct AdvantageReport {
  Schedule swap_schedule;
  Schedule tele_schedule;
  std::string swap_method;
  std::string tele_method;
  int swap_depth = 0;
  int tele_depth = 0;
  int tele_rounds = 0;
  Rational ratio{1};
};

/// Best constructed swap schedule against best constructed teleportation
/// schedule; both are upper bounds on the respective routing times.
inline AdvantageReport advantage_report(const ArchGraph& g, const Permutation& pi, const DepthModel& model = {}) {
  if (pi.size() != g.size()) throw std::invalid_argument("advantage: permutation size mismatch");
  AdvantageReport r;
  auto offer_swap = [&](Schedule s, const std::string& name) {
    const int d = depth(s, model);
    if (r.swap_method.empty() || d < r.swap_depth) {
      r.swap_schedule = std::move(s);
      r.swap_depth = d;
      r.swap_method = name;
    }
  };
  auto offer_tele = [&](Schedule s, const std::string& name) {
    const int d = depth(s, model);
    if (r.tele_method.empty() || d < r.tele_depth) {
      r.tele_schedule = std::move(s);
      r.tele_depth = d;
      r.tele_method = name;
    }
  };
  offer_swap(route_generic(g, pi), "generic");
  const int k = static_cast<int>(pi.support().size());
  if (g.ancilla_budget() >= 2 && k > 0 && 2 * k <= g.size()) offer_swap(sparse_route(g, pi).schedule, "sparse");
  if (g.is_family("wheel")) {
    const int rim = g.family()->param("n");
    for (int l = 1; l <= rim / 2; ++l) {
      if (rim % l != 0) continue;
      PermutationParams pp;
      pp.l = l;
      if (generate_permutation("wheel", g, pp) == pi) offer_swap(route_wheel(g, l).schedule, "wheel");
    }
  }
  offer_tele(greedy_schedule(g, pi), "greedy");
  if (g.is_family("ladder") && g.ancilla_budget() >= 6) offer_tele(ladder_schedule(g, pi), "ladder");
  r.tele_rounds = tele_round_count(r.tele_schedule);
  r.ratio = r.tele_depth == 0 ? Rational(1) : Rational(r.swap_depth, r.tele_depth);
  return r;
}

inline Rational advantage(const ArchGraph& g, const Permutation& pi, const DepthModel& model = {}) {
  return advantage_report(g, pi, model).ratio;
}

}  // namespace qroute
