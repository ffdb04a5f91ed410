#pragma once

// Schedules of routing primitives, the token-slot state they act on, and the
// depth accounting used throughout.
//
// Every vertex owns one data slot (slot 0) and `ancilla_budget` ancilla slots
// (1..budget). A timestep is a set of primitives that touch pairwise
// disjoint slots:
//   swap_edge(u, v)      exchanges the data slots of adjacent u and v
//   swap_local(v, a, b)  exchanges two slots of the same vertex
//   tele_round(...)      teleports tokens along paths, consuming Bell pairs
//                        held in the ancillas of every vertex on each path

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qroute/graph.hpp"

namespace qroute {

constexpr int kNullToken = -1;

enum class TransferKind { Move, Swap };

/// One teleportation along a path. A move sends the data token of
/// path.front() to slot `dst_slot` of path.back(); a swap exchanges the data
/// tokens at both ends (gate teleportation, charged as two moves).
struct Transfer {
  std::vector<Vertex> path;
  TransferKind kind = TransferKind::Move;
  int dst_slot = 0;

  Vertex source() const { return path.front(); }
  Vertex destination() const { return path.back(); }
  int length() const { return static_cast<int>(path.size()) - 1; }
  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct TeleRound {
  std::vector<Transfer> transfers;
  friend bool operator==(const TeleRound&, const TeleRound&) = default;
};

struct SwapEdge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const SwapEdge&, const SwapEdge&) = default;
};

struct SwapLocal {
  Vertex v = 0;
  int s1 = 0;
  int s2 = 1;
  friend bool operator==(const SwapLocal&, const SwapLocal&) = default;
};

using Op = std::variant<SwapEdge, SwapLocal, TeleRound>;

struct Timestep {
  std::vector<Op> ops;
};

/// Depth charged per primitive class; a timestep costs the maximum over its
/// primitives (empty timesteps cost nothing).
struct DepthModel {
  int swap_edge = 1;
  int swap_local = 0;
  int tele_round = 1;
  friend bool operator==(const DepthModel&, const DepthModel&) = default;
};

struct Schedule {
  std::vector<Timestep> timesteps;
  DepthModel depth_model;
  std::string graph_ref;

  bool empty() const { return timesteps.empty(); }
  std::size_t size() const { return timesteps.size(); }

  void append(const Schedule& other) {
    timesteps.insert(timesteps.end(), other.timesteps.begin(), other.timesteps.end());
  }
  void append(const std::vector<Timestep>& steps) { timesteps.insert(timesteps.end(), steps.begin(), steps.end()); }
  void push(Op op) { timesteps.push_back(Timestep{{std::move(op)}}); }
};

/// Overlay timestep lists index by index. Callers guarantee the lists act on
/// disjoint slots.
inline std::vector<Timestep> merge_parallel(const std::vector<std::vector<Timestep>>& lanes) {
  std::size_t len = 0;
  for (const auto& l : lanes) len = std::max(len, l.size());
  std::vector<Timestep> out(len);
  for (const auto& l : lanes)
    for (std::size_t t = 0; t < l.size(); ++t)
      out[t].ops.insert(out[t].ops.end(), l[t].ops.begin(), l[t].ops.end());
  return out;
}

/// Drop timesteps without primitives.
inline void prune_empty(Schedule& s) {
  std::erase_if(s.timesteps, [](const Timestep& t) { return t.ops.empty(); });
}

inline int op_cost(const Op& op, const DepthModel& m) {
  if (std::holds_alternative<SwapEdge>(op)) return m.swap_edge;
  if (std::holds_alternative<SwapLocal>(op)) return m.swap_local;
  return m.tele_round;
}

inline int depth(const Schedule& s) {
  int total = 0;
  for (const auto& t : s.timesteps) {
    int c = 0;
    for (const auto& op : t.ops) c = std::max(c, op_cost(op, s.depth_model));
    total += c;
  }
  return total;
}

inline int depth(const Schedule& s, const DepthModel& m) {
  Schedule copy;
  copy.timesteps = s.timesteps;
  copy.depth_model = m;
  return depth(copy);
}

inline int tele_round_count(const Schedule& s) {
  int c = 0;
  for (const auto& t : s.timesteps)
    for (const auto& op : t.ops) c += std::holds_alternative<TeleRound>(op) ? 1 : 0;
  return c;
}

// ---------------------------------------------------------------------------
// JSON

inline std::string kind_name(TransferKind k) { return k == TransferKind::Move ? "move" : "swap"; }

inline nlohmann::json transfer_to_json(const Transfer& t) {
  nlohmann::json j{{"path", t.path}, {"kind", kind_name(t.kind)}};
  if (t.dst_slot != 0) j["dst_slot"] = t.dst_slot;
  return j;
}

inline nlohmann::json op_to_json(const Op& op) {
  if (auto* e = std::get_if<SwapEdge>(&op))
    return {{"type", "swap_edge"}, {"u", std::min(e->u, e->v)}, {"v", std::max(e->u, e->v)}};
  if (auto* l = std::get_if<SwapLocal>(&op))
    return {{"type", "swap_local"}, {"v", l->v}, {"s1", std::min(l->s1, l->s2)}, {"s2", std::max(l->s1, l->s2)}};
  const auto& r = std::get<TeleRound>(op);
  auto arr = nlohmann::json::array();
  for (const auto& t : r.transfers) arr.push_back(transfer_to_json(t));
  return {{"type", "tele_round"}, {"transfers", arr}};
}

inline Op op_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "swap_edge") return SwapEdge{j.at("u").get<int>(), j.at("v").get<int>()};
  if (type == "swap_local") return SwapLocal{j.at("v").get<int>(), j.at("s1").get<int>(), j.at("s2").get<int>()};
  if (type == "tele_round") {
    TeleRound r;
    for (const auto& tj : j.at("transfers")) {
      Transfer t;
      t.path = tj.at("path").get<std::vector<Vertex>>();
      const std::string kind = tj.value("kind", "move");
      if (kind == "move")
        t.kind = TransferKind::Move;
      else if (kind == "swap")
        t.kind = TransferKind::Swap;
      else
        throw std::invalid_argument("unknown transfer kind '" + kind + "'");
      t.dst_slot = tj.value("dst_slot", 0);
      r.transfers.push_back(std::move(t));
    }
    return r;
  }
  throw std::invalid_argument("unknown op type '" + type + "'");
}

inline nlohmann::json depth_model_to_json(const DepthModel& m) {
  return {{"swap_edge", m.swap_edge}, {"swap_local", m.swap_local}, {"tele_round", m.tele_round}};
}

/// Canonical form: object keys sorted, ops within a timestep sorted by their
/// serialized text.
inline nlohmann::json schedule_to_json(const Schedule& s) {
  auto steps = nlohmann::json::array();
  for (const auto& t : s.timesteps) {
    std::vector<nlohmann::json> ops;
    for (const auto& op : t.ops) ops.push_back(op_to_json(op));
    std::sort(ops.begin(), ops.end(), [](const auto& a, const auto& b) { return a.dump() < b.dump(); });
    steps.push_back({{"ops", ops}});
  }
  return {{"graph_ref", s.graph_ref}, {"timesteps", steps}, {"depth_model", depth_model_to_json(s.depth_model)}};
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  s.graph_ref = j.value("graph_ref", "");
  if (j.contains("depth_model")) {
    const auto& m = j.at("depth_model");
    s.depth_model.swap_edge = m.value("swap_edge", 1);
    s.depth_model.swap_local = m.value("swap_local", 0);
    s.depth_model.tele_round = m.value("tele_round", 1);
  }
  for (const auto& tj : j.at("timesteps")) {
    Timestep t;
    for (const auto& oj : tj.at("ops")) t.ops.push_back(op_from_json(oj));
    s.timesteps.push_back(std::move(t));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Bell-pair accounting

/// Bell halves each vertex must hold: 1 per path endpoint, 2 per interior
/// visit, doubled for swap transfers.
inline std::vector<int> round_loads(int n, const TeleRound& round) {
  std::vector<int> load(n, 0);
  for (const auto& t : round.transfers) {
    const int w = t.kind == TransferKind::Swap ? 2 : 1;
    for (std::size_t i = 0; i < t.path.size(); ++i) {
      const bool end = i == 0 || i + 1 == t.path.size();
      load.at(t.path[i]) += w * (end ? 1 : 2);
    }
  }
  return load;
}

/// Number of transfer paths through each vertex.
inline std::vector<int> path_incidence(int n, const TeleRound& round) {
  std::vector<int> inc(n, 0);
  for (const auto& t : round.transfers)
    for (Vertex v : t.path) ++inc.at(v);
  return inc;
}

class ScheduleError : public std::runtime_error {
 public:
  ScheduleError(std::size_t timestep, const std::string& primitive, const std::string& what)
      : std::runtime_error("timestep " + std::to_string(timestep) + ", " + primitive + ": " + what),
        timestep_(timestep) {}
  std::size_t timestep() const { return timestep_; }

 private:
  std::size_t timestep_;
};

/// Path must be simple, at least one edge, and follow edges of g.
inline void check_transfer_shape(const ArchGraph& g, const Transfer& t) {
  if (t.path.size() < 2) throw std::invalid_argument("transfer path needs at least one edge");
  for (Vertex v : t.path)
    if (!g.contains(v)) throw std::invalid_argument("transfer path references unknown vertex " + std::to_string(v));
  for (std::size_t i = 0; i + 1 < t.path.size(); ++i)
    if (!g.adjacent(t.path[i], t.path[i + 1]))
      throw std::invalid_argument("transfer path step (" + std::to_string(t.path[i]) + "," +
                                  std::to_string(t.path[i + 1]) + ") is not an edge");
  std::vector<Vertex> sorted = t.path;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("transfer path repeats a vertex");
  if (t.kind == TransferKind::Swap && t.dst_slot != 0)
    throw std::invalid_argument("swap transfers act on data slots only");
  if (t.dst_slot < 0 || t.dst_slot > g.ancilla_budget()) throw std::invalid_argument("dst_slot out of range");
}

// ---------------------------------------------------------------------------
// Token state

/// Slot contents: token ids or kNullToken.
class TokenState {
 public:
  TokenState() = default;
  TokenState(int n, int budget) : n_(n), width_(budget + 1), cells_(static_cast<std::size_t>(n) * (budget + 1), kNullToken) {}

  /// Token i in the data slot of vertex i, all ancillas null.
  static TokenState initial(const ArchGraph& g) {
    TokenState s(g.size(), g.ancilla_budget());
    for (Vertex v = 0; v < g.size(); ++v) s.at(v, 0) = v;
    return s;
  }

  int vertices() const { return n_; }
  int budget() const { return width_ - 1; }
  int& at(Vertex v, int slot) { return cells_.at(index(v, slot)); }
  int at(Vertex v, int slot) const { return cells_.at(index(v, slot)); }
  int data(Vertex v) const { return at(v, 0); }

  int free_ancillas(Vertex v) const {
    int c = 0;
    for (int s = 1; s < width_; ++s) c += at(v, s) == kNullToken ? 1 : 0;
    return c;
  }
  /// Lowest null ancilla slot of v, or -1.
  int first_free_ancilla(Vertex v) const {
    for (int s = 1; s < width_; ++s)
      if (at(v, s) == kNullToken) return s;
    return -1;
  }
  bool ancillas_clear() const {
    for (Vertex v = 0; v < n_; ++v)
      if (free_ancillas(v) != budget()) return false;
    return true;
  }

  /// Sorted list of the non-null tokens.
  std::vector<int> tokens() const {
    std::vector<int> t;
    for (int c : cells_)
      if (c != kNullToken) t.push_back(c);
    std::sort(t.begin(), t.end());
    return t;
  }

  /// Every non-null token appears exactly once.
  bool bijective() const {
    auto t = tokens();
    return std::adjacent_find(t.begin(), t.end()) == t.end();
  }

  friend bool operator==(const TokenState&, const TokenState&) = default;

 private:
  std::size_t index(Vertex v, int slot) const {
    if (v < 0 || v >= n_ || slot < 0 || slot >= width_)
      throw std::out_of_range("slot (" + std::to_string(v) + "," + std::to_string(slot) + ") out of range");
    return static_cast<std::size_t>(v) * width_ + slot;
  }

  int n_ = 0;
  int width_ = 1;
  std::vector<int> cells_;
};

namespace detail {

inline void apply_round(const ArchGraph& g, TokenState& st, const TeleRound& round, std::size_t step,
                        const std::string& desc) {
  const int n = g.size();
  for (const auto& t : round.transfers) {
    try {
      check_transfer_shape(g, t);
    } catch (const std::invalid_argument& e) {
      throw ScheduleError(step, desc, e.what());
    }
  }
  const auto load = round_loads(n, round);
  for (Vertex v = 0; v < n; ++v)
    if (load[v] > st.free_ancillas(v))
      throw ScheduleError(step, desc,
                          "vertex " + std::to_string(v) + " needs " + std::to_string(load[v]) +
                              " Bell halves but has " + std::to_string(st.free_ancillas(v)) + " free ancillas");

  struct Write {
    Vertex v;
    int slot;
    int token;
  };
  std::vector<char> is_source(n, 0);
  std::vector<char> writes_to(static_cast<std::size_t>(n) * (g.ancilla_budget() + 1), 0);
  std::vector<Write> writes;
  auto mark_source = [&](Vertex v) {
    if (is_source[v]) throw ScheduleError(step, desc, "vertex " + std::to_string(v) + " is a source twice");
    is_source[v] = 1;
  };
  auto mark_write = [&](Vertex v, int slot, int token) {
    auto& w = writes_to[static_cast<std::size_t>(v) * (g.ancilla_budget() + 1) + slot];
    if (w) throw ScheduleError(step, desc, "slot (" + std::to_string(v) + "," + std::to_string(slot) + ") receives twice");
    w = 1;
    writes.push_back({v, slot, token});
  };
  for (const auto& t : round.transfers) {
    mark_source(t.source());
    if (t.kind == TransferKind::Swap) {
      mark_source(t.destination());
      mark_write(t.destination(), 0, st.data(t.source()));
      mark_write(t.source(), 0, st.data(t.destination()));
    } else {
      mark_write(t.destination(), t.dst_slot, st.data(t.source()));
    }
  }
  for (const auto& w : writes) {
    const bool vacated = w.slot == 0 && is_source[w.v];
    if (!vacated && st.at(w.v, w.slot) != kNullToken)
      throw ScheduleError(step, desc,
                          "destination slot (" + std::to_string(w.v) + "," + std::to_string(w.slot) +
                              ") holds token " + std::to_string(st.at(w.v, w.slot)) + " that does not leave");
  }
  for (Vertex v = 0; v < n; ++v)
    if (is_source[v]) st.at(v, 0) = kNullToken;
  for (const auto& w : writes) st.at(w.v, w.slot) = w.token;
}

}  // namespace detail

/// Apply one timestep in place; throws ScheduleError naming the timestep and
/// primitive on any violation.
inline void apply_timestep(const ArchGraph& g, TokenState& st, const Timestep& t, std::size_t step) {
  const int width = st.budget() + 1;
  std::vector<char> touched(static_cast<std::size_t>(g.size()) * width, 0);
  auto touch = [&](Vertex v, int slot, const std::string& desc) {
    if (!g.contains(v)) throw ScheduleError(step, desc, "unknown vertex " + std::to_string(v));
    if (slot < 0 || slot >= width) throw ScheduleError(step, desc, "slot " + std::to_string(slot) + " out of range");
    auto& c = touched[static_cast<std::size_t>(v) * width + slot];
    if (c)
      throw ScheduleError(step, desc,
                          "slot (" + std::to_string(v) + "," + std::to_string(slot) + ") touched twice in one timestep");
    c = 1;
  };
  for (const auto& op : t.ops) {
    const std::string desc = op_to_json(op).dump();
    if (auto* e = std::get_if<SwapEdge>(&op)) {
      touch(e->u, 0, desc);
      touch(e->v, 0, desc);
      if (!g.adjacent(e->u, e->v)) throw ScheduleError(step, desc, "not an edge of the graph");
      std::swap(st.at(e->u, 0), st.at(e->v, 0));
    } else if (auto* l = std::get_if<SwapLocal>(&op)) {
      if (l->s1 == l->s2) throw ScheduleError(step, desc, "local swap of a slot with itself");
      touch(l->v, l->s1, desc);
      touch(l->v, l->s2, desc);
      std::swap(st.at(l->v, l->s1), st.at(l->v, l->s2));
    } else {
      const auto& r = std::get<TeleRound>(op);
      std::vector<char> seen(g.size(), 0);
      for (const auto& tr : r.transfers)
        for (Vertex v : tr.path) {
          if (!g.contains(v)) throw ScheduleError(step, desc, "unknown vertex " + std::to_string(v));
          if (seen[v]) continue;
          seen[v] = 1;
          for (int s = 0; s < width; ++s) touch(v, s, desc);
        }
      detail::apply_round(g, st, r, step, desc);
    }
  }
}

/// Execute a schedule, checking slot exclusivity and token conservation
/// after every timestep.
inline TokenState apply_schedule(const ArchGraph& g, const TokenState& initial, const Schedule& s) {
  if (initial.vertices() != g.size() || initial.budget() != g.ancilla_budget())
    throw std::invalid_argument("token state does not match graph");
  TokenState st = initial;
  const auto tokens = initial.tokens();
  for (std::size_t i = 0; i < s.timesteps.size(); ++i) {
    apply_timestep(g, st, s.timesteps[i], i);
    if (st.tokens() != tokens) throw ScheduleError(i, "timestep", "token conservation violated");
  }
  return st;
}

/// pi with final.data(pi(v)) == initial.data(v).
inline Permutation achieved_permutation(const TokenState& initial, const TokenState& final_state) {
  if (!initial.ancillas_clear() || !final_state.ancillas_clear())
    throw std::invalid_argument("achieved_permutation: ancilla slots still hold tokens");
  const int n = initial.vertices();
  std::vector<int> where;
  int max_token = -1;
  for (Vertex v = 0; v < n; ++v) max_token = std::max(max_token, final_state.data(v));
  where.assign(max_token + 1, -1);
  for (Vertex v = 0; v < n; ++v)
    if (final_state.data(v) != kNullToken) where[final_state.data(v)] = v;
  std::vector<Vertex> im(n, -1);
  std::vector<char> used(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    const int tok = initial.data(v);
    if (tok == kNullToken) continue;
    if (tok >= static_cast<int>(where.size()) || where[tok] < 0)
      throw std::invalid_argument("achieved_permutation: token " + std::to_string(tok) + " lost");
    im[v] = where[tok];
    used[im[v]] = 1;
  }
  // Null tokens are interchangeable: pair leftover sources and targets in order.
  std::vector<Vertex> free_targets;
  for (Vertex v = 0; v < n; ++v)
    if (!used[v]) free_targets.push_back(v);
  std::size_t k = 0;
  for (Vertex v = 0; v < n; ++v)
    if (im[v] < 0) im[v] = free_targets.at(k++);
  return Permutation(std::move(im));
}

/// Execute from the canonical initial state and report the permutation.
inline Permutation realized_permutation(const ArchGraph& g, const Schedule& s) {
  const auto init = TokenState::initial(g);
  return achieved_permutation(init, apply_schedule(g, init, s));
}

/// Permutation of data slots performed by a round applied to a full state.
inline Permutation round_permutation(int n, const TeleRound& round) {
  std::vector<Vertex> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::vector<char> hit(n, 0);
  for (const auto& t : round.transfers) {
    if (t.dst_slot != 0) throw std::invalid_argument("round_permutation: transfer into an ancilla slot");
    im.at(t.source()) = t.destination();
    if (t.kind == TransferKind::Swap) im.at(t.destination()) = t.source();
  }
  return Permutation(std::move(im));
}

}  // namespace qroute
