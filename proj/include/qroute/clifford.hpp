#pragma once

// Stabilizer tableau (destabilizer/stabilizer rows with signs), layered
// Clifford circuits with parity-controlled corrections, the constant-depth
// long-range teleportation circuit, and whole-schedule circuit export.

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qroute/graph.hpp"
#include "qroute/schedule.hpp"

namespace qroute {

// ---------------------------------------------------------------------------
// Tableau

struct Measurement {
  int outcome = 0;
  bool random = false;
};

class Tableau {
 public:
  /// |0...0>: destabilizers X_i, stabilizers Z_i.
  explicit Tableau(int n) : n_(n), words_((n + 63) / 64), x_((2 * n + 1) * words_, 0), z_((2 * n + 1) * words_, 0), r_(2 * n + 1, 0) {
    if (n < 1) throw std::invalid_argument("Tableau: need at least one qubit");
    for (int i = 0; i < n; ++i) {
      set(x_, i, i, true);
      set(z_, n + i, i, true);
    }
  }

  int qubits() const { return n_; }
  int rows() const { return 2 * n_; }
  bool x(int row, int q) const { return get(x_, row, q); }
  bool z(int row, int q) const { return get(z_, row, q); }
  int sign(int row) const { return r_.at(row); }

  void h(int q) {
    check(q);
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xi = get(x_, i, q), zi = get(z_, i, q);
      r_[i] ^= xi && zi;
      set(x_, i, q, zi);
      set(z_, i, q, xi);
    }
  }
  void s(int q) {
    check(q);
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xi = get(x_, i, q), zi = get(z_, i, q);
      r_[i] ^= xi && zi;
      set(z_, i, q, zi != xi);
    }
  }
  void cnot(int c, int t) {
    check(c);
    check(t);
    if (c == t) throw std::invalid_argument("cnot: control equals target");
    for (int i = 0; i < 2 * n_; ++i) {
      const bool xc = get(x_, i, c), zc = get(z_, i, c), xt = get(x_, i, t), zt = get(z_, i, t);
      r_[i] ^= xc && zt && (xt == zc);
      set(x_, i, t, xt != xc);
      set(z_, i, c, zc != zt);
    }
  }
  void x_gate(int q) {
    check(q);
    for (int i = 0; i < 2 * n_; ++i) r_[i] ^= get(z_, i, q);
  }
  void z_gate(int q) {
    check(q);
    for (int i = 0; i < 2 * n_; ++i) r_[i] ^= get(x_, i, q);
  }

  /// Row h <- row i * row h with the sign tracked mod 4, word at a time.
  void rowsum(int h, int i) {
    int sum = 2 * r_.at(h) + 2 * r_.at(i);
    for (int w = 0; w < words_; ++w) {
      const std::uint64_t x1 = x_[i * words_ + w], z1 = z_[i * words_ + w];
      const std::uint64_t x2 = x_[h * words_ + w], z2 = z_[h * words_ + w];
      const std::uint64_t ys = x1 & z1, xs = x1 & ~z1, zs = ~x1 & z1;
      const std::uint64_t pos = (ys & z2 & ~x2) | (xs & x2 & z2) | (zs & x2 & ~z2);
      const std::uint64_t neg = (ys & x2 & ~z2) | (xs & ~x2 & z2) | (zs & x2 & z2);
      sum += std::popcount(pos) - std::popcount(neg);
      x_[h * words_ + w] = x2 ^ x1;
      z_[h * words_ + w] = z2 ^ z1;
    }
    sum = ((sum % 4) + 4) % 4;
    if (sum != 0 && sum != 2) throw std::logic_error("rowsum: odd phase, rows do not commute");
    r_[h] = sum / 2;
  }

  /// Z-basis measurement. `coin` is the outcome used if the result is random.
  Measurement measure(int a, int coin) {
    check(a);
    int p = -1;
    for (int i = n_; i < 2 * n_ && p < 0; ++i)
      if (get(x_, i, a)) p = i;
    if (p >= 0) {
      for (int i = 0; i < 2 * n_; ++i)
        if (i != p && i != p - n_ && get(x_, i, a)) rowsum(i, p);  // row p-n is overwritten below
      copy_row(p - n_, p);
      clear_row(p);
      set(z_, p, a, true);
      r_[p] = coin & 1;
      return {coin & 1, true};
    }
    return {deterministic(a), false};
  }

  /// Outcome of a Z measurement if it is determined, without disturbing.
  std::optional<int> peek_z(int a) const {
    check(a);
    for (int i = n_; i < 2 * n_; ++i)
      if (get(x_, i, a)) return std::nullopt;
    Tableau t = *this;
    return t.deterministic(a);
  }

  /// +1 / -1 if qubit q is an eigenstate of the single-qubit Pauli p
  /// ('X', 'Y' or 'Z'), nullopt otherwise.
  std::optional<int> expectation(int q, char p) const {
    Tableau t = *this;
    if (p == 'X') {
      t.h(q);
    } else if (p == 'Y') {
      t.s(q);
      t.s(q);
      t.s(q);
      t.h(q);
    } else if (p != 'Z') {
      throw std::invalid_argument("expectation: Pauli must be X, Y or Z");
    }
    auto m = t.peek_z(q);
    if (!m) return std::nullopt;
    return *m == 0 ? 1 : -1;
  }

  /// Stabilizers commute with each other, destabilizers likewise, and
  /// destabilizer i anticommutes exactly with stabilizer i.
  void check_invariants() const {
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = i + 1; j < 2 * n_; ++j) {
        const bool expect = j == i + n_;
        if (anticommute(i, j) != expect)
          throw std::logic_error("tableau invariant broken between rows " + std::to_string(i) + " and " +
                                 std::to_string(j));
      }
  }

  bool operator==(const Tableau& o) const = default;

 private:
  bool get(const std::vector<std::uint64_t>& m, int row, int q) const {
    return (m[row * words_ + q / 64] >> (q % 64)) & 1u;
  }
  void set(std::vector<std::uint64_t>& m, int row, int q, bool v) {
    auto& w = m[row * words_ + q / 64];
    const std::uint64_t bit = std::uint64_t{1} << (q % 64);
    w = v ? (w | bit) : (w & ~bit);
  }
  void check(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("qubit " + std::to_string(q) + " out of range");
  }
  void copy_row(int dst, int src) {
    for (int w = 0; w < words_; ++w) {
      x_[dst * words_ + w] = x_[src * words_ + w];
      z_[dst * words_ + w] = z_[src * words_ + w];
    }
    r_[dst] = r_[src];
  }
  void clear_row(int row) {
    for (int w = 0; w < words_; ++w) x_[row * words_ + w] = z_[row * words_ + w] = 0;
    r_[row] = 0;
  }
  int deterministic(int a) {
    const int scratch = 2 * n_;
    clear_row(scratch);
    for (int i = 0; i < n_; ++i)
      if (get(x_, i, a)) rowsum(scratch, i + n_);
    return r_[scratch];
  }
  bool anticommute(int i, int j) const {
    int c = 0;
    for (int w = 0; w < words_; ++w)
      c += std::popcount((x_[i * words_ + w] & z_[j * words_ + w]) ^ (z_[i * words_ + w] & x_[j * words_ + w]));
    return c & 1;
  }

  int n_;
  int words_;
  std::vector<std::uint64_t> x_, z_;
  std::vector<int> r_;
};

// ---------------------------------------------------------------------------
// Circuits

enum class GateKind { H, S, CNOT, X, Z, Measure, XIfParity, ZIfParity };

struct Gate {
  GateKind kind = GateKind::H;
  int a = 0;           // target, or control for CNOT
  int b = -1;          // CNOT target
  int record = -1;     // Measure: record written
  std::vector<int> parity;  // conditioned gates: XOR of these records
  friend bool operator==(const Gate&, const Gate&) = default;
};

struct CliffordCircuit {
  int qubits = 0;
  int records = 0;
  std::vector<std::vector<Gate>> layers;

  int measure(std::vector<Gate>& layer, int q) {
    layer.push_back(Gate{GateKind::Measure, q, -1, records, {}});
    return records++;
  }
  std::size_t gate_count(GateKind k) const {
    std::size_t c = 0;
    for (const auto& l : layers)
      for (const auto& g : l) c += g.kind == k;
    return c;
  }
};

inline std::vector<int> gate_qubits(const Gate& g) {
  if (g.kind == GateKind::CNOT) return {g.a, g.b};
  return {g.a};
}

inline bool conditioned(const Gate& g) { return g.kind == GateKind::XIfParity || g.kind == GateKind::ZIfParity; }

/// Qubits in range, each layer qubit-disjoint (classically controlled
/// Paulis may share a qubit with each other: they compose to one Pauli),
/// every record written once and only read in later layers.
inline void check_circuit(const CliffordCircuit& c) {
  std::vector<int> written(c.records, -1);
  for (std::size_t li = 0; li < c.layers.size(); ++li) {
    std::vector<char> used(c.qubits, 0);  // 1 quantum gate, 2 classically controlled Pauli
    for (const auto& g : c.layers[li]) {
      const char mark = conditioned(g) ? 2 : 1;
      for (int q : gate_qubits(g)) {
        if (q < 0 || q >= c.qubits) throw std::invalid_argument("circuit: qubit out of range");
        if (used[q] && (used[q] == 1 || mark == 1))
          throw std::invalid_argument("circuit: qubit " + std::to_string(q) + " used twice in layer " + std::to_string(li));
        used[q] = mark;
      }
      if (g.kind == GateKind::Measure) {
        if (g.record < 0 || g.record >= c.records || written[g.record] >= 0)
          throw std::invalid_argument("circuit: bad measurement record");
        written[g.record] = static_cast<int>(li);
      }
      for (int r : g.parity)
        if (r < 0 || r >= c.records || written[r] < 0 || written[r] >= static_cast<int>(li))
          throw std::invalid_argument("circuit: record " + std::to_string(r) + " read before it is written");
    }
  }
}

/// Runs the circuit; `coin(record)` supplies outcomes of random
/// measurements. Returns the measurement record.
inline std::vector<int> run_circuit(const CliffordCircuit& c, Tableau& t, const std::function<int(int)>& coin,
                                    bool self_check = false) {
  std::vector<int> rec(c.records, 0);
  auto parity = [&](const Gate& g) {
    int p = 0;
    for (int r : g.parity) p ^= rec.at(r);
    return p;
  };
  for (const auto& layer : c.layers) {
    for (const auto& g : layer) switch (g.kind) {
        case GateKind::H: t.h(g.a); break;
        case GateKind::S: t.s(g.a); break;
        case GateKind::CNOT: t.cnot(g.a, g.b); break;
        case GateKind::X: t.x_gate(g.a); break;
        case GateKind::Z: t.z_gate(g.a); break;
        case GateKind::Measure: rec.at(g.record) = t.measure(g.a, coin(g.record)).outcome; break;
        case GateKind::XIfParity:
          if (parity(g)) t.x_gate(g.a);
          break;
        case GateKind::ZIfParity:
          if (parity(g)) t.z_gate(g.a);
          break;
      }
    if (self_check) t.check_invariants();
  }
  return rec;
}

namespace detail {

/// Qubits of one teleport along a path: the data qubit at the source and,
/// per edge, the two Bell halves (near end, far end).
struct TeleportWiring {
  int source = 0;
  std::vector<std::pair<int, int>> halves;
};

/// Six layers: H on near halves, CNOT near->far (Bell pairs), CNOT for each
/// Bell measurement, H, measure, then parity-controlled X and Z on the last
/// far half together with resets of the measured qubits. Appends into
/// `layers` starting at `at`.
inline void emit_teleport(CliffordCircuit& c, std::size_t at, const TeleportWiring& w) {
  if (c.layers.size() < at + 6) c.layers.resize(at + 6);
  std::vector<int> xs, zs;
  for (auto [near, far] : w.halves) {
    c.layers[at].push_back(Gate{GateKind::H, near, -1, -1, {}});
    c.layers[at + 1].push_back(Gate{GateKind::CNOT, near, far, -1, {}});
  }
  // Bell measurement pairs: (source, first near), (far_e, near_{e+1})
  std::vector<std::pair<int, int>> pairs{{w.source, w.halves.front().first}};
  for (std::size_t e = 0; e + 1 < w.halves.size(); ++e) pairs.emplace_back(w.halves[e].second, w.halves[e + 1].first);
  for (auto [a, b] : pairs) {
    c.layers[at + 2].push_back(Gate{GateKind::CNOT, a, b, -1, {}});
    c.layers[at + 3].push_back(Gate{GateKind::H, a, -1, -1, {}});
    zs.push_back(c.measure(c.layers[at + 4], a));
    xs.push_back(c.measure(c.layers[at + 4], b));
  }
  const int dest = w.halves.back().second;
  c.layers[at + 5].push_back(Gate{GateKind::XIfParity, dest, -1, -1, xs});
  c.layers[at + 5].push_back(Gate{GateKind::ZIfParity, dest, -1, -1, zs});
  // measured qubits back to |0> so their slots can hold Bell halves again
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    c.layers[at + 5].push_back(Gate{GateKind::XIfParity, pairs[k].first, -1, -1, {zs[k]}});
    c.layers[at + 5].push_back(Gate{GateKind::XIfParity, pairs[k].second, -1, -1, {xs[k]}});
  }
}

}  // namespace detail

constexpr int kTeleportLayers = 6;

/// Teleport along a path with d edges: qubit 0 is the data, edge e holds
/// Bell halves 2e+1 (near) and 2e+2 (far); the state arrives on qubit 2d.
inline CliffordCircuit emit_teleport_circuit(int d) {
  if (d < 1) throw std::invalid_argument("emit_teleport_circuit: path length must be at least 1");
  CliffordCircuit c;
  c.qubits = 2 * d + 1;
  detail::TeleportWiring w;
  w.source = 0;
  for (int e = 0; e < d; ++e) w.halves.emplace_back(2 * e + 1, 2 * e + 2);
  detail::emit_teleport(c, 0, w);
  return c;
}

/// Pauli eigenstates used as inputs: label, preparing gates from |0>, and
/// the stabilizer (sign, Pauli) they carry.
struct PauliInput {
  std::string label;
  std::vector<GateKind> prep;
  int sign;
  char pauli;
};

inline const std::vector<PauliInput>& pauli_inputs() {
  static const std::vector<PauliInput> v = {
      {"|0>", {}, 1, 'Z'},
      {"|1>", {GateKind::X}, -1, 'Z'},
      {"|+>", {GateKind::H}, 1, 'X'},
      {"|->", {GateKind::X, GateKind::H}, -1, 'X'},
      {"|+i>", {GateKind::H, GateKind::S}, 1, 'Y'},
      {"|-i>", {GateKind::X, GateKind::H, GateKind::S}, -1, 'Y'},
  };
  return v;
}

/// Does the destination carry the same Pauli eigenstate as the source,
/// for all six inputs, under forced-0, forced-1, `random_branches` seeded
/// random branches, and every branch when there are at most 10 records?
inline bool verify_teleportation(const CliffordCircuit& c, int d, int random_branches = 20, std::uint64_t seed = 1) {
  if (c.qubits != 2 * d + 1) throw std::invalid_argument("verify_teleportation: circuit does not match d");
  check_circuit(c);
  const int dest = 2 * d;
  std::vector<std::function<int(int)>> branches;
  branches.push_back([](int) { return 0; });
  branches.push_back([](int) { return 1; });
  std::mt19937_64 rng(seed);
  for (int b = 0; b < random_branches; ++b) {
    std::vector<int> bits(c.records);
    for (auto& x : bits) x = static_cast<int>(rng() & 1u);
    branches.push_back([bits](int r) { return bits.at(r); });
  }
  if (c.records <= 10)
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c.records); ++mask)
      branches.push_back([mask](int r) { return static_cast<int>((mask >> r) & 1u); });
  for (const auto& in : pauli_inputs())
    for (std::size_t b = 0; b < branches.size(); ++b) {
      Tableau t(c.qubits);
      for (auto k : in.prep) {
        if (k == GateKind::X) t.x_gate(0);
        if (k == GateKind::H) t.h(0);
        if (k == GateKind::S) t.s(0);
      }
      // per-layer invariant checks on the forced branches only
      run_circuit(c, t, branches[b], b < 2);
      if (b >= 2) t.check_invariants();
      auto e = t.expectation(dest, in.pauli);
      if (!e || *e != in.sign) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Whole schedules

inline int circuit_qubit(const ArchGraph& g, Vertex v, int slot) { return v * (g.ancilla_budget() + 1) + slot; }

/// Gate-level version of a schedule. Swaps are three CNOTs; each transfer
/// of a round becomes a teleport block over Bell halves taken from free
/// ancillas (swap transfers: one block each way), followed by a local swap
/// into the destination slot when the last half is not that slot.
inline CliffordCircuit emit_circuit(const ArchGraph& g, const Schedule& s) {
  CliffordCircuit c;
  c.qubits = g.size() * (g.ancilla_budget() + 1);
  TokenState st = TokenState::initial(g);
  auto swap3 = [&](std::size_t at, int a, int b) {
    if (c.layers.size() < at + 3) c.layers.resize(at + 3);
    c.layers[at].push_back(Gate{GateKind::CNOT, a, b, -1, {}});
    c.layers[at + 1].push_back(Gate{GateKind::CNOT, b, a, -1, {}});
    c.layers[at + 2].push_back(Gate{GateKind::CNOT, a, b, -1, {}});
  };
  for (std::size_t ti = 0; ti < s.timesteps.size(); ++ti) {
    const auto& step = s.timesteps[ti];
    const std::size_t at = c.layers.size();
    for (const auto& op : step.ops) {
      if (auto* e = std::get_if<SwapEdge>(&op)) {
        swap3(at, circuit_qubit(g, e->u, 0), circuit_qubit(g, e->v, 0));
      } else if (auto* l = std::get_if<SwapLocal>(&op)) {
        swap3(at, circuit_qubit(g, l->v, l->s1), circuit_qubit(g, l->v, l->s2));
      } else {
        const auto& r = std::get<TeleRound>(op);
        // free ancillas per vertex, minus slots that receive a token
        std::vector<std::vector<int>> pool(g.size());
        std::vector<std::size_t> next(g.size(), 0);
        for (Vertex v = 0; v < g.size(); ++v)
          for (int sl = 1; sl <= g.ancilla_budget(); ++sl)
            if (st.at(v, sl) == kNullToken) pool[v].push_back(sl);
        for (const auto& t : r.transfers)
          if (t.dst_slot != 0) std::erase(pool[t.destination()], t.dst_slot);
        auto take = [&](Vertex v) {
          if (next[v] >= pool[v].size()) throw std::logic_error("emit_circuit: out of ancillas at vertex " + std::to_string(v));
          return circuit_qubit(g, v, pool[v][next[v]++]);
        };
        std::vector<std::pair<int, int>> finals;
        auto block = [&](const std::vector<Vertex>& path, int dst_slot) {
          detail::TeleportWiring w;
          w.source = circuit_qubit(g, path.front(), 0);
          for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const int near = take(path[i]);
            const bool last = i + 2 == path.size();
            const int far = last && dst_slot != 0 ? circuit_qubit(g, path.back(), dst_slot) : take(path[i + 1]);
            w.halves.emplace_back(near, far);
          }
          detail::emit_teleport(c, at, w);
          const int landing = w.halves.back().second;
          const int slot_q = circuit_qubit(g, path.back(), dst_slot);
          if (landing != slot_q) finals.emplace_back(landing, slot_q);
        };
        for (const auto& t : r.transfers) {
          block(t.path, t.dst_slot);
          if (t.kind == TransferKind::Swap) block(std::vector<Vertex>(t.path.rbegin(), t.path.rend()), 0);
        }
        for (auto [a, b] : finals) swap3(at + kTeleportLayers, a, b);
      }
    }
    apply_timestep(g, st, step, ti);
  }
  return c;
}

inline nlohmann::json gate_to_json(const Gate& g) {
  static const char* names[] = {"h", "s", "cnot", "x", "z", "measure", "x_if", "z_if"};
  nlohmann::json j{{"gate", names[static_cast<int>(g.kind)]}};
  if (g.kind == GateKind::CNOT) {
    j["control"] = g.a;
    j["target"] = g.b;
  } else {
    j["q"] = g.a;
  }
  if (g.kind == GateKind::Measure) j["record"] = g.record;
  if (g.kind == GateKind::XIfParity || g.kind == GateKind::ZIfParity) j["parity"] = g.parity;
  return j;
}

inline nlohmann::json circuit_to_json(const CliffordCircuit& c) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : c.layers) {
    nlohmann::json lj = nlohmann::json::array();
    for (const auto& g : l) lj.push_back(gate_to_json(g));
    layers.push_back(std::move(lj));
  }
  return {{"qubits", c.qubits}, {"records", c.records}, {"layers", std::move(layers)}};
}

}  // namespace qroute
