#include <gtest/gtest.h>

#include "qroute/tele_router.hpp"
#include "test_oracles.hpp"

using namespace qroute;

namespace {

int layer_of(int address) {
  int l = 0;
  for (int a = address; a > 0; a >>= 1) ++l;
  return l;
}

// Executes with the array oracle and the library, both must give pi.
void expect_realizes(const ArchGraph& g, const Schedule& s, const Permutation& pi) {
  auto img = oracle::replay_any(g, s);
  ASSERT_FALSE(img.empty()) << "oracle rejected the schedule";
  EXPECT_EQ(img, pi.image());
  EXPECT_EQ(realized_permutation(g, s), pi);
}

const TeleRound& only_round(const Schedule& s) {
  for (const auto& t : s.timesteps)
    for (const auto& op : t.ops)
      if (auto* r = std::get_if<TeleRound>(&op)) return *r;
  throw std::runtime_error("no round");
}

// Incidence and Bell-half counts recomputed from the transfer list.
std::pair<int, int> max_incidence_and_load(int n, const TeleRound& r) {
  std::vector<int> inc(n, 0), load(n, 0);
  for (const auto& t : r.transfers) {
    const int w = t.kind == TransferKind::Swap ? 2 : 1;
    for (std::size_t i = 0; i < t.path.size(); ++i) {
      ++inc[t.path[i]];
      load[t.path[i]] += (i == 0 || i + 1 == t.path.size()) ? w : 2 * w;
    }
  }
  return {*std::max_element(inc.begin(), inc.end()), *std::max_element(load.begin(), load.end())};
}

Permutation swap_two(int n, int a, int b) {
  std::vector<Vertex> im(n);
  std::iota(im.begin(), im.end(), 0);
  std::swap(im[a], im[b]);
  return Permutation(im);
}

}  // namespace

TEST(CanonicalPath, Examples) {
  auto p = canonical_path(6, 5, 40);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[2], 21);  // 1 0 101
  EXPECT_EQ(p[1], 13);  // 1 101
  EXPECT_EQ(canonical_path(4, 2, 9), (std::vector<int>{2, 6, 9}));
  EXPECT_EQ(canonical_path(4, 9, 2), (std::vector<int>{9, 6, 2}));
  EXPECT_EQ(canonical_path(4, 2, 3), (std::vector<int>{2, 3}));
  EXPECT_EQ(canonical_path(4, 3, 5), (std::vector<int>{3, 5}));
  EXPECT_THROW(canonical_path(4, 0, 3), std::invalid_argument);
  EXPECT_THROW(canonical_path(4, 3, 16), std::invalid_argument);
  EXPECT_THROW(canonical_path(4, 3, 3), std::invalid_argument);
}

TEST(CanonicalPath, AllPairsWalkAdjacentLayers) {
  const int n = 5;
  auto g = ladder_graph(n);
  auto adj = oracle::adjacency_matrix(g);
  for (int u = 1; u < 32; ++u)
    for (int v = 1; v < 32; ++v) {
      if (u == v) continue;
      auto p = canonical_path(n, u, v);
      EXPECT_EQ(p.front(), u);
      EXPECT_EQ(p.back(), v);
      const int d = std::abs(layer_of(u) - layer_of(v));
      EXPECT_EQ(static_cast<int>(p.size()) - 1, std::max(d, 1));
      for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_TRUE(adj[p[i] - 1][p[i + 1] - 1]);
    }
}

TEST(Ladder, RandomPermutationsOneRound) {
  auto g = ladder_graph(4);
  int worst_inc = 0, worst_load = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto pi = random_permutation(15, seed);
    auto s = ladder_schedule(g, pi);
    EXPECT_EQ(tele_round_count(s), 1);
    auto [inc, load] = max_incidence_and_load(15, only_round(s));
    worst_inc = std::max(worst_inc, inc);
    worst_load = std::max(worst_load, load);
    expect_realizes(g, s, pi);
  }
  EXPECT_LE(worst_inc, 4);
  EXPECT_LE(worst_load, 6);
}

TEST(Ladder, ShiftIdentityAndBudget) {
  auto g = ladder_graph(4);
  PermutationParams pp;
  pp.shift = 1;
  auto shift = generate_permutation("shift", g, pp);
  auto s = ladder_schedule(g, shift);
  EXPECT_EQ(tele_round_count(s), 1);
  EXPECT_LE(max_incidence_and_load(15, only_round(s)).second, 6);
  expect_realizes(g, s, shift);
  EXPECT_TRUE(ladder_schedule(g, Permutation::identity(15)).empty());
  EXPECT_THROW(ladder_schedule(ladder_graph(4, 5), shift), std::invalid_argument);
  EXPECT_THROW(ladder_schedule(path_graph(15), shift), std::invalid_argument);
}

TEST(Ladder, LargerLaddersStayWithinFour) {
  for (int n : {5, 6}) {
    auto g = ladder_graph(n);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto pi = random_permutation(g.size(), seed);
      auto s = ladder_schedule(g, pi);
      auto [inc, load] = max_incidence_and_load(g.size(), only_round(s));
      EXPECT_LE(inc, 4);
      EXPECT_LE(load, 6);
      expect_realizes(g, s, pi);
    }
  }
}

TEST(Greedy, PathDiamOneRound) {
  auto g = path_graph(31);
  auto pi = generate_permutation("diam", g);
  auto s = greedy_schedule(g, pi, 6);
  EXPECT_EQ(tele_round_count(s), 1);
  expect_realizes(g, s, pi);
}

TEST(Greedy, WheelOneRound) {
  auto w = wheel_graph(8);
  PermutationParams pp;
  pp.l = 2;
  auto pi = generate_permutation("wheel", w, pp);
  auto s = greedy_schedule(w, pi);
  EXPECT_EQ(tele_round_count(s), 1);
  expect_realizes(w, s, pi);
  auto [inc, load] = max_incidence_and_load(9, only_round(s));
  EXPECT_LE(load, 6);
  (void)inc;
}

TEST(Greedy, RainbowRoundsScale) {
  std::vector<int> rounds;
  for (int n : {16, 64, 256}) {
    auto g = path_graph(n);
    PermutationParams pp;
    pp.alpha = 0.5;
    auto pi = generate_permutation("rainbow", g, pp);
    auto s = greedy_schedule(g, pi, 6);
    expect_realizes(g, s, pi);
    rounds.push_back(tele_round_count(s));
    const int pairs = rainbow_pairs(n, 0.5);
    EXPECT_GE(rounds.back(), (pairs + 2) / 3);
    EXPECT_LE(rounds.back(), pairs);
  }
  // pairs double with each step, rounds follow
  EXPECT_GE(rounds[1], rounds[0] * 3 / 2);
  EXPECT_LE(rounds[1], rounds[0] * 5 / 2);
  EXPECT_GE(rounds[2], rounds[1] * 3 / 2);
  EXPECT_LE(rounds[2], rounds[1] * 5 / 2);
}

TEST(Greedy, TightBudgetsOnManyGraphs) {
  std::vector<ArchGraph> gs = {path_graph(12),  cycle_graph(10), star_graph(8),       wheel_graph(8),
                               grid_graph(4, 2), ladder_graph(4), hypercube_graph(3), butterfly_graph(2),
                               complete_graph(6)};
  for (const auto& g : gs)
    for (int b : {2, 3, 4, 6})
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto pi = random_permutation(g.size(), seed * 7 + b);
        auto s = greedy_schedule(g, pi, b);
        for (const auto& t : s.timesteps)
          for (const auto& op : t.ops)
            if (auto* r = std::get_if<TeleRound>(&op)) {
              auto load = round_loads(g.size(), *r);
              for (const auto& tr : r->transfers)
                if (tr.dst_slot) ++load[tr.destination()];
              EXPECT_LE(*std::max_element(load.begin(), load.end()), b);
            }
        expect_realizes(g, s, pi);
      }
}

TEST(Greedy, RandomTreesBudgetTwo) {
  // trees leave no detours around a vertex holding a parked token
  for (int n = 6; n <= 60; n += 6)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed * 101 + n);
      std::vector<Edge> e;
      for (int v = 1; v < n; ++v) e.emplace_back(static_cast<Vertex>(rng() % v), v);
      ArchGraph g(n, e, 2);
      auto pi = random_permutation(n, seed + n);
      expect_realizes(g, greedy_schedule(g, pi, 2), pi);
    }
}

TEST(Greedy, TranspositionsOnBudgetTwoPath) {
  // every long 2-cycle must be opened through an ancilla
  for (int n = 3; n <= 12; ++n) {
    auto g = path_graph(n, 2);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        auto pi = swap_two(n, a, b);
        auto s = greedy_schedule(g, pi, 2);
        expect_realizes(g, s, pi);
        EXPECT_LE(tele_round_count(s), b - a == 1 ? 1 : 2);
      }
  }
}

TEST(Greedy, IdentityAndErrors) {
  auto g = grid_graph(3, 2);
  EXPECT_TRUE(greedy_schedule(g, Permutation::identity(9), 2).empty());
  EXPECT_THROW(greedy_schedule(g, Permutation::identity(9), 1), std::invalid_argument);
  EXPECT_THROW(greedy_schedule(g, Permutation::identity(9), 7), std::invalid_argument);
  EXPECT_THROW(greedy_schedule(g, Permutation::identity(4), 2), std::invalid_argument);
}

TEST(SwapSim, SingleLongTransposition) {
  auto g = path_graph(20);
  TeleRound r;
  std::vector<Vertex> p(20);
  std::iota(p.begin(), p.end(), 0);
  r.transfers.push_back(Transfer{p, TransferKind::Swap, 0});
  auto s = simulate_round_with_swaps(g, r);
  EXPECT_LE(depth(s), diameter(g) + 2);
  auto img = oracle::replay_swaps(g, s);
  ASSERT_FALSE(img.empty());
  EXPECT_EQ(img, swap_two(20, 0, 19).image());
}

TEST(SwapSim, EmptyRound) {
  auto g = grid_graph(3, 2);
  EXPECT_EQ(depth(simulate_round_with_swaps(g, TeleRound{})), 0);
}

TEST(SwapSim, LadderRoundsMatch) {
  auto g = ladder_graph(4);
  int worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto pi = random_permutation(15, seed);
    const auto ls = ladder_schedule(g, pi);
    const auto& r = only_round(ls);
    auto sim = simulate_round_detailed(g, r);
    EXPECT_EQ(realized_permutation(g, sim.schedule), pi);
    EXPECT_EQ(round_permutation(15, r), pi);
    worst = std::max(worst, depth(sim.schedule));
  }
  // sqrt(15) + 3 is about 7; allow a constant factor
  EXPECT_LE(worst, 4 * 7);
  RecordProperty("worst_ladder_swap_depth", worst);
}

TEST(SwapSim, GreedyRoundsOnGrids) {
  for (int side : {4, 6, 8}) {
    auto g = grid_graph(side, 2);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto pi = random_permutation(g.size(), seed);
      auto s = greedy_schedule(g, pi);
      for (const auto& t : s.timesteps)
        for (const auto& op : t.ops) {
          auto* r = std::get_if<TeleRound>(&op);
          if (!r) continue;
          bool data_only = std::all_of(r->transfers.begin(), r->transfers.end(),
                                       [](const Transfer& x) { return x.dst_slot == 0; });
          if (!data_only) continue;
          // only rounds that permute full data slots can be simulated from the start state
          std::vector<char> src(g.size(), 0), dst(g.size(), 0);
          for (const auto& x : r->transfers) {
            src[x.source()] = dst[x.destination()] = 1;
            if (x.kind == TransferKind::Swap) src[x.destination()] = dst[x.source()] = 1;
          }
          if (src != dst) continue;
          auto sim = simulate_round_with_swaps(g, *r);
          auto img = oracle::replay_any(g, sim);
          ASSERT_FALSE(img.empty());
          EXPECT_EQ(img, round_permutation(g.size(), *r).image());
          EXPECT_LE(depth(sim), 20 * (side + diameter(g)));
        }
    }
  }
}

TEST(Advantage, Examples) {
  auto p31 = path_graph(31);
  auto diam = generate_permutation("diam", p31);
  auto rep = advantage_report(p31, diam);
  EXPECT_GE(rep.swap_depth, 30);
  EXPECT_EQ(rep.tele_depth, 1);
  EXPECT_GE(rep.ratio, Rational(30));
  EXPECT_EQ(advantage(p31, Permutation::identity(31)), Rational(1));

  auto w = wheel_graph(8);
  PermutationParams pp;
  pp.l = 2;
  auto wp = generate_permutation("wheel", w, pp);
  EXPECT_GT(advantage(w, wp), Rational(1));

  DepthModel slow;
  slow.tele_round = 3;
  EXPECT_EQ(advantage(p31, diam, slow) * Rational(3), advantage(p31, diam));
}
