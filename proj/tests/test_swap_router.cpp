#include <gtest/gtest.h>

#include "qroute/swap_router.hpp"
#include "test_oracles.hpp"

using namespace qroute;

namespace {

// Both the library executor and the array replay must agree with pi.
void expect_realizes(const ArchGraph& g, const Schedule& s, const Permutation& pi) {
  auto img = oracle::replay_swaps(g, s);
  ASSERT_FALSE(img.empty()) << "schedule is not a valid swap schedule";
  EXPECT_EQ(img, pi.image());
  EXPECT_EQ(realized_permutation(g, s), pi);
}

ArchGraph random_tree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) e.emplace_back(static_cast<Vertex>(rng() % v), v);
  return ArchGraph(n, e);
}

}  // namespace

TEST(PathOet, Examples) {
  auto p2 = path_graph(2);
  Permutation t({1, 0});
  auto s = route_path_oet(p2, t);
  EXPECT_EQ(depth(s), 1);
  expect_realizes(p2, s, t);

  auto p7 = path_graph(7);
  auto refl = generate_permutation("reflection", p7);
  auto r = route_path_oet(p7, refl);
  EXPECT_LE(depth(r), 7);
  expect_realizes(p7, r, refl);

  EXPECT_EQ(depth(route_path_oet(p7, Permutation::identity(7))), 0);
  EXPECT_THROW(route_path_oet(cycle_graph(5), Permutation::identity(5)), std::invalid_argument);
}

TEST(PathOet, RandomWithinN) {
  for (int n = 2; n <= 40; n += 3)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto g = path_graph(n);
      auto pi = random_permutation(n, seed);
      auto s = route_path_oet(g, pi);
      EXPECT_LE(depth(s), n);
      expect_realizes(g, s, pi);
    }
}

TEST(Complete, Examples) {
  auto k4 = complete_graph(4);
  Permutation four({1, 2, 3, 0});
  auto s = route_complete(k4, four);
  EXPECT_EQ(depth(s), 2);
  expect_realizes(k4, s, four);
  Permutation tr({1, 0, 2, 3});
  EXPECT_EQ(depth(route_complete(k4, tr)), 1);
  expect_realizes(k4, route_complete(k4, tr), tr);
  EXPECT_EQ(depth(route_complete(k4, Permutation::identity(4))), 0);
}

TEST(Complete, RandomDepthTwo) {
  for (int n = 2; n <= 20; ++n) {
    auto g = complete_graph(n);
    auto pi = random_permutation(n, n);
    auto s = route_complete(g, pi);
    EXPECT_LE(depth(s), 2);
    expect_realizes(g, s, pi);
  }
}

TEST(Tree, Examples) {
  auto star = star_graph(3);
  Permutation leaves({0, 2, 1, 3});
  auto s = route_tree(star, leaves);
  EXPECT_LE(depth(s), 3);
  expect_realizes(star, s, leaves);

  auto p5 = path_graph(5);
  auto refl = generate_permutation("reflection", p5);
  auto r = route_tree(p5, refl);
  EXPECT_LE(depth(r), 15);
  expect_realizes(p5, r, refl);

  EXPECT_EQ(depth(route_tree(star, Permutation::identity(4))), 0);
  EXPECT_THROW(route_tree(cycle_graph(4), Permutation::identity(4)), std::invalid_argument);
}

TEST(Tree, RandomTreesWithinThreeN) {
  for (int n = 2; n <= 60; n += 2)
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      auto g = random_tree(n, seed * 31 + n);
      auto pi = random_permutation(n, seed);
      auto s = route_tree(g, pi);
      EXPECT_LE(depth(s), 3 * n) << "n=" << n << " seed=" << seed;
      expect_realizes(g, s, pi);
    }
}

TEST(Tree, StarsAndCaterpillars) {
  for (int leaves = 2; leaves <= 30; leaves += 4) {
    auto g = star_graph(leaves);
    auto pi = random_permutation(leaves + 1, leaves);
    auto s = route_tree(g, pi);
    EXPECT_LE(depth(s), 3 * (leaves + 1));
    expect_realizes(g, s, pi);
  }
  // spine 0..m-1, one leaf hanging off each spine vertex
  for (int m = 3; m <= 20; m += 3) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < m; ++i) e.emplace_back(i, i + 1);
    for (int i = 0; i < m; ++i) e.emplace_back(i, m + i);
    ArchGraph g(2 * m, e);
    auto pi = random_permutation(2 * m, m);
    auto s = route_tree(g, pi);
    EXPECT_LE(depth(s), 6 * m);
    expect_realizes(g, s, pi);
  }
}

TEST(Tree, SubtreeOfLargerGraph) {
  auto g = grid_graph(4, 2);
  // tree on the first two rows
  std::vector<Edge> t = {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  Permutation pi({7, 6, 5, 4, 3, 2, 1, 0, 8, 9, 10, 11, 12, 13, 14, 15});
  auto s = route_tree(g, t, pi);
  expect_realizes(g, s, pi);
  Permutation off({12, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 0, 13, 14, 15});
  EXPECT_THROW(route_tree(g, t, off), std::invalid_argument);
}

TEST(Product, Examples) {
  auto g = grid_graph(4, 2);
  PermutationParams pp;
  pp.seed = 1;
  auto pi = generate_permutation("random", g, pp);
  auto s = route_generic(g, pi);
  EXPECT_LE(depth(s), 12);
  expect_realizes(g, s, pi);

  EXPECT_EQ(depth(route_generic(g, Permutation::identity(16))), 0);

  // reverse the second row only
  Permutation row({0, 1, 2, 3, 7, 6, 5, 4, 8, 9, 10, 11, 12, 13, 14, 15});
  auto r = route_product(path_graph(4), path_graph(4), row);
  EXPECT_LE(depth(r), 4);
  expect_realizes(g, r, row);
}

TEST(Product, GridsAndHypercubesRandom) {
  std::vector<ArchGraph> gs = {grid_graph(3, 2), grid_graph(5, 2), grid_graph(7, 2), grid_graph(3, 3),
                               hypercube_graph(3), hypercube_graph(5), grid_graph(8, 2)};
  for (const auto& g : gs)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto pi = random_permutation(g.size(), seed + 100);
      auto s = route_generic(g, pi);
      EXPECT_LE(depth(s), 3 * g.size());
      expect_realizes(g, s, pi);
    }
  // 2 D1 + D2 with OET factors
  for (int n = 3; n <= 8; ++n) {
    auto g = grid_graph(n, 2);
    auto pi = random_permutation(g.size(), n);
    EXPECT_LE(depth(route_generic(g, pi)), 3 * n);
  }
}

TEST(Generic, Examples) {
  auto p7 = path_graph(7);
  auto diam = generate_permutation("diam", p7);
  auto s = route_generic(p7, diam);
  EXPECT_GE(depth(s), 6);
  EXPECT_LE(depth(s), 21);
  expect_realizes(p7, s, diam);

  auto k5 = complete_graph(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto pi = random_permutation(5, seed);
    auto r = route_generic(k5, pi);
    EXPECT_LE(depth(r), 2);
    expect_realizes(k5, r, pi);
  }
  EXPECT_EQ(depth(route_generic(k5, Permutation::identity(5))), 0);
}

TEST(Generic, OtherFamiliesWithinThreeN) {
  std::vector<ArchGraph> gs = {wheel_graph(8),  wheel_graph(16), ladder_graph(4), ladder_graph(5),
                               cycle_graph(11), butterfly_graph(3), star_graph(9)};
  for (const auto& g : gs)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto pi = random_permutation(g.size(), seed);
      auto s = route_generic(g, pi);
      EXPECT_LE(depth(s), 3 * g.size());
      expect_realizes(g, s, pi);
    }
}

TEST(Wheel, BranchesAndBounds) {
  for (int rim : {8, 16})
    for (int l : {2, 4}) {
      auto w = wheel_graph(rim);
      PermutationParams pp;
      pp.l = l;
      auto pi = generate_permutation("wheel", w, pp);
      auto r = route_wheel(w, l);
      expect_realizes(w, r.schedule, pi);
      expect_realizes(w, route_wheel_hub(w, l), pi);
      expect_realizes(w, route_wheel_rim(w, l), pi);
      EXPECT_EQ(r.hub_depth, 3 * l);
      EXPECT_LE(r.rim_depth, 2 * (rim / l - 1) + 2);
      EXPECT_LE(depth(r.schedule), 3 * std::min(l, rim / l) + 2);
      EXPECT_EQ(r.optimum_floor, std::min(2 * l, rim / l - 1));
    }
  auto w9 = wheel_graph(8);
  EXPECT_EQ(route_wheel(w9, 2).branch, "rim");
  EXPECT_LE(depth(route_wheel_hub(w9, 4)), 12);
  EXPECT_THROW(route_wheel(w9, 3), std::invalid_argument);
}
