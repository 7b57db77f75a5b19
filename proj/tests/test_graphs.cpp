#include <gtest/gtest.h>

#include <set>

#include "trxy/graphs.hpp"

using namespace trxy;

namespace {

std::vector<int> betti_split(const std::vector<DecoratedGraph>& gs, int max_b) {
  std::vector<int> split(static_cast<std::size_t>(max_b + 1), 0);
  for (const auto& g : gs) ++split[static_cast<std::size_t>(g.betti1())];
  return split;
}

PlainGraph plain(int n, std::vector<std::vector<int>> blacks) { return normalized(PlainGraph{n, std::move(blacks)}); }

}  // namespace

TEST(Graphs, GenusOneOnePoint) {
  auto gs = enumerate_decorated(1, 1);
  // Two trees (one genus-1 leaf, one leaf with h = 1) and the double edge.
  ASSERT_EQ(gs.size(), 3u);
  EXPECT_EQ(betti_split(gs, 1), (std::vector<int>{2, 1}));
  std::set<std::string> shadows;
  for (const auto& g : gs) shadows.insert(shadow(g).canonical());
  EXPECT_EQ(shadows.size(), 2u);
}

TEST(Graphs, GenusTwoOnePoint) {
  auto gs = enumerate_decorated(1, 2);
  EXPECT_EQ(gs.size(), 12u);
  EXPECT_EQ(betti_split(gs, 2), (std::vector<int>{6, 4, 2}));
}

TEST(Graphs, GenusOneTwoPointsMatchesTermCount) {
  auto gs = enumerate_decorated(2, 1);
  // Seven tree terms and five one-loop terms in the hand-expanded formula.
  EXPECT_EQ(gs.size(), 12u);
  EXPECT_EQ(betti_split(gs, 1), (std::vector<int>{7, 5}));
}

TEST(Graphs, GenusZeroGraphsAreTrees) {
  for (int n = 3; n <= 5; ++n) {
    for (const auto& g : enumerate_decorated(n, 0)) {
      EXPECT_EQ(g.betti1(), 0);
      for (const auto& b : g.blacks) {
        EXPECT_GE(b.edges.size(), 2u);
        EXPECT_EQ(b.genus, 0);
      }
    }
  }
  // n = 3: the single trivalent vertex and three paths through two bivalent vertices.
  EXPECT_EQ(enumerate_decorated(3, 0).size(), 4u);
}

TEST(Graphs, FigureTwoAutomorphisms) {
  auto shapes = enumerate_plain(1, 3);
  ASSERT_EQ(shapes.size(), 4u);
  EXPECT_EQ(shapes[0], plain(1, {}));
  EXPECT_EQ(shapes[1], plain(1, {{1, 1}}));
  EXPECT_EQ(automorphism_count(shapes[0]), 1);
  EXPECT_EQ(automorphism_count(shapes[1]), 2);
  EXPECT_EQ(automorphism_count(plain(1, {{1, 1}, {1, 1}})), 8);
  EXPECT_EQ(automorphism_count(plain(1, {{1, 1, 1}})), 6);
  std::set<std::int64_t> auts;
  for (const auto& s : shapes) auts.insert(automorphism_count(s));
  EXPECT_EQ(auts, (std::set<std::int64_t>{1, 2, 6, 8}));
}

TEST(Graphs, FigureOneAutomorphisms) {
  auto gs = enumerate_plain(2, 2);
  ASSERT_EQ(gs.size(), 6u);
  for (const auto& g : gs) {
    if (g == plain(2, {{1, 2}})) {
      EXPECT_EQ(automorphism_count(g), 1);
    } else {
      EXPECT_EQ(automorphism_count(g), 2) << g.canonical();
    }
  }
}

TEST(Graphs, BettiNumbers) {
  EXPECT_EQ(plain(1, {{1, 1, 1}}).betti1(), 2);
  EXPECT_EQ(plain(1, {{1, 1}}).betti1(), 1);
  EXPECT_EQ(plain(3, {{1, 2}, {2, 3}}).betti1(), 0);
}

TEST(Graphs, ConditionsAndCanonicalInjectivity) {
  for (int n = 1; n <= 3; ++n) {
    for (int g = 0; 2 * g - 2 + n <= 4; ++g) {
      if (2 * g - 2 + n <= 0 && !(n == 1 && g == 0)) continue;
      auto gs = enumerate_decorated(n, g);
      std::set<std::string> keys;
      for (const auto& d : gs) {
        EXPECT_TRUE(satisfies_conditions(d, g)) << d.canonical();
        keys.insert(d.canonical());
      }
      EXPECT_EQ(keys.size(), gs.size());
    }
  }
}

TEST(Graphs, BruteForceAutomorphismsUpToFiveEdges) {
  int checked = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int g = 0; 2 * g - 2 + n <= 4; ++g) {
      for (const auto& d : enumerate_decorated(n, g)) {
        if (d.edge_count() > 5) continue;
        EXPECT_EQ(automorphism_count(d), brute_force_automorphisms(d)) << d.canonical();
        ++checked;
      }
    }
  }
  for (int n = 1; n <= 3; ++n) {
    for (const auto& p : enumerate_plain(n, 4)) {
      DecoratedGraph d = undecorated(p);
      if (d.edge_count() > 5) continue;
      EXPECT_EQ(automorphism_count(p), brute_force_automorphisms(d)) << p.canonical();
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Graphs, CanonicalRendering) {
  auto gs = enumerate_decorated(1, 1);
  EXPECT_EQ(gs.front().canonical(), "g=1, b1=0, aut=1, blacks=[(0,[(1,1)])]");
  EXPECT_EQ(gs.back().canonical(), "g=1, b1=1, aut=2, blacks=[(0,[(1,0),(1,0)])]");
}

namespace {

// Independent oracle: all multisets of at most g + n - 1 vertices drawn from a
// generous candidate pool, filtered by the defining conditions written out here.
std::set<std::string> oracle_graphs(int n, int g) {
  std::vector<BlackVertex> pool;
  std::vector<EdgeEnd> ends;
  for (int l = 1; l <= n; ++l) {
    for (int h = 0; h <= g; ++h) ends.push_back({l, h});
  }
  const int max_valence = g + n;
  std::vector<std::size_t> pick;
  auto gen = [&](auto&& self, std::size_t from) -> void {
    if (!pick.empty()) {
      for (int gv = 0; gv <= g; ++gv) {
        BlackVertex b{gv, {}};
        for (auto i : pick) b.edges.push_back(ends[i]);
        pool.push_back(b);
      }
    }
    if (static_cast<int>(pick.size()) == max_valence) return;
    for (std::size_t i = from; i < ends.size(); ++i) {
      pick.push_back(i);
      self(self, i);
      pick.pop_back();
    }
  };
  gen(gen, 0);
  std::set<std::string> out;
  std::vector<std::size_t> chosen;
  auto check = [&]() {
    DecoratedGraph d{n, {}};
    for (auto i : chosen) d.blacks.push_back(pool[i]);
    d = normalized(d);
    int e = 0, total = 0;
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto root = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
      return a;
    };
    for (const auto& b : d.blacks) {
      int chi = 2 - b.genus;
      for (const auto& x : b.edges) {
        chi -= x.h + 1;
        total += x.h;
        ++e;
        parent[static_cast<std::size_t>(root(x.label - 1))] = root(b.edges.front().label - 1);
      }
      if (chi > 0) return;
      total += b.genus;
    }
    for (int i = 1; i < n; ++i) {
      if (root(i) != root(0)) return;
    }
    int b1 = e - n - static_cast<int>(d.blacks.size()) + 1;
    if (total + b1 != g) return;
    out.insert(d.canonical());
  };
  auto choose = [&](auto&& self, std::size_t from) -> void {
    check();
    if (static_cast<int>(chosen.size()) == g + n - 1) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      chosen.push_back(i);
      self(self, i);
      chosen.pop_back();
    }
  };
  choose(choose, 0);
  return out;
}

}  // namespace

TEST(Graphs, EnumerationMatchesExhaustiveOracle) {
  for (auto [n, g] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {3, 0}, {2, 0}}) {
    std::set<std::string> mine;
    for (const auto& d : enumerate_decorated(n, g)) mine.insert(d.canonical());
    EXPECT_EQ(mine, oracle_graphs(n, g)) << n << "," << g;
  }
}
