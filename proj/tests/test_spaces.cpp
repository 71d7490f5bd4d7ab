#include <doctest.h>

#include <algorithm>

#include "cqm/spaces.hpp"
#include "cqm/tree.hpp"

using namespace cqm;
using namespace cqm::words;
using namespace cqm::spaces;

namespace {

ReducedWord w2(const std::string& s) { return ReducedWord::parse(2, s); }

// Independent four-point reimplementation through Gromov products: delta is
// the largest gap between the median and the smallest of the three products
// over all base points and triples.
double delta_by_gromov_products(const FiniteGraphSpace& g) {
  auto d = all_pairs_distances(g);
  auto p2 = [&](int x, int y, int base) {
    return d[static_cast<std::size_t>(x)][static_cast<std::size_t>(base)] +
           d[static_cast<std::size_t>(y)][static_cast<std::size_t>(base)] -
           d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  };
  int worst = 0;
  for (int base = 0; base < g.n; ++base) {
    for (int x = 0; x < g.n; ++x) {
      for (int y = x + 1; y < g.n; ++y) {
        for (int z = y + 1; z < g.n; ++z) {
          int a = p2(x, y, base), b = p2(x, z, base), c = p2(y, z, base);
          int lo = std::min({a, b, c});
          int hi = std::max({a, b, c});
          int med = a + b + c - lo - hi;
          worst = std::max(worst, med - lo);
        }
      }
    }
  }
  return static_cast<double>(worst) / 2.0;  // the products above are doubled
}

// Exhaustive-relaxation oracle over the explicit augmented ball graph: the
// least cost over all paths, computed independently of the search engine.
long long bellman_ford_cost(const TreeBall& ball, const ReducedWord& source,
                            const ReducedWord& target, const ReducedWord& label,
                            long long shortcut_cost) {
  const long long inf = -1;
  std::vector<long long> cost(static_cast<std::size_t>(ball.graph.n), inf);
  int s = ball.index_of(source);
  int t = ball.index_of(target);
  REQUIRE(s >= 0);
  REQUIRE(t >= 0);
  struct E {
    int u, v;
    long long c;
  };
  std::vector<E> edges;
  for (int u = 0; u < ball.graph.n; ++u) {
    for (int v : ball.graph.adj[static_cast<std::size_t>(u)]) edges.push_back({u, v, 1});
    ReducedWord jump = multiply(ball.word_of[static_cast<std::size_t>(u)], label);
    int v = ball.index_of(jump);
    if (v >= 0) edges.push_back({u, v, shortcut_cost});
  }
  cost[static_cast<std::size_t>(s)] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const E& e : edges) {
      if (cost[static_cast<std::size_t>(e.u)] == inf) continue;
      long long via = cost[static_cast<std::size_t>(e.u)] + e.c;
      if (cost[static_cast<std::size_t>(e.v)] == inf || via < cost[static_cast<std::size_t>(e.v)]) {
        cost[static_cast<std::size_t>(e.v)] = via;
        changed = true;
      }
    }
  }
  REQUIRE(cost[static_cast<std::size_t>(t)] != inf);
  return cost[static_cast<std::size_t>(t)];
}

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("all-pairs distances") {
  auto p3 = FiniteGraphSpace::path(3);
  auto d = all_pairs_distances(p3);
  CHECK(d[0][2] == 2);
  auto single = FiniteGraphSpace::path(1);
  CHECK(all_pairs_distances(single)[0][0] == 0);
  auto c6 = FiniteGraphSpace::cycle(6);
  CHECK(all_pairs_distances(c6)[0][3] == 3);

  FiniteGraphSpace disconnected;
  disconnected.n = 2;
  disconnected.adj.resize(2);
  CHECK_THROWS_AS(all_pairs_distances(disconnected), Disconnected);
}

TEST_CASE("edge list parsing") {
  auto g = FiniteGraphSpace::from_edge_list("0 1\n1 2\n# comment\n2 0\n");
  CHECK(g.n == 3);
  CHECK(all_pairs_distances(g)[0][2] == 1);
  CHECK_THROWS_AS(FiniteGraphSpace::from_edge_list("0\n"), Error);
  CHECK_THROWS_AS(FiniteGraphSpace::from_edge_list(""), Error);
}

TEST_CASE("four-point delta") {
  CHECK(delta_four_point(FiniteGraphSpace::path(2)) == 0.0);
  for (int r = 0; r <= 3; ++r) {
    CHECK(delta_four_point(tree_ball(r, 2).graph) == 0.0);
  }
  auto c8 = FiniteGraphSpace::cycle(8);
  double delta = delta_four_point(c8);
  CHECK(delta == delta_by_gromov_products(c8));
  CHECK(delta == 2.0);
  auto c6 = FiniteGraphSpace::cycle(6);
  CHECK(delta_four_point(c6) == delta_by_gromov_products(c6));
}

TEST_CASE("four-point delta equals the product form on random graphs") {
  SeededRng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 5 + static_cast<int>(rng.below(4));
    FiniteGraphSpace g = FiniteGraphSpace::path(n);
    for (int extra = 0; extra < n; ++extra) {
      int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (u != v) g.add_edge(u, v);
    }
    CHECK(delta_four_point(g) == delta_by_gromov_products(g));
  }
}

TEST_CASE("tree balls") {
  CHECK(tree_ball(1, 2).graph.n == 5);
  CHECK(tree_ball(0, 2).graph.n == 1);
  CHECK(tree_ball(2, 2).graph.n == 17);
  TreeBall b = tree_ball(3, 2);
  CHECK(b.index_of(w2("aba")) >= 0);
  CHECK(b.index_of(w2("abab")) == -1);
  auto d = all_pairs_distances(b.graph);
  CHECK(d[static_cast<std::size_t>(b.index_of(w2("ab")))]
         [static_cast<std::size_t>(b.index_of(w2("ba")))] == 4);
}

TEST_CASE("graph search without shortcuts is the BFS metric") {
  auto c6 = FiniteGraphSpace::cycle(6);
  GraphSearchProblem p;
  p.graph = &c6;
  p.source = 0;
  p.target = 3;
  CHECK(min_cost_path(p).cost == 3);
  // A shortcut of cost 1 parallel to a unit edge changes nothing.
  p.shortcuts.push_back({0, 1, 1});
  p.target = 1;
  CHECK(min_cost_path(p).cost == 1);
  // Shortcut costs below 1 are rejected.
  p.shortcuts.push_back({0, 2, 0});
  CHECK_THROWS_AS(min_cost_path(p), Error);
}

TEST_CASE("tree search examples") {
  TreeSearchProblem p;
  p.rank = 2;
  p.source = w2("");
  p.target = w2("abab");
  p.shortcuts.push_back({w2("ab"), 1});
  p.region = TreeRegion::ball(6, 2);
  SearchResult r = min_cost_path(p);
  CHECK(r.cost == 2);
  CHECK(r.base_edge_length == 4);

  p.shortcuts.clear();
  CHECK(min_cost_path(p).cost == 4);

  p.target = w2("ababab");
  p.region = TreeRegion::ball(2, 2);
  CHECK_THROWS_AS(min_cost_path(p), RadiusTooSmall);
}

TEST_CASE("search agrees with exhaustive relaxation on the ball") {
  SeededRng rng(32);
  TreeBall ball = tree_ball(5, 2);
  for (int trial = 0; trial < 150; ++trial) {
    ReducedWord label = random_reduced_word(2, 2 + rng.below(3), rng);
    int weight = 1 + static_cast<int>(rng.below(2));
    if (static_cast<int>(label.size()) <= weight) continue;
    ReducedWord x = ball.word_of[rng.below(static_cast<std::uint64_t>(ball.graph.n))];
    ReducedWord y = ball.word_of[rng.below(static_cast<std::uint64_t>(ball.graph.n))];
    TreeSearchProblem p;
    p.rank = 2;
    p.source = x;
    p.target = y;
    p.shortcuts.push_back({label, static_cast<long long>(label.size()) - weight});
    p.region = TreeRegion::ball(5, 2);
    long long got = min_cost_path(p).cost;
    long long expected =
        bellman_ford_cost(ball, x, y, label, static_cast<long long>(label.size()) - weight);
    CHECK(got == expected);
  }
}

TEST_CASE("cost bounds and radius monotonicity") {
  SeededRng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    ReducedWord label = random_reduced_word(2, 2 + rng.below(3), rng);
    const int weight = 1;
    ReducedWord x = random_reduced_word(2, rng.below(5), rng);
    ReducedWord y = random_reduced_word(2, rng.below(5), rng);
    TreeSearchProblem p;
    p.rank = 2;
    p.source = x;
    p.target = y;
    p.shortcuts.push_back({label, static_cast<long long>(label.size()) - weight});
    long long d = tree::tree_distance(x, y);
    long long prev = -1;
    for (long long radius : {6, 12, 24}) {
      p.region = TreeRegion::tube(x, y, radius);
      long long cost = min_cost_path(p).cost;
      CHECK(cost <= d);
      // cost >= d * (1 - W/|label|), kept in integers.
      CHECK(cost * static_cast<long long>(label.size()) >=
            d * (static_cast<long long>(label.size()) - weight));
      if (prev >= 0) CHECK(cost <= prev);
      prev = cost;
    }
  }
}

}  // TEST_SUITE
