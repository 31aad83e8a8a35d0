#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curtainlab/generators.hpp"
#include "curtainlab/median.hpp"
#include "oracles.hpp"

using namespace curtainlab;

namespace {

MedianWindow five_cycle() {
  std::vector<std::string> labels{"0", "1", "2", "3", "4"};
  std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
  return MedianWindow::full_graph(std::move(labels), edges, 0);
}

VertexId v(const MedianWindow& w, const std::string& label) {
  auto r = w.find_label(label);
  REQUIRE(r.has_value());
  return *r;
}

}  // namespace

TEST_CASE("validate_median examples") {
  CHECK(hypercube_window(3).validate_median());
  CHECK_FALSE(five_cycle().validate_median());
  CHECK(grid_window(3, 3).validate_median());

  auto win = MedianWindow::window({"a", "b"}, {{0, 1}}, 0, 4, 1);
  CHECK_THROWS_AS(win.validate_median(), Error);
}

TEST_CASE("walls of the basic examples") {
  auto q3 = hypercube_window(3);
  REQUIRE(q3.walls().size() == 3);
  for (const auto& w : q3.walls()) CHECK(w.edges.size() == 4);

  auto p5 = path_window(5);
  CHECK(p5.walls().size() == 4);
  for (const auto& w : p5.walls()) CHECK(w.edges.size() == 1);

  // every edge belongs to exactly one wall
  auto grid = grid_window(3, 2);
  std::size_t covered = 0;
  for (const auto& w : grid.walls()) covered += w.edges.size();
  CHECK(covered == grid.graph().edge_count());
  CHECK(grid.degenerate_wall_count() == 0);
}

TEST_CASE("degenerate wall flags a five cycle window") {
  std::vector<std::string> labels{"0", "1", "2", "3", "4"};
  std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
  auto win = MedianWindow::window(std::move(labels), edges, 0, 2, 2);
  CHECK(win.degenerate_wall_count() > 0);  // tagged, not fatal, on windows

  auto full = five_cycle();
  CHECK_THROWS_AS(full.walls(), Error);  // fatal on full graphs
}

TEST_CASE("distance equals wall count equals oracle") {
  auto q3 = hypercube_window(3);
  CHECK(q3.distance(v(q3, "000"), v(q3, "111")) == 3);
  CHECK(q3.distance(v(q3, "010"), v(q3, "010")) == 0);
  CHECK(q3.separating_walls(v(q3, "000"), v(q3, "111")).size() == 3);
  CHECK(q3.separating_walls(v(q3, "000"), v(q3, "100")).size() == 1);

  auto grid = grid_window(4, 4);
  CHECK(grid.separating_walls(v(grid, "(2,0)"), v(grid, "(0,2)")).size() == 4);

  Rng rng(7);
  for (int trial = 0; trial < 12; ++trial) {
    auto g = random_median_graph(rng, 120);
    auto d = oracle::floyd_warshall(g.graph.graph());
    for (int probe = 0; probe < 24; ++probe) {
      VertexId x = static_cast<VertexId>(rng.below(g.graph.size()));
      VertexId y = static_cast<VertexId>(rng.below(g.graph.size()));
      CAPTURE(g.kind);
      CHECK(g.graph.distance(x, y) == d[x][y]);
      CHECK(static_cast<int>(g.graph.separating_walls(x, y).size()) == d[x][y]);
    }
  }
}

TEST_CASE("median: examples and oracle") {
  auto q3 = hypercube_window(3);
  CHECK(q3.median(v(q3, "100"), v(q3, "010"), v(q3, "001")) == v(q3, "000"));
  CHECK(q3.median(v(q3, "110"), v(q3, "110"), v(q3, "001")) == v(q3, "110"));

  // the grid triple: coordinatewise medians, frozen from the oracle
  auto grid = grid_window(4, 4);
  auto d = oracle::floyd_warshall(grid.graph());
  VertexId x = v(grid, "(3,0)"), y = v(grid, "(0,3)"), z = v(grid, "(2,2)");
  auto ms = oracle::medians_of(d, x, y, z);
  REQUIRE(ms.size() == 1);
  CHECK(grid.label(ms.front()) == "(2,2)");
  CHECK(grid.median(x, y, z) == ms.front());

  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    auto g = random_median_graph(rng, 90);
    auto dd = oracle::floyd_warshall(g.graph.graph());
    for (int probe = 0; probe < 16; ++probe) {
      VertexId a = static_cast<VertexId>(rng.below(g.graph.size()));
      VertexId b = static_cast<VertexId>(rng.below(g.graph.size()));
      VertexId c = static_cast<VertexId>(rng.below(g.graph.size()));
      auto m = g.graph.median(a, b, c);
      auto expect = oracle::medians_of(dd, a, b, c);
      REQUIRE(expect.size() == 1);
      CHECK(m == expect.front());
      // the median lies in all three pairwise intervals
      CHECK(dd[a][m] + dd[m][b] == dd[a][b]);
      CHECK(dd[b][m] + dd[m][c] == dd[b][c]);
      CHECK(dd[a][m] + dd[m][c] == dd[a][c]);
    }
  }

  CHECK_THROWS_AS(five_cycle().median(0, 1, 3), Error);
}

TEST_CASE("hull: examples, fixed point, round bound") {
  auto q3 = hypercube_window(3);
  auto h = q3.hull({v(q3, "100"), v(q3, "010")});
  std::vector<VertexId> expect{v(q3, "000"), v(q3, "100"), v(q3, "010"), v(q3, "110")};
  std::sort(expect.begin(), expect.end());
  CHECK(h.hull.members == expect);

  auto single = q3.hull({v(q3, "101")});
  CHECK(single.hull.members == std::vector<VertexId>{v(q3, "101")});
  CHECK(single.rounds == 0);

  auto grid = grid_window(4, 4);
  auto box = grid.hull({v(grid, "(0,0)"), v(grid, "(2,1)")});
  CHECK(box.hull.members.size() == 6);  // the 3 x 2 box

  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_median_graph(rng, 80);
    auto d = oracle::floyd_warshall(g.graph.graph());
    int v_dim = g.graph.dimension();
    for (int probe = 0; probe < 6; ++probe) {
      std::vector<VertexId> seed;
      int k = rng.range(1, 3);
      for (int i = 0; i < k; ++i) seed.push_back(static_cast<VertexId>(rng.below(g.graph.size())));
      auto res = g.graph.hull(seed);
      CHECK(res.hull.members == oracle::interval_closure(d, seed));
      CHECK(res.rounds <= v_dim + 1);
      CHECK(g.graph.is_interval_closed(res.hull.members));
    }
  }
}

TEST_CASE("gate projection and the separating-wall characterization") {
  auto q3 = hypercube_window(3);
  auto bottom = q3.hull({v(q3, "000"), v(q3, "110")});  // bottom face
  REQUIRE(bottom.hull.members.size() == 4);
  CHECK(q3.gate_projection(bottom.hull, v(q3, "111")) == v(q3, "110"));
  CHECK(q3.gate_projection(bottom.hull, v(q3, "010")) == v(q3, "010"));  // x in Y

  auto grid = grid_window(4, 4);
  auto column = grid.hull({v(grid, "(0,0)"), v(grid, "(0,4)")});
  CHECK(grid.gate_projection(column.hull, v(grid, "(3,2)")) == v(grid, "(0,2)"));

  ConvexSet bad;  // two opposite corners of a square are not interval closed
  bad.members = {v(q3, "000"), v(q3, "110")};
  CHECK_THROWS_AS(q3.gate_projection(bad, v(q3, "111")), Error);

  Rng rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    auto g = random_median_graph(rng, 70);
    for (int probe = 0; probe < 4; ++probe) {
      std::vector<VertexId> seed{static_cast<VertexId>(rng.below(g.graph.size())),
                                 static_cast<VertexId>(rng.below(g.graph.size()))};
      auto convex = g.graph.hull(seed).hull;
      for (VertexId x = 0; x < g.graph.size(); ++x) {
        auto gate = g.graph.gate_projection(convex, x);
        CHECK(g.graph.gate_characterization_holds(convex, x, gate));
      }
    }
  }
}

TEST_CASE("maximal wall chains") {
  auto p5 = path_window(5);
  CHECK(p5.maximal_wall_chain(0, 4).size() == 4);

  auto q3 = hypercube_window(3);
  CHECK(q3.maximal_wall_chain(v(q3, "000"), v(q3, "111")).size() == 1);

  auto grid = grid_window(3, 3);
  CHECK(grid.maximal_wall_chain(v(grid, "(0,0)"), v(grid, "(3,3)")).size() == 3);

  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_median_graph(rng, 60);
    for (int probe = 0; probe < 4; ++probe) {
      VertexId x = static_cast<VertexId>(rng.below(g.graph.size()));
      VertexId y = static_cast<VertexId>(rng.below(g.graph.size()));
      auto sep = g.graph.separating_walls(x, y);
      if (sep.size() > 12 || sep.empty()) continue;
      auto chain = g.graph.maximal_wall_chain(x, y);
      // output is a chain
      for (std::size_t i = 1; i + 1 < chain.size(); ++i)
        CHECK(g.graph.wall_separates_walls(chain[i], chain[i - 1], chain[i + 1]));
      CAPTURE(g.kind);
      CHECK(static_cast<int>(chain.size()) == oracle::brute_max_chain(g.graph, sep, x));
    }
  }
}

TEST_CASE("dimension of the standard graphs") {
  CHECK(hypercube_window(3).dimension() == 3);
  CHECK(hypercube_window(4).dimension() == 4);
  CHECK(grid_window(3, 4).dimension() == 2);
  CHECK(path_window(6).dimension() == 1);
}

TEST_CASE("guard enforcement on windows") {
  // a 9-path window centered at 4 with guard 1
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < 9; ++i) labels.push_back(std::to_string(i));
  for (int i = 0; i + 1 < 9; ++i) edges.emplace_back(i, i + 1);
  auto win = MedianWindow::window(std::move(labels), edges, 4, 4, 1);
  CHECK(win.distance(3, 5) == 2);
  CHECK_THROWS_AS(win.distance(0, 5), Error);
  CHECK_THROWS_AS(win.median(0, 1, 2), Error);
}
