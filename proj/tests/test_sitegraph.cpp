#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "webreorg/errors.hpp"
#include "webreorg/sitegraph.hpp"

using namespace webreorg;

TEST_CASE("build places exactly the listed edges") {
  auto g = SiteGraph::build(3, {{0, 1}, {1, 2}});
  CHECK(g.page_count() == 3);
  CHECK(g.edges().size() == 2);
  CHECK(g.has_link(0, 1));
  CHECK(g.has_link(1, 2));
  CHECK_FALSE(g.has_link(1, 0));
  CHECK_FALSE(g.has_link(0, 2));
}

TEST_CASE("duplicate edges collapse") {
  auto once = SiteGraph::build(2, {{0, 1}});
  auto twice = SiteGraph::build(2, {{0, 1}, {0, 1}});
  CHECK(once.edges() == twice.edges());
  CHECK(twice.out_degree(0) == 1);
}

TEST_CASE("self-loops and bad indices are construction errors") {
  CHECK_THROWS_AS(SiteGraph::build(3, {{2, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(SiteGraph::build(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(SiteGraph::build(3, {{-1, 0}}), std::invalid_argument);
}

TEST_CASE("queries reject out-of-range indices") {
  auto g = SiteGraph::build(2, {{0, 1}});
  CHECK_THROWS_AS(g.has_link(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(g.out_degree(-1), std::invalid_argument);
  CHECK_THROWS_AS(g.shortest_path_len(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(g.url_of(5), std::invalid_argument);
}

TEST_CASE("self-links never exist") {
  auto g = SiteGraph::build(2, {{0, 1}});
  CHECK_FALSE(g.has_link(0, 0));
  CHECK_FALSE(g.has_link(1, 1));
}

TEST_CASE("out_degree counts a page's links") {
  auto g = SiteGraph::build(4, {{0, 1}, {0, 2}, {3, 0}, {3, 1}, {3, 2}});
  CHECK(g.out_degree(0) == 2);
  CHECK(g.out_degree(1) == 0);
  CHECK(g.out_degree(3) == 3);  // n-1 is the cap without self-loops
}

TEST_CASE("shortest paths follow edge direction") {
  auto g = SiteGraph::build(3, {{0, 1}, {1, 2}});
  CHECK(g.shortest_path_len(0, 2) == 2);
  CHECK(g.shortest_path_len(0, 1) == 1);
  CHECK(g.shortest_path_len(1, 1) == 0);
  CHECK_FALSE(g.shortest_path_len(2, 0).has_value());
}

TEST_CASE("with_link adds an edge to a copy only") {
  auto g = SiteGraph::build(3, {{0, 1}});
  auto h = g.with_link(1, 2);
  CHECK(h.has_link(1, 2));
  CHECK_FALSE(g.has_link(1, 2));
  CHECK(h.has_link(0, 1));
}

TEST_CASE("default and supplied urls") {
  auto g = SiteGraph::build(2, {{0, 1}});
  CHECK(g.url_of(0) == "/page0.html");
  auto h = SiteGraph::build(2, {{0, 1}}, {"/home.html", "/faq.html"});
  CHECK(h.url_of(1) == "/faq.html");
  CHECK_THROWS_AS(SiteGraph::build(2, {{0, 1}}, {"/only-one.html"}),
                  std::invalid_argument);
}

TEST_CASE("bfs lengths satisfy the triangle inequality") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + static_cast<int>(rng() % 6);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && rng() % 4 == 0) edges.emplace_back(i, j);
      }
    }
    auto g = SiteGraph::build(n, edges);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          auto ij = g.shortest_path_len(i, j);
          auto ik = g.shortest_path_len(i, k);
          auto kj = g.shortest_path_len(k, j);
          if (ik && kj) {
            REQUIRE(ij.has_value());
            CHECK(*ij <= *ik + *kj);
          }
        }
      }
    }
  }
}

TEST_CASE("out_degrees sum to the adjacency-one count") {
  std::mt19937_64 rng(5);
  int n = 8;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && rng() % 3 == 0) edges.emplace_back(i, j);
    }
  }
  auto g = SiteGraph::build(n, edges);
  long deg_sum = 0;
  long ones = 0;
  for (int i = 0; i < n; ++i) {
    deg_sum += g.out_degree(i);
    for (int j = 0; j < n; ++j) ones += g.has_link(i, j) ? 1 : 0;
  }
  CHECK(deg_sum == ones);
  CHECK(static_cast<std::size_t>(ones) == g.edges().size());
}

TEST_CASE("build then has_link reproduces the edge set exactly") {
  std::set<std::pair<int, int>> want = {{0, 3}, {1, 0}, {2, 1}, {3, 2},
                                        {0, 1}};
  auto g = SiteGraph::build(
      4, std::vector<std::pair<int, int>>(want.begin(), want.end()));
  std::set<std::pair<int, int>> got;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (g.has_link(i, j)) got.emplace(i, j);
    }
  }
  CHECK(got == want);
}

TEST_CASE("graph file save and load round-trip") {
  auto dir = testutil::fresh_dir("sitegraph_roundtrip");
  auto g = SiteGraph::build(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                            {"/a", "/b", "/c", "/d"});
  auto path = (dir / "graph.txt").string();
  save_graph(g, path);
  auto h = load_graph(path);
  CHECK(h.page_count() == g.page_count());
  CHECK(h.edges() == g.edges());
  CHECK(h.urls() == g.urls());
}

TEST_CASE("graph file errors are input errors") {
  auto dir = testutil::fresh_dir("sitegraph_badfile");
  CHECK_THROWS_AS(load_graph((dir / "missing.txt").string()), InputError);
  auto bad = dir / "bad.txt";
  testutil::spit(bad, "2\n0 5\n");
  CHECK_THROWS_AS(load_graph(bad.string()), InputError);
  auto junk = dir / "junk.txt";
  testutil::spit(junk, "not-a-number\n");
  CHECK_THROWS_AS(load_graph(junk.string()), InputError);
}

TEST_CASE("demo site is a usable 15-page site") {
  auto g = demo_site();
  CHECK(g.page_count() == 15);
  CHECK(g.url_of(0) == "/index.html");
  // Every page has somewhere to go, so walks never stall.
  for (int i = 0; i < g.page_count(); ++i) CHECK(g.out_degree(i) >= 1);
  // Every page can reach the entry page.
  for (int i = 0; i < g.page_count(); ++i) {
    CHECK(g.shortest_path_len(i, 0).has_value());
  }
  for (auto [i, j] : g.edges()) CHECK(i != j);
}
