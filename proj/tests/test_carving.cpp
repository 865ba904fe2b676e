#include <doctest.h>

#include <algorithm>
#include <set>

#include "carving.hpp"
#include "generators.hpp"

using namespace ge;

static void check_is_partition(const Graph& g, const Partition& p) {
  std::vector<char> seen(g.n, 0);
  for (const auto& cl : p.clusters) {
    CHECK(!cl.empty());
    for (int v : cl) {
      CHECK(!seen[v]);
      seen[v] = 1;
      CHECK(p.cluster_of[v] == &cl - &p.clusters[0]);
    }
  }
  for (int v = 0; v < g.n; ++v) CHECK(seen[v]);
}

TEST_CASE("make_color_classes") {
  Graph p = generate("path:7");
  auto classes = make_color_classes(p, 1);  // coloring of G^2
  REQUIRE(classes.size() == 3);
  CHECK(classes[0] == std::vector<int>{0, 3, 6});
  CHECK(classes[1] == std::vector<int>{1, 4});
  CHECK(classes[2] == std::vector<int>{2, 5});

  Graph lone = generate("path:1");
  CHECK(make_color_classes(lone, 3) == std::vector<std::vector<int>>{{0}});

  Graph empty_edges = load_graph("n 4\n");
  CHECK(make_color_classes(empty_edges, 2).size() == 1);

  // 2M-separation within every class, via brute distances.
  Graph g = generate("grid:8");
  for (int M : {1, 2, 3}) {
    auto cls = make_color_classes(g, M);
    for (const auto& c : cls) {
      for (size_t i = 0; i < c.size(); ++i) {
        auto d = bfs_distances(g, c[i], -1);
        for (size_t j = i + 1; j < c.size(); ++j) CHECK(d[c[j]] > 2 * M);
      }
    }
  }
}

TEST_CASE("carve hand examples") {
  Graph p = generate("path:5");
  std::vector<std::vector<int>> classes = {{0, 3}, {1, 4}, {2}};
  std::vector<int> t(5, 1);
  CarvingInput in{&p, 1, &classes, &t};
  CarveResult res = carve(in);
  check_is_partition(p, res.part);
  REQUIRE(res.part.size() == 2);
  CHECK(res.part.clusters[0] == std::vector<int>{0, 1});
  CHECK(res.part.clusters[1] == std::vector<int>{2, 3, 4});

  std::vector<int> zero(5, 0);
  CarvingInput in0{&p, 1, &classes, &zero};
  CarveResult res0 = carve(in0);
  CHECK(res0.part.size() == 5);

  Graph lone = generate("path:1");
  std::vector<std::vector<int>> c1 = {{0}};
  std::vector<int> t1 = {0};
  CarvingInput in1{&lone, 2, &c1, &t1};
  CHECK(carve(in1).part.size() == 1);
}

TEST_CASE("carve structure on random inputs") {
  Graph g = generate("grid:12");
  for (int M : {2, 4}) {
    auto classes = make_color_classes(g, M);
    TGeoParams tg{0.2, M};
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      std::vector<int> t(g.n);
      for (int v = 0; v < g.n; ++v) {
        Rng rv(mix(seed, uint64_t(v)));
        t[v] = tgeo_sample(tg, rv);
      }
      CarvingInput in{&g, M, &classes, &t};
      CarveResult res = carve(in);
      check_is_partition(g, res.part);
      res.part.ensure_diams(g);
      for (int d : res.part.diam) CHECK(d <= 2 * M);
      // Every cluster sits inside the ball of its generating center.
      for (int c = 0; c < res.part.size(); ++c) {
        int x = res.center_of_cluster[c];
        auto dist = bfs_distances(g, x, -1);
        for (int v : res.part.clusters[c]) CHECK(dist[v] <= t[x]);
      }
      // Determinism.
      CarveResult res2 = carve(in);
      CHECK(res.part.cluster_of == res2.part.cluster_of);
    }
  }
}

TEST_CASE("is_ball_cut") {
  Graph p = generate("path:5");
  Partition part = partition_from_assignment({0, 0, 1, 1, 1});
  CHECK(is_ball_cut(p, part, 1, 1));
  CHECK(!is_ball_cut(p, part, 0, 1));
  CHECK(!is_ball_cut(p, part, 2, 0));
}

TEST_CASE("cut rate experiment small") {
  Graph p = generate("path:400");
  auto rep = cut_rate_experiment(p, 2.0, 0.1, 5, 0, 3, 99, 12, "path:400");
  CHECK(rep.empirical_cut_fraction == 0.0);  // radius-0 balls are never cut

  auto rep2 = cut_rate_experiment(p, 2.0, 0.1, 5, 2, 5, 99, 12, "path:400");
  CHECK(rep2.empirical_cut_fraction >= 0.0);
  CHECK(rep2.empirical_cut_fraction <= 1.0);
  CHECK(!rep2.preconditions_met);  // r = 2 < 9
  CHECK(rep2.bound_20rp == doctest::Approx(4.0));
  // Determinism of the whole report.
  auto rep3 = cut_rate_experiment(p, 2.0, 0.1, 5, 2, 5, 99, 12, "path:400");
  CHECK(rep2.to_json() == rep3.to_json());

  // Halving p (auto M) should not increase the cut fraction beyond noise.
  auto lo = cut_rate_experiment(p, 2.0, 0.05, -1, 2, 5, 99, 12, "path:400");
  CHECK(lo.M == auto_M(2.0, 0.05));
  CHECK(lo.empirical_cut_fraction <= rep2.empirical_cut_fraction + 0.1);
}
