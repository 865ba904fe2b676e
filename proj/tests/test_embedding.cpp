#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "embedding.hpp"
#include "generators.hpp"

using namespace ge;

namespace {

/** Brute-force pair enumeration oracle via full BFS from every source. */
std::vector<std::pair<int, int>> all_pairs_in_window(const Graph& g, double lo,
                                                     double hi) {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < g.n; ++u) {
    auto dist = bfs_distances(g, u, -1);
    for (int v = u + 1; v < g.n; ++v)
      if (dist[v] != kInfDist && double(dist[v]) > lo && double(dist[v]) <= hi)
        out.push_back({u, v});
  }
  std::sort(out.begin(), out.end());
  return out;
}

long long linf(const std::vector<int>& a, const std::vector<int>& b) {
  long long best = 0;
  for (size_t k = 0; k < a.size(); ++k)
    best = std::max(best, std::llabs((long long)a[k] - b[k]));
  return best;
}

}  // namespace

TEST_CASE("make_band_partition slices anchor distances") {
  Graph g = generate("path:10");
  Partition p = make_band_partition(g, {0, 5, 0});
  CHECK(p.size() == 2);
  for (int v = 0; v < 5; ++v) CHECK(p.cluster_of[v] == p.cluster_of[0]);
  for (int v = 5; v < 10; ++v) CHECK(p.cluster_of[v] == p.cluster_of[5]);
  CHECK(p.cluster_of[4] != p.cluster_of[5]);

  Partition q = make_band_partition(g, {0, 5, 2});
  CHECK(q.size() == 3);
  CHECK(q.cluster_of[2] != q.cluster_of[3]);
  CHECK(q.cluster_of[7] != q.cluster_of[8]);

  // Vertices unreachable from the anchor fall into per-component clusters.
  Graph two = generate("er-bounded:12,2,3");
  // force disconnection: a path has one component; use two paths via union graph
  Graph paths = make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  Partition r = make_band_partition(paths, {0, 2, 0});
  CHECK(r.cluster_of[3] == r.cluster_of[4]);
  CHECK(r.cluster_of[3] != r.cluster_of[0]);
  (void)two;
}

TEST_CASE("step parameter formulas") {
  StepParams sp;
  sp.r = 2;
  sp.alpha = 1;
  sp.beta = 2;
  sp.gamma = 3;
  sp.eps = 0.5;
  CHECK(sp.window_lo() == doctest::Approx(4.0));
  CHECK(sp.window_hi() == doctest::Approx(8.0));
  CHECK(sp.threshold() == doctest::Approx(std::pow(8.0, 0.5)));
  CHECK(sp.i_max() == 1);  // floor(2^2 / 3)
}

TEST_CASE("dumpling_psi hand example on a path") {
  Graph g = generate("path:10");
  std::vector<Partition> D{make_singleton_partition(g)};
  std::vector<int> half(g.n);
  for (int v = 0; v < g.n; ++v) half[v] = v / 5;
  std::vector<Partition> F{partition_from_assignment(half)};

  // Boundary clusters are {4} and {5}; depth is distance to them; t shaves 1.
  auto psi = dumpling_psi(g, D, F, {{1, 1}});
  std::vector<int> want{3, 2, 1, 0, 0, 0, 0, 1, 2, 3};
  CHECK(psi[0] == want);

  // Full truncation: t at least the depth everywhere.
  auto flat = dumpling_psi(g, D, F, {{10, 10}});
  CHECK(flat[0] == std::vector<int>(g.n, 0));

  // Empty boundary (whole component) gives psi = 0.
  std::vector<Partition> whole{partition_from_assignment(std::vector<int>(g.n, 0))};
  auto zero = dumpling_psi(g, D, F = whole, {{0}});
  CHECK(zero[0] == std::vector<int>(g.n, 0));

  // Refinement violation is rejected.
  std::vector<Partition> coarse_d{whole[0]};
  std::vector<int> sing(g.n);
  for (int v = 0; v < g.n; ++v) sing[v] = v;
  std::vector<Partition> fine_f{partition_from_assignment(sing)};
  CHECK_THROWS(dumpling_psi(g, coarse_d, fine_f, {std::vector<int>(g.n, 0)}));
}

TEST_CASE("dumpling_psi is constant on D-clusters and 1-Lipschitz") {
  Graph g = generate("er-bounded:40,3,11");
  std::vector<int> band(g.n);
  auto dist = bfs_distances(g, 0, -1);
  for (int v = 0; v < g.n; ++v)
    band[v] = dist[v] == kInfDist ? 1000 + g.component_of[v] : dist[v] / 3;
  std::vector<Partition> F{partition_from_assignment(band)};
  std::vector<Partition> D{make_singleton_partition(g)};
  std::vector<std::vector<int>> t{std::vector<int>(F[0].size(), 0)};
  for (size_t q = 0; q < t[0].size(); ++q) t[0][q] = int(q) % 2;
  auto psi = dumpling_psi(g, D, F, t);
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u]) CHECK(std::abs(psi[0][u] - psi[0][v]) <= 1);
}

TEST_CASE("enumerate_pairs matches the brute-force oracle") {
  Graph g = generate("er-bounded:30,3,5");
  auto oracle = all_pairs_in_window(g, 2.0, 5.0);
  auto got = enumerate_pairs(g, 2.0, 5.0, 1.0, 7);
  CHECK(got.pairs == oracle);
  CHECK(got.enumerated == (long long)oracle.size());

  // Sampling keeps a subset and reports the full enumeration count.
  auto sampled = enumerate_pairs(g, 2.0, 5.0, 0.5, 7);
  CHECK(sampled.enumerated == (long long)oracle.size());
  CHECK(sampled.pairs.size() <= oracle.size());
  CHECK(std::includes(oracle.begin(), oracle.end(), sampled.pairs.begin(),
                      sampled.pairs.end()));

  // Empty window.
  auto none = enumerate_pairs(g, 3.0, 3.0, 1.0, 7);
  CHECK(none.pairs.empty());
}

TEST_CASE("dumpling_step with an empty window is vacuous") {
  Graph g = generate("path:20");
  std::vector<Partition> D{make_singleton_partition(g)};
  std::vector<Partition> F{make_band_partition(g, {0, 7, 0})};
  StepParams sp;
  sp.r = 2;
  sp.beta = 10;  // window (1024, ...] beyond the diameter
  sp.gamma = 11;
  auto res = dumpling_step(g, D, F, {}, sp, 1, 0, 1.0);
  CHECK(res.converged);
  CHECK(res.pair_count == 0);
  CHECK(res.t[0] == std::vector<int>(F[0].size(), 0));
  bool noted = false;
  for (const auto& n : res.notes)
    if (n.find("empty pair set") != std::string::npos) noted = true;
  CHECK(noted);
}

TEST_CASE("dumpling_step separates window pairs on a path") {
  Graph g = generate("path:201");
  DeskSchedule desk = make_default_desk(g, 0.5);
  REQUIRE(!desk.phases.empty());
  const DeskStep& step = desk.phases[0];
  std::vector<Partition> F;
  for (const auto& bs : step.bands) F.push_back(make_band_partition(g, bs));
  std::vector<Partition> D(F.size(), make_singleton_partition(g));
  auto res = dumpling_step(g, D, F, {}, step.params, 3, 0, 1.0);
  REQUIRE(res.converged);

  // Oracle recheck of the pair constraints from psi alone.
  const double threshold = step.params.threshold();
  const double need = (1.0 - step.params.eta) * double(F.size()) / 2.0;
  auto pairs = all_pairs_in_window(g, step.params.window_lo(), step.params.window_hi());
  CHECK(!pairs.empty());
  for (auto [u, v] : pairs) {
    double count = 0;
    for (size_t i = 0; i < F.size(); ++i)
      if (std::abs(res.psi[i][u] - res.psi[i][v]) >= threshold - 1e-9) count += 1;
    CHECK(count >= need - 1e-9);
  }
  // psi is a contraction per coordinate.
  for (const auto& layer : res.psi)
    for (int u = 0; u < g.n; ++u)
      for (int v : g.adj[u]) CHECK(std::abs(layer[u] - layer[v]) <= 1);
}

TEST_CASE("realize_cocycle integrates consistent deltas and names bad edges") {
  Graph tri = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {1, 2}};

  auto f = realize_cocycle(tri, edges, {{1}, {2}, {1}}, 1);
  CHECK(f.coords == std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK(f.basepoint == std::vector<int>{0});

  // delta(0,2) = 3 cannot close the triangle with delta(0,1)=1, delta(1,2)=1;
  // the non-tree edge (1,2) is where the inconsistency surfaces.
  try {
    realize_cocycle(tri, edges, {{1}, {3}, {1}}, 1);
    CHECK(false);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("(1, 2)") != std::string::npos);
  }

  // Missing edges are rejected (the cocycle would be underdetermined).
  CHECK_THROWS(realize_cocycle(tri, {{0, 1}, {1, 2}}, {{1}, {1}}, 1));
}

TEST_CASE("cocycle laws hold for realized potentials on random graphs") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    Graph g = generate("er-bounded:25,3," + std::to_string(seed));
    Rng rng(seed);
    std::vector<std::vector<int>> pot(g.n, std::vector<int>(2, 0));
    for (int v = 0; v < g.n; ++v)
      for (int k = 0; k < 2; ++k) pot[v][k] = rng.uniform_int(21) - 10;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> deltas;
    for (int u = 0; u < g.n; ++u)
      for (int v : g.adj[u])
        if (u < v) {
          edges.push_back({u, v});
          deltas.push_back({pot[v][0] - pot[u][0], pot[v][1] - pot[u][1]});
        }
    auto f = realize_cocycle(g, edges, deltas, 2);
    // Identity at the basepoints, and delta(x,y) = f(y)-f(x) recovers the
    // potential differences everywhere (delta(x,x) = 0 and the chain law are
    // then automatic).
    for (int base : f.basepoint) CHECK(f.coords[base] == std::vector<int>{0, 0});
    for (int u = 0; u < g.n; ++u) {
      int cu = g.component_of[u];
      for (int v = 0; v < g.n; ++v) {
        if (g.component_of[v] != cu) continue;
        for (int k = 0; k < 2; ++k)
          CHECK(f.coords[v][k] - f.coords[u][k] == pot[v][k] - pot[u][k]);
      }
    }
  }
}

TEST_CASE("nested_schedule refines and inherits padding") {
  Graph g = generate("path:30");
  // Aligned bands at widths 3 and 9: the nested coarse layer keeps exactly the
  // coarse clusters, and coarse 2r-padding implies nested r-padding.
  Decomposition fine, coarse;
  fine.params.m = coarse.params.m = 1;
  std::vector<int> w3(g.n), w9(g.n);
  for (int v = 0; v < g.n; ++v) {
    w3[v] = v / 3;
    w9[v] = v / 9;
  }
  fine.layers.push_back(partition_from_assignment(w3));
  coarse.layers.push_back(partition_from_assignment(w9));

  auto chain = nested_schedule(g, {fine, coarse});
  REQUIRE(chain.size() == 2);
  CHECK(is_refinement(chain[0].layers[0], chain[1].layers[0]));
  CHECK(chain[0].layers[0].size() == 10);
  CHECK(check_padding_inheritance(g, coarse, chain[1], 1));

  CHECK_THROWS(nested_schedule(g, {fine, Decomposition{}}));
}

TEST_CASE("coarse_embed theory mode reports an honest empty schedule") {
  Graph g = generate("grid:8");
  auto res = coarse_embed(g, 2.0, 0.5, nullptr, 1, 0);
  CHECK(res.report.ok);
  CHECK(res.report.schedule.mode == "theory");
  CHECK(res.report.schedule.m_theory == 5760);  // ceil(1440*2/0.5)
  CHECK(res.report.covered.empty());
  CHECK(res.report.r_emp == doctest::Approx(15.0));  // diameter 14 + 1
  for (const auto& row : res.f.coords)
    for (int c : row) CHECK(c == 0);
}

TEST_CASE("coarse_embed desk mode on a grid patch") {
  Graph g = generate("grid:32");
  DeskSchedule desk = make_default_desk(g, 0.5);
  REQUIRE(!desk.phases.empty());
  auto res = coarse_embed(g, 2.0, 0.5, &desk, 5, 0);
  REQUIRE(res.report.ok);
  CHECK(res.f.dim == int(4 * desk.phases.size()));

  auto rep = verify_embedding(g, res.f, 0.5, res.report.r_emp);
  CHECK(rep.contraction_ok);
  CHECK(rep.max_edge_stretch <= 1);
  CHECK(rep.min_far_ratio >= 1.0);

  // Byte-identical reports under a fixed seed.
  auto res2 = coarse_embed(g, 2.0, 0.5, &desk, 5, 0);
  CHECK(res.report.to_json() == res2.report.to_json());
  CHECK(res.f.to_tsv() == res2.f.to_tsv());
}

TEST_CASE("make_default_desk drops unresolvable phases") {
  // Trees with symmetric branches cannot be resolved by two anchor distances;
  // the schedule is empty and the embedding falls back to r_emp = diam + 1.
  Graph t = generate("tree:6,2");
  DeskSchedule desk = make_default_desk(t, 0.5);
  CHECK(desk.phases.empty());

  // Tiny graphs are below the minimum window.
  CHECK(make_default_desk(generate("path:5"), 0.5).phases.empty());

  // Paths and cycles resolve at least one phase.
  CHECK(!make_default_desk(generate("path:201"), 0.5).phases.empty());
  CHECK(!make_default_desk(generate("cycle:300"), 0.5).phases.empty());
}

TEST_CASE("injective_embed yields collision-free bounded coordinates") {
  Graph g = generate("path:40");
  DeskSchedule desk = make_default_desk(g, 0.5);
  auto res = injective_embed(g, 1.0, 0.5, 1, &desk, 2, 0);
  REQUIRE(res.report.ok);
  auto rep = verify_embedding(g, res.f, 0.5, res.report.r_emp);
  CHECK(rep.injective);
  CHECK(rep.contraction_ok);

  // The augmentation never moves a pair farther than max(dist, s).
  for (int u = 0; u < g.n; ++u) {
    auto dist = bfs_distances(g, u, -1);
    for (int v = u + 1; v < g.n; ++v)
      CHECK(linf(res.f.coords[u], res.f.coords[v]) <=
            std::max<long long>(dist[v], 1));
  }
}

TEST_CASE("verify_embedding on degenerate and identity embeddings") {
  Graph k2 = generate("path:2");
  GridEmbedding zero;
  zero.dim = 1;
  zero.coords = {{0}, {0}};
  auto rep = verify_embedding(k2, zero, 0.5, 1.0);
  CHECK(rep.contraction_ok);
  CHECK(rep.max_edge_stretch == 0);
  CHECK(!rep.injective);
  CHECK(rep.min_far_ratio == doctest::Approx(0.0));
  CHECK(rep.worst_pair == std::pair<int, int>{0, 1});

  Graph path = generate("path:30");
  GridEmbedding ident;
  ident.dim = 1;
  for (int v = 0; v < path.n; ++v) ident.coords.push_back({v});
  auto rep2 = verify_embedding(path, ident, 0.5, 4.0);
  CHECK(rep2.contraction_ok);
  CHECK(rep2.max_edge_stretch == 1);
  CHECK(rep2.injective);
  // ratio d / d^{1-eps} = d^eps, minimized at the smallest admitted distance.
  CHECK(rep2.min_far_ratio == doctest::Approx(2.0));  // 4^0.5

  // No admissible far pair.
  auto rep3 = verify_embedding(path, ident, 0.5, 1000.0);
  CHECK(rep3.min_far_ratio == kNoFarPairs);
  CHECK(rep3.pairs_checked == 0);
}
