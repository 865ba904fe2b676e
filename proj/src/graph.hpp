#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ge {

/** Explicit "unreachable / infinite distance" sentinel. Distances are BFS hop
 *  counts; infinity is never represented by a large finite number. */
constexpr int kInfDist = -1;

/** Immutable finite simple graph. Vertex ids are 0..n-1, adjacency lists are
 *  strictly sorted, symmetric and loop-free. Components are discovered at
 *  construction and listed in increasing min-vertex-id order. */
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> component_of;
  std::vector<std::vector<int>> components;

  int max_degree() const {
    int d = 0;
    for (const auto& a : adj)
      if (int(a.size()) > d) d = int(a.size());
    return d;
  }
  long long edge_count() const {
    long long m = 0;
    for (const auto& a : adj) m += (long long)a.size();
    return m / 2;
  }
};

/** Builds a graph from an edge list. Duplicate edges are collapsed; loops are
 *  rejected. Endpoints must be in [0, n). */
Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

/** Parses edge-list text: optional header "n <count>", body lines "u v",
 *  '#' comments, blank lines allowed, LF or CRLF. Throws std::runtime_error
 *  with a line number on malformed input or loop edges. */
Graph load_graph(const std::string& text);

/** Reusable BFS buffers; dist uses kInfDist for unvisited vertices and is
 *  valid only for the entries listed in `order` after a call. */
struct BfsScratch {
  std::vector<int> dist;
  std::vector<int> order;  // visited vertices in BFS order
  std::vector<int> queue;

  void reset(int n) {
    if (int(dist.size()) != n) dist.assign(n, kInfDist);
    for (int v : order) dist[v] = kInfDist;
    order.clear();
    queue.clear();
  }
};

/** Exact dist_G(source, v) for all v with dist <= radius; radius < 0 means
 *  unbounded. Vertices beyond the radius or in other components keep the
 *  kInfDist sentinel in scratch.dist. */
void bounded_bfs(const Graph& g, int source, int radius, BfsScratch& scratch);

/** Convenience wrapper: full distance vector with kInfDist sentinels. */
std::vector<int> bfs_distances(const Graph& g, int source, int radius);

/** dist_G(v, sources) for every v within `radius` (radius < 0 unbounded);
 *  kInfDist elsewhere. Duplicate sources are allowed. */
std::vector<int> multi_source_bfs(const Graph& g, const std::vector<int>& sources,
                                  int radius);

/** Closed ball { u : dist_G(v, u) <= r }, sorted by vertex id. */
std::vector<int> ball(const Graph& g, int v, int r);

struct GrowthProfile {
  std::vector<long long> gamma;  // gamma[r] = max ball size, r = 0..r_max
  std::vector<double> rho;       // rho[r] = log gamma(r) / log(r+1), r >= 1 (rho[0] unused)
  double er_bound = 0.0;         // max of rho over the sampled range
  double b = 0.0;                // user-asserted growth exponent (optional)
  double r0 = 0.0;               // radius from which the (b, r0)-bound is asserted
};

/** gamma(r) = max over v of |ball(g, v, r)| for 0 <= r <= r_max. Throws on an
 *  empty graph. */
GrowthProfile growth_profile(const Graph& g, int r_max);

struct BR0Check {
  bool ok = true;
  int first_violation = -1;  // smallest sampled r >= r0 with gamma(r) > r^b
};

/** Checks gamma(r) <= r^b for every sampled integer r >= r0. */
BR0Check check_b_r0(const GrowthProfile& profile, double b, double r0);

/** Partition of V(G) into nonempty clusters. Cluster ids are contiguous and
 *  assigned in order of each cluster's smallest vertex id. Diameters (in the
 *  whole-graph metric dist_G) are cached on demand via ensure_diams. */
struct Partition {
  std::vector<int> cluster_of;
  std::vector<std::vector<int>> clusters;
  std::vector<int> diam;  // empty until ensure_diams

  int size() const { return int(clusters.size()); }
  void ensure_diams(const Graph& g);
};

/** Builds a Partition from a raw vertex -> label assignment (labels need not
 *  be contiguous; they are compacted by smallest member id). */
Partition partition_from_assignment(const std::vector<int>& labels);

/** Quotient graph G/P: one vertex per cluster, adjacent when some G-edge
 *  crosses the two clusters. Cluster id c maps to quotient vertex c. */
Graph quotient_graph(const Graph& g, const Partition& p);

/** Greedy proper coloring: vertices in increasing id order, smallest color
 *  unused by already-colored neighbors. Uses at most max_degree + 1 colors. */
std::vector<int> greedy_proper_coloring(const Graph& g);

/** Colors of greedy_proper_coloring(power_graph(g, r)) computed without
 *  materializing the power graph (per-vertex bounded BFS instead). */
std::vector<int> greedy_power_coloring(const Graph& g, int r);

/** Power graph G^r: same vertices, u ~ v iff 1 <= dist_G(u, v) <= r. */
Graph power_graph(const Graph& g, int r);

}  // namespace ge
