#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace ge {

/** Truncated geometric distribution on {0, ..., M}:
 *  pmf(n) = p(1-p)^n for n < M, pmf(M) = (1-p)^M. */
struct TGeoParams {
  double p;
  int M;
};

double tgeo_pmf(const TGeoParams& params, int n);

/** Tail P[t >= n] = (1-p)^n for 0 <= n <= M. */
double tgeo_tail(const TGeoParams& params, int n);

/** Inverse-CDF sample from a uniform real (CDF(n) = 1-(1-p)^{n+1} for n < M). */
int tgeo_sample(const TGeoParams& params, Rng& rng);

/** Input to the ball-carving sweep. color_classes must partition V(G) and each
 *  class must be 2M-separated; t(v) in {0..M}. */
struct CarvingInput {
  const Graph* g;
  int M;
  const std::vector<std::vector<int>>* color_classes;
  const std::vector<int>* t;
};

/** Greedy coloring of G^{2M}, classes ordered by color index. Each class is
 *  2M-separated by properness of the coloring. The greedy scan runs in vertex
 *  order rotated to begin at `start`; different starts give differently placed
 *  (still proper) colorings, which decorrelates the layers of a multi-layer
 *  carve. */
std::vector<std::vector<int>> make_color_classes(const Graph& g, int M,
                                                 int start = 0);

struct CarveResult {
  Partition part;
  std::vector<int> center_of_cluster;  // generating center of each cluster
};

/** The carving sweep: class I_0 carves the balls B(x, t(x)); each later class
 *  carves the residuals of its balls. Every vertex is covered (it is a center
 *  of its own class); this is asserted. Clusters have diameter <= 2M. */
CarveResult carve(const CarvingInput& input);

/** True iff ball(g, v, r) meets at least two clusters of p. */
bool is_ball_cut(const Graph& g, const Partition& p, int v, int r);

struct CutRateReport {
  std::string graph_name;
  int n = 0;
  double b = 0;
  double p = 0;
  int M = 0;
  int r = 0;
  int trials = 0;
  uint64_t seed = 0;
  double empirical_cut_fraction = 0;
  double bound_20rp = 0;
  bool preconditions_met = false;
  bool precond_p = false;          // p <= 1/(5b)
  bool precond_r = false;          // r >= 9
  bool precond_growth = false;     // gamma(rho) <= rho^b over the sampled range
  int growth_check_rmax = 0;
  long long full_ball_pairs = 0;   // (vertex, trial) pairs whose r-ball has the max size seen
  double full_ball_cut_fraction = 0;  // cut fraction restricted to those (patch-boundary note)
  std::string to_json() const;
};

/** Carves `trials` partitions with iid tGeo radii (per-trial, per-vertex
 *  streams derived from seed) and measures the fraction of (vertex, trial)
 *  pairs whose r-ball is cut, against the 20rp bound. M < 0 selects
 *  auto M = floor(4 b log(1/p) / p). Never aborts on failed preconditions;
 *  it reports them. */
CutRateReport cut_rate_experiment(const Graph& g, double b, double p, int M, int r,
                                  int trials, uint64_t seed, int growth_check_rmax,
                                  const std::string& graph_name = "");

/** auto-M formula, natural log. */
int auto_M(double b, double p);

}  // namespace ge
