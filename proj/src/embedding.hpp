#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "decomposition.hpp"
#include "graph.hpp"
#include "lll.hpp"

namespace ge {

/** Distance-level bands from an anchor vertex: cluster of v is
 *  floor((dist(anchor, v) + offset) / width). Level sets of a BFS distance
 *  are 1-Lipschitz, so bands are genuine partitions whose boundary distance
 *  behaves like a sawtooth of the anchor distance. Vertices unreachable from
 *  the anchor get one cluster per component. */
struct BandSpec {
  int anchor = 0;
  int width = 1;
  int offset = 0;
};

Partition make_band_partition(const Graph& g, const BandSpec& spec);
Partition make_singleton_partition(const Graph& g);

/** Per-step parameters. Window = (r^beta, r^gamma]; separation threshold
 *  T = r^{gamma(1-eps)}; radius domain I = {0..floor(r^{beta/alpha}/(r+1))};
 *  a pair needs at least (1-eta)m/2 separated coordinates. */
struct StepParams {
  double r = 2;
  double alpha = 1;
  double beta = 2;
  double gamma = 3;
  double eps = 0.5;
  double eta = 0.5;

  double window_lo() const;  // r^beta
  double window_hi() const;  // r^gamma
  double threshold() const;  // r^{gamma(1-eps)}
  int i_max() const;         // floor(r^{beta/alpha}/(r+1))
};

/** One phase of a desk schedule: a (D, F) pair at one scale plus step
 *  parameters. D is always the singleton partition; F comes from band specs
 *  (one layer per spec) or from a carving override. */
struct DeskStep {
  std::vector<BandSpec> bands;      // non-empty: band mode
  BuildOverride carve;              // band list empty: carve mode
  int carve_r = 1;
  StepParams params;
};

struct DeskSchedule {
  std::vector<DeskStep> phases;
};

/** Theory-derived schedule constants, always reported. */
struct EmbeddingSchedule {
  double b = 1.0;
  double eps = 0.5;
  double alpha = 0.0;     // 1 + eps/12
  double beta = 0.0;      // 12/eps
  double gamma = 0.0;     // alpha*beta
  int m_theory = 0;       // ceil(1440 b / eps)
  int ell_theory = 0;     // ceil(2 log beta / log alpha)
  double x0 = 2.0;
  std::string mode;       // "theory" | "desk"
};

struct GridEmbedding {
  int dim = 0;
  std::vector<std::vector<int>> coords;  // one row per vertex
  std::vector<int> basepoint;            // per component
  std::string to_tsv() const;
};

/** psi[i][v] = max(0, dist_{G_i}([v]_{P_i}, boundary of [v]'s Q_i-cluster)
 *  - t[i][q]), computed in the quotient G_i = G/P_i. Clusters whose Q-cluster
 *  has no boundary get psi = 0. Throws on refinement violation. */
std::vector<std::vector<int>> dumpling_psi(const Graph& g,
                                           const std::vector<Partition>& D,
                                           const std::vector<Partition>& F,
                                           const std::vector<std::vector<int>>& t);

struct PairList {
  std::vector<std::pair<int, int>> pairs;  // u < v, lexicographic
  double sample_rate = 1.0;
  long long enumerated = 0;  // pairs seen before sampling
};

/** All pairs u < v with lo < dist_G(u,v) <= hi by bounded BFS from every
 *  source; rate < 1 keeps each pair independently with that probability
 *  (documented sample). */
PairList enumerate_pairs(const Graph& g, double lo, double hi, double rate,
                         uint64_t seed);

struct StepResult {
  std::vector<std::vector<int>> psi;  // m x n
  std::vector<std::vector<int>> t;    // chosen radii per layer cluster
  SolveStats stats;
  bool converged = false;
  long long pair_count = 0;
  double sample_rate = 1.0;
  std::vector<std::string> notes;
};

/** One dumpling step: variables = one t per F-cluster, uniform on I;
 *  constraint per enumerated pair (lexicographic order), violated when fewer
 *  than (1-eta)m/2 coordinates reach the threshold; mt_solve; psi at the
 *  solution. Empty pair set returns t = 0 with a note. */
StepResult dumpling_step(const Graph& g, const std::vector<Partition>& D,
                         const std::vector<Partition>& F,
                         const std::vector<std::vector<int>>& phi,
                         const StepParams& params, uint64_t seed,
                         long long budget, double pair_sample_rate);

/** Nested chain E_0 = raw[0], E_{k+1} = nest(E_k, raw[k+1]) layer-wise.
 *  E_k is refined by E_{k-1} by construction. All raws need equal m. */
std::vector<Decomposition> nested_schedule(const Graph& g,
                                           const std::vector<Decomposition>& raw);

/** Padding inheritance: for every vertex v and layer i, if B(v, 2r) lies in
 *  one cluster of coarse_raw's layer i then B(v, r) lies in one cluster of
 *  nested's layer i. */
bool check_padding_inheritance(const Graph& g, const Decomposition& coarse_raw,
                               const Decomposition& nested, int r);

struct EmbedReport {
  bool ok = false;
  double r_emp = 0.0;  // far-pair claims hold for dist >= r_emp
  std::vector<std::pair<double, double>> covered;  // merged (lo, hi] intervals
  EmbeddingSchedule schedule;
  std::vector<SolveStats> step_stats;
  std::vector<std::string> notes;
  std::string to_json() const;
};

struct EmbedResult {
  GridEmbedding f;
  EmbedReport report;
};

/** Theory mode (desk == nullptr): exact schedule formulas with truncation at
 *  the graph diameter; on finite desk-scale graphs the scale list is usually
 *  empty and the report says so. Desk mode: one dumpling step per phase over
 *  the supplied (D = singletons, F) pairs; coordinates of distinct phases are
 *  concatenated; realization by basepoint integration. Exact contraction is
 *  asserted per edge and coordinate. */
EmbedResult coarse_embed(const Graph& g, double b, double eps,
                         const DeskSchedule* desk, uint64_t seed,
                         long long budget, double pair_sample_rate = 1.0);

/** Default desk schedule derived from the largest component: two phases of
 *  anchor-distance bands (two anchor directions x two single-cut splits = 4
 *  layers each); phases whose window cannot fit the threshold, or whose
 *  window pairs the anchor distances fail to resolve, are dropped. */
DeskSchedule make_default_desk(const Graph& g, double eps);

/** Basepoint integration of per-edge deltas (orientation u < v) along a BFS
 *  tree per component; every non-tree edge is checked for consistency and an
 *  inconsistent edge is reported by name. */
GridEmbedding realize_cocycle(const Graph& g,
                              const std::vector<std::pair<int, int>>& edges,
                              const std::vector<std::vector<int>>& edge_deltas,
                              int dim);

/** Coarse embedding plus an injective color augmentation: greedy coloring of
 *  G^R (R = max(r_emp, 1)), colors encoded as k base-(s+1) digits with
 *  k = ceil(log(colors)/log(s+1)) (theory k reported), appended as extra
 *  cocycle coordinates. Components are separated by deterministic offsets on
 *  coordinate 0. */
EmbedResult injective_embed(const Graph& g, double b, double eps, int s,
                            const DeskSchedule* desk, uint64_t seed,
                            long long budget, double pair_sample_rate = 1.0);

struct DistortionReport {
  int max_edge_stretch = 0;
  bool contraction_ok = false;
  double min_far_ratio = 0.0;  // kNoFarPairs when no pair qualifies
  std::pair<int, int> worst_pair{-1, -1};
  bool injective = false;
  int dim = 0;
  long long pairs_checked = 0;
  double sample_rate = 1.0;
  std::string to_json() const;
};

constexpr double kNoFarPairs = 1e18;

/** Exhaustive (or sampled, documented) recomputation from definitions:
 *  stretch over all edges, min ||f(u)-f(v)||_inf / dist^{1-eps} over
 *  intra-component pairs with dist >= r_emp, injectivity by exact coordinate
 *  comparison. */
DistortionReport verify_embedding(const Graph& g, const GridEmbedding& f,
                                  double eps, double r_emp,
                                  double sample_rate = 1.0, uint64_t seed = 0);

}  // namespace ge
