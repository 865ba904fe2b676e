#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"
#include "lll.hpp"

namespace ge {

struct DecompositionParams {
  int r = 1;            // padding radius
  double alpha = 2.0;   // boundedness exponent: clusters r^alpha-bounded
  double eta = -1.0;    // strength (1-eta); negative = absent
  int m = 1;            // layer count
  double b = 1.0;       // growth exponent used to derive p, M
  double p = 0.0;       // carving parameters
  int M = 0;
  bool theory_mode = false;
  std::string mode_name;  // "theory-I", "theory-II", "override", ...
};

struct Decomposition {
  std::vector<Partition> layers;
  DecompositionParams params;
  std::string to_json() const;
};

/** m families of vertex sets; each family r_disjoint-separated and
 *  D_bounded; the union of all families covers V. */
struct Cover {
  std::vector<std::vector<std::vector<int>>> layers;
  int r_disjoint = 0;
  double D_bounded = 0.0;
};

/** Expands each set C of a (2r, D)-cover to B_G(C, r); leftover vertices
 *  become singletons. Requires r^alpha >= D + 2r (checked; throws otherwise).
 *  Expansion preserves disjointness by the 2r-separation of the cover. */
Decomposition padded_from_cover(const Graph& g, const Cover& c, int r, double alpha);

struct CoverFromPaddedResult {
  Cover cover;
  bool covers_all = false;
  std::vector<int> uncovered;
};

/** Shrinks every cluster C to C minus the balls B(x, s) around its boundary
 *  vertices x. A source padded at radius s+1 yields a (2s, D)-cover family;
 *  we record r_disjoint = 2s. Coverage is verified, not assumed. */
CoverFromPaddedResult cover_from_padded(const Graph& g, const Decomposition& d, int s);

enum class BuildMode { TheoryI, TheoryII, Override };

struct BuildOverride {
  int m = 1;
  double p = 0.1;
  int M = 1;
  double alpha = 2.0;
};

struct BuildResult {
  Decomposition dec;
  SolveStats stats;
  bool converged = false;
  std::vector<std::string> notes;  // theory-threshold reports, never enforced
};

/** The carving CSP: m independent tGeo(p, M) radii per vertex; the constraint
 *  of vertex u (domain: the radii of B(u, M+r)) is violated iff B(u, r) is cut
 *  in all m carved partitions. Solved by mt_solve, then each layer is carved
 *  from its radius coordinate. */
BuildResult build_padded(const Graph& g, double b, double eps, int r, BuildMode mode,
                         const BuildOverride* ov, uint64_t seed, long long budget);

struct PaddedReport {
  bool bounded_ok = false;
  int max_diam = 0;
  double size_bound = 0.0;  // r^alpha
  std::vector<int> padded_layers;  // per vertex
  int min_padded_layers = 0;
  double strong_eta_achieved = 1.0;  // 1 - min_padded/m
  std::vector<long long> histogram;  // padded-layer counts
  std::string to_json() const;
};

/** Recomputes diameters and padding counts from definitions only. */
PaddedReport verify_padded(const Graph& g, const Decomposition& d);

struct StrengthenResult {
  Decomposition dec;
  bool cover_ok = false;
  std::vector<std::string> notes;
};

/** Strengthening: N = ceil(m/eta) - 1; build a cover from the source by
 *  boundary shrinking; U_j = union of family j; H = G^{2r};
 *  S_i = union over j of { v : dist_H(v, U_j) = i }; F_i = components of
 *  H minus S_i, expanded by r in G (leftovers singletons). Every vertex lies
 *  in at least (N+1) - m of the F_i families. */
StrengthenResult strengthen(const Graph& g, const Decomposition& source, int r, double eta);

/** Layer-wise refinement check: every cluster of fine inside one of coarse. */
bool is_refinement(const Partition& fine, const Partition& coarse);

/** One layer of the nesting construction: each coarse cluster C is replaced
 *  by C' = { x in C : fine cluster of x inside C }; leftover vertices keep
 *  their fine clusters. The result is refined by `fine`. */
Partition nest_partition(const Partition& fine, const Partition& coarse);

/** Theory parameter formulas. */
int theory_m_I(double b);
int theory_m_II(double b, double eps);
double theory_alpha_I(double b, double eps);
double theory_p(double b, double alpha, int r);

}  // namespace ge
