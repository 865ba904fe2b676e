#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"

namespace ge {

/** Constraint satisfaction problem in the Moser-Tardos framework. Stored
 *  callback-style so that large systems (millions of constraints) do not pay
 *  per-constraint allocation: the owner provides domain and violation
 *  callbacks indexed by constraint id. Callbacks must be pure functions of the
 *  referenced variables' values. */
struct ConstraintSystem {
  int num_vars = 0;
  /** Samples an initial/resampled value for a variable. */
  std::function<int(int var, Rng&)> sample;
  int num_constraints = 0;
  /** Appends the variable ids of constraint c (its domain) to out. */
  std::function<void(int c, std::vector<int>& out)> domain_of;
  /** True iff constraint c is violated under the assignment. */
  std::function<bool(int c, const std::vector<int>& assignment)> violated;
  /** Optional: appends ids of all constraints sharing a variable with c
   *  (including c itself is allowed). When absent the solver derives the
   *  dependency map from domain_of. */
  std::function<void(int c, std::vector<int>& out)> dependents_of;
};

struct SolveStats {
  long long resample_count = 0;
  bool converged = false;
  long long budget = 0;
  double p_bound = -1.0;  // filled by estimate_lll_params when requested
  long long d_bound = -1;
  bool lll_condition_met = false;
  std::string to_json() const;
};

struct SolveResult {
  std::vector<int> assignment;
  SolveStats stats;
};

/** Default budget: 1000 * (#variables + #constraints). */
long long default_budget(const ConstraintSystem& cs);

/** Moser-Tardos resampling: initialize every variable from its sampler, then
 *  repeatedly resample the violated constraint with the smallest index until
 *  none are violated or the budget is exhausted. Violation checking is
 *  incremental (only constraints touching resampled variables are rechecked)
 *  with a mandatory full final verification pass. Deterministic for a fixed
 *  rng seed. */
SolveResult mt_solve(const ConstraintSystem& cs, Rng& rng, long long budget = 0);

struct LllEstimate {
  double p_bound = 0.0;
  long long d_bound = 0;
  bool lll_condition_met = false;
  long long mc_samples = 0;  // 0 when p_bound is analytic
};

/** d_bound is computed exactly from shared-variable adjacency. p_bound is the
 *  supplied analytic bound when present, otherwise a Monte Carlo estimate of
 *  sup_A P[A] over mc_samples iid assignments. */
LllEstimate estimate_lll_params(const ConstraintSystem& cs,
                                std::optional<double> analytic_p,
                                Rng* mc_rng = nullptr, long long mc_samples = 0);

}  // namespace ge
