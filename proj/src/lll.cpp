#include "lll.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ge {

long long default_budget(const ConstraintSystem& cs) {
  return 1000LL * (cs.num_vars + cs.num_constraints);
}

namespace {

/** var -> constraints CSR index, built once from domain_of. */
struct VarIndex {
  std::vector<int> offsets;
  std::vector<int> cons;

  explicit VarIndex(const ConstraintSystem& cs) {
    std::vector<int> counts(cs.num_vars, 0);
    std::vector<int> dom;
    for (int c = 0; c < cs.num_constraints; ++c) {
      dom.clear();
      cs.domain_of(c, dom);
      for (int v : dom) counts[v]++;
    }
    offsets.assign(cs.num_vars + 1, 0);
    for (int v = 0; v < cs.num_vars; ++v) offsets[v + 1] = offsets[v] + counts[v];
    cons.assign(offsets.back(), 0);
    std::vector<int> fill = offsets;
    for (int c = 0; c < cs.num_constraints; ++c) {
      dom.clear();
      cs.domain_of(c, dom);
      for (int v : dom) cons[fill[v]++] = c;
    }
  }
};

}  // namespace

SolveResult mt_solve(const ConstraintSystem& cs, Rng& rng, long long budget) {
  SolveResult res;
  res.stats.budget = budget > 0 ? budget : default_budget(cs);
  res.assignment.assign(cs.num_vars, 0);
  for (int v = 0; v < cs.num_vars; ++v) res.assignment[v] = cs.sample(v, rng);

  std::function<void(int, std::vector<int>&)> dependents = cs.dependents_of;
  std::unique_ptr<VarIndex> index;
  if (!dependents) {
    index = std::make_unique<VarIndex>(cs);
    VarIndex* idx = index.get();
    const ConstraintSystem* pcs = &cs;
    dependents = [idx, pcs](int c, std::vector<int>& out) {
      std::vector<int> dom;
      pcs->domain_of(c, dom);
      for (int v : dom)
        for (int i = idx->offsets[v]; i < idx->offsets[v + 1]; ++i)
          out.push_back(idx->cons[i]);
    };
  }

  std::set<int> violated;
  for (int c = 0; c < cs.num_constraints; ++c)
    if (cs.violated(c, res.assignment)) violated.insert(c);

  // GRIDEMBED_TRACE=k prints solver progress to stderr every k resamples.
  long long trace = 0;
  if (const char* env = std::getenv("GRIDEMBED_TRACE")) trace = std::atoll(env);

  std::vector<int> dom, deps;
  std::vector<char> seen(cs.num_constraints, 0);
  while (!violated.empty() && res.stats.resample_count < res.stats.budget) {
    int c = *violated.begin();
    if (trace > 0 && res.stats.resample_count % trace == 0)
      std::fprintf(stderr, "mt_solve: resamples=%lld violated=%zu head=%d\n",
                   res.stats.resample_count, violated.size(), c);
    ++res.stats.resample_count;
    dom.clear();
    cs.domain_of(c, dom);
    for (int v : dom) res.assignment[v] = cs.sample(v, rng);
    deps.clear();
    dependents(c, deps);
    for (int d : deps) {
      if (seen[d]) continue;
      seen[d] = 1;
      if (cs.violated(d, res.assignment))
        violated.insert(d);
      else
        violated.erase(d);
    }
    for (int d : deps) seen[d] = 0;
  }

  // Final full pass: never trust the incremental bookkeeping.
  res.stats.converged = true;
  for (int c = 0; c < cs.num_constraints; ++c) {
    if (cs.violated(c, res.assignment)) {
      res.stats.converged = false;
      break;
    }
  }
  return res;
}

LllEstimate estimate_lll_params(const ConstraintSystem& cs,
                                std::optional<double> analytic_p,
                                Rng* mc_rng, long long mc_samples) {
  LllEstimate est;
  VarIndex index(cs);
  std::vector<int> dom;
  std::vector<char> seen(cs.num_constraints, 0);
  std::vector<int> touched;
  for (int c = 0; c < cs.num_constraints; ++c) {
    dom.clear();
    cs.domain_of(c, dom);
    long long deg = 0;
    for (int v : dom) {
      for (int i = index.offsets[v]; i < index.offsets[v + 1]; ++i) {
        int d = index.cons[i];
        if (d == c || seen[d]) continue;
        seen[d] = 1;
        touched.push_back(d);
        ++deg;
      }
    }
    for (int d : touched) seen[d] = 0;
    touched.clear();
    est.d_bound = std::max(est.d_bound, deg);
  }

  if (analytic_p.has_value()) {
    est.p_bound = *analytic_p;
  } else if (mc_rng && mc_samples > 0 && cs.num_constraints > 0) {
    est.mc_samples = mc_samples;
    std::vector<long long> hits(cs.num_constraints, 0);
    std::vector<int> assignment(cs.num_vars);
    for (long long s = 0; s < mc_samples; ++s) {
      for (int v = 0; v < cs.num_vars; ++v) assignment[v] = cs.sample(v, *mc_rng);
      for (int c = 0; c < cs.num_constraints; ++c)
        if (cs.violated(c, assignment)) hits[c]++;
    }
    long long worst = 0;
    for (long long h : hits) worst = std::max(worst, h);
    est.p_bound = double(worst) / double(mc_samples);
  } else {
    est.p_bound = 0.0;
  }
  est.lll_condition_met =
      std::exp(1.0) * est.p_bound * double(est.d_bound + 1) < 1.0;
  return est;
}

std::string SolveStats::to_json() const {
  std::ostringstream o;
  o.precision(17);
  o << "{\"resample_count\":" << resample_count
    << ",\"converged\":" << (converged ? "true" : "false")
    << ",\"budget\":" << budget << ",\"p_bound\":" << p_bound
    << ",\"d_bound\":" << d_bound
    << ",\"lll_condition_met\":" << (lll_condition_met ? "true" : "false") << "}";
  return o.str();
}

}  // namespace ge
