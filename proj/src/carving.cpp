#include "carving.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ge {

double tgeo_pmf(const TGeoParams& params, int n) {
  if (n < 0 || n > params.M) throw std::runtime_error("tgeo_pmf: n out of range");
  if (n == params.M) return std::pow(1.0 - params.p, params.M);
  return params.p * std::pow(1.0 - params.p, n);
}

double tgeo_tail(const TGeoParams& params, int n) {
  if (n < 0 || n > params.M) throw std::runtime_error("tgeo_tail: n out of range");
  return std::pow(1.0 - params.p, n);
}

int tgeo_sample(const TGeoParams& params, Rng& rng) {
  if (params.M == 0) return 0;
  double u = rng.u01();
  // Smallest n with u < CDF(n) = 1-(1-p)^{n+1}, clamped to M.
  double q = std::log1p(-u) / std::log1p(-params.p);
  int n = int(std::ceil(q)) - 1;
  if (n < 0) n = 0;
  if (n > params.M) n = params.M;
  return n;
}

std::vector<std::vector<int>> make_color_classes(const Graph& g, int M,
                                                 int start) {
  if (M < 1) throw std::runtime_error("make_color_classes: M must be >= 1");
  if (g.n == 0) return {};
  start = ((start % g.n) + g.n) % g.n;
  std::vector<int> color(g.n, -1);
  BfsScratch s;
  std::vector<char> used;
  int k = 0;
  for (int step = 0; step < g.n; ++step) {
    int v = start + step;
    if (v >= g.n) v -= g.n;
    used.assign(k + 1, 0);
    bounded_bfs(g, v, 2 * M, s);
    for (int w : s.order)
      if (color[w] >= 0) used[color[w]] = 1;
    int c = 0;
    while (used[c]) ++c;
    color[v] = c;
    k = std::max(k, c + 1);
  }
  std::vector<std::vector<int>> classes(k);
  for (int v = 0; v < g.n; ++v) classes[color[v]].push_back(v);
  return classes;
}

CarveResult carve(const CarvingInput& input) {
  const Graph& g = *input.g;
  const auto& classes = *input.color_classes;
  const auto& t = *input.t;
  if (int(t.size()) != g.n) throw std::runtime_error("carve: t size mismatch");
  std::vector<int> owner(g.n, -1);  // generating center, assigned class by class
  BfsScratch s;
  for (const auto& cls : classes) {
    // Balls within one class are disjoint (2M-separated centers, radii <= M),
    // so the scan order inside a class does not matter.
    for (int x : cls) {
      if (t[x] < 0 || t[x] > input.M) throw std::runtime_error("carve: t out of {0..M}");
      bounded_bfs(g, x, t[x], s);
      for (int w : s.order)
        if (owner[w] == -1) owner[w] = x;
    }
  }
  for (int v = 0; v < g.n; ++v)
    if (owner[v] == -1) throw std::runtime_error("carve: vertex left uncovered");
  CarveResult res;
  res.part = partition_from_assignment(owner);
  res.center_of_cluster.assign(res.part.size(), -1);
  for (int v = 0; v < g.n; ++v) res.center_of_cluster[res.part.cluster_of[v]] = owner[v];
  return res;
}

bool is_ball_cut(const Graph& g, const Partition& p, int v, int r) {
  if (r < 0) throw std::runtime_error("is_ball_cut: negative radius");
  if (r == 0) return false;
  BfsScratch s;
  bounded_bfs(g, v, r, s);
  int c = p.cluster_of[v];
  for (int w : s.order)
    if (p.cluster_of[w] != c) return true;
  return false;
}

int auto_M(double b, double p) {
  return int(std::floor(4.0 * b * std::log(1.0 / p) / p));
}

CutRateReport cut_rate_experiment(const Graph& g, double b, double p, int M, int r,
                                  int trials, uint64_t seed, int growth_check_rmax,
                                  const std::string& graph_name) {
  if (trials < 1) throw std::runtime_error("cut_rate_experiment: trials must be >= 1");
  CutRateReport rep;
  rep.graph_name = graph_name;
  rep.n = g.n;
  rep.b = b;
  rep.p = p;
  rep.M = M < 0 ? auto_M(b, p) : M;
  rep.r = r;
  rep.trials = trials;
  rep.seed = seed;
  rep.bound_20rp = 20.0 * r * p;
  rep.growth_check_rmax = growth_check_rmax;

  rep.precond_p = p <= 1.0 / (5.0 * b);
  rep.precond_r = r >= 9;
  {
    GrowthProfile prof = growth_profile(g, std::max(1, growth_check_rmax));
    rep.precond_growth = check_b_r0(prof, b, double(r)).ok;
  }
  rep.preconditions_met = rep.precond_p && rep.precond_r && rep.precond_growth;

  auto classes = make_color_classes(g, rep.M);
  TGeoParams tg{p, rep.M};

  // Full-size r-balls (patch interior): track the max ball size seen.
  std::vector<int> ball_size(g.n, 0);
  {
    BfsScratch s;
    for (int v = 0; v < g.n; ++v) {
      bounded_bfs(g, v, r, s);
      ball_size[v] = int(s.order.size());
    }
  }
  int max_ball = 0;
  for (int v = 0; v < g.n; ++v) max_ball = std::max(max_ball, ball_size[v]);

  long long cut = 0, total = 0, full_cut = 0, full_total = 0;
  std::vector<int> t(g.n);
  BfsScratch s;
  for (int trial = 0; trial < trials; ++trial) {
    uint64_t trial_seed = mix(seed, uint64_t(trial));
    for (int v = 0; v < g.n; ++v) {
      Rng rv(mix(trial_seed, uint64_t(v)));
      t[v] = tgeo_sample(tg, rv);
    }
    CarvingInput in{&g, rep.M, &classes, &t};
    CarveResult cr = carve(in);
    for (int v = 0; v < g.n; ++v) {
      bool c;
      if (r == 0) {
        c = false;
      } else {
        bounded_bfs(g, v, r, s);
        c = false;
        int cl = cr.part.cluster_of[v];
        for (int w : s.order)
          if (cr.part.cluster_of[w] != cl) { c = true; break; }
      }
      ++total;
      cut += c;
      if (ball_size[v] == max_ball) {
        ++full_total;
        full_cut += c;
      }
    }
  }
  rep.empirical_cut_fraction = total ? double(cut) / double(total) : 0.0;
  rep.full_ball_pairs = full_total;
  rep.full_ball_cut_fraction = full_total ? double(full_cut) / double(full_total) : 0.0;
  return rep;
}

std::string CutRateReport::to_json() const {
  std::ostringstream o;
  o.precision(17);
  o << "{\"graph\":\"" << graph_name << "\",\"n\":" << n << ",\"b\":" << b << ",\"p\":" << p
    << ",\"M\":" << M << ",\"r\":" << r << ",\"trials\":" << trials << ",\"seed\":" << seed
    << ",\"empirical_cut_fraction\":" << empirical_cut_fraction
    << ",\"bound_20rp\":" << bound_20rp
    << ",\"preconditions_met\":" << (preconditions_met ? "true" : "false")
    << ",\"precond_p\":" << (precond_p ? "true" : "false")
    << ",\"precond_r\":" << (precond_r ? "true" : "false")
    << ",\"precond_growth\":" << (precond_growth ? "true" : "false")
    << ",\"growth_check_rmax\":" << growth_check_rmax
    << ",\"full_ball_pairs\":" << full_ball_pairs
    << ",\"full_ball_cut_fraction\":" << full_ball_cut_fraction << "}";
  return o.str();
}

}  // namespace ge
