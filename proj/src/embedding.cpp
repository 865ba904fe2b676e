#include "embedding.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ge {

namespace {

std::vector<int> anchor_distances(const Graph& g, int anchor) {
  return bfs_distances(g, anchor, -1);
}

/** Largest component diameter, by double sweep per component (exact on the
 *  graphs we target; a lower bound in general, which only shrinks windows). */
int sweep_diameter(const Graph& g) {
  int best = 0;
  for (const auto& comp : g.components) {
    int start = comp[0];
    auto d1 = bfs_distances(g, start, -1);
    int far = start;
    for (int v : comp)
      if (d1[v] != kInfDist && d1[v] > d1[far]) far = v;
    auto d2 = bfs_distances(g, far, -1);
    for (int v : comp)
      if (d2[v] != kInfDist && d2[v] > best) best = d2[v];
  }
  return best;
}

struct MergedCoverage {
  std::vector<std::pair<double, double>> intervals;
  double r_emp;  // floor(lo of the interval reaching the top) + 1
};

MergedCoverage merge_coverage(std::vector<std::pair<double, double>> ivals,
                              double vacuous_r_emp) {
  MergedCoverage out;
  if (ivals.empty()) {
    out.r_emp = vacuous_r_emp;
    return out;
  }
  std::sort(ivals.begin(), ivals.end());
  for (const auto& iv : ivals) {
    if (!out.intervals.empty() && iv.first <= out.intervals.back().second + 1e-9) {
      out.intervals.back().second = std::max(out.intervals.back().second, iv.second);
    } else {
      out.intervals.push_back(iv);
    }
  }
  out.r_emp = std::floor(out.intervals.back().first) + 1.0;
  return out;
}

}  // namespace

double StepParams::window_lo() const { return std::pow(r, beta); }
double StepParams::window_hi() const { return std::pow(r, gamma); }
double StepParams::threshold() const { return std::pow(r, gamma * (1.0 - eps)); }
int StepParams::i_max() const {
  double v = std::floor(std::pow(r, beta / alpha) / (r + 1.0));
  if (!(v >= 0.0)) return 0;
  return int(std::min(v, 1e9));
}

Partition make_band_partition(const Graph& g, const BandSpec& spec) {
  if (spec.width < 1) throw std::runtime_error("band width must be positive");
  auto dist = anchor_distances(g, spec.anchor);
  std::vector<int> label(g.n);
  for (int v = 0; v < g.n; ++v) {
    if (dist[v] == kInfDist)
      label[v] = g.n + g.component_of[v];
    else
      label[v] = (dist[v] + spec.offset) / spec.width;
  }
  return partition_from_assignment(label);
}

Partition make_singleton_partition(const Graph& g) {
  std::vector<int> label(g.n);
  std::iota(label.begin(), label.end(), 0);
  return partition_from_assignment(label);
}

std::vector<std::vector<int>> dumpling_psi(const Graph& g,
                                           const std::vector<Partition>& D,
                                           const std::vector<Partition>& F,
                                           const std::vector<std::vector<int>>& t) {
  const int m = int(F.size());
  if (int(D.size()) != m || int(t.size()) != m)
    throw std::runtime_error("dumpling_psi: layer count mismatch");
  std::vector<std::vector<int>> psi(m, std::vector<int>(g.n, 0));
  for (int i = 0; i < m; ++i) {
    const Partition& P = D[i];
    const Partition& Q = F[i];
    if (!is_refinement(P, Q))
      throw std::runtime_error("dumpling_psi: D does not refine F");
    if (int(t[i].size()) != Q.size())
      throw std::runtime_error("dumpling_psi: t size mismatch");
    Graph gq = quotient_graph(g, P);
    std::vector<int> qid(P.size());
    for (int pc = 0; pc < P.size(); ++pc) qid[pc] = Q.cluster_of[P.clusters[pc][0]];
    // Boundary clusters of each Q-cluster in the quotient. A global
    // multi-source BFS from all of them gives each cluster its distance to
    // the boundary of its own Q-cluster: any path leaving the Q-cluster
    // crosses that boundary first.
    std::vector<int> boundary;
    for (int pc = 0; pc < P.size(); ++pc)
      for (int nb : gq.adj[pc])
        if (qid[nb] != qid[pc]) {
          boundary.push_back(pc);
          break;
        }
    std::vector<int> depth = boundary.empty()
                                 ? std::vector<int>(gq.n, kInfDist)
                                 : multi_source_bfs(gq, boundary, -1);
    for (int v = 0; v < g.n; ++v) {
      int d = depth[P.cluster_of[v]];
      if (d == kInfDist) continue;  // empty-boundary convention: psi = 0
      psi[i][v] = std::max(0, d - t[i][Q.cluster_of[v]]);
    }
  }
  return psi;
}

PairList enumerate_pairs(const Graph& g, double lo, double hi, double rate,
                         uint64_t seed) {
  PairList out;
  out.sample_rate = rate;
  int radius = int(std::floor(hi));
  BfsScratch scratch;
  for (int u = 0; u < g.n; ++u) {
    scratch.reset(g.n);
    bounded_bfs(g, u, radius, scratch);
    Rng rng(mix(seed, uint64_t(u)));
    for (int v : scratch.order) {
      if (v <= u) continue;
      double d = scratch.dist[v];
      if (d <= lo || d > hi) continue;
      ++out.enumerated;
      if (rate < 1.0 && rng.u01() > rate) continue;
      out.pairs.push_back({u, v});
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

StepResult dumpling_step(const Graph& g, const std::vector<Partition>& D,
                         const std::vector<Partition>& F,
                         const std::vector<std::vector<int>>& phi,
                         const StepParams& params, uint64_t seed,
                         long long budget, double pair_sample_rate) {
  const int m = int(F.size());
  const int n = g.n;
  if (int(D.size()) != m) throw std::runtime_error("dumpling_step: D/F mismatch");
  std::vector<std::vector<int>> phi_eff = phi;
  if (phi_eff.empty()) phi_eff.assign(m, std::vector<int>(n, 0));
  if (int(phi_eff.size()) != m)
    throw std::runtime_error("dumpling_step: phi layer mismatch");

  StepResult out;
  // Static per-layer data: Q-cluster id and boundary depth per vertex
  // (depth is what psi truncates; kInfDist marks the empty-boundary case).
  std::vector<std::vector<int>> depth(m, std::vector<int>(n, kInfDist));
  std::vector<std::vector<int>> qid(m, std::vector<int>(n, 0));
  std::vector<int> off(m + 1, 0);
  {
    std::vector<std::vector<int>> zero_t;
    for (int i = 0; i < m; ++i) zero_t.push_back(std::vector<int>(F[i].size(), 0));
    auto psi0 = dumpling_psi(g, D, F, zero_t);  // validates refinement
    for (int i = 0; i < m; ++i) {
      const Partition& P = D[i];
      const Partition& Q = F[i];
      Graph gq = quotient_graph(g, P);
      std::vector<int> qcl(P.size());
      for (int pc = 0; pc < P.size(); ++pc)
        qcl[pc] = Q.cluster_of[P.clusters[pc][0]];
      std::vector<int> boundary;
      for (int pc = 0; pc < P.size(); ++pc)
        for (int nb : gq.adj[pc])
          if (qcl[nb] != qcl[pc]) {
            boundary.push_back(pc);
            break;
          }
      std::vector<int> dq = boundary.empty() ? std::vector<int>(gq.n, kInfDist)
                                             : multi_source_bfs(gq, boundary, -1);
      for (int v = 0; v < n; ++v) {
        depth[i][v] = dq[P.cluster_of[v]];
        qid[i][v] = Q.cluster_of[v];
      }
      off[i + 1] = off[i] + Q.size();
      (void)psi0;
    }
  }
  const int num_vars = off[m];

  const double lo = params.window_lo();
  const double hi = params.window_hi();
  const double threshold = params.threshold();
  const int i_max = params.i_max();
  const double need = (1.0 - params.eta) * double(m) / 2.0;

  {
    std::ostringstream note;
    note << "window (" << lo << ", " << hi << "], threshold " << threshold
         << ", I_max " << i_max << ", need " << need << " of " << m
         << " coordinates";
    out.notes.push_back(note.str());
    std::ostringstream hyp;
    hyp << "hypotheses: r>=9 " << (params.r >= 9 ? "met" : "NOT met (override)")
        << "; alpha>=1 " << (params.alpha >= 1 ? "met" : "NOT met (override)")
        << "; eta in (0,1) "
        << (params.eta > 0 && params.eta < 1 ? "met" : "NOT met (override)");
    out.notes.push_back(hyp.str());
  }

  PairList pl = enumerate_pairs(g, lo, hi, pair_sample_rate, mix(seed, 0x70616972ULL));
  out.pair_count = (long long)pl.pairs.size();
  out.sample_rate = pl.sample_rate;

  out.t.assign(m, {});
  for (int i = 0; i < m; ++i) out.t[i].assign(F[i].size(), 0);

  if (pl.pairs.empty()) {
    out.notes.push_back("empty pair set; returning psi at t = 0");
    out.psi = dumpling_psi(g, D, F, out.t);
    out.stats.converged = true;
    out.converged = true;
    return out;
  }

  auto value = [&](int i, int v, const std::vector<int>& a) -> long long {
    int d = depth[i][v];
    int p = d == kInfDist ? 0 : std::max(0, d - a[off[i] + qid[i][v]]);
    return (long long)phi_eff[i][v] + p;
  };

  ConstraintSystem cs;
  cs.num_vars = num_vars;
  cs.sample = [i_max](int, Rng& rng) { return rng.uniform_int(i_max + 1); };
  cs.num_constraints = int(pl.pairs.size());
  cs.domain_of = [&](int c, std::vector<int>& outv) {
    auto [u, v] = pl.pairs[c];
    for (int i = 0; i < m; ++i) {
      outv.push_back(off[i] + qid[i][u]);
      outv.push_back(off[i] + qid[i][v]);
    }
  };
  cs.violated = [&](int c, const std::vector<int>& a) {
    auto [u, v] = pl.pairs[c];
    double count = 0;
    for (int i = 0; i < m; ++i) {
      long long diff = value(i, u, a) - value(i, v, a);
      if (diff < 0) diff = -diff;
      if (double(diff) >= threshold - 1e-9) {
        count += 1.0;
        if (count >= need - 1e-9) return false;
      }
    }
    return count < need - 1e-9;
  };
  // Band clusters touch most pairs, so the dependency closure is effectively
  // everything; recheck all constraints after a resample.
  cs.dependents_of = [&](int, std::vector<int>& outv) {
    outv.resize(pl.pairs.size());
    std::iota(outv.begin(), outv.end(), 0);
  };

  Rng rng(mix(seed, 0x73746570ULL));
  auto solved = mt_solve(cs, rng, budget);
  out.stats = solved.stats;
  out.converged = solved.stats.converged;
  for (int i = 0; i < m; ++i)
    for (int q = 0; q < F[i].size(); ++q) out.t[i][q] = solved.assignment[off[i] + q];
  out.psi = dumpling_psi(g, D, F, out.t);
  if (!out.converged) out.notes.push_back("moser-tardos budget exhausted");
  return out;
}

std::vector<Decomposition> nested_schedule(const Graph& g,
                                           const std::vector<Decomposition>& raw) {
  if (raw.empty()) return {};
  std::vector<Decomposition> chain;
  chain.push_back(raw[0]);
  const int m = int(raw[0].layers.size());
  for (size_t k = 1; k < raw.size(); ++k) {
    if (int(raw[k].layers.size()) != m)
      throw std::runtime_error("nested_schedule: layer count mismatch");
    Decomposition e;
    e.params = raw[k].params;
    for (int i = 0; i < m; ++i)
      e.layers.push_back(nest_partition(chain.back().layers[i], raw[k].layers[i]));
    chain.push_back(std::move(e));
  }
  (void)g;
  return chain;
}

bool check_padding_inheritance(const Graph& g, const Decomposition& coarse_raw,
                               const Decomposition& nested, int r) {
  if (coarse_raw.layers.size() != nested.layers.size()) return false;
  BfsScratch scratch;
  for (int v = 0; v < g.n; ++v) {
    scratch.reset(g.n);
    bounded_bfs(g, v, 2 * r, scratch);
    for (size_t i = 0; i < coarse_raw.layers.size(); ++i) {
      const auto& q = coarse_raw.layers[i];
      bool q_padded = true;
      for (int w : scratch.order)
        if (q.cluster_of[w] != q.cluster_of[v]) {
          q_padded = false;
          break;
        }
      if (!q_padded) continue;
      const auto& p = nested.layers[i];
      for (int w : scratch.order)
        if (scratch.dist[w] <= r && p.cluster_of[w] != p.cluster_of[v]) return false;
    }
  }
  return true;
}

std::string GridEmbedding::to_tsv() const {
  std::ostringstream os;
  for (size_t v = 0; v < coords.size(); ++v) {
    os << v;
    for (int c : coords[v]) os << "\t" << c;
    os << "\n";
  }
  return os.str();
}

GridEmbedding realize_cocycle(const Graph& g,
                              const std::vector<std::pair<int, int>>& edges,
                              const std::vector<std::vector<int>>& edge_deltas,
                              int dim) {
  if (edges.size() != edge_deltas.size())
    throw std::runtime_error("realize_cocycle: edges/deltas size mismatch");
  // Adjacency annotated with edge index and orientation sign.
  struct Half {
    int nbr, idx, sign;
  };
  std::vector<std::vector<Half>> adj(g.n);
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (u >= v || v >= g.n || u < 0)
      throw std::runtime_error("realize_cocycle: bad edge orientation");
    if (int(edge_deltas[e].size()) != dim)
      throw std::runtime_error("realize_cocycle: delta dimension mismatch");
    adj[u].push_back({v, int(e), +1});
    adj[v].push_back({u, int(e), -1});
  }
  GridEmbedding f;
  f.dim = dim;
  f.coords.assign(g.n, std::vector<int>(dim, 0));
  std::vector<char> seen(g.n, 0);
  std::vector<char> tree_edge(edges.size(), 0);
  for (const auto& comp : g.components) {
    int base = *std::min_element(comp.begin(), comp.end());
    f.basepoint.push_back(base);
    std::vector<int> queue{base};
    seen[base] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (const Half& h : adj[u]) {
        if (seen[h.nbr]) continue;
        seen[h.nbr] = 1;
        tree_edge[h.idx] = 1;
        for (int k = 0; k < dim; ++k)
          f.coords[h.nbr][k] = f.coords[u][k] + h.sign * edge_deltas[h.idx][k];
        queue.push_back(h.nbr);
      }
    }
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    for (int k = 0; k < dim; ++k) {
      if (f.coords[v][k] - f.coords[u][k] != edge_deltas[e][k]) {
        std::ostringstream os;
        os << "realize_cocycle: inconsistent delta on edge (" << u << ", " << v
           << ")";
        throw std::runtime_error(os.str());
      }
    }
  }
  // Every graph edge must carry a delta, otherwise a component may be
  // disconnected in the supplied edge set.
  if ((long long)edges.size() != g.edge_count())
    throw std::runtime_error("realize_cocycle: edge set does not match graph");
  return f;
}

DeskSchedule make_default_desk(const Graph& g, double eps) {
  DeskSchedule sched;
  if (g.n == 0) return sched;

  // Work in the largest component; bands cut across its anchor distances.
  const std::vector<int>* comp = &g.components[0];
  for (const auto& c : g.components)
    if (c.size() > comp->size()) comp = &c;

  // Anchors: two approximate diameter endpoints (double sweep) plus the vertex
  // furthest from both. dist(a0, .) and dist(a2, .) act as two "directions";
  // on a square grid patch they are the two diagonal coordinates.
  auto du = anchor_distances(g, (*comp)[0]);
  int a0 = (*comp)[0];
  for (int v : *comp)
    if (du[v] > du[a0]) a0 = v;
  auto ga = anchor_distances(g, a0);
  int a1 = a0;
  for (int v : *comp)
    if (ga[v] > ga[a1]) a1 = v;
  auto gb = anchor_distances(g, a1);
  int a2 = a0;
  long long best = -1;
  for (int v : *comp) {
    long long score = std::min(ga[v], gb[v]);
    if (score > best) {
      best = score;
      a2 = v;
    }
  }
  auto gc = anchor_distances(g, a2);

  int hi_top = 0;  // component diameter (double sweep is exact on our families)
  for (int v : *comp) hi_top = std::max(hi_top, ga[v]);
  int gmax_a = hi_top, gmax_c = 0;
  for (int v : *comp) gmax_c = std::max(gmax_c, gc[v]);
  if (hi_top < 8) return sched;

  // Each phase uses four coordinates: anchors {a0, a2} x two cuts {c1, c2}.
  // A cut c splits a direction's distance g into two bands at g = c; the
  // in-band boundary depth is then |g - c| (up to one), a single-fold tent.
  // For a pair whose best direction differs by delta: a coordinate whose cut
  // lies outside the pair's g-interval separates it by delta, and if both
  // cuts lie inside, the tents give at least the cut separation s. Radii t
  // only perturb by i_max per band, so
  //     lo >= ceil(T) + 2*i_max + slack and s >= the same
  // makes every window pair separated for every radius assignment.
  const int i_max = 1;
  struct Cand {
    int lo, hi, need, s;
  };
  std::vector<Cand> cand;
  int hi = hi_top;
  while (int(cand.size()) < 2) {
    double T = std::pow(double(hi), 1.0 - eps);
    int need = int(std::ceil(T)) + 2 * i_max + 3;
    if (need >= hi) break;
    int s = std::max(need, std::min(std::min(gmax_a, gmax_c) / 3, hi));
    cand.push_back({need, hi, need, s});
    hi = need;
  }
  if (cand.empty()) return sched;

  // The phase guarantee needs the directions to resolve window distances:
  // max(|delta g_a|, |delta g_c|) >= need for every window pair. True on
  // grids, paths and cycles; false on trees with symmetric branches. Checked
  // here (exhaustively on small components, sampled sources on large ones)
  // and failing phases are dropped together with everything below them.
  {
    size_t stride = comp->size() <= 8192 ? 1 : comp->size() / 4096;
    std::vector<char> bad(cand.size(), 0);
    BfsScratch scratch;
    for (size_t i = 0; i < comp->size(); i += stride) {
      int u = (*comp)[i];
      bounded_bfs(g, u, hi_top, scratch);
      for (int v : scratch.order) {
        if (v == u) continue;
        int d = scratch.dist[v];
        for (size_t k = 0; k < cand.size(); ++k) {
          if (d <= cand[k].lo || d > cand[k].hi) continue;
          int sep = std::max(std::abs(ga[u] - ga[v]), std::abs(gc[u] - gc[v]));
          if (sep < cand[k].need) bad[k] = 1;
          break;  // windows are disjoint
        }
      }
    }
    size_t keep = 0;
    while (keep < cand.size() && !bad[keep]) ++keep;
    cand.resize(keep);
  }

  for (const Cand& c : cand) {
    DeskStep step;
    auto add_cuts = [&](int anchor, int gmax) {
      int c1 = std::max(1, (gmax - c.s) / 2);
      int c2 = std::min(gmax - 1, c1 + c.s);
      // Single cut at g = cut: width beyond gmax leaves exactly two bands.
      int w = gmax + 1;
      step.bands.push_back({anchor, w, w - c1});
      step.bands.push_back({anchor, w, w - c2});
    };
    add_cuts(a0, gmax_a);
    add_cuts(a2, gmax_c);
    step.params.r = 2.0;
    step.params.eps = eps;
    step.params.eta = 0.5;
    step.params.beta = std::log(double(c.lo)) / std::log(2.0);
    step.params.gamma = std::log(double(c.hi)) / std::log(2.0);
    // i_max() = floor(r^{beta/alpha}/(r+1)) = floor(4/3) = 1.
    step.params.alpha = step.params.beta / 2.0;
    sched.phases.push_back(step);
  }
  return sched;
}

namespace {

EmbeddingSchedule theory_schedule(double b, double eps, const std::string& mode) {
  EmbeddingSchedule s;
  s.b = b;
  s.eps = eps;
  s.alpha = 1.0 + eps / 12.0;
  s.beta = 12.0 / eps;
  s.gamma = s.alpha * s.beta;
  s.m_theory = int(std::ceil(1440.0 * b / eps));
  s.ell_theory = int(std::ceil(2.0 * std::log(s.beta) / std::log(s.alpha)));
  s.x0 = 2.0;
  s.mode = mode;
  return s;
}

void assert_step_contraction(const Graph& g, const std::vector<std::vector<int>>& psi) {
  for (const auto& layer : psi)
    for (int u = 0; u < g.n; ++u)
      for (int v : g.adj[u])
        if (std::abs(layer[u] - layer[v]) > 1)
          throw std::logic_error("dumpling step violated the edge contraction");
}

std::vector<std::pair<int, int>> graph_edges(const Graph& g) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v) edges.push_back({u, v});
  return edges;
}

}  // namespace

EmbedResult coarse_embed(const Graph& g, double b, double eps,
                         const DeskSchedule* desk, uint64_t seed,
                         long long budget, double pair_sample_rate) {
  if (!(eps > 0.0 && eps < 0.5 + 1e-12))
    throw std::runtime_error("coarse_embed: eps must be in (0, 1/2]");
  EmbedResult res;
  res.report.schedule = theory_schedule(b, eps, desk ? "desk" : "theory");
  const int diam = g.n ? sweep_diameter(g) : 0;

  std::vector<std::vector<std::vector<int>>> blocks;  // per phase: m x n psi
  std::vector<std::pair<double, double>> ivals;

  if (desk) {
    for (size_t p = 0; p < desk->phases.size(); ++p) {
      const DeskStep& step = desk->phases[p];
      std::vector<Partition> F;
      if (!step.bands.empty()) {
        for (const auto& bs : step.bands) F.push_back(make_band_partition(g, bs));
      } else {
        auto built = build_padded(g, b, eps, step.carve_r, BuildMode::Override,
                                  &step.carve, mix(seed, 0xca000 + p), budget);
        if (!built.converged) {
          res.report.ok = false;
          res.report.notes.push_back("carve construction failed in phase " +
                                     std::to_string(p));
          return res;
        }
        F = built.dec.layers;
      }
      std::vector<Partition> D(F.size(), make_singleton_partition(g));
      StepResult sr = dumpling_step(g, D, F, {}, step.params,
                                    mix(seed, 0x57e90 + p), budget,
                                    pair_sample_rate);
      res.report.step_stats.push_back(sr.stats);
      for (auto& nt : sr.notes)
        res.report.notes.push_back("phase " + std::to_string(p) + ": " + nt);
      if (!sr.converged) {
        res.report.ok = false;
        res.report.notes.push_back("phase " + std::to_string(p) +
                                   " failed to converge; no embedding emitted");
        return res;
      }
      assert_step_contraction(g, sr.psi);
      blocks.push_back(std::move(sr.psi));
      ivals.push_back({step.params.window_lo(), step.params.window_hi()});
    }
  } else {
    // Theory mode: exact schedule formulas; scales whose window exceeds the
    // diameter are truncated. On desk-size graphs r_0^beta = x0^beta already
    // exceeds the diameter, so the scale list is empty and f = 0 with the
    // honest report that no interval is covered.
    const auto& s = res.report.schedule;
    int usable_phases = 0;
    for (int j = 0; j < s.ell_theory; ++j) {
      double xj = std::pow(s.x0, std::pow(s.alpha, double(j)));
      if (std::pow(xj, s.beta) <= double(diam)) ++usable_phases;
    }
    if (usable_phases > 0) {
      res.report.ok = false;
      res.report.notes.push_back(
          "theory-mode scales fit this graph; the theory constants (m = " +
          std::to_string(s.m_theory) +
          " layers per scale) are not tractable here");
      return res;
    }
    res.report.notes.push_back("theory mode: all scales exceed the diameter " +
                               std::to_string(diam) + "; empty schedule, f = 0");
    long long dim = (long long)s.ell_theory * s.m_theory;
    if ((long long)g.n * dim > 2000000) {
      res.report.notes.push_back("nominal dimension ell*m truncated to 0");
      dim = 0;
    }
    res.f.dim = int(dim);
    res.f.coords.assign(g.n, std::vector<int>(size_t(dim), 0));
    for (const auto& comp : g.components)
      res.f.basepoint.push_back(*std::min_element(comp.begin(), comp.end()));
    auto cov = merge_coverage({}, double(diam) + 1.0);
    res.report.covered = cov.intervals;
    res.report.r_emp = cov.r_emp;
    res.report.ok = true;
    return res;
  }

  int dim = 0;
  for (const auto& blk : blocks) dim += int(blk.size());
  std::vector<std::vector<int>> phi(g.n, std::vector<int>(dim, 0));
  {
    int at = 0;
    for (const auto& blk : blocks) {
      for (size_t i = 0; i < blk.size(); ++i)
        for (int v = 0; v < g.n; ++v) phi[v][at + int(i)] = blk[i][v];
      at += int(blk.size());
    }
  }
  auto edges = graph_edges(g);
  std::vector<std::vector<int>> deltas(edges.size(), std::vector<int>(dim, 0));
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    for (int k = 0; k < dim; ++k) deltas[e][k] = phi[v][k] - phi[u][k];
  }
  res.f = realize_cocycle(g, edges, deltas, dim);
  auto cov = merge_coverage(ivals, double(diam) + 1.0);
  res.report.covered = cov.intervals;
  res.report.r_emp = cov.r_emp;
  if (!res.report.covered.empty() &&
      res.report.covered.back().second < double(diam) - 1e-9)
    res.report.notes.push_back("covered union stops below the diameter");
  res.report.ok = true;
  return res;
}

EmbedResult injective_embed(const Graph& g, double b, double eps, int s,
                            const DeskSchedule* desk, uint64_t seed,
                            long long budget, double pair_sample_rate) {
  if (s < 1) throw std::runtime_error("injective_embed: s must be positive");
  EmbedResult base = coarse_embed(g, b, eps, desk, seed, budget, pair_sample_rate);
  if (!base.report.ok) return base;

  int R = std::max(1, int(std::llround(std::ceil(base.report.r_emp))));
  auto colors = greedy_power_coloring(g, R);
  int ncolors = colors.empty() ? 1 : *std::max_element(colors.begin(), colors.end()) + 1;
  int k = std::max(1, int(std::ceil(std::log(std::max(2, ncolors)) /
                                    std::log(double(s + 1)))));
  int k_theory =
      int(std::ceil(b * std::log(std::max(2, R)) / std::log(double(s + 1))));
  {
    std::ostringstream note;
    note << "injective augmentation: R=" << R << ", colors=" << ncolors
         << ", s=" << s << ", k=" << k << " (theory k=" << k_theory << ")";
    base.report.notes.push_back(note.str());
  }

  auto digits = [&](int c) {
    std::vector<int> d(k, 0);
    for (int j = 0; j < k; ++j) {
      d[j] = c % (s + 1);
      c /= (s + 1);
    }
    return d;
  };

  EmbedResult out = base;
  out.f.dim = base.f.dim + k;
  out.f.coords.assign(g.n, {});
  std::vector<int> base_color(g.components.size());
  for (size_t c = 0; c < g.components.size(); ++c)
    base_color[c] = colors[out.f.basepoint.empty()
                               ? g.components[c][0]
                               : out.f.basepoint[c]];
  // Distinct per-component offsets on coordinate 0 keep components apart in
  // l_inf without touching any intra-component difference.
  long long sep = 2LL * (sweep_diameter(g) + s) + 1;
  for (int v = 0; v < g.n; ++v) {
    int comp = g.component_of[v];
    std::vector<int> row = base.f.coords.empty() ? std::vector<int>{}
                                                 : base.f.coords[v];
    auto dv = digits(colors[v]);
    auto db = digits(base_color[comp]);
    for (int j = 0; j < k; ++j) row.push_back(dv[j] - db[j]);
    row[0] += int(sep * comp);
    out.f.coords[v] = std::move(row);
  }
  return out;
}

DistortionReport verify_embedding(const Graph& g, const GridEmbedding& f,
                                  double eps, double r_emp, double sample_rate,
                                  uint64_t seed) {
  DistortionReport rep;
  rep.dim = f.dim;
  rep.sample_rate = sample_rate;
  if (int(f.coords.size()) != g.n)
    throw std::runtime_error("verify_embedding: coords/graph size mismatch");

  auto norm = [&](int u, int v) {
    long long best = 0;
    const auto& a = f.coords[u];
    const auto& bb = f.coords[v];
    for (size_t k = 0; k < a.size(); ++k) {
      long long d = (long long)a[k] - bb[k];
      if (d < 0) d = -d;
      if (d > best) best = d;
    }
    return best;
  };

  rep.max_edge_stretch = 0;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v)
        rep.max_edge_stretch =
            int(std::max<long long>(rep.max_edge_stretch, norm(u, v)));
  rep.contraction_ok = rep.max_edge_stretch <= 1;

  // Injectivity by exact row comparison.
  {
    std::vector<int> idx(g.n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int bb) { return f.coords[a] < f.coords[bb]; });
    rep.injective = g.n > 0;
    for (int i = 0; i + 1 < g.n; ++i)
      if (f.coords[idx[i]] == f.coords[idx[i + 1]]) {
        rep.injective = false;
        break;
      }
    if (g.n == 0) rep.injective = false;
  }

  double min_ratio = kNoFarPairs;
  BfsScratch scratch;
  for (int u = 0; u < g.n; ++u) {
    if (sample_rate < 1.0) {
      Rng rng(mix(seed, uint64_t(u)));
      if (rng.u01() > sample_rate) continue;
    }
    scratch.reset(g.n);
    bounded_bfs(g, u, -1, scratch);
    for (int v : scratch.order) {
      if (v <= u) continue;
      double d = scratch.dist[v];
      if (d < r_emp) continue;
      ++rep.pairs_checked;
      double ratio = double(norm(u, v)) / std::pow(d, 1.0 - eps);
      if (ratio < min_ratio) {
        min_ratio = ratio;
        rep.worst_pair = {u, v};
      }
    }
  }
  rep.min_far_ratio = min_ratio;
  return rep;
}

std::string EmbedReport::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"ok\": " << (ok ? "true" : "false") << ", \"r_emp\": " << r_emp
     << ", \"covered\": [";
  for (size_t i = 0; i < covered.size(); ++i) {
    if (i) os << ", ";
    os << "[" << covered[i].first << ", " << covered[i].second << "]";
  }
  os << "], \"schedule\": {\"b\": " << schedule.b << ", \"eps\": " << schedule.eps
     << ", \"alpha\": " << schedule.alpha << ", \"beta\": " << schedule.beta
     << ", \"gamma\": " << schedule.gamma << ", \"m_theory\": " << schedule.m_theory
     << ", \"ell_theory\": " << schedule.ell_theory << ", \"x0\": " << schedule.x0
     << ", \"mode\": \"" << schedule.mode << "\"}, \"step_stats\": [";
  for (size_t i = 0; i < step_stats.size(); ++i) {
    if (i) os << ", ";
    os << step_stats[i].to_json();
  }
  os << "], \"notes\": [";
  for (size_t i = 0; i < notes.size(); ++i) {
    if (i) os << ", ";
    os << "\"" << notes[i] << "\"";
  }
  os << "]}";
  return os.str();
}

std::string DistortionReport::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"max_edge_stretch\": " << max_edge_stretch << ", \"contraction_ok\": "
     << (contraction_ok ? "true" : "false") << ", \"min_far_ratio\": "
     << min_far_ratio << ", \"worst_pair\": [" << worst_pair.first << ", "
     << worst_pair.second << "], \"injective\": " << (injective ? "true" : "false")
     << ", \"dim\": " << dim << ", \"pairs_checked\": " << pairs_checked
     << ", \"sample_rate\": " << sample_rate << "}";
  return os.str();
}

}  // namespace ge
