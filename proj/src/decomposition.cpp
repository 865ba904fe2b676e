#include "decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "carving.hpp"

namespace ge {

namespace {

/** Exact diameter of a vertex set in the whole-graph metric. */
int set_diam(const Graph& g, const std::vector<int>& set) {
  if (set.empty()) return 0;
  std::vector<char> member(g.n, 0);
  for (int v : set) member[v] = 1;
  int diam = 0;
  BfsScratch scratch;
  for (int v : set) {
    scratch.reset(g.n);
    bounded_bfs(g, v, -1, scratch);
    size_t found = 0;
    for (int u : scratch.order) {
      if (member[u]) {
        ++found;
        if (scratch.dist[u] > diam) diam = scratch.dist[u];
        if (found == set.size()) break;
      }
    }
    if (found != set.size()) throw std::runtime_error("set spans components");
  }
  return diam;
}

void append_params_json(std::ostringstream& os, const DecompositionParams& p) {
  os << "\"params\": {\"r\": " << p.r << ", \"alpha\": " << p.alpha
     << ", \"eta\": " << p.eta << ", \"m\": " << p.m << ", \"b\": " << p.b
     << ", \"p\": " << p.p << ", \"M\": " << p.M << ", \"theory_mode\": "
     << (p.theory_mode ? "true" : "false") << ", \"mode_name\": \""
     << p.mode_name << "\"}";
}

/** Bitmask over vertices whose r-ball is cut by the all-radii-M carve under
 *  the given coloring. */
std::vector<uint64_t> carve_cut_mask(const Graph& g,
                                     const std::vector<std::vector<int>>& classes,
                                     int M, int r) {
  std::vector<int> t(g.n, M);
  CarvingInput in{&g, M, &classes, &t};
  Partition part = carve(in).part;
  std::vector<uint64_t> mask((g.n + 63) / 64, 0);
  for (int v = 0; v < g.n; ++v)
    if (is_ball_cut(g, part, v, r)) mask[v >> 6] |= 1ull << (v & 63);
  return mask;
}

/** One proper coloring of G^{2M} per layer. Any proper coloring is admissible,
 *  but the layers only jointly pad well when their carve boundaries avoid each
 *  other, so the greedy-coloring starts are chosen deterministically: the
 *  candidates are the vertices near vertex 0 (moving the greedy start shifts
 *  the whole carve pattern by roughly that offset), scored by how few vertices
 *  have their r-ball cut in every layer of the deterministic all-radii-M
 *  carve. For three layers the best start pair is found exhaustively, beyond
 *  that greedily. */
std::vector<std::vector<std::vector<int>>> pick_layer_colorings(const Graph& g,
                                                                int M, int m,
                                                                int r) {
  std::vector<std::vector<std::vector<int>>> layers;
  layers.push_back(make_color_classes(g, M));
  if (g.n == 0 || m == 1) {
    layers.resize(std::max(m, 1), layers[0]);
    return layers;
  }
  std::vector<int> starts;
  {
    BfsScratch scratch;
    scratch.reset(g.n);
    bounded_bfs(g, 0, 2 * M, scratch);
    std::vector<int> near(scratch.order);
    std::sort(near.begin(), near.end());
    const size_t kMaxCandidates = 256;
    size_t stride = (near.size() + kMaxCandidates - 1) / kMaxCandidates;
    for (size_t i = 0; i < near.size(); i += stride) starts.push_back(near[i]);
  }
  const int words = (g.n + 63) / 64;
  std::vector<std::vector<std::vector<int>>> cand;
  std::vector<std::vector<uint64_t>> mask;
  for (int s : starts) {
    cand.push_back(make_color_classes(g, M, s));
    mask.push_back(carve_cut_mask(g, cand.back(), M, r));
  }
  auto joint_count = [&](const std::vector<uint64_t>& a,
                         const std::vector<uint64_t>& b,
                         const std::vector<uint64_t>& c) {
    int n = 0;
    for (int w = 0; w < words; ++w) n += __builtin_popcountll(a[w] & b[w] & c[w]);
    return n;
  };
  std::vector<uint64_t> joint = carve_cut_mask(g, layers[0], M, r);
  const std::vector<uint64_t> full(words, ~0ull);
  if (m == 3) {
    int best = g.n + 1, ba = 0, bb = 0;
    for (size_t a = 0; a < cand.size() && best > 0; ++a)
      for (size_t b2 = a; b2 < cand.size(); ++b2) {
        int bad = joint_count(joint, mask[a], mask[b2]);
        if (bad < best) {
          best = bad;
          ba = int(a);
          bb = int(b2);
          if (best == 0) break;
        }
      }
    layers.push_back(cand[ba]);
    layers.push_back(cand[bb]);
    return layers;
  }
  for (int layer = 1; layer < m; ++layer) {
    int best = g.n + 1, bi = 0;
    for (size_t j = 0; j < cand.size(); ++j) {
      int bad = joint_count(joint, mask[j], full);
      if (bad < best) {
        best = bad;
        bi = int(j);
      }
    }
    for (int w = 0; w < words; ++w) joint[w] &= mask[bi][w];
    layers.push_back(cand[bi]);
  }
  return layers;
}

}  // namespace

std::string Decomposition::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{";
  append_params_json(os, params);
  os << ", \"layers\": [";
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (size_t v = 0; v < layers[i].cluster_of.size(); ++v) {
      if (v) os << ", ";
      os << layers[i].cluster_of[v];
    }
    os << "]";
  }
  os << "]}";
  return os.str();
}

Decomposition padded_from_cover(const Graph& g, const Cover& c, int r, double alpha) {
  if (std::pow(double(r), alpha) < c.D_bounded + 2.0 * r)
    throw std::runtime_error("padded_from_cover: r^alpha < D + 2r");
  Decomposition out;
  out.params.r = r;
  out.params.alpha = alpha;
  out.params.m = int(c.layers.size());
  out.params.mode_name = "from-cover";
  for (const auto& family : c.layers) {
    std::vector<int> label(g.n, -1);
    for (const auto& set : family) {
      auto dist = multi_source_bfs(g, set, r);
      int id = set.empty() ? -1 : *std::min_element(set.begin(), set.end());
      for (int v = 0; v < g.n; ++v) {
        if (dist[v] == kInfDist) continue;
        if (label[v] != -1)
          throw std::runtime_error("padded_from_cover: expanded sets collide");
        label[v] = id;
      }
    }
    for (int v = 0; v < g.n; ++v)
      if (label[v] == -1) label[v] = g.n + v;  // leftover singleton
    out.layers.push_back(partition_from_assignment(label));
  }
  return out;
}

CoverFromPaddedResult cover_from_padded(const Graph& g, const Decomposition& d, int s) {
  CoverFromPaddedResult out;
  out.cover.r_disjoint = 2 * s;
  std::vector<char> covered(g.n, 0);
  int max_diam = 0;
  for (const auto& layer : d.layers) {
    std::vector<std::vector<int>> family;
    for (int c = 0; c < layer.size(); ++c) {
      const auto& cl = layer.clusters[c];
      std::vector<int> boundary;
      for (int v : cl)
        for (int w : g.adj[v])
          if (layer.cluster_of[w] != c) {
            boundary.push_back(v);
            break;
          }
      std::vector<int> kept;
      if (boundary.empty()) {
        kept = cl;
      } else {
        auto dist = multi_source_bfs(g, boundary, s);
        for (int v : cl)
          if (dist[v] == kInfDist) kept.push_back(v);
      }
      if (!kept.empty()) {
        int dm = set_diam(g, kept);
        if (dm > max_diam) max_diam = dm;
        for (int v : kept) covered[v] = 1;
        family.push_back(std::move(kept));
      }
    }
    out.cover.layers.push_back(std::move(family));
  }
  out.cover.D_bounded = max_diam;
  out.covers_all = true;
  for (int v = 0; v < g.n; ++v)
    if (!covered[v]) {
      out.covers_all = false;
      out.uncovered.push_back(v);
    }
  return out;
}

int theory_m_I(double b) { return int(std::floor(b)) + 1; }

int theory_m_II(double b, double eps) { return int(std::ceil(6.0 * b / eps)); }

double theory_alpha_I(double b, double eps) {
  int m = theory_m_I(b);
  return (1.0 + eps) * double(m) / (double(m) - b);
}

double theory_p(double b, double alpha, int r) {
  double p = 8.0 * alpha * b * std::log(double(r)) / std::pow(double(r), alpha);
  if (p >= 1.0) p = 0.999;
  if (p <= 0.0) p = 1e-12;
  return p;
}

BuildResult build_padded(const Graph& g, double b, double eps, int r, BuildMode mode,
                         const BuildOverride* ov, uint64_t seed, long long budget) {
  BuildResult out;
  int m;
  double alpha, p;
  int M;
  switch (mode) {
    case BuildMode::TheoryI:
      m = theory_m_I(b);
      alpha = theory_alpha_I(b, eps);
      p = theory_p(b, alpha, r);
      M = auto_M(b, p);
      out.dec.params.theory_mode = true;
      out.dec.params.mode_name = "theory-I";
      break;
    case BuildMode::TheoryII:
      m = theory_m_II(b, eps);
      alpha = 1.0 + eps;
      p = theory_p(b, alpha, r);
      M = auto_M(b, p);
      out.dec.params.theory_mode = true;
      out.dec.params.mode_name = "theory-II";
      break;
    case BuildMode::Override:
    default:
      if (!ov) throw std::runtime_error("build_padded: override params missing");
      m = ov->m;
      alpha = ov->alpha;
      p = ov->p;
      M = ov->M;
      out.dec.params.mode_name = "override";
      break;
  }
  if (m < 1 || M < 0 || p <= 0.0 || p >= 1.0)
    throw std::runtime_error("build_padded: bad parameters");
  const int n = g.n;
  out.dec.params.r = r;
  out.dec.params.alpha = alpha;
  out.dec.params.m = m;
  out.dec.params.b = b;
  out.dec.params.p = p;
  out.dec.params.M = M;

  {
    std::ostringstream note;
    note << "thresholds: r>=9 " << (r >= 9 ? "met" : "NOT met") << "; p<=1/(5b) "
         << (p <= 1.0 / (5.0 * b) ? "met" : "NOT met");
    out.notes.push_back(note.str());
  }

  auto layer_classes = pick_layer_colorings(g, M, m, r);
  std::vector<std::vector<int>> layer_color(m, std::vector<int>(n, 0));
  for (int i = 0; i < m; ++i)
    for (size_t c = 0; c < layer_classes[i].size(); ++c)
      for (int v : layer_classes[i][c]) layer_color[i][v] = int(c);

  // Candidate carving centers of each vertex: all x with dist(x, w) <= M,
  // ordered by (class color, id) per layer. Under radii t the carve sweep
  // assigns w to the first candidate x with dist <= t(x); this is the local
  // rule used for constraint checks (unique per color by 2M-separation).
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cand(m);  // (x, dist)
  {
    std::vector<std::vector<std::pair<int, int>>> base(n);
    BfsScratch scratch;
    for (int x = 0; x < n; ++x) {
      scratch.reset(n);
      bounded_bfs(g, x, M, scratch);
      for (int w : scratch.order) base[w].push_back({x, scratch.dist[w]});
    }
    for (int i = 0; i < m; ++i) {
      cand[i] = base;
      const auto& color = layer_color[i];
      for (int w = 0; w < n; ++w)
        std::sort(cand[i][w].begin(), cand[i][w].end(),
                  [&](const std::pair<int, int>& a, const std::pair<int, int>& b2) {
                    if (color[a.first] != color[b2.first])
                      return color[a.first] < color[b2.first];
                    return a.first < b2.first;
                  });
    }
  }
  auto owner_of = [&](int w, const std::vector<int>& t, int layer) -> int {
    for (const auto& [x, dx] : cand[layer][w])
      if (dx <= t[layer * n + x]) return x;
    return w;  // unreachable: w is its own candidate at dist 0
  };

  // r-balls, CSR.
  std::vector<int> ball_off(n + 1, 0), ball_flat;
  {
    BfsScratch scratch;
    for (int u = 0; u < n; ++u) {
      scratch.reset(n);
      bounded_bfs(g, u, r, scratch);
      ball_off[u + 1] = ball_off[u] + int(scratch.order.size());
      for (int w : scratch.order) ball_flat.push_back(w);
    }
  }

  TGeoParams tg{p, M};
  ConstraintSystem cs;
  cs.num_vars = m * n;
  cs.sample = [tg](int, Rng& rng) { return tgeo_sample(tg, rng); };
  cs.num_constraints = n;
  auto scratch_dom = std::make_shared<BfsScratch>();
  cs.domain_of = [&g, m, n, r, M, scratch_dom](int u, std::vector<int>& outv) {
    scratch_dom->reset(n);
    bounded_bfs(g, u, M + r, *scratch_dom);
    for (int i = 0; i < m; ++i)
      for (int w : scratch_dom->order) outv.push_back(i * n + w);
  };
  cs.violated = [&](int u, const std::vector<int>& a) {
    for (int i = 0; i < m; ++i) {
      int first = owner_of(ball_flat[ball_off[u]], a, i);
      bool cut = false;
      for (int k = ball_off[u] + 1; k < ball_off[u + 1]; ++k)
        if (owner_of(ball_flat[k], a, i) != first) {
          cut = true;
          break;
        }
      if (!cut) return false;  // layer i leaves B(u, r) whole
    }
    return true;
  };
  auto scratch_dep = std::make_shared<BfsScratch>();
  cs.dependents_of = [&g, n, r, M, scratch_dep](int u, std::vector<int>& outv) {
    scratch_dep->reset(n);
    bounded_bfs(g, u, 2 * (M + r), *scratch_dep);
    for (int w : scratch_dep->order) outv.push_back(w);
  };

  Rng rng(mix(seed, 0x70616464ULL));
  auto solve = mt_solve(cs, rng, budget);
  out.converged = solve.stats.converged;
  out.stats = solve.stats;

  double cut_one = std::min(1.0, 20.0 * double(r) * p);
  auto est = estimate_lll_params(cs, std::pow(cut_one, m));
  out.stats.p_bound = est.p_bound;
  out.stats.d_bound = est.d_bound;
  out.stats.lll_condition_met = est.lll_condition_met;

  for (int i = 0; i < m; ++i) {
    std::vector<int> t(solve.assignment.begin() + (size_t)i * n,
                       solve.assignment.begin() + (size_t)(i + 1) * n);
    CarvingInput in{&g, M, &layer_classes[i], &t};
    out.dec.layers.push_back(carve(in).part);
  }
  return out;
}

PaddedReport verify_padded(const Graph& g, const Decomposition& d) {
  PaddedReport rep;
  rep.size_bound = std::pow(double(d.params.r), d.params.alpha);
  rep.max_diam = 0;
  for (const auto& layer : d.layers) {
    Partition copy = layer;
    copy.ensure_diams(g);
    for (int dm : copy.diam)
      if (dm > rep.max_diam) rep.max_diam = dm;
  }
  rep.bounded_ok = double(rep.max_diam) <= rep.size_bound;

  const int m = int(d.layers.size());
  rep.padded_layers.assign(g.n, 0);
  BfsScratch scratch;
  for (int v = 0; v < g.n; ++v) {
    scratch.reset(g.n);
    bounded_bfs(g, v, d.params.r, scratch);
    for (const auto& layer : d.layers) {
      int home = layer.cluster_of[v];
      bool padded = true;
      for (int w : scratch.order)
        if (layer.cluster_of[w] != home) {
          padded = false;
          break;
        }
      if (padded) rep.padded_layers[v]++;
    }
  }
  rep.min_padded_layers = m;
  for (int v = 0; v < g.n; ++v)
    rep.min_padded_layers = std::min(rep.min_padded_layers, rep.padded_layers[v]);
  if (g.n == 0) rep.min_padded_layers = 0;
  rep.strong_eta_achieved =
      m == 0 ? 1.0 : 1.0 - double(rep.min_padded_layers) / double(m);
  rep.histogram.assign(m + 1, 0);
  for (int v = 0; v < g.n; ++v) rep.histogram[rep.padded_layers[v]]++;
  return rep;
}

std::string PaddedReport::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"bounded_ok\": " << (bounded_ok ? "true" : "false")
     << ", \"max_diam\": " << max_diam << ", \"size_bound\": " << size_bound
     << ", \"min_padded_layers\": " << min_padded_layers
     << ", \"strong_eta_achieved\": " << strong_eta_achieved << ", \"histogram\": [";
  for (size_t i = 0; i < histogram.size(); ++i) {
    if (i) os << ", ";
    os << histogram[i];
  }
  os << "]}";
  return os.str();
}

StrengthenResult strengthen(const Graph& g, const Decomposition& source, int r,
                            double eta) {
  if (eta <= 0.0 || eta > 1.0) throw std::runtime_error("strengthen: bad eta");
  StrengthenResult out;
  const int m = source.params.m;
  const int N = int(std::ceil(double(m) / eta)) - 1;
  const int s = std::max(0, source.params.r - 1);

  auto cfp = cover_from_padded(g, source, s);
  out.cover_ok = cfp.covers_all;
  {
    std::ostringstream note;
    note << "shrink s=" << s << " from source r=" << source.params.r
         << "; cover " << (cfp.covers_all ? "complete" : "INCOMPLETE") << "; N=" << N;
    out.notes.push_back(note.str());
  }

  Graph h = power_graph(g, 2 * r);

  // Rank of every vertex from each family's union, capped at N.
  std::vector<std::vector<int>> rank;  // rank[j][v]
  for (const auto& family : cfp.cover.layers) {
    std::vector<int> u;
    for (const auto& set : family) u.insert(u.end(), set.begin(), set.end());
    rank.push_back(u.empty() ? std::vector<int>(g.n, kInfDist)
                             : multi_source_bfs(h, u, N));
  }

  for (int i = 0; i <= N; ++i) {
    std::vector<char> in_s(g.n, 0);
    for (const auto& rk : rank)
      for (int v = 0; v < g.n; ++v)
        if (rk[v] == i) in_s[v] = 1;
    // Components of H minus S_i.
    std::vector<int> comp(g.n, -1);
    std::vector<int> queue;
    for (int v0 = 0; v0 < g.n; ++v0) {
      if (in_s[v0] || comp[v0] != -1) continue;
      comp[v0] = v0;
      queue.assign(1, v0);
      for (size_t head = 0; head < queue.size(); ++head)
        for (int w : h.adj[queue[head]])
          if (!in_s[w] && comp[w] == -1) {
            comp[w] = v0;
            queue.push_back(w);
          }
    }
    // Expand each component by r in G. Non-adjacent in H = G^{2r} means
    // G-distance > 2r, so the expansions stay disjoint.
    std::vector<int> label(g.n, -1);
    std::vector<std::vector<int>> by_comp_sources;
    {
      std::vector<int> idx(g.n, -1);
      for (int v = 0; v < g.n; ++v) {
        if (comp[v] == -1) continue;
        if (idx[comp[v]] == -1) {
          idx[comp[v]] = int(by_comp_sources.size());
          by_comp_sources.push_back({});
        }
        by_comp_sources[idx[comp[v]]].push_back(v);
      }
    }
    for (const auto& sources : by_comp_sources) {
      auto dist = multi_source_bfs(g, sources, r);
      int id = sources[0];
      for (int v = 0; v < g.n; ++v)
        if (dist[v] != kInfDist) {
          if (label[v] != -1)
            throw std::runtime_error("strengthen: expansions collide");
          label[v] = id;
        }
    }
    for (int v = 0; v < g.n; ++v)
      if (label[v] == -1) label[v] = g.n + v;
    out.dec.layers.push_back(partition_from_assignment(label));
  }
  out.dec.params.r = r;
  out.dec.params.alpha = source.params.alpha;
  out.dec.params.eta = eta;
  out.dec.params.m = N + 1;
  out.dec.params.b = source.params.b;
  out.dec.params.mode_name = "strengthen";
  return out;
}

bool is_refinement(const Partition& fine, const Partition& coarse) {
  if (fine.cluster_of.size() != coarse.cluster_of.size()) return false;
  for (const auto& cl : fine.clusters) {
    int c = coarse.cluster_of[cl[0]];
    for (int v : cl)
      if (coarse.cluster_of[v] != c) return false;
  }
  return true;
}

Partition nest_partition(const Partition& fine, const Partition& coarse) {
  const int n = int(fine.cluster_of.size());
  if (int(coarse.cluster_of.size()) != n)
    throw std::runtime_error("nest_partition: size mismatch");
  std::vector<int> label(n, -1);
  for (const auto& cl : fine.clusters) {
    int c = coarse.cluster_of[cl[0]];
    bool inside = true;
    for (int v : cl)
      if (coarse.cluster_of[v] != c) {
        inside = false;
        break;
      }
    for (int v : cl) label[v] = inside ? n + c : cl[0];
  }
  return partition_from_assignment(label);
}

}  // namespace ge
