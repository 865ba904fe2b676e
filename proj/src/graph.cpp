#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ge {

static void discover_components(Graph& g) {
  g.component_of.assign(g.n, -1);
  g.components.clear();
  std::vector<int> queue;
  for (int s = 0; s < g.n; ++s) {
    if (g.component_of[s] != -1) continue;
    int id = int(g.components.size());
    g.components.emplace_back();
    auto& comp = g.components.back();
    queue.clear();
    queue.push_back(s);
    g.component_of[s] = id;
    for (size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      comp.push_back(v);
      for (int w : g.adj[v]) {
        if (g.component_of[w] == -1) {
          g.component_of[w] = id;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
  }
}

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 0) throw std::runtime_error("make_graph: negative vertex count");
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::runtime_error("make_graph: endpoint out of range");
    if (u == v) throw std::runtime_error("make_graph: loop edge rejected");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  discover_components(g);
  return g;
}

Graph load_graph(const std::string& text) {
  std::vector<std::pair<int, int>> edges;
  int declared_n = -1;
  int max_id = -1;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t pos = line.find_first_not_of(" \t");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line.substr(pos));
    std::string tok;
    ls >> tok;
    if (tok == "n") {
      long long cnt = -1;
      std::string extra;
      if (!(ls >> cnt) || cnt < 0 || (ls >> extra))
        throw std::runtime_error("load_graph: malformed header at line " + std::to_string(line_no));
      declared_n = int(cnt);
      continue;
    }
    long long u, v;
    std::string extra;
    try {
      size_t used = 0;
      u = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("load_graph: malformed line " + std::to_string(line_no));
    }
    if (!(ls >> v) || (ls >> extra))
      throw std::runtime_error("load_graph: malformed line " + std::to_string(line_no));
    if (u < 0 || v < 0)
      throw std::runtime_error("load_graph: negative id at line " + std::to_string(line_no));
    if (u == v)
      throw std::runtime_error("load_graph: loop edge at line " + std::to_string(line_no));
    edges.emplace_back(int(u), int(v));
    max_id = std::max(max_id, int(std::max(u, v)));
  }
  int n = std::max(declared_n, max_id + 1);
  return make_graph(n, edges);
}

void bounded_bfs(const Graph& g, int source, int radius, BfsScratch& s) {
  if (source < 0 || source >= g.n)
    throw std::runtime_error("bounded_bfs: source out of range");
  s.reset(g.n);
  s.dist[source] = 0;
  s.queue.push_back(source);
  for (size_t head = 0; head < s.queue.size(); ++head) {
    int v = s.queue[head];
    s.order.push_back(v);
    int dv = s.dist[v];
    if (radius >= 0 && dv == radius) continue;
    for (int w : g.adj[v]) {
      if (s.dist[w] == kInfDist) {
        s.dist[w] = dv + 1;
        s.queue.push_back(w);
      }
    }
  }
}

std::vector<int> bfs_distances(const Graph& g, int source, int radius) {
  BfsScratch s;
  bounded_bfs(g, source, radius, s);
  return s.dist;
}

std::vector<int> multi_source_bfs(const Graph& g, const std::vector<int>& sources,
                                  int radius) {
  std::vector<int> dist(g.n, kInfDist);
  std::vector<int> queue;
  queue.reserve(sources.size());
  for (int s : sources) {
    if (s < 0 || s >= g.n) throw std::runtime_error("bfs source out of range");
    if (dist[s] == kInfDist) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    if (radius >= 0 && dist[v] >= radius) continue;
    for (int w : g.adj[v]) {
      if (dist[w] == kInfDist) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<int> ball(const Graph& g, int v, int r) {
  if (r < 0) throw std::runtime_error("ball: negative radius");
  BfsScratch s;
  bounded_bfs(g, v, r, s);
  std::vector<int> out = s.order;
  std::sort(out.begin(), out.end());
  return out;
}

GrowthProfile growth_profile(const Graph& g, int r_max) {
  if (g.n == 0) throw std::runtime_error("growth_profile: empty graph");
  if (r_max < 1) throw std::runtime_error("growth_profile: r_max must be >= 1");
  GrowthProfile p;
  p.gamma.assign(r_max + 1, 0);
  BfsScratch s;
  std::vector<long long> cum(r_max + 1);
  for (int v = 0; v < g.n; ++v) {
    bounded_bfs(g, v, r_max, s);
    std::fill(cum.begin(), cum.end(), 0);
    for (int w : s.order) cum[s.dist[w]]++;
    for (int r = 1; r <= r_max; ++r) cum[r] += cum[r - 1];
    for (int r = 0; r <= r_max; ++r) p.gamma[r] = std::max(p.gamma[r], cum[r]);
  }
  p.rho.assign(r_max + 1, 0.0);
  for (int r = 1; r <= r_max; ++r) {
    p.rho[r] = std::log(double(p.gamma[r])) / std::log(double(r + 1));
    p.er_bound = std::max(p.er_bound, p.rho[r]);
  }
  return p;
}

BR0Check check_b_r0(const GrowthProfile& profile, double b, double r0) {
  BR0Check c;
  for (int r = 1; r < int(profile.gamma.size()); ++r) {
    if (r < r0) continue;
    if (double(profile.gamma[r]) > std::pow(double(r), b)) {
      c.ok = false;
      c.first_violation = r;
      return c;
    }
  }
  return c;
}

void Partition::ensure_diams(const Graph& g) {
  if (!diam.empty()) return;
  diam.assign(clusters.size(), 0);
  BfsScratch s;
  for (size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    if (cl.size() <= 1) continue;
    int best = 0;
    for (int v : cl) {
      // Whole-graph metric: BFS over G, stop once all cluster members are seen.
      s.reset(g.n);
      s.dist[v] = 0;
      s.queue.push_back(v);
      size_t remaining = cl.size();
      for (size_t head = 0; head < s.queue.size() && remaining > 0; ++head) {
        int x = s.queue[head];
        if (cluster_of[x] == int(c)) {
          best = std::max(best, s.dist[x]);
          --remaining;
        }
        for (int w : g.adj[x]) {
          if (s.dist[w] == kInfDist) {
            s.dist[w] = s.dist[x] + 1;
            s.queue.push_back(w);
          }
        }
      }
      // The early break can leave enqueued vertices unprocessed; hand the
      // whole queue to reset() so their dist entries are cleared next time.
      s.order = s.queue;
      // Members in other components are infinitely far; that would violate the
      // partition invariants upstream, so treat as an error.
      if (remaining > 0)
        throw std::runtime_error("Partition::ensure_diams: cluster spans components");
    }
    diam[c] = best;
  }
}

Partition partition_from_assignment(const std::vector<int>& labels) {
  Partition p;
  int n = int(labels.size());
  p.cluster_of.assign(n, -1);
  int max_label = -1;
  for (int v = 0; v < n; ++v) {
    if (labels[v] < 0) throw std::runtime_error("partition_from_assignment: negative label");
    max_label = std::max(max_label, labels[v]);
  }
  std::vector<int> remap(max_label + 1, -1);  // label -> compact id, in smallest-member order
  for (int v = 0; v < n; ++v) {
    int lab = labels[v];
    int id = remap[lab];
    if (id == -1) {
      id = int(p.clusters.size());
      remap[lab] = id;
      p.clusters.emplace_back();
    }
    p.cluster_of[v] = id;
    p.clusters[id].push_back(v);
  }
  return p;
}

Graph quotient_graph(const Graph& g, const Partition& p) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u) {
    for (int v : g.adj[u]) {
      if (v <= u) continue;
      int cu = p.cluster_of[u], cv = p.cluster_of[v];
      if (cu != cv) edges.emplace_back(cu, cv);
    }
  }
  return make_graph(p.size(), edges);
}

std::vector<int> greedy_proper_coloring(const Graph& g) {
  std::vector<int> color(g.n, -1);
  std::vector<int> used;  // color -> stamp
  for (int v = 0; v < g.n; ++v) {
    for (int w : g.adj[v]) {
      int c = w < v ? color[w] : -1;
      if (c >= 0) {
        if (c >= int(used.size())) used.resize(c + 1, -1);
        used[c] = v;
      }
    }
    int c = 0;
    while (c < int(used.size()) && used[c] == v) ++c;
    color[v] = c;
  }
  return color;
}

std::vector<int> greedy_power_coloring(const Graph& g, int r) {
  if (r < 1) throw std::runtime_error("greedy_power_coloring: r must be >= 1");
  std::vector<int> color(g.n, -1);
  std::vector<int> used;
  BfsScratch s;
  for (int v = 0; v < g.n; ++v) {
    bounded_bfs(g, v, r, s);
    for (int w : s.order) {
      int c = color[w];  // only already-colored vertices (w < v) contribute
      if (c >= 0) {
        if (c >= int(used.size())) used.resize(c + 1, -1);
        used[c] = v;
      }
    }
    int c = 0;
    while (c < int(used.size()) && used[c] == v) ++c;
    color[v] = c;
  }
  return color;
}

Graph power_graph(const Graph& g, int r) {
  if (r < 1) throw std::runtime_error("power_graph: r must be >= 1");
  Graph h;
  h.n = g.n;
  h.adj.assign(g.n, {});
  BfsScratch s;
  for (int v = 0; v < g.n; ++v) {
    bounded_bfs(g, v, r, s);
    for (int w : s.order)
      if (w != v) h.adj[v].push_back(w);
    std::sort(h.adj[v].begin(), h.adj[v].end());
  }
  h.component_of = g.component_of;
  h.components = g.components;
  return h;
}

}  // namespace ge
