#include "generators.hpp"

#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace ge {

static std::vector<long long> parse_args(const std::string& s, size_t expected) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("generate: missing ':' in family string '" + s + "'");
  std::vector<long long> out;
  std::string rest = s.substr(colon + 1);
  size_t pos = 0;
  while (pos <= rest.size()) {
    auto comma = rest.find(',', pos);
    std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("generate: bad number in family string '" + s + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected)
    throw std::runtime_error("generate: wrong argument count in '" + s + "'");
  return out;
}

Graph generate(const std::string& family) {
  auto colon = family.find(':');
  std::string name = colon == std::string::npos ? family : family.substr(0, colon);
  std::vector<std::pair<int, int>> edges;
  if (name == "path") {
    auto a = parse_args(family, 1);
    int n = int(a[0]);
    if (n < 1) throw std::runtime_error("generate: path needs n >= 1");
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return make_graph(n, edges);
  }
  if (name == "cycle") {
    auto a = parse_args(family, 1);
    int n = int(a[0]);
    if (n < 3) throw std::runtime_error("generate: cycle needs n >= 3");
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return make_graph(n, edges);
  }
  if (name == "grid" || name == "gridinf") {
    auto a = parse_args(family, 1);
    int k = int(a[0]);
    if (k < 1) throw std::runtime_error("generate: grid needs k >= 1");
    auto id = [k](int x, int y) { return x * k + y; };
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < k; ++y) {
        if (x + 1 < k) edges.emplace_back(id(x, y), id(x + 1, y));
        if (y + 1 < k) edges.emplace_back(id(x, y), id(x, y + 1));
        if (name == "gridinf") {
          if (x + 1 < k && y + 1 < k) edges.emplace_back(id(x, y), id(x + 1, y + 1));
          if (x + 1 < k && y > 0) edges.emplace_back(id(x, y), id(x + 1, y - 1));
        }
      }
    }
    return make_graph(k * k, edges);
  }
  if (name == "tree") {
    auto a = parse_args(family, 2);
    int depth = int(a[0]), branch = int(a[1]);
    if (depth < 0 || branch < 1) throw std::runtime_error("generate: tree needs depth >= 0, branching >= 1");
    // Complete rooted tree: vertex 0 is the root, children appended level by level.
    std::vector<int> level = {0};
    int next = 1;
    for (int d = 0; d < depth; ++d) {
      std::vector<int> next_level;
      for (int v : level) {
        for (int c = 0; c < branch; ++c) {
          edges.emplace_back(v, next);
          next_level.push_back(next);
          ++next;
        }
      }
      level = std::move(next_level);
    }
    return make_graph(next, edges);
  }
  if (name == "er-bounded") {
    auto a = parse_args(family, 3);
    int n = int(a[0]), d = int(a[1]);
    uint64_t seed = uint64_t(a[2]);
    if (n < 1 || d < 1) throw std::runtime_error("generate: er-bounded needs n >= 1, d >= 1");
    Rng rng(mix(seed, 0x6572626e64ULL));
    std::vector<int> deg(n, 0);
    std::vector<std::vector<int>> adj(n);
    long long attempts = 4LL * n * d;
    for (long long i = 0; i < attempts; ++i) {
      int u = rng.uniform_int(n);
      int v = rng.uniform_int(n);
      if (u == v || deg[u] >= d || deg[v] >= d) continue;
      bool dup = false;
      for (int w : adj[u])
        if (w == v) { dup = true; break; }
      if (dup) continue;
      adj[u].push_back(v);
      adj[v].push_back(u);
      ++deg[u];
      ++deg[v];
      edges.emplace_back(u, v);
    }
    return make_graph(n, edges);
  }
  throw std::runtime_error("generate: unknown family '" + name + "'");
}

}  // namespace ge
