// Batch front door: subcommands wiring graph ingestion -> construction ->
// verification -> reports. Exit codes: 0 success, 1 verification failure,
// 2 solver non-convergence, 3 I/O or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "carving.hpp"
#include "decomposition.hpp"
#include "embedding.hpp"
#include "generators.hpp"
#include "graph.hpp"

using namespace ge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitSolver = 2;
constexpr int kExitConfig = 3;

struct Common {
  std::string input;
  std::string gen;
  std::string out;
  std::string report;
  uint64_t seed = 0;
  std::string override_str;
  std::string mode = "desk";
  long long budget = 0;
  std::string pairs = "exhaustive";
};

void add_common(CLI::App* cmd, Common& c, bool needs_graph = true) {
  if (needs_graph) {
    cmd->add_option("--input", c.input, "edge-list file");
    cmd->add_option("--gen", c.gen,
                    "generator family "
                    "(path:n|cycle:n|grid:k|gridinf:k|tree:d,b|er-bounded:n,d,seed)");
  }
  cmd->add_option("--seed", c.seed, "64-bit master seed");
  cmd->add_option("--out", c.out, "main artifact file (default stdout section)");
  cmd->add_option("--report", c.report, "JSON report file (default stdout)");
  cmd->add_option("--override", c.override_str, "comma list k=v of parameter overrides");
  cmd->add_option("--mode", c.mode, "theory|desk")
      ->check(CLI::IsMember({"theory", "desk"}));
  cmd->add_option("--budget", c.budget, "resampling budget (0 = default)");
  cmd->add_option("--pairs", c.pairs, "exhaustive | sample:<rate>");
}

Graph load_input(const Common& c) {
  if (!c.gen.empty() && !c.input.empty())
    throw std::runtime_error("give either --input or --gen, not both");
  if (!c.gen.empty()) return generate(c.gen);
  if (c.input.empty()) throw std::runtime_error("one of --input or --gen is required");
  std::ifstream in(c.input);
  if (!in) throw std::runtime_error("cannot open " + c.input);
  std::ostringstream body;
  body << in.rdbuf();
  return load_graph(body.str());
}

std::map<std::string, double> parse_overrides(const std::string& s) {
  std::map<std::string, double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("override entry needs k=v: " + item);
    std::string key = item.substr(0, eq);
    size_t used = 0;
    double val = std::stod(item.substr(eq + 1), &used);
    if (used != item.size() - eq - 1)
      throw std::runtime_error("bad override value: " + item);
    out[key] = val;
  }
  return out;
}

double get_ov(const std::map<std::string, double>& ov, const std::string& key,
              double fallback) {
  auto it = ov.find(key);
  return it == ov.end() ? fallback : it->second;
}

double parse_pair_rate(const std::string& s) {
  if (s == "exhaustive") return 1.0;
  if (s.rfind("sample:", 0) == 0) {
    double rate = std::stod(s.substr(7));
    if (!(rate > 0.0 && rate <= 1.0))
      throw std::runtime_error("sample rate must be in (0, 1]");
    return rate;
  }
  throw std::runtime_error("--pairs must be exhaustive or sample:<rate>");
}

int env_threads() {
  const char* env = std::getenv("GRIDEMBED_THREADS");
  return env ? std::max(1, atoi(env)) : 1;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string config_json(const std::string& sub, const Common& c) {
  std::ostringstream os;
  os << "{\"subcommand\": \"" << sub << "\", \"input\": \"" << json_escape(c.input)
     << "\", \"gen\": \"" << json_escape(c.gen) << "\", \"seed\": " << c.seed
     << ", \"out\": \"" << json_escape(c.out) << "\", \"override\": \""
     << json_escape(c.override_str) << "\", \"mode\": \"" << c.mode
     << "\", \"budget\": " << c.budget << ", \"pairs\": \"" << json_escape(c.pairs)
     << "\", \"threads\": " << env_threads() << "}";
  return os.str();
}

/** Atomic write: temp file in the same directory, then rename. */
void write_file(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void emit_report(const Common& c, const std::string& json) {
  if (c.report.empty())
    std::fputs((json + "\n").c_str(), stdout);
  else
    write_file(c.report, json + "\n");
}

void emit_artifact(const Common& c, const std::string& content) {
  if (c.out.empty())
    std::fputs(content.c_str(), stdout);
  else
    write_file(c.out, content);
}

int cmd_growth(const Common& c, int rmax, double b, double r0) {
  Graph g = load_input(c);
  auto prof = growth_profile(g, rmax);
  auto br = check_b_r0(prof, b, r0);
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"config\": " << config_json("growth", c) << ", \"n\": " << g.n
     << ", \"gamma\": [";
  for (size_t i = 0; i < prof.gamma.size(); ++i)
    os << (i ? ", " : "") << prof.gamma[i];
  os << "], \"rho\": [";
  for (size_t i = 1; i < prof.rho.size(); ++i) os << (i > 1 ? ", " : "") << prof.rho[i];
  os << "], \"er_bound\": " << prof.er_bound << ", \"b\": " << b
     << ", \"r0\": " << r0 << ", \"b_r0_ok\": " << (br.ok ? "true" : "false")
     << ", \"first_violation\": " << br.first_violation << "}";
  emit_report(c, os.str());
  return kExitOk;
}

int cmd_carve(const Common& c) {
  Graph g = load_input(c);
  auto ov = parse_overrides(c.override_str);
  double p = get_ov(ov, "p", 0.1);
  double b = get_ov(ov, "b", 2.0);
  int M = int(get_ov(ov, "M", -1));
  if (M < 0) M = auto_M(b, p);
  auto classes = make_color_classes(g, M);
  TGeoParams tg{p, M};
  Rng rng(mix(c.seed, 0x63727665ULL));
  std::vector<int> t(g.n);
  for (int v = 0; v < g.n; ++v) t[v] = tgeo_sample(tg, rng);
  CarvingInput in{&g, M, &classes, &t};
  auto res = carve(in);
  res.part.ensure_diams(g);
  int max_diam = 0;
  for (int d : res.part.diam) max_diam = std::max(max_diam, d);
  std::ostringstream os;
  os << "{\"config\": " << config_json("carve", c) << ", \"n\": " << g.n
     << ", \"p\": " << p << ", \"M\": " << M << ", \"clusters\": " << res.part.size()
     << ", \"max_diam\": " << max_diam << ", \"diam_ok\": "
     << (max_diam <= 2 * M ? "true" : "false") << "}";
  std::ostringstream part;
  for (int v = 0; v < g.n; ++v)
    part << v << "\t" << res.part.cluster_of[v] << "\n";
  emit_artifact(c, part.str());
  emit_report(c, os.str());
  return max_diam <= 2 * M ? kExitOk : kExitVerify;
}

int cmd_cutrate(const Common& c, int trials) {
  Graph g = load_input(c);
  auto ov = parse_overrides(c.override_str);
  double b = get_ov(ov, "b", 2.0);
  double p = get_ov(ov, "p", 0.01);
  int M = int(get_ov(ov, "M", -1));
  int r = int(get_ov(ov, "r", 10));
  int rmax = int(get_ov(ov, "growth_rmax", 16));
  auto rep = cut_rate_experiment(g, b, p, M, r, trials, c.seed, rmax,
                                 c.gen.empty() ? c.input : c.gen);
  std::ostringstream os;
  os << "{\"config\": " << config_json("cutrate", c) << ", \"result\": "
     << rep.to_json() << "}";
  emit_report(c, os.str());
  return kExitOk;
}

BuildMode build_mode_of(const std::string& mode,
                        const std::map<std::string, double>& ov) {
  if (mode == "desk") return BuildMode::Override;
  return get_ov(ov, "theory2", 0) != 0 ? BuildMode::TheoryII : BuildMode::TheoryI;
}

int cmd_decompose(const Common& c) {
  Graph g = load_input(c);
  auto ovm = parse_overrides(c.override_str);
  double b = get_ov(ovm, "b", 2.0);
  double eps = get_ov(ovm, "eps", 0.5);
  int r = int(get_ov(ovm, "r", 2));
  BuildOverride ov{int(get_ov(ovm, "m", 3)), get_ov(ovm, "p", 0.05),
                   int(get_ov(ovm, "M", 10)), get_ov(ovm, "alpha", 2.0)};
  BuildMode mode = build_mode_of(c.mode, ovm);
  auto res = build_padded(g, b, eps, r, mode, &ov, c.seed, c.budget);
  auto rep = verify_padded(g, res.dec);
  std::ostringstream os;
  os << "{\"config\": " << config_json("decompose", c) << ", \"converged\": "
     << (res.converged ? "true" : "false") << ", \"stats\": " << res.stats.to_json()
     << ", \"verify\": " << rep.to_json() << "}";
  emit_artifact(c, res.dec.to_json() + "\n");
  emit_report(c, os.str());
  if (!res.converged) return kExitSolver;
  bool ok = rep.min_padded_layers >= 1 &&
            (mode == BuildMode::Override || rep.bounded_ok);
  return ok ? kExitOk : kExitVerify;
}

int cmd_strengthen(const Common& c) {
  Graph g = load_input(c);
  auto ovm = parse_overrides(c.override_str);
  double b = get_ov(ovm, "b", 2.0);
  double eps = get_ov(ovm, "eps", 0.5);
  double eta = get_ov(ovm, "eta", 1.0 / 3.0);
  int r = int(get_ov(ovm, "r", 2));
  BuildOverride ov{int(get_ov(ovm, "m", 3)), get_ov(ovm, "p", 0.05),
                   int(get_ov(ovm, "M", 10)), get_ov(ovm, "alpha", 2.0)};
  auto src = build_padded(g, b, eps, r, build_mode_of(c.mode, ovm), &ov, c.seed,
                          c.budget);
  if (!src.converged) {
    emit_report(c, "{\"config\": " + config_json("strengthen", c) +
                       ", \"converged\": false, \"stats\": " +
                       src.stats.to_json() + "}");
    return kExitSolver;
  }
  auto sres = strengthen(g, src.dec, r, eta);
  auto rep = verify_padded(g, sres.dec);
  int layers = int(sres.dec.layers.size());
  int want = int(std::ceil((1.0 - eta) * layers - 1e-9));
  std::ostringstream os;
  os << "{\"config\": " << config_json("strengthen", c) << ", \"converged\": true"
     << ", \"stats\": " << src.stats.to_json() << ", \"layers\": " << layers
     << ", \"required_padded\": " << want << ", \"verify\": " << rep.to_json()
     << ", \"notes\": [";
  for (size_t i = 0; i < sres.notes.size(); ++i)
    os << (i ? ", " : "") << "\"" << json_escape(sres.notes[i]) << "\"";
  os << "]}";
  emit_artifact(c, sres.dec.to_json() + "\n");
  emit_report(c, os.str());
  return rep.min_padded_layers >= want ? kExitOk : kExitVerify;
}

int embed_common(const Common& c, bool injective, int s) {
  Graph g = load_input(c);
  auto ovm = parse_overrides(c.override_str);
  double b = get_ov(ovm, "b", 2.0);
  double eps = get_ov(ovm, "eps", 0.5);
  double rate = parse_pair_rate(c.pairs);
  DeskSchedule desk;
  const DeskSchedule* deskp = nullptr;
  if (c.mode == "desk") {
    desk = make_default_desk(g, eps);
    deskp = &desk;
  }
  EmbedResult res = injective
                        ? injective_embed(g, b, eps, s, deskp, c.seed, c.budget, rate)
                        : coarse_embed(g, b, eps, deskp, c.seed, c.budget, rate);
  if (!res.report.ok) {
    emit_report(c, "{\"config\": " + config_json(injective ? "inject" : "embed", c) +
                       ", \"report\": " + res.report.to_json() + "}");
    return kExitSolver;
  }
  auto rep = verify_embedding(g, res.f, eps, res.report.r_emp, rate, c.seed);
  std::ostringstream os;
  os << "{\"config\": " << config_json(injective ? "inject" : "embed", c)
     << ", \"report\": " << res.report.to_json() << ", \"verify\": "
     << rep.to_json() << "}";
  emit_artifact(c, res.f.to_tsv());
  emit_report(c, os.str());
  bool ok = rep.contraction_ok &&
            (rep.pairs_checked == 0 || rep.min_far_ratio >= 1.0 ||
             rep.min_far_ratio == kNoFarPairs);
  if (injective) ok = ok && rep.injective;
  return ok ? kExitOk : kExitVerify;
}

GridEmbedding read_tsv(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  GridEmbedding f;
  f.coords.assign(n, {});
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    int v;
    if (!(is >> v) || v < 0 || v >= n)
      throw std::runtime_error("bad embedding row: " + line);
    int x;
    std::vector<int> row;
    while (is >> x) row.push_back(x);
    f.coords[v] = std::move(row);
    ++rows;
  }
  if (rows != n) throw std::runtime_error("embedding rows do not match vertex count");
  f.dim = f.coords.empty() ? 0 : int(f.coords[0].size());
  for (const auto& row : f.coords)
    if (int(row.size()) != f.dim)
      throw std::runtime_error("embedding rows have mixed dimensions");
  return f;
}

int cmd_verify(const Common& c, const std::string& embedding_path, double remp) {
  Graph g = load_input(c);
  auto ovm = parse_overrides(c.override_str);
  double eps = get_ov(ovm, "eps", 0.5);
  GridEmbedding f = read_tsv(embedding_path, g.n);
  auto rep = verify_embedding(g, f, eps, remp, parse_pair_rate(c.pairs), c.seed);
  std::ostringstream os;
  os << "{\"config\": " << config_json("verify", c) << ", \"r_emp\": " << remp
     << ", \"verify\": " << rep.to_json() << "}";
  emit_report(c, os.str());
  bool ok = rep.contraction_ok && rep.injective &&
            (rep.pairs_checked == 0 || rep.min_far_ratio >= 1.0);
  return ok ? kExitOk : kExitVerify;
}

int cmd_generate(const Common& c) {
  if (c.gen.empty()) throw std::runtime_error("generate needs --gen");
  Graph g = generate(c.gen);
  std::ostringstream os;
  os << "n " << g.n << "\n";
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v) os << u << " " << v << "\n";
  emit_artifact(c, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid-embedding toolkit: growth profiles, carved decompositions, "
               "coarse embeddings into integer grids, and their verifiers"};
  app.require_subcommand(1);

  Common c_growth, c_carve, c_cutrate, c_dec, c_str, c_embed, c_inject, c_verify,
      c_genr;
  int rmax = 16, trials = 20, s_param = 1;
  double b_growth = 2.0, r0_growth = 1.0, remp = 1.0;
  std::string embedding_path;

  auto* growth = app.add_subcommand("growth", "growth profile gamma(r), rho(r)");
  add_common(growth, c_growth);
  growth->add_option("--rmax", rmax, "max radius");
  growth->add_option("--b", b_growth, "growth exponent to check");
  growth->add_option("--r0", r0_growth, "radius from which the bound is asserted");

  auto* carve_cmd = app.add_subcommand("carve", "one carved partition with tGeo radii");
  add_common(carve_cmd, c_carve);

  auto* cutrate = app.add_subcommand("cutrate", "cut-fraction experiment vs 20rp");
  add_common(cutrate, c_cutrate);
  cutrate->add_option("--trials", trials, "number of carvings");

  auto* dec = app.add_subcommand("decompose", "padded decomposition via carving + resampling");
  add_common(dec, c_dec);

  auto* str = app.add_subcommand("strengthen", "strong padded decomposition");
  add_common(str, c_str);

  auto* emb = app.add_subcommand("embed", "coarse embedding into an integer grid");
  add_common(emb, c_embed);

  auto* inj = app.add_subcommand("inject", "injective coarse embedding");
  add_common(inj, c_inject);
  inj->add_option("--s", s_param, "separation parameter of the color digits");

  auto* ver = app.add_subcommand("verify", "re-verify a stored embedding");
  add_common(ver, c_verify);
  ver->add_option("--embedding", embedding_path, "TSV embedding file")->required();
  ver->add_option("--remp", remp, "distance from which the far-pair bound applies");

  auto* genr = app.add_subcommand("generate", "emit a generated graph as an edge list");
  add_common(genr, c_genr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*growth) return cmd_growth(c_growth, rmax, b_growth, r0_growth);
    if (*carve_cmd) return cmd_carve(c_carve);
    if (*cutrate) return cmd_cutrate(c_cutrate, trials);
    if (*dec) return cmd_decompose(c_dec);
    if (*str) return cmd_strengthen(c_str);
    if (*emb) return embed_common(c_embed, false, 1);
    if (*inj) return embed_common(c_inject, true, s_param);
    if (*ver) return cmd_verify(c_verify, embedding_path, remp);
    if (*genr) return cmd_generate(c_genr);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
