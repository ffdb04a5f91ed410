// qroute: graphs, bounds, routing schedules, advantage sweeps, verification.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error.
// Machine output on stdout, human tables on stderr.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "qroute/qroute.hpp"

using namespace qroute;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerifyFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

void table(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  for (const auto& r : rows) std::cerr << std::left << std::setw(static_cast<int>(w) + 2) << r.first << r.second << "\n";
}

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// ---------------------------------------------------------------------------
// shared options

struct GraphOpts {
  std::string family;
  int n = -1, d = -1, r = -1;
  int budget = kDefaultAncillaBudget;
  std::string file;
  CLI::Option* budget_opt = nullptr;
};

void add_graph_opts(CLI::App* c, GraphOpts& o) {
  c->add_option("--family", o.family, "path, cycle, complete, star, wheel, ladder, grid, hypercube, butterfly");
  c->add_option("--n", o.n, "size parameter (vertices, rim, ladder order, grid side)");
  c->add_option("--d", o.d, "dimension (grid, hypercube)");
  c->add_option("--r", o.r, "butterfly order");
  o.budget_opt = c->add_option("--budget", o.budget, "ancillas per vertex")->capture_default_str();
  c->add_option("--graph-file", o.file, "graph JSON instead of a family");
}

ArchGraph build_graph(const GraphOpts& o) {
  if (!o.file.empty()) {
    auto g = graph_from_json(read_json(o.file));
    return o.budget_opt->count() ? g.with_budget(o.budget) : g;
  }
  if (o.family.empty()) throw UsageError("give --family or --graph-file");
  std::map<std::string, int> p;
  if (o.n >= 0) p["n"] = o.n;
  if (o.d >= 0) p["d"] = o.d;
  if (o.r >= 0) p["r"] = o.r;
  return generate_graph(o.family, p, o.budget);
}

struct PermOpts {
  std::string kind = "identity";
  int k = 2;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  int l = 1;
  int shift = 1;
  std::string file;
  CLI::Option* k_opt = nullptr;
};

void add_perm_params(CLI::App* c, PermOpts& o) {
  o.k_opt = c->add_option("--k", o.k, "marked tokens for sparse permutations")->capture_default_str();
  c->add_option("--seed", o.seed, "seed for random permutations")->capture_default_str();
  c->add_option("--alpha", o.alpha, "rainbow exponent")->capture_default_str();
  c->add_option("--l", o.l, "wheel segments")->capture_default_str();
  c->add_option("--shift", o.shift, "cyclic shift amount")->capture_default_str();
}

PermutationParams perm_params(const PermOpts& o) {
  PermutationParams p;
  p.k = o.k;
  p.seed = o.seed;
  p.alpha = o.alpha;
  p.l = o.l;
  p.shift = o.shift;
  return p;
}

Permutation build_perm(const ArchGraph& g, const PermOpts& o, const std::string& kind) {
  if (!o.file.empty()) {
    auto j = read_json(o.file);
    auto p = j.is_array() ? Permutation(j.get<std::vector<Vertex>>()) : permutation_from_json(j);
    if (p.size() != g.size()) throw UsageError("permutation size does not match the graph");
    return p;
  }
  // "random" with an explicit --k means k marked tokens
  if (kind == "random" && o.k_opt && o.k_opt->count()) return generate_permutation("random_k", g, perm_params(o));
  return generate_permutation(kind, g, perm_params(o));
}

struct DepthOpts {
  DepthModel m;
};

void add_depth_opts(CLI::App* c, DepthOpts& o) {
  c->add_option("--edge-cost", o.m.swap_edge, "depth of an edge swap")->capture_default_str();
  c->add_option("--local-cost", o.m.swap_local, "depth of a same-vertex swap")->capture_default_str();
  c->add_option("--tele-cost", o.m.tele_round, "depth of a teleportation round")->capture_default_str();
}

// ---------------------------------------------------------------------------
// --config: JSON object whose keys are long flag names of the chosen
// command; flags given on the command line win.

std::vector<std::string> apply_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw UsageError("--config needs a file");
  const json cfg = read_json(*(it + 1));
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  args.erase(it, it + 2);
  static const std::set<std::string> commands = {"graph", "bounds", "route", "advantage", "verify"};
  auto cmd = std::find_if(args.begin(), args.end(), [](const std::string& a) { return commands.count(a) > 0; });
  if (cmd == args.end()) {
    if (!cfg.contains("command")) throw UsageError("no command given");
    args.insert(args.begin(), cfg.at("command").get<std::string>());
    cmd = args.begin();
  }
  std::set<std::string> given;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2));
  std::vector<std::string> extra;
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, v] : cfg.items()) {
    if (key == "command" || given.count(key)) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back("--" + key);
    } else if (v.is_array()) {
      extra.push_back("--" + key);
      for (const auto& x : v) extra.push_back(scalar(x));
    } else {
      extra.push_back("--" + key);
      extra.push_back(scalar(v));
    }
  }
  args.insert(cmd + 1, extra.begin(), extra.end());
  return args;
}

// ---------------------------------------------------------------------------
// commands

int cmd_graph(const GraphOpts& go, bool dot, const std::string& out) {
  auto g = build_graph(go);
  write_out(out, dot ? graph_to_dot(g) : graph_to_json(g).dump(2) + "\n");
  table({{"vertices", std::to_string(g.size())},
         {"edges", std::to_string(g.edges().size())},
         {"diameter", std::to_string(diameter(g))},
         {"ancilla budget", std::to_string(g.ancilla_budget())}});
  return 0;
}

int cmd_bounds(const GraphOpts& go, bool no_exact, const std::string& out) {
  auto g = build_graph(go);
  if (!no_exact && g.size() > kMaxExactExpansionVertices)
    throw CapacityError("exact expansion needs N <= " + std::to_string(kMaxExactExpansionVertices) + " (N = " +
                        std::to_string(g.size()) + "); pass --no-exact for an interval");
  auto r = bounds_report(g, !no_exact);
  write_out(out, bounds_to_json(r).dump(2) + "\n");
  std::string c = r.c.exact ? r.c.upper.str() + " (exact)" : "[" + r.c.lower.str() + ", " + r.c.upper.str() + "]";
  table({{"N", std::to_string(r.n)},
         {"expansion c", c},
         {"witness", r.c.witness_kind},
         {"diameter", std::to_string(r.diam)},
         {"isoperimetric lb", std::to_string(r.iso_lb)},
         {"lambda2", fixed(r.spectral.lambda2)},
         {"advantage figure", fixed(r.advantage.min)}});
  return 0;
}

struct RouteOpts {
  std::string model = "swap";
  std::string router = "auto";
  int tele_budget = -1;
  std::string out, perm_out, circuit_out;
};

Schedule pick_swap(const ArchGraph& g, const Permutation& pi, const PermOpts& po, const std::string& router,
                   std::string& used) {
  if (router == "wheel" || (router == "auto" && g.is_family("wheel") && po.kind == "wheel" && po.file.empty())) {
    used = "wheel";
    return route_wheel(g, po.l).schedule;
  }
  if (router == "tree") {
    used = "tree";
    return route_tree(g, pi);
  }
  if (router != "auto" && router != "generic") throw UsageError("unknown swap router '" + router + "'");
  used = "generic";
  return route_generic(g, pi);
}

Schedule pick_teleport(const ArchGraph& g, const Permutation& pi, int budget, const std::string& router,
                       const DepthModel& m, std::string& used) {
  if (router == "ladder") {
    used = "ladder";
    return ladder_schedule(g, pi);
  }
  if (router != "auto" && router != "greedy") throw UsageError("unknown teleport router '" + router + "'");
  Schedule best = greedy_schedule(g, pi, budget < 0 ? g.ancilla_budget() : budget);
  used = "greedy";
  if (router == "auto" && g.is_family("ladder") && g.ancilla_budget() >= 6) {
    auto l = ladder_schedule(g, pi);
    if (depth(l, m) < depth(best, m)) {
      best = std::move(l);
      used = "ladder";
    }
  }
  return best;
}

int cmd_route(const GraphOpts& go, const PermOpts& po, const DepthOpts& dm, const RouteOpts& ro) {
  auto g = build_graph(go);
  auto pi = build_perm(g, po, po.kind);
  Schedule s;
  std::string used;
  if (ro.model == "swap") {
    s = pick_swap(g, pi, po, ro.router, used);
  } else if (ro.model == "sparse") {
    s = sparse_route(g, pi).schedule;
    used = "sparse";
  } else if (ro.model == "teleport") {
    s = pick_teleport(g, pi, ro.tele_budget, ro.router, dm.m, used);
  } else {
    throw UsageError("unknown model '" + ro.model + "' (swap, sparse, teleport)");
  }
  s.depth_model = dm.m;
  s.graph_ref = graph_hash(g);

  const auto init = TokenState::initial(g);
  const auto fin = apply_schedule(g, init, s);
  const auto got = achieved_permutation(init, fin);
  if (got != pi) throw VerifyFailure("router '" + used + "' produced a schedule that does not realize the permutation");

  const int dep = depth(s, dm.m);
  const int rounds = tele_round_count(s);
  json res{{"model", ro.model},
           {"router", used},
           {"n", g.size()},
           {"k", pi.support().size()},
           {"depth", dep},
           {"tele_rounds", rounds},
           {"timesteps", s.size()},
           {"verified", true},
           {"schedule", schedule_to_json(s)}};
  if (!ro.out.empty()) write_out(ro.out, schedule_to_json(s).dump(2) + "\n");
  if (!ro.perm_out.empty()) write_out(ro.perm_out, permutation_to_json(pi).dump() + "\n");
  if (!ro.circuit_out.empty()) write_out(ro.circuit_out, circuit_to_json(emit_circuit(g, s)).dump() + "\n");
  std::cout << res.dump(2) << "\n";
  table({{"model", ro.model},
         {"router", used},
         {"N", std::to_string(g.size())},
         {"moved tokens", std::to_string(pi.support().size())},
         {"depth", std::to_string(dep)},
         {"teleport rounds", std::to_string(rounds)},
         {"verified", "yes"}});
  return 0;
}

struct SweepOpts {
  std::vector<int> sizes;
  std::vector<std::string> perms{"diam"};
  std::string out;
};

int cmd_advantage(GraphOpts go, const PermOpts& po, const DepthOpts& dm, const SweepOpts& so) {
  if (go.family.empty()) throw UsageError("advantage needs --family");
  if (so.sizes.empty()) throw UsageError("advantage needs --sizes");
  std::ostringstream csv;
  csv << "N,family,perm,swap_depth,tele_rounds,ratio,iso_lb,diam\n";
  std::vector<std::pair<std::string, std::string>> rows;
  for (int size : so.sizes) {
    GraphOpts cell = go;
    if (go.family == "hypercube") {
      cell.d = size;
    } else if (go.family == "butterfly") {
      cell.r = size;
    } else {
      cell.n = size;
    }
    auto g = build_graph(cell);
    const auto c = vertex_expansion_bounds(g, g.size() <= kMaxExactExpansionVertices);
    const int iso = iso_lower_bound(c.upper);
    const int dia = diameter(g);
    for (const auto& kind : so.perms) {
      auto pi = build_perm(g, po, kind);
      auto rep = advantage_report(g, pi, dm.m);
      csv << g.size() << "," << go.family << "," << kind << "," << rep.swap_depth << "," << rep.tele_rounds << ","
          << fixed(rep.ratio.to_double()) << "," << iso << "," << dia << "\n";
      rows.emplace_back(go.family + " N=" + std::to_string(g.size()) + " " + kind,
                        "swap " + std::to_string(rep.swap_depth) + " (" + rep.swap_method + "), teleport " +
                            std::to_string(rep.tele_depth) + " (" + rep.tele_method + "), ratio " + rep.ratio.str());
    }
  }
  write_out(so.out, csv.str());
  table(rows);
  return 0;
}

int cmd_verify(const std::string& sched_path, const std::string& graph_path, const std::string& perm_path) {
  auto sj = read_json(sched_path);
  auto g = graph_from_json(read_json(graph_path));
  auto pj = read_json(perm_path);
  Permutation pi = pj.is_array() ? Permutation(pj.get<std::vector<Vertex>>()) : permutation_from_json(pj);
  if (pi.size() != g.size()) throw UsageError("permutation size does not match the graph");
  Schedule s;
  try {
    s = schedule_from_json(sj.contains("schedule") ? sj.at("schedule") : sj);
  } catch (const std::exception& e) {
    throw UsageError(std::string("schedule file: ") + e.what());
  }
  if (!s.graph_ref.empty() && s.graph_ref != graph_hash(g))
    throw VerifyFailure("schedule was built for graph " + s.graph_ref + ", this graph hashes to " + graph_hash(g));
  const auto init = TokenState::initial(g);
  TokenState fin;
  try {
    fin = apply_schedule(g, init, s);
  } catch (const ScheduleError& e) {
    throw VerifyFailure(std::string("first violation: ") + e.what());
  }
  if (!fin.ancillas_clear()) throw VerifyFailure("ancilla slots still hold tokens at the end");
  const auto got = achieved_permutation(init, fin);
  if (got != pi) {
    std::ostringstream os;
    os << "realized permutation differs:";
    int shown = 0;
    for (Vertex v = 0; v < g.size() && shown < 10; ++v)
      if (got(v) != pi(v)) {
        os << "\n  token " << v << ": expected at " << pi(v) << ", found at " << got(v);
        ++shown;
      }
    throw VerifyFailure(os.str());
  }
  table({{"timesteps", std::to_string(s.size())}, {"depth", std::to_string(depth(s, s.depth_model))}, {"verdict", "ok"}});
  std::cout << json{{"verified", true}, {"depth", depth(s, s.depth_model)}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"qroute: routing on architecture graphs with swaps and teleportation"};
  app.require_subcommand(1);
  app.add_option("--config", "JSON file with flag values (flags on the command line win)");

  GraphOpts go;
  PermOpts po;
  DepthOpts dm;

  auto* graph = app.add_subcommand("graph", "print a graph as JSON or DOT");
  bool dot = false;
  std::string graph_out;
  add_graph_opts(graph, go);
  graph->add_flag("--dot", dot, "DOT instead of JSON");
  graph->add_option("--out", graph_out, "output file");

  auto* bounds = app.add_subcommand("bounds", "expansion, isoperimetric and spectral figures");
  bool no_exact = false;
  std::string bounds_out;
  add_graph_opts(bounds, go);
  bounds->add_flag("--no-exact", no_exact, "skip exhaustive expansion, report an interval");
  bounds->add_option("--out", bounds_out, "output file");

  auto* route = app.add_subcommand("route", "build, verify and print a schedule");
  RouteOpts ro;
  add_graph_opts(route, go);
  route->add_option("--model", ro.model, "swap, sparse or teleport")->capture_default_str();
  route->add_option("--router", ro.router, "auto, generic, tree, wheel, greedy, ladder")->capture_default_str();
  route->add_option("--perm", po.kind, "permutation family")->capture_default_str();
  route->add_option("--perm-file", po.file, "permutation JSON");
  add_perm_params(route, po);
  add_depth_opts(route, dm);
  route->add_option("--tele-budget", ro.tele_budget, "ancillas the greedy teleport scheduler may use");
  route->add_option("--out", ro.out, "write the schedule JSON here");
  route->add_option("--perm-out", ro.perm_out, "write the permutation JSON here");
  route->add_option("--circuit", ro.circuit_out, "write the Clifford circuit JSON here");

  auto* adv = app.add_subcommand("advantage", "swap depth against teleport rounds, as CSV");
  SweepOpts so;
  add_graph_opts(adv, go);
  adv->add_option("--sizes", so.sizes, "values of the family's size parameter")->expected(1, -1);
  adv->add_option("--perm", so.perms, "permutation families")->expected(1, -1);
  add_perm_params(adv, po);
  add_depth_opts(adv, dm);
  adv->add_option("--out", so.out, "CSV file");

  auto* verify = app.add_subcommand("verify", "check a schedule against a graph and permutation");
  std::string vs, vg, vp;
  verify->add_option("--schedule", vs, "schedule JSON")->required();
  verify->add_option("--graph", vg, "graph JSON")->required();
  verify->add_option("--perm", vp, "permutation JSON")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (graph->parsed()) return cmd_graph(go, dot, graph_out);
    if (bounds->parsed()) return cmd_bounds(go, no_exact, bounds_out);
    if (route->parsed()) return cmd_route(go, po, dm, ro);
    if (adv->parsed()) return cmd_advantage(go, po, dm, so);
    if (verify->parsed()) return cmd_verify(vs, vg, vp);
  } catch (const VerifyFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const ScheduleError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
