// curtainlab: build wall/curtain machinery over finite complex windows, run
// queries and verification suites, and search for short rank-one elements.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "curtainlab/generators.hpp"
#include "curtainlab/json_io.hpp"
#include "curtainlab/projection.hpp"

using namespace curtainlab;

namespace {

constexpr std::size_t kDefaultBudget = 2000000;

std::size_t vertex_budget(std::size_t flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("CURTAINLAB_BUDGET")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ParseError:
    case ErrorKind::UnknownGenerator:
      return 2;
    case ErrorKind::BudgetExceeded:
      return 3;
    default:
      return 1;
  }
}

Json manifest(const std::string& command, const std::vector<std::string>& inputs,
              const Json& parameters, std::uint64_t seed,
              const std::vector<std::string>& outputs) {
  Json m;
  m["command"] = command;
  m["inputs"] = inputs;
  m["parameters"] = parameters;
  m["seed"] = seed;
  m["outputs"] = outputs;
  return m;
}

struct LoadedComplex {
  std::optional<BallComplex> ball;       // when built from a presentation
  std::optional<MedianWindow> window;    // when built from an explicit graph
  const MedianWindow& win() const { return ball ? ball->window() : *window; }
};

LoadedComplex load_complex(const std::string& path, std::size_t budget) {
  Json doc = load_document(path);
  LoadedComplex out;
  if (doc.contains("presentation")) {
    Presentation p = presentation_from_json(doc.at("presentation"));
    out.ball = BallComplex::build(p, doc.at("horizon").get<int>(), budget);
  } else if (doc.contains("generators")) {
    Presentation p = presentation_from_json(doc);
    fail(ErrorKind::ParseError,
         path + " is a presentation; build it first (curtainlab build --raag ...)");
  } else {
    out.window = window_from_json(doc);
  }
  return out;
}

int cmd_build(const std::string& raag, const std::string& graph, int horizon, int guard,
              std::size_t budget, std::uint64_t seed, const std::string& out_dir,
              bool with_system) {
  Json params{{"horizon", horizon}, {"guard", guard}, {"budget", budget},
              {"system", with_system}};
  std::vector<std::string> outputs;

  if (!raag.empty()) {
    Json pj = load_document(raag);
    Presentation p = presentation_from_json(pj);
    BallComplex ball = BallComplex::build(p, horizon, budget);
    Json doc;
    doc["manifest"] = manifest("build", {raag}, params, seed, outputs);
    doc["presentation"] = presentation_to_json(p);
    doc["horizon"] = horizon;
    doc["window"] = window_to_json(ball.window());
    std::string out_path = out_dir + "/complex.json";
    write_document(out_path, doc);
    std::cout << "vertices " << ball.window().size() << ", walls "
              << ball.window().walls().size() << ", guard " << ball.window().guard() << "\n";
    if (with_system) {
      FlatSystem system = FlatSystem::build(ball, seed);
      Json sj;
      sj["manifest"] = manifest("build", {raag}, params, seed, outputs);
      sj["presentation"] = presentation_to_json(p);
      sj["horizon"] = horizon;
      sj["flats"] = system.flat_count();
      sj["constants"] = {{"lambda", system.constants().lambda},
                         {"K", system.constants().K},
                         {"N", system.constants().N},
                         {"E_window", system.constants().E_window},
                         {"E_formula", system.constants().E_formula}};
      sj["contact"] = {{"nodes", system.contact().g.size()},
                       {"edges", system.contact().g.edge_count()},
                       {"excluded_walls", system.contact().excluded}};
      write_document(out_dir + "/system.json", sj);
      std::cout << "system: " << system.flat_count() << " flats, E_window "
                << system.constants().E_window << ", lambda " << system.constants().lambda
                << "\n";
    }
    return 0;
  }

  if (!graph.empty()) {
    Json gj = load_document(graph);
    MedianWindow w = window_from_json(gj);
    Json doc;
    doc["manifest"] = manifest("build", {graph}, params, seed, outputs);
    doc["window"] = window_to_json(w);
    doc["walls"] = walls_to_json(w);
    write_document(out_dir + "/complex.json", doc);
    std::cout << "vertices " << w.size() << ", walls " << w.walls().size() << ", guard "
              << w.guard() << "\n";
    return 0;
  }

  fail(ErrorKind::ParseError, "build needs --raag or --graph");
}

int cmd_query(const std::string& complex_path, const std::string& query,
              const std::vector<std::string>& args, const std::string& element,
              const std::string& curtain_file, int m_max, int offset, int E_flag,
              std::size_t budget, std::uint64_t seed, const std::string& out_path) {
  LoadedComplex lc = load_complex(complex_path, budget);
  const MedianWindow& w = lc.win();
  Json params{{"query", query}, {"args", args}};
  Json result;

  auto vertex_of = [&](const std::string& label) {
    auto v = w.find_label(label);
    if (!v) fail(ErrorKind::ParseError, "unknown vertex " + label);
    return *v;
  };

  if (query == "dist") {
    if (args.size() != 2) fail(ErrorKind::ParseError, "dist needs two vertices");
    result["distance"] = w.distance(vertex_of(args[0]), vertex_of(args[1]));
  } else if (query == "walls") {
    result = walls_to_json(w);
  } else if (query == "hull") {
    std::vector<VertexId> seed_set;
    for (const auto& a : args) seed_set.push_back(vertex_of(a));
    auto h = w.hull(seed_set);
    Json members = Json::array();
    for (VertexId v : h.hull.members) members.push_back(w.label(v));
    result["hull"] = members;
    result["rounds"] = h.rounds;
  } else if (query == "gate") {
    if (args.size() < 2) fail(ErrorKind::ParseError, "gate needs a point then set members");
    std::vector<VertexId> seed_set;
    for (std::size_t i = 1; i < args.size(); ++i) seed_set.push_back(vertex_of(args[i]));
    auto h = w.hull(seed_set);
    result["gate"] = w.label(w.gate_projection(h.hull, vertex_of(args[0])));
  } else if (query == "contact") {
    auto cg = build_contact_graph(w);
    result = contact_to_json(cg);
    if (!out_path.empty()) {
      std::ofstream dot(out_path + ".dot");
      dot << contact_to_dot(cg);
    }
  } else if (query == "product") {
    auto split = detect_product(w, std::max(2, w.guard()));
    result["reducible"] = split.has_value();
    if (split) result["families"] = product_to_json(*split);
  } else if (query == "curtain" || query == "flips" || query == "skewers") {
    if (!lc.ball) fail(ErrorKind::ParseError, "action queries need a presentation-built complex");
    const BallComplex& ball = *lc.ball;
    auto cg = build_contact_graph(w);
    int E = E_flag > 0 ? E_flag : measure_E(cg.g, seed);
    HypGraph hyp = cg.as_hyp(E);
    if (query == "curtain") {
      std::vector<VertexId> axis;
      for (const auto& a : args) axis.push_back(static_cast<VertexId>(std::stoul(a)));
      Curtain c = make_curtain(hyp, axis, offset);
      result = curtain_to_json(c);
      result["violations"] = curtain_violations(hyp, c);
    } else {
      if (curtain_file.empty()) fail(ErrorKind::ParseError, "need --curtain FILE");
      Curtain c = curtain_from_json(load_document(curtain_file), hyp);
      GroupElement g = GroupElement::parse(ball.presentation(), element);
      auto iso_of = [&](int m) {
        return contact_iso(ball, cg, g.pow(ball.presentation(), m));
      };
      auto scope_of = [&](int m) {
        Scope s;
        s.max_level = ball.horizon() - m * static_cast<int>(g.length()) - 1;
        return s;
      };
      if (query == "flips") {
        auto r = flips(hyp, iso_of(1), c, Side::Plus, scope_of(1));
        result["flips"] = flip_to_json(r);
      } else {
        auto r = skewers(hyp, c, m_max, iso_of, scope_of);
        result["found"] = r.has_value();
        if (r) result["skewer"] = skewer_to_json(*r);
      }
    }
  } else {
    fail(ErrorKind::ParseError, "unknown query " + query);
  }

  Json doc;
  doc["manifest"] = manifest("query", {complex_path}, params, seed,
                             out_path.empty() ? std::vector<std::string>{}
                                              : std::vector<std::string>{out_path});
  doc["result"] = result;
  if (!out_path.empty()) write_document(out_path, doc);
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& target, int random_count,
               int max_vertices, std::uint64_t seed, std::size_t budget) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
  };

  if (suite == "median-oracle") {
    Rng rng(seed);
    for (int i = 0; i < random_count; ++i) {
      auto g = random_median_graph(rng, max_vertices);
      bool ok = true;
      std::string detail = g.kind + " n=" + std::to_string(g.graph.size());
      const auto& bits = g.graph.wall_side_bits();
      const std::size_t words = (g.graph.size() + 63) / 64;
      std::vector<std::vector<std::uint64_t>> vbits(g.graph.size(),
                                                    std::vector<std::uint64_t>(
                                                        (bits.size() + 63) / 64, 0));
      for (std::size_t wi = 0; wi < bits.size(); ++wi)
        for (std::size_t word = 0; word < words; ++word)
          for (int b = 0; b < 64; ++b)
            if (bits[wi][word] >> b & 1) {
              std::size_t v = word * 64 + b;
              if (v < g.graph.size()) vbits[v][wi >> 6] |= 1ULL << (wi & 63);
            }
      for (VertexId x = 0; x < g.graph.size() && ok; ++x) {
        auto dx = g.graph.graph().bfs(x);
        for (VertexId y = x + 1; y < g.graph.size() && ok; ++y) {
          int popcount = 0;
          for (std::size_t word = 0; word < vbits[x].size(); ++word)
            popcount += __builtin_popcountll(vbits[x][word] ^ vbits[y][word]);
          if (popcount != dx[y]) {
            ok = false;
            detail += " counterexample: " + g.graph.label(x) + " vs " + g.graph.label(y);
          }
        }
      }
      report("wall-distance identity on " + g.kind, ok, detail);
    }
  } else if (suite == "curtain-axioms") {
    Rng rng(seed);
    for (int i = 0; i < std::max(1, random_count); ++i) {
      int n = 20 + static_cast<int>(rng.below(30));
      auto pw = path_window(n);
      HypGraph h{pw.graph(), 1, {}};
      int L = n - 1;
      int off = 1 + static_cast<int>(rng.below(std::max(1, L - 8)));
      try {
        Curtain c = make_curtain(h, pw.graph().shortest_path(0, n - 1), off);
        auto bad = curtain_violations(h, c);
        report("curtain axioms on P" + std::to_string(n), bad.empty(),
               bad.empty() ? "" : bad.front());
      } catch (const Error& e) {
        report("curtain axioms on P" + std::to_string(n), false, e.what());
      }
    }
  } else if (suite == "behrstock" || suite == "bgi") {
    Json doc = load_document(target);
    Presentation p = presentation_from_json(doc.at("presentation"));
    BallComplex ball = BallComplex::build(p, doc.at("horizon").get<int>(), budget);
    FlatSystem system = FlatSystem::build(ball, seed);
    if (suite == "behrstock") {
      std::vector<GroupElement> samples;
      for (VertexId v = 0; v < ball.window().size(); ++v)
        if (ball.window().depth(v) <= std::min(4, ball.window().guard() + 1))
          samples.push_back(ball.element(v));
      auto bad = system.verify_behrstock(samples, 24);
      report("behrstock sweep (lambda " + std::to_string(system.constants().lambda) + ")",
             bad.empty(),
             bad.empty() ? std::to_string(samples.size()) + " samples"
                         : bad.front().domain_u + " / " + bad.front().domain_v);
    } else {
      auto bad = system.verify_bgi(16, 40, seed);
      report("bgi sweep (lambda " + std::to_string(system.constants().lambda) + ")", bad.empty(),
             bad.empty() ? "" : bad.front().domain_u);
    }
  } else if (suite == "recipe-roundtrip") {
    Json doc = load_document(target);
    Presentation p = presentation_from_json(doc.at("presentation"));
    BallComplex ball = BallComplex::build(p, doc.at("horizon").get<int>(), budget);
    FlatSystem system = FlatSystem::build(ball, seed);
    RecipeCertificate cert = certificate_from_json(doc.at("certificate"));
    report("certificate re-verification", verify_certificate(ball, system, cert),
           cert.element);
  } else {
    fail(ErrorKind::ParseError, "unknown suite " + suite);
  }
  return failures == 0 ? 0 : 1;
}

int cmd_recipe(const std::string& raag, int horizon, std::size_t budget, std::uint64_t seed,
               const std::string& out_path) {
  Json pj = load_document(raag);
  Presentation p = presentation_from_json(pj);
  BallComplex ball = BallComplex::build(p, horizon, budget);
  FlatSystem system = FlatSystem::build(ball, seed);
  std::vector<GroupElement> T;
  for (int i = 0; i < static_cast<int>(p.rank()); ++i) T.push_back(GroupElement::generator(i, 1));
  RecipeBudget rb;
  auto outcome = recipe_rank_one(ball, system, T, rb);

  Json doc;
  doc["manifest"] = manifest("recipe", {raag},
                             {{"horizon", horizon}, {"budget", budget}}, seed,
                             out_path.empty() ? std::vector<std::string>{}
                                              : std::vector<std::string>{out_path});
  doc["presentation"] = presentation_to_json(p);
  doc["horizon"] = horizon;
  doc["outcome"] = outcome_to_json(outcome);
  if (outcome.certificate) doc["certificate"] = certificate_to_json(*outcome.certificate);
  if (!out_path.empty()) write_document(out_path, doc);
  if (outcome.certificate) std::cout << certificate_transcript(*outcome.certificate);
  else std::cout << "no certificate: " << outcome.reason << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walls, curtains, and short rank-one elements on complex windows"};
  app.require_subcommand(1);

  std::string raag, graph, complex_path, out_dir = ".", out_path, element, curtain_file;
  std::string query, suite, target;
  std::vector<std::string> query_args;
  int horizon = 6, guard = -1, m_max = 64, offset = 1, E_flag = 0;
  int random_count = 20, max_vertices = 200;
  std::size_t budget_flag = 0;
  std::uint64_t seed = 1;

  auto* b = app.add_subcommand("build", "materialize a complex window (and system)");
  b->add_option("--raag", raag, "presentation file");
  b->add_option("--graph", graph, "explicit graph file");
  b->add_option("--horizon", horizon);
  b->add_option("--guard", guard);
  b->add_option("--budget", budget_flag);
  b->add_option("--seed", seed);
  b->add_option("--out", out_dir);
  bool with_system = false;
  b->add_flag("--system", with_system, "also instantiate the projection system");

  auto* q = app.add_subcommand("query", "run a query against a built complex");
  q->add_option("complex", complex_path)->required();
  q->add_option("name", query)->required();
  q->add_option("args", query_args);
  q->add_option("--element", element);
  q->add_option("--curtain", curtain_file);
  q->add_option("--m-max", m_max);
  q->add_option("--offset", offset);
  q->add_option("--E", E_flag);
  q->add_option("--budget", budget_flag);
  q->add_option("--seed", seed);
  q->add_option("--out", out_path);

  auto* v = app.add_subcommand("verify", "run a verification suite");
  v->add_option("suite", suite)->required();
  v->add_option("target", target);
  v->add_option("--random", random_count);
  v->add_option("--max-vertices", max_vertices);
  v->add_option("--seed", seed);
  v->add_option("--budget", budget_flag);

  auto* r = app.add_subcommand("recipe", "search for a short rank-one element");
  r->add_option("--raag", raag)->required();
  r->add_option("--horizon", horizon);
  r->add_option("--budget", budget_flag);
  r->add_option("--seed", seed);
  r->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    std::size_t budget = vertex_budget(budget_flag);
    if (b->parsed()) return cmd_build(raag, graph, horizon, guard, budget, seed, out_dir,
                                      with_system);
    if (q->parsed()) return cmd_query(complex_path, query, query_args, element, curtain_file,
                                      m_max, offset, E_flag, budget, seed, out_path);
    if (v->parsed()) return cmd_verify(suite, target, random_count, max_vertices, seed, budget);
    if (r->parsed()) return cmd_recipe(raag, horizon, budget, seed, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
