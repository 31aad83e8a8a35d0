#include "curtainlab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace curtainlab {

Json parse_document(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t byte = e.byte;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    fail(ErrorKind::ParseError, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                    ": " + e.what());
  }
}

Json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

void write_document(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::ParseError, "cannot write " + path);
  out << doc.dump(2) << "\n";
}

Presentation presentation_from_json(const Json& j) {
  if (!j.contains("generators"))
    fail(ErrorKind::ParseError, "presentation needs a generators list");
  std::vector<std::string> gens = j.at("generators").get<std::vector<std::string>>();
  std::vector<std::pair<std::string, std::string>> pairs;
  if (j.contains("commuting_pairs"))
    for (const auto& pr : j.at("commuting_pairs"))
      pairs.emplace_back(pr.at(0).get<std::string>(), pr.at(1).get<std::string>());
  return Presentation(std::move(gens), pairs);
}

Json presentation_to_json(const Presentation& p) {
  Json j;
  j["generators"] = p.generators();
  Json pairs = Json::array();
  for (auto [a, b] : p.commuting_pairs())
    pairs.push_back({p.generator(a), p.generator(b)});
  j["commuting_pairs"] = pairs;
  return j;
}

MedianWindow window_from_json(const Json& j) {
  std::vector<std::string> labels = j.at("vertices").get<std::vector<std::string>>();
  std::unordered_map<std::string, VertexId> index;
  for (VertexId v = 0; v < labels.size(); ++v) index[labels[v]] = v;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& e : j.at("edges")) {
    auto a = index.find(e.at(0).get<std::string>());
    auto b = index.find(e.at(1).get<std::string>());
    if (a == index.end() || b == index.end())
      fail(ErrorKind::ParseError, "edge endpoint is not a listed vertex");
    edges.emplace_back(a->second, b->second);
  }
  auto bp = index.find(j.at("basepoint").get<std::string>());
  if (bp == index.end()) fail(ErrorKind::ParseError, "basepoint is not a listed vertex");
  bool is_window = j.value("is_window", false);
  if (!is_window) return MedianWindow::full_graph(std::move(labels), edges, bp->second);
  int horizon = j.at("horizon").get<int>();
  int guard = j.value("guard", horizon / 3);
  return MedianWindow::window(std::move(labels), edges, bp->second, horizon, guard);
}

Json window_to_json(const MedianWindow& w) {
  Json j;
  j["vertices"] = w.labels();
  Json edges = Json::array();
  for (auto [a, b] : w.graph().edges()) edges.push_back({w.label(a), w.label(b)});
  j["edges"] = edges;
  j["basepoint"] = w.label(w.basepoint());
  j["horizon"] = w.horizon();
  j["guard"] = w.guard();
  j["is_window"] = w.is_window();
  return j;
}

Json walls_to_json(const MedianWindow& w, std::size_t side_cutoff) {
  Json arr = Json::array();
  const auto& walls = w.walls();
  const bool with_sides = w.size() <= side_cutoff;
  for (std::size_t i = 0; i < walls.size(); ++i) {
    Json jw;
    jw["index"] = i;
    Json edges = Json::array();
    for (auto [a, b] : walls[i].edges) edges.push_back({w.label(a), w.label(b)});
    jw["edges"] = edges;
    Json carrier = Json::array();
    for (VertexId v : walls[i].carrier) carrier.push_back(w.label(v));
    jw["carrier"] = carrier;
    jw["degenerate"] = w.wall_degenerate(static_cast<int>(i));
    if (with_sides) {
      w.wall_sides(static_cast<int>(i));
      Json sa = Json::array(), sb = Json::array();
      for (VertexId v : walls[i].side_a) sa.push_back(w.label(v));
      for (VertexId v : walls[i].side_b) sb.push_back(w.label(v));
      jw["side_a"] = sa;
      jw["side_b"] = sb;
    }
    arr.push_back(jw);
  }
  Json j;
  j["walls"] = arr;
  j["count"] = walls.size();
  return j;
}

Json contact_to_json(const ContactGraph& cg) {
  Json j;
  Json nodes = Json::array();
  for (std::size_t n = 0; n < cg.wall_of_node.size(); ++n)
    nodes.push_back({{"wall", cg.wall_of_node[n]}, {"level", cg.node_level[n]}});
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (auto [a, b] : cg.g.edges()) edges.push_back({a, b});
  j["edges"] = edges;
  j["excluded_walls"] = cg.excluded;
  return j;
}

std::string contact_to_dot(const ContactGraph& cg) {
  std::string out = "graph contact {\n";
  for (auto [a, b] : cg.g.edges())
    out += "  w" + std::to_string(cg.wall_of_node[a]) + " -- w" +
           std::to_string(cg.wall_of_node[b]) + ";\n";
  out += "}\n";
  return out;
}

Json curtain_to_json(const Curtain& c) {
  Json j;
  j["axis"] = c.axis;
  j["interval"] = {c.i0, c.i1};
  j["E"] = c.E;
  j["pole"] = c.pole;
  j["plus"] = c.plus;
  j["minus"] = c.minus;
  return j;
}

Curtain curtain_from_json(const Json& j, const HypGraph& h) {
  std::vector<VertexId> axis = j.at("axis").get<std::vector<VertexId>>();
  int i0 = j.at("interval").at(0).get<int>();
  return make_curtain(h, axis, i0);
}

Json rational_to_json(const Rational& r) { return Json::array({r.num, r.den}); }

Json tau_to_json(const TauCertificate& t) {
  Json j;
  j["element"] = t.element;
  j["iterations"] = t.iterations;
  j["chain_verified"] = t.chain_verified;
  j["tau_lower"] = rational_to_json(t.tau_lower);
  j["ratio_bound"] = rational_to_json(t.ratio_bound);
  j["scope_level"] = t.scope_level;
  j["min_displacement"] = t.min_displacement;
  return j;
}

Json flip_to_json(const FlipReport& f) {
  Json j;
  j["holds"] = f.holds;
  j["flipped"] = f.flipped == Side::Plus ? "plus" : "minus";
  j["scope_level"] = f.scope_level;
  j["checked_source"] = f.checked_source;
  j["checked_pole"] = f.checked_pole;
  j["proper"] = f.proper;
  if (!f.failure.empty()) j["failure"] = f.failure;
  return j;
}

Json skewer_to_json(const SkewerReport& s) {
  Json j;
  j["m"] = s.m;
  j["scope_level"] = s.scope_level;
  j["checked_plus"] = s.checked_plus;
  j["checked_pole"] = s.checked_pole;
  return j;
}

Json cubical_flip_to_json(const CubicalFlip& f) {
  Json j;
  j["holds"] = f.holds;
  j["side_flipped"] = f.side_flipped;
  j["scope_radius"] = f.scope_radius;
  j["checked"] = f.checked;
  j["proper"] = f.proper;
  if (!f.failure.empty()) j["failure"] = f.failure;
  return j;
}

Json cubical_skewer_to_json(const CubicalSkewer& s) {
  Json j;
  j["holds"] = s.holds;
  j["scope_radius"] = s.scope_radius;
  j["checked"] = s.checked;
  j["chain_k"] = s.chain_k;
  j["chain_verified"] = s.chain_verified;
  j["min_displacement"] = s.min_displacement;
  return j;
}

Json product_to_json(const ProductSplit& p) {
  Json j;
  j["family_a"] = p.family_a;
  j["family_b"] = p.family_b;
  j["window_evidence"] = p.window_evidence;
  return j;
}

Json certificate_to_json(const RecipeCertificate& c) {
  Json j;
  j["element"] = c.element;
  j["a"] = c.a;
  j["g"] = c.g;
  j["m"] = c.m;
  j["route"] = c.route;
  j["E_maximal"] = c.E_maximal;
  j["notes"] = c.notes;
  if (c.has_curtain) {
    j["curtain"] = {{"axis_walls", c.curtain_axis_walls}, {"offset", c.curtain_offset}};
  }
  if (c.skewer) j["skewer"] = skewer_to_json(*c.skewer);
  if (!c.flip_reports.empty()) {
    Json fl = Json::array();
    for (const auto& f : c.flip_reports) fl.push_back(flip_to_json(f));
    j["flips"] = fl;
  }
  if (c.tau) j["tau"] = tau_to_json(*c.tau);
  if (c.cubical_wall >= 0) {
    j["cubical_wall"] = {{"index", c.cubical_wall},
                         {"edge", {c.wall_edge_labels.first, c.wall_edge_labels.second}}};
    if (c.cubical_flip_plus) j["cubical_flip_plus"] = cubical_flip_to_json(*c.cubical_flip_plus);
    if (c.cubical_flip_minus)
      j["cubical_flip_minus"] = cubical_flip_to_json(*c.cubical_flip_minus);
    if (c.cubical_skewer) j["cubical_skewer"] = cubical_skewer_to_json(*c.cubical_skewer);
  }
  return j;
}

RecipeCertificate certificate_from_json(const Json& j) {
  RecipeCertificate c;
  c.element = j.at("element").get<std::string>();
  c.a = j.at("a").get<std::string>();
  c.g = j.at("g").get<std::string>();
  c.m = j.at("m").get<int>();
  c.route = j.at("route").get<std::string>();
  c.E_maximal = j.at("E_maximal").get<int>();
  c.notes = j.value("notes", "");
  if (j.contains("curtain")) {
    c.has_curtain = true;
    c.curtain_axis_walls = j.at("curtain").at("axis_walls").get<std::vector<int>>();
    c.curtain_offset = j.at("curtain").at("offset").get<int>();
  }
  if (j.contains("tau")) {
    TauCertificate t;
    const auto& tj = j.at("tau");
    t.element = tj.at("element").get<std::string>();
    t.iterations = tj.at("iterations").get<int>();
    t.chain_verified = tj.at("chain_verified").get<bool>();
    t.tau_lower = Rational(tj.at("tau_lower").at(0).get<std::int64_t>(),
                           tj.at("tau_lower").at(1).get<std::int64_t>());
    t.scope_level = tj.at("scope_level").get<int>();
    t.min_displacement = tj.at("min_displacement").get<std::vector<int>>();
    c.tau = t;
  }
  if (j.contains("cubical_wall")) {
    c.cubical_wall = j.at("cubical_wall").at("index").get<int>();
    c.wall_edge_labels = {j.at("cubical_wall").at("edge").at(0).get<std::string>(),
                          j.at("cubical_wall").at("edge").at(1).get<std::string>()};
    auto get_cf = [&](const char* key) -> std::optional<CubicalFlip> {
      if (!j.contains(key)) return std::nullopt;
      CubicalFlip f;
      const auto& fj = j.at(key);
      f.holds = fj.at("holds").get<bool>();
      f.side_flipped = fj.at("side_flipped").get<int>();
      f.scope_radius = fj.at("scope_radius").get<int>();
      f.checked = fj.at("checked").get<std::size_t>();
      f.proper = fj.at("proper").get<bool>();
      return f;
    };
    c.cubical_flip_plus = get_cf("cubical_flip_plus");
    c.cubical_flip_minus = get_cf("cubical_flip_minus");
    if (j.contains("cubical_skewer")) {
      CubicalSkewer s;
      const auto& sj = j.at("cubical_skewer");
      s.holds = sj.at("holds").get<bool>();
      s.scope_radius = sj.at("scope_radius").get<int>();
      s.checked = sj.at("checked").get<std::size_t>();
      s.chain_k = sj.at("chain_k").get<int>();
      s.chain_verified = sj.at("chain_verified").get<bool>();
      s.min_displacement = sj.at("min_displacement").get<std::vector<int>>();
      c.cubical_skewer = s;
    }
  }
  return c;
}

Json outcome_to_json(const RecipeOutcome& o) {
  Json j;
  j["found"] = o.certificate.has_value();
  if (o.certificate) j["certificate"] = certificate_to_json(*o.certificate);
  if (o.product_witness) j["product_witness"] = product_to_json(*o.product_witness);
  if (!o.reason.empty()) j["reason"] = o.reason;
  return j;
}

std::string certificate_transcript(const RecipeCertificate& c) {
  std::ostringstream out;
  out << "rank-one certificate\n";
  out << "  element w = " << c.element << "  (a = " << c.a << ", g = " << c.g
      << ", m = " << c.m << ")\n";
  out << "  route: " << c.route << ", maximal-space E = " << c.E_maximal << "\n";
  if (c.has_curtain) {
    out << "  curtain: axis of " << c.curtain_axis_walls.size() << " walls, interval at offset "
        << c.curtain_offset << "\n";
  }
  if (c.skewer)
    out << "  skewer: power m = " << c.skewer->m << " checked on " << c.skewer->checked_plus
        << " half-space and " << c.skewer->checked_pole << " pole nodes (scope level "
        << c.skewer->scope_level << ")\n";
  for (const auto& f : c.flip_reports)
    out << "  flip of " << (f.flipped == Side::Plus ? "h+" : "h-") << ": "
        << (f.holds ? "holds" : "fails") << " on " << f.checked_source
        << " checked vertices (scope level " << f.scope_level << ")\n";
  if (c.tau) {
    out << "  tau: chain of " << c.tau->iterations + 1 << " translates "
        << (c.tau->chain_verified ? "verified" : "BROKEN") << "; tau >= " << c.tau->tau_lower.str()
        << "; displacements";
    for (std::size_t i = 0; i < c.tau->min_displacement.size(); ++i)
      out << " d(x,w^" << i + 1 << "x)>=" << c.tau->min_displacement[i];
    out << "\n";
  }
  if (c.cubical_wall >= 0) {
    out << "  cubical wall #" << c.cubical_wall << " dual to edge (" << c.wall_edge_labels.first
        << " , " << c.wall_edge_labels.second << ")\n";
    if (c.cubical_flip_plus)
      out << "    " << c.g << " a^m " << c.g << "^-1 flips side " <<
          c.cubical_flip_plus->side_flipped
          << ": " << (c.cubical_flip_plus->holds ? "holds" : "fails") << " ("
          << c.cubical_flip_plus->checked << " vertices, radius "
          << c.cubical_flip_plus->scope_radius << ")\n";
    if (c.cubical_flip_minus)
      out << "    a^m flips side " << c.cubical_flip_minus->side_flipped << ": "
          << (c.cubical_flip_minus->holds ? "holds" : "fails") << " ("
          << c.cubical_flip_minus->checked << " vertices, radius "
          << c.cubical_flip_minus->scope_radius << ")\n";
    if (c.cubical_skewer) {
      out << "    skewer w k+ inside k+: " << (c.cubical_skewer->holds ? "holds" : "fails")
          << "; wall chain of " << c.cubical_skewer->chain_k + 1 << " translates "
          << (c.cubical_skewer->chain_verified ? "verified" : "BROKEN") << "; displacements";
      for (std::size_t i = 0; i < c.cubical_skewer->min_displacement.size(); ++i)
        out << " d(x,w^" << i + 1 << "x)>=" << c.cubical_skewer->min_displacement[i];
      out << "\n";
    }
  }
  if (!c.notes.empty()) out << "  notes: " << c.notes << "\n";
  return out.str();
}

}  // namespace curtainlab
