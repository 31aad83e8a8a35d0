#include "curtainlab/contact.hpp"

#include <algorithm>
#include <set>

#include "curtainlab/util.hpp"

namespace curtainlab {

ContactGraph build_contact_graph(const MedianWindow& w) {
  const auto& walls = w.walls();
  const auto& depth = w.depths();
  const int interior = w.is_window() ? w.horizon() - 1 : w.horizon();

  ContactGraph cg;
  cg.node_of_wall.assign(walls.size(), -1);
  for (std::size_t i = 0; i < walls.size(); ++i) {
    bool admitted = false;
    for (auto [a, b] : walls[i].edges)
      if (depth[a] <= interior && depth[b] <= interior) { admitted = true; break; }
    if (!admitted) {
      ++cg.excluded;
      continue;
    }
    cg.node_of_wall[i] = static_cast<int>(cg.wall_of_node.size());
    cg.wall_of_node.push_back(static_cast<int>(i));
    cg.node_level.push_back(walls[i].min_depth(depth));
  }

  cg.g = SimpleGraph(cg.wall_of_node.size());
  // crossings
  for (auto [w1, w2] : w.crossings()) {
    int n1 = cg.node_of_wall[w1], n2 = cg.node_of_wall[w2];
    if (n1 >= 0 && n2 >= 0) cg.g.add_edge(n1, n2);
  }
  // osculations: carriers sharing a vertex
  std::vector<std::vector<int>> walls_at(w.size());
  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (cg.node_of_wall[i] < 0) continue;
    for (VertexId v : walls[i].carrier) walls_at[v].push_back(static_cast<int>(i));
  }
  for (VertexId v = 0; v < w.size(); ++v) {
    const auto& at = walls_at[v];
    for (std::size_t i = 0; i < at.size(); ++i)
      for (std::size_t j = i + 1; j < at.size(); ++j)
        cg.g.add_edge(cg.node_of_wall[at[i]], cg.node_of_wall[at[j]]);
  }
  cg.g.finish();
  return cg;
}

std::optional<int> translate_wall(const BallComplex& b, const GroupElement& g, int wall) {
  const auto& w = b.window().walls()[wall];
  for (auto [u, v] : w.edges) {
    auto gu = b.act(g, u);
    if (!gu) continue;
    auto gv = b.act(g, v);
    if (!gv) continue;
    int img = b.window().wall_of_edge(*gu, *gv);
    if (img >= 0) return img;
  }
  return std::nullopt;
}

int translate_node(const BallComplex& b, const ContactGraph& cg, const GroupElement& g,
                   int node) {
  int wall = cg.wall_of_node[node];
  auto img = translate_wall(b, g, wall);
  if (!img) fail(ErrorKind::HorizonExceeded, "translated wall leaves the window");
  const auto& carrier = b.window().walls()[*img].carrier;
  for (VertexId v : carrier)
    if (b.window().depth(v) > b.window().guard())
      fail(ErrorKind::HorizonExceeded, "translated carrier leaves the guard region");
  int n = cg.node_of_wall[*img];
  if (n < 0) fail(ErrorKind::HorizonExceeded, "translated wall is not an admitted node");
  return n;
}

PartialIso contact_iso(const BallComplex& b, const ContactGraph& cg, const GroupElement& g) {
  PartialIso iso;
  iso.name = g.str(b.presentation());
  iso.img.assign(cg.g.size(), -1);
  for (std::size_t n = 0; n < cg.wall_of_node.size(); ++n) {
    auto img = translate_wall(b, g, cg.wall_of_node[n]);
    if (img && cg.node_of_wall[*img] >= 0) iso.img[n] = cg.node_of_wall[*img];
  }
  return iso;
}

std::optional<ProductSplit> detect_product(const MedianWindow& w, int core_radius) {
  const auto& walls = w.walls();
  const auto& depth = w.depths();
  std::vector<int> core;
  for (std::size_t i = 0; i < walls.size(); ++i)
    if (walls[i].min_depth(depth) <= core_radius) core.push_back(static_cast<int>(i));
  if (core.size() < 2) return std::nullopt;

  // components of the non-crossing relation, by complement BFS over the
  // (sparse) crossing lists
  std::vector<std::vector<int>> crossing_of(walls.size());
  for (auto [a, b] : w.crossings()) {
    crossing_of[a].push_back(b);
    crossing_of[b].push_back(a);
  }
  std::vector<int> comp(core.size(), -1);
  std::vector<int> idx_of_wall(walls.size(), -1);
  for (std::size_t i = 0; i < core.size(); ++i) idx_of_wall[core[i]] = static_cast<int>(i);
  int ncomp = 0;
  for (std::size_t s = 0; s < core.size(); ++s) {
    if (comp[s] != -1) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      std::set<int> crossed;
      for (int c : crossing_of[core[v]])
        if (idx_of_wall[c] >= 0) crossed.insert(idx_of_wall[c]);
      for (std::size_t u = 0; u < core.size(); ++u) {
        if (comp[u] != -1 || crossed.count(static_cast<int>(u))) continue;
        comp[u] = ncomp;
        stack.push_back(u);
      }
    }
    ++ncomp;
  }
  if (ncomp < 2) return std::nullopt;

  ProductSplit split;
  split.window_evidence = w.is_window();
  for (std::size_t i = 0; i < core.size(); ++i)
    (comp[i] == 0 ? split.family_a : split.family_b).push_back(core[i]);
  // verify the join: every pair across the split crosses
  for (int a : split.family_a)
    for (int b : split.family_b)
      if (!w.walls_cross(a, b)) return std::nullopt;
  return split;
}

namespace {
// side membership vectors for one wall, cached by the window
std::pair<const std::vector<VertexId>*, const std::vector<VertexId>*> sides_of(
    const MedianWindow& w, int wall, int side_flipped) {
  w.wall_sides(wall);
  const Wall& W = w.walls()[wall];
  if (side_flipped == 0) return {&W.side_a, &W.side_b};
  return {&W.side_b, &W.side_a};
}
}  // namespace

CubicalFlip wall_flip(const BallComplex& b, int wall, int side_flipped, const GroupElement& g,
                      int scope_radius) {
  const MedianWindow& w = b.window();
  auto [src, dst] = sides_of(w, wall, side_flipped);

  CubicalFlip r;
  r.side_flipped = side_flipped;
  r.scope_radius = scope_radius;

  auto gw = translate_wall(b, g, wall);
  if (!gw) fail(ErrorKind::PartialAction, "wall image leaves the window");
  if (*gw == wall) {
    r.failure = "element stabilizes the wall";
    return r;
  }

  std::vector<VertexId> img;
  for (VertexId v : *src) {
    if (w.depth(v) > scope_radius) continue;
    auto gv = b.act(g, v);
    if (!gv)
      fail(ErrorKind::PartialAction,
           "action undefined inside the scope radius " + std::to_string(scope_radius));
    img.push_back(*gv);
    ++r.checked;
  }
  if (r.checked == 0) fail(ErrorKind::PartialAction, "scoped flipped side is empty");
  sort_unique(img);
  if (!sorted_subset(img, *dst)) {
    r.failure = "image leaves the opposite half-space";
    return r;
  }
  for (VertexId v : *dst)
    if (!sorted_contains(img, v)) { r.proper = true; break; }
  if (!r.proper) {
    r.failure = "containment is not proper";
    return r;
  }
  r.holds = true;
  return r;
}

CubicalSkewer wall_skewer(const BallComplex& b, int wall, int side_kept, const GroupElement& w,
                          int k, int scope_radius) {
  const MedianWindow& win = b.window();
  auto [kept, other] = sides_of(win, wall, side_kept == 0 ? 0 : 1);
  (void)other;

  CubicalSkewer r;
  r.scope_radius = scope_radius;
  r.chain_k = k;

  auto img_wall = translate_wall(b, w, wall);
  if (!img_wall) fail(ErrorKind::PartialAction, "wall image leaves the window");
  if (*img_wall == wall) return r;  // cannot skewer a stabilized wall

  std::vector<VertexId> img;
  for (VertexId v : *kept) {
    if (win.depth(v) > scope_radius) continue;
    auto gv = b.act(w, v);
    if (!gv)
      fail(ErrorKind::PartialAction,
           "action undefined inside the scope radius " + std::to_string(scope_radius));
    img.push_back(*gv);
    ++r.checked;
  }
  if (r.checked == 0) fail(ErrorKind::PartialAction, "scoped half-space is empty");
  sort_unique(img);
  if (!sorted_subset(img, *kept)) return r;
  bool proper = false;
  for (VertexId v : *kept)
    if (!sorted_contains(img, v)) { proper = true; break; }
  if (!proper) return r;
  r.holds = true;

  // wall-chain tau: translates w^i W for i <= k, as long as they stay visible
  std::vector<int> translates{wall};
  GroupElement wi;
  for (int i = 1; i <= k; ++i) {
    wi = wi.times(b.presentation(), w);
    auto t = translate_wall(b, wi, wall);
    if (!t) break;
    translates.push_back(*t);
  }
  r.chain_k = static_cast<int>(translates.size()) - 1;
  r.chain_verified = true;
  for (std::size_t i = 1; i + 1 < translates.size(); ++i)
    if (!win.wall_separates_walls(translates[i], translates[i - 1], translates[i + 1])) {
      r.chain_verified = false;
      break;
    }
  // displacement law on checked carrier vertices: d(x, w^i x) >= i+1
  wi = GroupElement();
  for (int i = 1; i <= r.chain_k; ++i) {
    wi = wi.times(b.presentation(), w);
    int min_disp = -1;
    for (VertexId v : win.walls()[wall].carrier) {
      if (win.depth(v) > scope_radius) continue;
      auto gv = b.act(wi, v);
      if (!gv) continue;
      int d = win.raw_distance(v, *gv);
      if (min_disp < 0 || d < min_disp) min_disp = d;
    }
    r.min_displacement.push_back(min_disp);
    if (min_disp >= 0 && min_disp < i + 1) r.chain_verified = false;
  }
  return r;
}

}  // namespace curtainlab
