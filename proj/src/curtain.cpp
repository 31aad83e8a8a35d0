#include "curtainlab/curtain.hpp"

#include <algorithm>

namespace curtainlab {

Rational four_point_delta(const SimpleGraph& g, std::uint64_t seed, int quadruple_samples,
                          int exhaustive_cap) {
  const int n = static_cast<int>(g.size());
  if (n < 4) return {0, 1};

  int max_doubled = 0;
  auto consider = [&](int dxy, int dzw, int dxz, int dyw, int dxw, int dyz) {
    int s1 = dxy + dzw, s2 = dxz + dyw, s3 = dxw + dyz;
    int hi = std::max({s1, s2, s3});
    int mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
    max_doubled = std::max(max_doubled, hi - mid);
  };

  if (n <= exhaustive_cap) {
    std::vector<std::vector<int>> d(n);
    for (int v = 0; v < n; ++v) d[v] = g.bfs(v);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        for (int z = y + 1; z < n; ++z)
          for (int w = z + 1; w < n; ++w)
            consider(d[x][y], d[z][w], d[x][z], d[y][w], d[x][w], d[y][z]);
    return {max_doubled, 2};
  }

  // Sample sources, take quadruples among them.
  Rng rng(seed);
  int sources = std::min(n, 200);
  std::vector<VertexId> picks;
  for (int i = 0; i < sources; ++i) picks.push_back(static_cast<VertexId>(rng.below(n)));
  sort_unique(picks);
  std::vector<std::vector<int>> d(picks.size());
  for (std::size_t i = 0; i < picks.size(); ++i) d[i] = g.bfs(picks[i]);
  const int m = static_cast<int>(picks.size());
  for (int it = 0; it < quadruple_samples; ++it) {
    int x = static_cast<int>(rng.below(m));
    int y = static_cast<int>(rng.below(m));
    int z = static_cast<int>(rng.below(m));
    int w = static_cast<int>(rng.below(m));
    if (x == y || x == z || x == w || y == z || y == w || z == w) continue;
    consider(d[x][picks[y]], d[z][picks[w]], d[x][picks[z]], d[y][picks[w]], d[x][picks[w]],
             d[y][picks[z]]);
  }
  return {max_doubled, 2};
}

int measure_E(const SimpleGraph& g, std::uint64_t seed) {
  Rational delta = four_point_delta(g, seed);
  int e = static_cast<int>((delta.num + delta.den - 1) / delta.den);  // ceil
  return std::max(1, e);
}

AxisProjection project_axis(const SimpleGraph& g, const std::vector<VertexId>& axis) {
  AxisProjection p;
  p.axis = axis;
  p.min_dist = g.bfs_multi(axis);
  p.achieving.assign(g.size(), {});
  for (std::size_t i = 0; i < axis.size(); ++i) {
    auto d = g.bfs(axis[i]);
    for (VertexId v = 0; v < g.size(); ++v)
      if (d[v] == p.min_dist[v] && d[v] != kUnreached) p.achieving[v].push_back(static_cast<int>(i));
  }
  return p;
}

namespace {
void require_geodesic(const SimpleGraph& g, const std::vector<VertexId>& axis) {
  if (axis.size() < 2) fail(ErrorKind::NotGeodesic, "axis needs at least two vertices");
  for (std::size_t i = 0; i + 1 < axis.size(); ++i)
    if (!g.has_edge(axis[i], axis[i + 1]))
      fail(ErrorKind::NotGeodesic, "axis is not a path");
  if (g.distance(axis.front(), axis.back()) != static_cast<int>(axis.size()) - 1)
    fail(ErrorKind::NotGeodesic, "axis path is not distance-minimizing");
}
}  // namespace

std::vector<VertexId> project_to_geodesic(const HypGraph& h, const std::vector<VertexId>& axis,
                                          VertexId x) {
  require_geodesic(h.g, axis);
  auto d = h.g.bfs(x);
  int best = kUnreached;
  for (VertexId a : axis)
    if (d[a] != kUnreached && (best == kUnreached || d[a] < best)) best = d[a];
  std::vector<VertexId> out;
  for (VertexId a : axis)
    if (d[a] == best) out.push_back(a);
  return out;
}

Curtain make_curtain(const HypGraph& h, const std::vector<VertexId>& axis, int offset) {
  require_geodesic(h.g, axis);
  const int L = static_cast<int>(axis.size()) - 1;  // edge length
  const int width = 6 * h.E;
  if (L < width + 2)
    fail(ErrorKind::IntervalTooWide,
         "axis of length " + std::to_string(L) + " cannot hold a strictly interior interval of " +
             std::to_string(width) + " edges");
  if (offset < 1 || offset + width > L - 1)
    fail(ErrorKind::IntervalTooWide, "offset places the interval outside the interior");

  Curtain c;
  c.axis = axis;
  c.i0 = offset;
  c.i1 = offset + width;
  c.E = h.E;
  auto proj = project_axis(h.g, axis);
  for (VertexId v = 0; v < h.g.size(); ++v) {
    if (proj.achieving[v].empty()) continue;  // unreachable vertex
    for (int i : proj.achieving[v]) {
      if (i < c.i0) { c.minus.push_back(v); }
      else if (i > c.i1) { c.plus.push_back(v); }
      else { c.pole.push_back(v); }
    }
  }
  sort_unique(c.pole);
  sort_unique(c.plus);
  sort_unique(c.minus);
  if (!sorted_disjoint(c.plus, c.minus))
    fail(ErrorKind::NotGeodesic,
         "half-spaces overlap: projection diameter exceeds the interval width");
  return c;
}

std::vector<std::string> curtain_violations(const HypGraph& h, const Curtain& c) {
  std::vector<std::string> bad;
  // cover
  std::size_t covered = 0;
  {
    std::vector<VertexId> all = c.pole;
    all.insert(all.end(), c.plus.begin(), c.plus.end());
    all.insert(all.end(), c.minus.begin(), c.minus.end());
    sort_unique(all);
    covered = all.size();
    auto reach = h.g.bfs(c.axis.front());
    std::size_t reachable = 0;
    for (VertexId v = 0; v < h.g.size(); ++v)
      if (reach[v] != kUnreached) ++reachable;
    if (covered != reachable) bad.push_back("cover");
  }
  if (!sorted_disjoint(c.plus, c.minus)) bad.push_back("halfspace-disjoint");
  // path crossing: strict plus-side and strict minus-side vertices cannot be
  // joined without meeting the pole
  {
    std::vector<VertexId> strictly_plus, strictly_minus;
    for (VertexId v : c.plus)
      if (!c.in_pole(v)) strictly_plus.push_back(v);
    for (VertexId v : c.minus)
      if (!c.in_pole(v)) strictly_minus.push_back(v);
    if (!strictly_plus.empty() && !strictly_minus.empty() &&
        !separates_sets(h.g, c.pole, strictly_plus, strictly_minus))
      bad.push_back("path-crossing");
  }
  // 3E separation of opposite half-space points
  if (!c.minus.empty()) {
    auto d = h.g.bfs_multi(c.minus);
    for (VertexId v : c.plus)
      if (d[v] != kUnreached && d[v] <= 3 * h.E) {
        bad.push_back("3E-separation");
        break;
      }
  }
  sort_unique(bad);
  return bad;
}

bool separates_sets(const SimpleGraph& g, const std::vector<VertexId>& middle,
                    const std::vector<VertexId>& A, const std::vector<VertexId>& B) {
  if (A.empty() || B.empty()) return false;
  if (!sorted_disjoint(A, middle) || !sorted_disjoint(B, middle)) return false;
  std::vector<bool> blocked(g.size(), false);
  for (VertexId v : middle) blocked[v] = true;
  auto d = g.bfs_avoiding(A, blocked);
  for (VertexId v : B)
    if (d[v] != kUnreached) return false;
  return true;
}

bool is_chain(const HypGraph& h, const std::vector<Curtain>& curtains) {
  if (curtains.size() <= 1) return !curtains.empty();
  for (std::size_t i = 0; i + 1 < curtains.size(); ++i)
    if (!sorted_disjoint(curtains[i].pole, curtains[i + 1].pole)) return false;
  for (std::size_t i = 1; i + 1 < curtains.size(); ++i) {
    if (!separates_sets(h.g, curtains[i].pole, curtains[i - 1].pole, curtains[i + 1].pole))
      return false;
  }
  return true;
}

std::vector<Curtain> greedy_chain(const HypGraph& h, VertexId x, VertexId y) {
  int d = h.g.distance(x, y);
  if (d == kUnreached || d < 8 * h.E + 2)
    fail(ErrorKind::TooClose, "need distance at least 8E+2, have " + std::to_string(d));
  auto axis = h.g.shortest_path(x, y);
  std::vector<Curtain> chain;
  const int width = 6 * h.E;
  for (int start = 1; start + width <= d - 1; start += width + 2 * h.E)
    chain.push_back(make_curtain(h, axis, start));
  return chain;
}

PartialIso iso_from_fn(std::size_t n, const std::function<std::optional<VertexId>(VertexId)>& f,
                       const std::string& name) {
  PartialIso iso;
  iso.name = name;
  iso.img.assign(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    auto w = f(v);
    if (w) iso.img[v] = static_cast<std::int32_t>(*w);
  }
  return iso;
}

PartialIso compose(const PartialIso& outer, const PartialIso& inner, const std::string& name) {
  PartialIso iso;
  iso.name = name;
  iso.img.assign(inner.img.size(), -1);
  for (std::size_t v = 0; v < inner.img.size(); ++v) {
    auto mid = inner.img[v];
    if (mid >= 0) iso.img[v] = outer.img[mid];
  }
  return iso;
}

namespace {
// image of the scoped part of `src`; throws PartialAction on a required gap
std::vector<VertexId> scoped_image(const HypGraph& h, const PartialIso& a,
                                   const std::vector<VertexId>& src, const Scope& scope,
                                   std::size_t* checked) {
  std::vector<VertexId> out;
  for (VertexId v : src) {
    if (!scope.required(h, v)) continue;
    auto w = a(v);
    if (!w)
      fail(ErrorKind::PartialAction,
           a.name + " undefined on required vertex " + std::to_string(v));
    out.push_back(*w);
    ++(*checked);
  }
  sort_unique(out);
  return out;
}
}  // namespace

FlipReport flips(const HypGraph& h, const PartialIso& a, const Curtain& c, Side flipped,
                 const Scope& scope) {
  const auto& src = flipped == Side::Plus ? c.plus : c.minus;
  const auto& dst = flipped == Side::Plus ? c.minus : c.plus;

  FlipReport r;
  r.flipped = flipped;
  r.scope_level = scope.max_level;

  std::vector<VertexId> img_src = scoped_image(h, a, src, scope, &r.checked_source);
  std::vector<VertexId> img_pole = scoped_image(h, a, c.pole, scope, &r.checked_pole);
  if (r.checked_source == 0 || r.checked_pole == 0)
    fail(ErrorKind::PartialAction, "scope leaves a required set empty (vacuous flip)");

  if (!sorted_subset(img_src, dst)) {
    r.failure = "image of flipped half-space leaves the opposite half-space";
    return r;
  }
  if (!sorted_disjoint(img_pole, c.pole)) {
    r.failure = "translated pole meets the pole";
    return r;
  }
  // properness: some visible vertex of the target half-space is not an image
  for (VertexId v : dst)
    if (!sorted_contains(img_src, v)) { r.proper = true; break; }
  if (!r.proper) {
    r.failure = "containment is not proper";
    return r;
  }
  r.holds = true;
  return r;
}

std::optional<SkewerReport> skewers(const HypGraph& h, const Curtain& c, int m_max,
                                    const std::function<PartialIso(int)>& power_iso,
                                    const std::function<Scope(int)>& power_scope) {
  for (int m = 1; m <= m_max; ++m) {
    PartialIso am = power_iso(m);
    Scope scope = power_scope(m);
    SkewerReport r;
    r.m = m;
    r.scope_level = scope.max_level;
    std::vector<VertexId> img_plus = scoped_image(h, am, c.plus, scope, &r.checked_plus);
    std::vector<VertexId> img_pole = scoped_image(h, am, c.pole, scope, &r.checked_pole);
    if (r.checked_plus == 0 || r.checked_pole == 0)
      fail(ErrorKind::PartialAction, "scope leaves a required set empty (vacuous skewer)");
    if (!sorted_subset(img_plus, c.plus)) continue;
    if (!sorted_disjoint(img_pole, c.pole)) continue;
    bool proper = false;
    for (VertexId v : c.plus)
      if (!sorted_contains(img_plus, v)) { proper = true; break; }
    if (!proper) continue;
    return r;
  }
  return std::nullopt;
}

TauCertificate certify_tau(const HypGraph& h, const Curtain& c, int k,
                           const std::function<PartialIso(int)>& power_iso,
                           const std::function<Scope(int)>& power_scope,
                           const std::string& element_name) {
  TauCertificate cert;
  cert.element = element_name;
  cert.iterations = k;
  cert.ratio_bound = Rational(static_cast<std::int64_t>(h.E) * (k + 1), k);
  cert.scope_level = power_scope(1).max_level;

  {  // precondition: w skewers at power one
    auto s = skewers(h, c, 1, power_iso, power_scope);
    if (!s) fail(ErrorKind::ChainBroken, "element does not skewer the curtain at power one");
  }

  // translated poles, on the largest scope each power supports
  std::vector<std::vector<VertexId>> poles{c.pole};
  for (int i = 1; i <= k; ++i) {
    PartialIso wi = power_iso(i);
    Scope scope = power_scope(i);
    std::size_t checked = 0;
    auto img = scoped_image(h, wi, c.pole, scope, &checked);
    if (img.empty()) fail(ErrorKind::PartialAction, "translated pole invisible at power " +
                                                        std::to_string(i));
    poles.push_back(std::move(img));
  }
  for (std::size_t i = 0; i + 1 < poles.size(); ++i)
    if (!sorted_disjoint(poles[i], poles[i + 1]))
      fail(ErrorKind::ChainBroken, "consecutive translates overlap");
  for (std::size_t i = 1; i + 1 < poles.size(); ++i)
    if (!separates_sets(h.g, poles[i], poles[i - 1], poles[i + 1]))
      fail(ErrorKind::ChainBroken, "translate " + std::to_string(i) +
                                       " does not separate its neighbours");
  cert.chain_verified = true;

  // displacement law: d(x, w^i x) >= E(i+1) for scoped pole vertices
  for (int i = 1; i <= k; ++i) {
    PartialIso wi = power_iso(i);
    Scope scope = power_scope(i);
    int min_disp = -1;
    for (VertexId v : c.pole) {
      if (!scope.required(h, v)) continue;
      auto w = wi(v);
      if (!w) continue;
      int d = h.g.distance(v, *w);
      if (min_disp < 0 || d < min_disp) min_disp = d;
    }
    cert.min_displacement.push_back(min_disp);
    if (min_disp >= 0 && min_disp < h.E * (i + 1))
      fail(ErrorKind::ChainBroken, "displacement law fails at power " + std::to_string(i));
  }
  cert.tau_lower = Rational(h.E, 1);
  return cert;
}

FlipSkewerResult flip_then_skewer(const HypGraph& h, const Curtain& c, const PartialIso& g1,
                                  const PartialIso& g2, const Scope& scope, int tau_k,
                                  const std::function<PartialIso(int)>& w_power_iso,
                                  const std::function<Scope(int)>& w_power_scope,
                                  const std::string& w_name) {
  FlipSkewerResult out;
  out.flip_plus = flips(h, g1, c, Side::Plus, scope);
  out.flip_minus = flips(h, g2, c, Side::Minus, scope);
  if (!out.flip_plus.holds || !out.flip_minus.holds)
    fail(ErrorKind::FlipPreconditionFailed,
         !out.flip_plus.holds ? out.flip_plus.failure : out.flip_minus.failure);

  // direct containment: w(h u h+) properly inside h+
  PartialIso w = compose(g2, g1, w_name);
  std::vector<VertexId> nucleus = c.pole;
  nucleus.insert(nucleus.end(), c.plus.begin(), c.plus.end());
  sort_unique(nucleus);
  std::size_t checked = 0;
  auto img = scoped_image(h, w, nucleus, scope, &checked);
  out.containment = sorted_subset(img, c.plus);
  if (out.containment) {
    bool proper = false;
    for (VertexId v : c.plus)
      if (!sorted_contains(img, v)) { proper = true; break; }
    out.containment = proper;
  }
  out.tau = certify_tau(h, c, tau_k, w_power_iso, w_power_scope, w_name);
  return out;
}

}  // namespace curtainlab
