#include "curtainlab/projection.hpp"

#include <algorithm>
#include <set>

#include "curtainlab/util.hpp"

namespace curtainlab {

FlatSystem FlatSystem::build(const BallComplex& ball, std::uint64_t seed) {
  FlatSystem s;
  s.ball_ = &ball;
  const Presentation& p = ball.presentation();
  const auto& pairs = p.commuting_pairs();
  if (pairs.size() > 1)
    fail(ErrorKind::ParseError,
         "flat systems are only instantiated for presentations with at most one commuting pair");
  if (!pairs.empty()) {
    s.pair_a_ = pairs.front().first;
    s.pair_b_ = pairs.front().second;
  }

  s.contact_ = build_contact_graph(ball.window());

  if (!pairs.empty()) {
    std::set<std::string> seen;
    std::vector<GroupElement> reps;
    for (VertexId v = 0; v < ball.window().size(); ++v) {
      GroupElement rep = s.strip_to_rep(ball.element(v));
      auto key = rep.key();
      if (seen.insert(key).second) reps.push_back(std::move(rep));
    }
    std::sort(reps.begin(), reps.end(),
              [](const GroupElement& a, const GroupElement& b) { return a.shortlex_less(b); });
    s.flats_ = std::move(reps);
    for (int i = 0; i < static_cast<int>(s.flats_.size()); ++i)
      s.flat_index_[s.flats_[i].key()] = i;
  }

  s.constants_.E_window = measure_E(s.contact_.g, seed);
  s.constants_.N = s.flats_.empty() ? 1 : 3;
  int max_flats = std::min<int>(static_cast<int>(s.flats_.size()), 24);
  s.constants_.lambda = s.flats_.empty()
                            ? 1
                            : measure_lambda(ball, s.contact_, max_flats, seed);
  s.constants_.K = s.constants_.lambda;
  s.constants_.E_formula =
      std::max(s.constants_.K, s.constants_.N * (s.constants_.lambda + 1));
  return s;
}

GroupElement FlatSystem::strip_to_rep(const GroupElement& g) const {
  if (pair_a_ < 0) return g;
  const auto& w = g.word();
  std::size_t end = w.size();
  while (end > 0) {
    int gen = gen_of(w[end - 1]);
    if (gen == pair_a_ || gen == pair_b_) --end;
    else break;
  }
  std::vector<Letter> prefix(w.begin(), w.begin() + end);
  return GroupElement::from_word(ball_->presentation(), prefix);
}

std::optional<int> FlatSystem::find_flat(const GroupElement& rep) const {
  auto it = flat_index_.find(rep.key());
  if (it == flat_index_.end()) return std::nullopt;
  return it->second;
}

std::string FlatSystem::domain_name(const DomainRef& d) const {
  if (d.is_maximal()) return "S";
  const Presentation& p = ball_->presentation();
  std::string axis = p.generator(d.axis == 0 ? pair_a_ : pair_b_);
  return axis + "-line@" + flats_[d.flat].str(p);
}

const GroupElement& FlatSystem::rep_inverse(int flat) const {
  auto key = flats_[flat].key();
  auto it = rep_inverse_cache_.find(key);
  if (it == rep_inverse_cache_.end())
    it = rep_inverse_cache_.emplace(key, flats_[flat].inverse(ball_->presentation())).first;
  return it->second;
}

std::pair<int, int> FlatSystem::leading_block(const GroupElement& s) const {
  int dx = 0, dy = 0;
  for (Letter l : s.word()) {
    int gen = gen_of(l);
    if (gen == pair_a_) dx += positive(l) ? 1 : -1;
    else if (gen == pair_b_) dy += positive(l) ? 1 : -1;
    else break;
  }
  return {dx, dy};
}

Rel FlatSystem::relation(const DomainRef& a, const DomainRef& b) const {
  if (a == b) return Rel::Same;
  if (a.is_maximal() || b.is_maximal()) return Rel::Nested;
  if (a.flat == b.flat) return Rel::Orth;
  return Rel::Trans;
}

std::optional<FlatSystem::DomainRef> FlatSystem::translate_domain(const GroupElement& g,
                                                                  const DomainRef& d) const {
  if (d.is_maximal()) return d;
  GroupElement moved = strip_to_rep(g.times(ball_->presentation(), flats_[d.flat]));
  auto f = find_flat(moved);
  if (!f) return std::nullopt;
  return DomainRef{*f, d.axis};
}

int FlatSystem::pi_line(const DomainRef& line, const GroupElement& p) const {
  GroupElement s = rep_inverse(line.flat).times(ball_->presentation(), p);
  auto [dx, dy] = leading_block(s);
  return line.axis == 0 ? dx : dy;
}

std::vector<VertexId> FlatSystem::pi_maximal(const GroupElement& p) const {
  auto v = ball_->find(p);
  if (!v) fail(ErrorKind::HorizonExceeded, "point outside the window");
  std::vector<VertexId> out;
  const MedianWindow& w = ball_->window();
  for (VertexId nb : w.graph().neighbors(*v)) {
    int wall = w.wall_of_edge(*v, nb);
    if (wall >= 0 && contact_.node_of_wall[wall] >= 0)
      out.push_back(static_cast<VertexId>(contact_.node_of_wall[wall]));
  }
  sort_unique(out);
  return out;
}

int FlatSystem::rho_line_line(const DomainRef& from, const DomainRef& to) const {
  return pi_line(to, flats_[from.flat]);
}

std::vector<VertexId> FlatSystem::rho_line_maximal(const DomainRef& line) const {
  const Presentation& p = ball_->presentation();
  GroupElement gen = GroupElement::generator(line.axis == 0 ? pair_a_ : pair_b_, 1);
  std::vector<VertexId> nodes;
  const MedianWindow& w = ball_->window();
  for (int dir : {1, -1}) {
    GroupElement cur = flats_[line.flat];
    for (int i = 0;; ++i) {
      GroupElement nxt = cur.times(p, dir > 0 ? gen : gen.inverse(p));
      auto vc = ball_->find(cur);
      auto vn = ball_->find(nxt);
      if (!vc || !vn) break;
      int wall = w.wall_of_edge(*vc, *vn);
      if (wall >= 0 && contact_.node_of_wall[wall] >= 0)
        nodes.push_back(static_cast<VertexId>(contact_.node_of_wall[wall]));
      cur = nxt;
    }
  }
  sort_unique(nodes);
  if (nodes.empty()) fail(ErrorKind::HorizonExceeded, "line has no visible dual walls");
  return nodes;
}

int FlatSystem::dist_line(const DomainRef& line, const GroupElement& p,
                          const GroupElement& q) const {
  return std::abs(pi_line(line, p) - pi_line(line, q));
}

int FlatSystem::dist_maximal_sets(const std::vector<VertexId>& a,
                                  const std::vector<VertexId>& b) const {
  if (a.empty() || b.empty()) fail(ErrorKind::HorizonExceeded, "empty node set");
  auto d = contact_.g.bfs_multi(a);
  int best = kUnreached;
  for (VertexId v : b)
    if (d[v] != kUnreached && (best == kUnreached || d[v] < best)) best = d[v];
  return best;
}

int FlatSystem::dist_domain(const DomainRef& d, const GroupElement& p,
                            const GroupElement& q) const {
  if (!d.is_maximal()) return dist_line(d, p, q);
  return dist_maximal_sets(pi_maximal(p), pi_maximal(q));
}

std::vector<FlatSystem::Violation> FlatSystem::verify_behrstock(
    const std::vector<GroupElement>& samples, int max_flats) const {
  std::vector<Violation> out;
  const int lambda = constants_.lambda;
  const int F = std::min<int>(max_flats, static_cast<int>(flats_.size()));
  for (int f1 = 0; f1 < F; ++f1)
    for (int f2 = f1 + 1; f2 < F; ++f2)
      for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2) {
          DomainRef U{f1, a1}, V{f2, a2};
          int rho_v_u = rho_line_line(V, U);
          int rho_u_v = rho_line_line(U, V);
          for (const auto& x : samples) {
            int du = std::abs(pi_line(U, x) - rho_v_u);
            if (du <= lambda) continue;
            int dv = std::abs(pi_line(V, x) - rho_u_v);
            if (dv < lambda) continue;
            out.push_back({domain_name(U), domain_name(V),
                           x.str(ball_->presentation()), du, dv});
          }
        }
  return out;
}

std::vector<FlatSystem::Violation> FlatSystem::verify_bgi(int max_flats, int geodesic_samples,
                                                          std::uint64_t seed) const {
  std::vector<Violation> out;
  const int lambda = constants_.lambda;
  const int F = std::min<int>(max_flats, static_cast<int>(flats_.size()));
  const MedianWindow& w = ball_->window();
  const std::size_t n = contact_.g.size();

  Rng rng(seed);
  std::vector<std::vector<VertexId>> paths;
  for (int g = 0; g < geodesic_samples; ++g) {
    VertexId s = static_cast<VertexId>(rng.below(n));
    VertexId t = static_cast<VertexId>(rng.below(n));
    if (s == t) continue;
    auto path = contact_.g.shortest_path(s, t);
    if (!path.empty()) paths.push_back(std::move(path));
  }

  for (int f = 0; f < F; ++f)
    for (int axis = 0; axis < 2; ++axis) {
      DomainRef U{f, axis};
      std::vector<VertexId> rho;
      try {
        rho = rho_line_maximal(U);
      } catch (const Error&) {
        continue;
      }
      auto dr = contact_.g.bfs_multi(rho);
      for (const auto& path : paths) {
        int sep = kUnreached;
        for (VertexId v : path)
          if (dr[v] != kUnreached && (sep == kUnreached || dr[v] < sep)) sep = dr[v];
        if (sep == kUnreached || sep <= lambda) continue;
        // project the walls realizing the geodesic into the line
        int lo = 0, hi = 0;
        bool first = true;
        for (VertexId node : path) {
          VertexId carrier = w.walls()[contact_.wall_of_node[node]].carrier.front();
          int c = pi_line(U, ball_->element(carrier));
          if (first) { lo = hi = c; first = false; }
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        if (hi - lo > lambda)
          out.push_back({domain_name(U), "S",
                         "geodesic " + std::to_string(path.front()) + ".." +
                             std::to_string(path.back()),
                         sep, hi - lo});
      }
    }
  return out;
}

int FlatSystem::measure_lambda(const BallComplex& ball, const ContactGraph& cg, int max_flats,
                               std::uint64_t seed) {
  // One throwaway system sharing the tables, lambda still unset.
  FlatSystem probe;
  probe.ball_ = &ball;
  probe.contact_ = cg;
  const auto& pairs = ball.presentation().commuting_pairs();
  probe.pair_a_ = pairs.front().first;
  probe.pair_b_ = pairs.front().second;
  {
    std::set<std::string> seen;
    for (VertexId v = 0; v < ball.window().size(); ++v) {
      GroupElement rep = probe.strip_to_rep(ball.element(v));
      if (seen.insert(rep.key()).second) probe.flats_.push_back(rep);
    }
    std::sort(probe.flats_.begin(), probe.flats_.end(),
              [](const GroupElement& a, const GroupElement& b) { return a.shortlex_less(b); });
    for (int i = 0; i < static_cast<int>(probe.flats_.size()); ++i)
      probe.flat_index_[probe.flats_[i].key()] = i;
  }

  int defect = 0;
  const int F = std::min<int>(max_flats, static_cast<int>(probe.flats_.size()));

  // samples: everything close to the basepoint
  std::vector<GroupElement> samples;
  for (VertexId v = 0; v < ball.window().size(); ++v)
    if (ball.window().depth(v) <= std::min(ball.window().guard() + 1, 4))
      samples.push_back(ball.element(v));

  // rho diameters in the maximal space
  for (int f = 0; f < F; ++f)
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<VertexId> rho;
      try {
        rho = probe.rho_line_maximal({f, axis});
      } catch (const Error&) {
        continue;
      }
      if (rho.size() > 12) rho.resize(12);
      for (VertexId a : rho) {
        auto d = cg.g.bfs(a);
        for (VertexId b : rho)
          if (d[b] != kUnreached) defect = std::max(defect, d[b]);
      }
    }

  // Behrstock defects: min of the two projection gaps
  for (int f1 = 0; f1 < F; ++f1)
    for (int f2 = f1 + 1; f2 < F; ++f2)
      for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2) {
          DomainRef U{f1, a1}, V{f2, a2};
          int rho_v_u = probe.rho_line_line(V, U);
          int rho_u_v = probe.rho_line_line(U, V);
          for (const auto& x : samples) {
            int du = std::abs(probe.pi_line(U, x) - rho_v_u);
            int dv = std::abs(probe.pi_line(V, x) - rho_u_v);
            defect = std::max(defect, std::min(du, dv));
          }
        }

  // geodesic image defects for line <| S, over sampled geodesics missing rho
  Rng rng(seed);
  const std::size_t n = cg.g.size();
  for (int it = 0; it < 60 && n > 1; ++it) {
    VertexId s = static_cast<VertexId>(rng.below(n));
    VertexId t = static_cast<VertexId>(rng.below(n));
    if (s == t) continue;
    auto path = cg.g.shortest_path(s, t);
    for (int f = 0; f < std::min(F, 8); ++f)
      for (int axis = 0; axis < 2; ++axis) {
        std::vector<VertexId> rho;
        try {
          rho = probe.rho_line_maximal({f, axis});
        } catch (const Error&) {
          continue;
        }
        auto dr = cg.g.bfs_multi(rho);
        bool touches = false;
        for (VertexId v : path)
          if (dr[v] != kUnreached && dr[v] < 1) touches = true;
        if (touches) continue;
        int lo = 0, hi = 0;
        bool first = true;
        for (VertexId node : path) {
          VertexId carrier = ball.window().walls()[cg.wall_of_node[node]].carrier.front();
          int c = probe.pi_line({f, axis}, ball.element(carrier));
          if (first) { lo = hi = c; first = false; }
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        }
        defect = std::max(defect, hi - lo);
      }
  }
  return defect + 1;
}

FlatSystem::ActiveDomainReport FlatSystem::find_active_domain(const GroupElement& a, int k,
                                                              const Rational& threshold) const {
  if (k < 1) k = 1;
  const Presentation& p = ball_->presentation();
  std::vector<std::pair<DomainRef, Rational>> candidates;

  // fixed flats: rep^-1 a rep lands in the commuting subgroup.  Only short
  // representatives can normalize a short element, so the scan is capped.
  if (!flats_.empty()) {
    int cap = ball_->horizon() / 2 + 1;
    GroupElement ak = a.pow(p, k);
    for (int f = 0; f < static_cast<int>(flats_.size()); ++f) {
      if (static_cast<int>(flats_[f].length()) > cap) break;  // sorted by length
      GroupElement t = rep_inverse(f).times(p, a).times(p, flats_[f]);
      if (!strip_to_rep(t).is_identity()) continue;
      auto [dx, dy] = leading_block(t);
      for (int axis = 0; axis < 2; ++axis) {
        int shift = axis == 0 ? dx : dy;
        if (shift == 0) continue;
        int observed = dist_line({f, axis}, GroupElement(), ak);
        candidates.push_back({{f, axis}, Rational(observed, k)});
      }
    }
  }

  // the maximal domain
  {
    auto base = pi_maximal(GroupElement());
    if (!base.empty()) {
      VertexId n0 = base.front();
      int wall0 = contact_.wall_of_node[n0];
      for (int i = k; i >= 1; --i) {
        auto img = translate_wall(*ball_, a.pow(p, i), wall0);
        if (!img || contact_.node_of_wall[*img] < 0) continue;
        int d = dist_maximal_sets({n0},
                                  {static_cast<VertexId>(contact_.node_of_wall[*img])});
        if (d != kUnreached) candidates.push_back({{-1, 0}, Rational(d, i)});
        break;
      }
    }
  }

  std::optional<std::pair<DomainRef, Rational>> best;
  for (const auto& c : candidates) {
    if (c.second.num == 0) continue;
    if (!best || best->second < c.second) best = c;
  }
  if (!best) fail(ErrorKind::NoGrowth, "no domain with positive growth for " + a.str(p));
  ActiveDomainReport r;
  r.domain = best->first;
  r.domain_label = domain_name(best->first);
  r.growth_ratio = best->second;
  r.passes_threshold = best->second > threshold;
  r.iterations = k;
  return r;
}

std::optional<std::pair<GroupElement, FlatSystem::DomainRef>> FlatSystem::find_transverse_pair(
    const std::vector<GroupElement>& T, const DomainRef& U, int complexity_bound) const {
  if (U.is_maximal()) fail(ErrorKind::ParseError, "transverse search needs a proper domain");
  auto candidates = enumerate_elements_with_length(ball_->presentation(), T,
                                                   complexity_bound + 1);
  bool any_visible = false;
  for (const auto& [b, len] : candidates) {
    if (len == 0) continue;
    auto bU = translate_domain(b, U);
    if (!bU) continue;
    any_visible = true;
    if (relation(U, *bU) == Rel::Trans) return std::make_pair(b, *bU);
  }
  if (!any_visible) fail(ErrorKind::HorizonExceeded, "no translate of the domain is visible");
  return std::nullopt;
}

FlatSystem::ConjugateChain FlatSystem::conjugate_chain(const GroupElement& a,
                                                       const GroupElement& b, const DomainRef& U,
                                                       const Rational& K1, int P) const {
  const Presentation& p = ball_->presentation();
  if (U.is_maximal()) fail(ErrorKind::ParseError, "chain needs a proper domain");

  // a must be active over U: find the least M with a^M stabilizing the flat
  int M = 0;
  for (int m = 1; m <= 4 && M == 0; ++m) {
    auto img = translate_domain(a.pow(p, m), U);
    if (img && *img == U) M = m;
  }
  if (M == 0) fail(ErrorKind::ParseError, "element does not stabilize the domain");
  GroupElement aM = a.pow(p, M);
  GroupElement t = rep_inverse(U.flat).times(p, aM).times(p, flats_[U.flat]);
  auto [dx, dy] = leading_block(t);
  int shift = std::abs(U.axis == 0 ? dx : dy);
  if (shift == 0) fail(ErrorKind::ParseError, "element does not translate the line");

  // least s with s*shift > K1
  std::int64_t s64 = K1.num / (K1.den * shift) + 1;
  int s = static_cast<int>(s64);

  ConjugateChain chain;
  chain.s = s;
  chain.domains.push_back(U);
  auto U1 = translate_domain(b, U);
  if (!U1) fail(ErrorKind::HorizonExceeded, "translate of the base domain is invisible");
  if (relation(U, *U1) != Rel::Trans) fail(ErrorKind::ParseError, "base pair is not transverse");
  chain.domains.push_back(*U1);
  chain.elements.push_back(aM.conjugate(p, b));  // g_1 = b a^M b^-1

  for (int i = 1; i < P; ++i) {
    GroupElement gis = chain.elements.back().pow(p, s);
    auto next = translate_domain(gis, chain.domains[i - 1]);
    if (!next)
      fail(ErrorKind::SeparationNotAchieved,
           "window too small for the required conjugate power s=" + std::to_string(s));
    chain.domains.push_back(*next);
    chain.elements.push_back(aM.conjugate(p, gis));  // g_{i+1} = g_i^s a^M g_i^-s
  }

  // verify the consecutive separations
  for (std::size_t i = 1; i + 1 < chain.domains.size(); ++i) {
    int r_prev = rho_line_line(chain.domains[i - 1], chain.domains[i]);
    int r_next = rho_line_line(chain.domains[i + 1], chain.domains[i]);
    int sep = std::abs(r_next - r_prev);
    chain.separations.push_back(sep);
    if (Rational(sep, 1) < K1 || Rational(sep, 1) == K1)
      fail(ErrorKind::SeparationNotAchieved, "consecutive rho separation " +
                                                 std::to_string(sep) + " does not exceed K1");
  }
  chain.local_to_global_hypothesis = true;
  for (int sep : chain.separations)
    if (sep <= 4 * constants_.E_window) chain.local_to_global_hypothesis = false;
  return chain;
}

bool FlatSystem::pairwise_transverse(const std::vector<DomainRef>& domains) const {
  for (std::size_t i = 0; i < domains.size(); ++i)
    for (std::size_t j = i + 1; j < domains.size(); ++j)
      if (relation(domains[i], domains[j]) != Rel::Trans) return false;
  return true;
}

std::optional<FlatSystem::PassingUp> FlatSystem::passing_up_search(
    const std::vector<DomainRef>& domains, const GroupElement& x, const GroupElement& y,
    const Rational& K1, const Rational& K2) const {
  for (const auto& d : domains) {
    int dd = dist_domain(d, x, y);
    if (Rational(dd, 1) < K1)
      fail(ErrorKind::ParseError,
           "input domain " + domain_name(d) + " is not K1-relevant for the chosen points");
  }
  // Only the maximal domain nests three or more proper inputs here.
  std::vector<int> lines;
  for (std::size_t i = 0; i < domains.size(); ++i)
    if (!domains[i].is_maximal()) lines.push_back(static_cast<int>(i));
  if (lines.size() < 3) return std::nullopt;

  std::vector<std::vector<VertexId>> rhos(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i)
    rhos[i] = rho_line_maximal(domains[lines[i]]);

  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      for (std::size_t k = j + 1; k < lines.size(); ++k) {
        int dij = dist_maximal_sets(rhos[i], rhos[j]);
        int dik = dist_maximal_sets(rhos[i], rhos[k]);
        int djk = dist_maximal_sets(rhos[j], rhos[k]);
        auto ok = [&](int d) { return K2 < Rational(d, 1); };
        if (ok(dij) && ok(dik) && ok(djk)) {
          PassingUp up;
          up.W = DomainRef{-1, 0};
          up.triple = {domains[lines[i]], domains[lines[j]], domains[lines[k]]};
          up.separations = {dij, dik, djk};
          return up;
        }
      }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

int TableSystem::dist(int domain, const std::vector<VertexId>& a,
                      const std::vector<VertexId>& b) const {
  if (a.empty() || b.empty()) return kUnreached;
  auto d = spaces[domain].g.bfs_multi(a);
  int best = kUnreached;
  for (VertexId v : b)
    if (d[v] != kUnreached && (best == kUnreached || d[v] < best)) best = d[v];
  return best;
}

std::vector<FlatSystem::Violation> TableSystem::verify_behrstock(
    const std::vector<int>& samples) const {
  std::vector<FlatSystem::Violation> out;
  const int n = static_cast<int>(domain_names.size());
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v || rel[u][v] != Rel::Trans) continue;
      auto ru = rho.find({v, u});
      auto rv = rho.find({u, v});
      if (ru == rho.end() || rv == rho.end()) continue;
      for (int x : samples) {
        int du = dist(u, pi[u][x], ru->second);
        if (du <= lambda) continue;
        int dv = dist(v, pi[v][x], rv->second);
        if (dv < lambda) continue;
        out.push_back({domain_names[u], domain_names[v], "sample " + std::to_string(x), du, dv});
      }
    }
  return out;
}

std::vector<FlatSystem::Violation> TableSystem::verify_bgi(
    int U, int V, const std::vector<std::vector<VertexId>>& geodesics) const {
  std::vector<FlatSystem::Violation> out;
  auto r = rho.find({U, V});
  auto down = rho_down.find({V, U});
  if (r == rho.end() || down == rho_down.end()) return out;
  for (std::size_t gi = 0; gi < geodesics.size(); ++gi) {
    const auto& path = geodesics[gi];
    int sep = dist(V, r->second, path);
    if (sep == kUnreached || sep <= lambda) continue;
    std::vector<VertexId> image;
    for (VertexId v : path) {
      const auto& img = down->second[v];
      image.insert(image.end(), img.begin(), img.end());
    }
    sort_unique(image);
    int diam = 0;
    for (VertexId a : image) {
      auto d = spaces[U].g.bfs(a);
      for (VertexId b : image)
        if (d[b] != kUnreached) diam = std::max(diam, d[b]);
    }
    if (diam > lambda)
      out.push_back({domain_names[U], domain_names[V], "geodesic " + std::to_string(gi), sep,
                     diam});
  }
  return out;
}

std::optional<std::vector<int>> TableSystem::find_transverse_pair(int U, int reach) const {
  // BFS over translate words
  std::vector<std::pair<int, std::vector<int>>> frontier{{U, {}}};
  std::set<int> seen{U};
  for (int depth = 0; depth < reach; ++depth) {
    std::vector<std::pair<int, std::vector<int>>> next;
    for (const auto& [d, word] : frontier) {
      for (std::size_t g = 0; g < translate.size(); ++g) {
        int img = translate[g][d];
        auto w2 = word;
        w2.push_back(static_cast<int>(g));
        if (rel[U][img] == Rel::Trans) return w2;
        if (seen.insert(img).second) next.push_back({img, std::move(w2)});
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// the recipe

namespace {

struct AxisBuild {
  std::vector<VertexId> nodes;   // geodesic in the contact graph
  std::vector<int> wall_ids;
};

// geodesic through the a-orbit of a basepoint wall
std::optional<AxisBuild> orbit_axis(const BallComplex& ball, const ContactGraph& cg,
                                    const FlatSystem& sys, const GroupElement& a, int reach) {
  auto base = sys.pi_maximal(GroupElement());
  if (base.empty()) return std::nullopt;
  VertexId n0 = base.front();
  int wall0 = cg.wall_of_node[n0];
  const Presentation& p = ball.presentation();

  auto far_node = [&](int dir) -> VertexId {
    VertexId best = n0;
    for (int i = 1; i <= reach; ++i) {
      auto img = translate_wall(ball, a.pow(p, dir * i), wall0);
      if (!img || cg.node_of_wall[*img] < 0) break;
      best = static_cast<VertexId>(cg.node_of_wall[*img]);
    }
    return best;
  };
  VertexId lo = far_node(-1), hi = far_node(+1);
  if (lo == hi) return std::nullopt;
  AxisBuild ax;
  ax.nodes = cg.g.shortest_path(lo, hi);
  for (VertexId n : ax.nodes) ax.wall_ids.push_back(cg.wall_of_node[n]);
  return ax;
}

Scope wall_scope(const BallComplex& ball, int element_length) {
  Scope s;
  s.max_level = ball.horizon() - element_length - 1;
  return s;
}

}  // namespace

RecipeOutcome recipe_rank_one(const BallComplex& ball, const FlatSystem& system,
                              const std::vector<GroupElement>& T, const RecipeBudget& budget) {
  RecipeOutcome out;
  const Presentation& p = ball.presentation();
  const MedianWindow& win = ball.window();

  // reducible windows cannot carry the construction; report the witness
  auto split = detect_product(win, std::max(2, win.guard()));
  if (split) {
    out.product_witness = split;
    out.reason = "window decomposes as a product of wall families";
    return out;
  }

  const ContactGraph& cg = system.contact();
  const int E = system.constants().E_window;
  HypGraph hyp = cg.as_hyp(E);

  // step 1: a generator with an active domain
  std::optional<GroupElement> a;
  FlatSystem::ActiveDomainReport active;
  for (const auto& t : T) {
    if (t.is_identity()) continue;
    try {
      int k = std::max(1, win.guard() / std::max(1, static_cast<int>(t.length())));
      auto r = system.find_active_domain(t, k, budget.a_threshold);
      if (r.passes_threshold) {
        a = t;
        active = r;
        break;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoGrowth) throw;
    }
  }
  if (!a) {
    out.reason = "no generator has an active domain above the threshold";
    return out;
  }

  RecipeCertificate cert;
  cert.a = a->str(p);
  cert.E_maximal = E;

  // step 2: already loxodromic on the maximal domain
  if (active.domain.is_maximal()) {
    auto ax = orbit_axis(ball, cg, system, *a, win.horizon());
    if (!ax || static_cast<int>(ax->nodes.size()) < 6 * E + 3) {
      out.reason = "maximal-domain axis too short for a curtain";
      return out;
    }
    const int alen = static_cast<int>(a->length());
    auto power_iso = [&](int m) { return contact_iso(ball, cg, a->pow(p, m)); };
    auto power_scope = [&](int m) { return wall_scope(ball, m * alen); };
    const int L = static_cast<int>(ax->nodes.size()) - 1;
    for (int offset = 1; offset + 6 * E <= L - 1; ++offset) {
      Curtain c;
      try {
        c = make_curtain(hyp, ax->nodes, offset);
      } catch (const Error&) {
        continue;
      }
      std::optional<SkewerReport> sk;
      try {
        sk = skewers(hyp, c, budget.m_max, power_iso, power_scope);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PartialAction) throw;
        continue;
      }
      if (!sk) continue;
      cert.route = "direct-maximal";
      cert.element = cert.a;
      cert.g = "e";
      cert.m = sk->m;
      cert.has_curtain = true;
      cert.curtain_axis_walls = ax->wall_ids;
      cert.curtain_offset = offset;
      cert.skewer = sk;
      // tau for a^m, with as many iterations as stay visible
      auto w = a->pow(p, sk->m);
      auto w_iso = [&](int i) { return contact_iso(ball, cg, w.pow(p, i)); };
      auto w_scope = [&](int i) {
        return wall_scope(ball, i * static_cast<int>(w.length()));
      };
      for (int k = budget.tau_k; k >= 1; --k) {
        try {
          cert.tau = certify_tau(hyp, c, k, w_iso, w_scope, cert.a + "^" + std::to_string(sk->m));
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::PartialAction) throw;
        }
      }
      cert.notes = "generator acts loxodromically on the maximal domain";
      out.certificate = cert;
      return out;
    }
    out.reason = "no curtain on the maximal axis could be skewered within budget";
    return out;
  }

  // step 3: transverse pair and separation hunt
  auto pair = system.find_transverse_pair(T, active.domain, system.constants().N + 1);
  if (!pair) {
    out.reason = "no transverse translate of the active domain";
    return out;
  }
  GroupElement b = pair->first;
  auto rho_u = system.rho_line_maximal(active.domain);

  auto separation_of = [&](const GroupElement& g) -> std::optional<int> {
    auto gU = system.translate_domain(g, active.domain);
    if (!gU || system.relation(active.domain, *gU) != Rel::Trans) return std::nullopt;
    std::vector<VertexId> rho_g;
    try {
      rho_g = system.rho_line_maximal(*gU);
    } catch (const Error&) {
      return std::nullopt;
    }
    int d = system.dist_maximal_sets(rho_u, rho_g);
    return d == kUnreached ? std::nullopt : std::optional<int>(d);
  };

  // candidates: the found b and its powers (the repeated transverse mover)
  std::string notes;
  GroupElement best_g = b;
  int best_sep = separation_of(b).value_or(0);
  int best_far_sep = best_sep;
  GroupElement far_g = b;
  {
    GroupElement cur = b;
    for (int j = 2; j * static_cast<int>(b.length()) <= win.horizon(); ++j) {
      cur = cur.times(p, b);
      auto s = separation_of(cur);
      if (!s) break;
      if (*s > best_far_sep) {
        best_far_sep = *s;
        far_g = cur;
      }
      // flips of g a^m g^-1 need 2|g|+m+1 visible letters
      if (2 * static_cast<int>(cur.length()) + 2 <= win.horizon() && *s > best_sep) {
        best_sep = *s;
        best_g = cur;
      }
    }
  }
  notes += "separation target " + std::to_string(budget.separation_target_E * E) +
           "; best flip-visible separation " + std::to_string(best_sep) + " (g=" +
           best_g.str(p) + "), best visible separation " + std::to_string(best_far_sep) + ";";

  // per the passing-up pipeline, try to improve the pair when it is short
  if (best_sep <= budget.separation_target_E * E) {
    try {
      auto chain = system.conjugate_chain(*a, b, active.domain, Rational(1, 2),
                                          std::min(3, system.constants().N));
      notes += " conjugate-chain built " + std::to_string(chain.domains.size()) + " domains;";
    } catch (const Error& e) {
      notes += std::string(" conjugate-chain: ") + e.what() + ";";
    }
  }

  // maximal-curtain attempt
  const int needed = 6 * E + 2 + 2;  // interval strictly inside plus one node margin each side
  if (best_sep >= needed) {
    // axis between the closest pair of rho nodes
    auto rho_g = system.rho_line_maximal(*system.translate_domain(best_g, active.domain));
    auto dmulti = cg.g.bfs_multi(rho_u);
    VertexId target = rho_g.front();
    for (VertexId v : rho_g)
      if (dmulti[v] != kUnreached && dmulti[v] < dmulti[target]) target = v;
    auto dback = cg.g.bfs(target);
    VertexId source = rho_u.front();
    for (VertexId v : rho_u)
      if (dback[v] != kUnreached && dback[v] < dback[source]) source = v;
    auto axis = cg.g.shortest_path(source, target);
    for (int m = 1; m <= budget.m_max; ++m) {
      GroupElement am = a->pow(p, m);
      GroupElement gam = am.conjugate(p, best_g);
      Scope scope = wall_scope(ball, static_cast<int>(gam.length()));
      if (scope.max_level < 0) break;
      PartialIso i1 = contact_iso(ball, cg, gam);
      PartialIso i2 = contact_iso(ball, cg, am);
      GroupElement w = am.times(p, gam);
      auto w_iso = [&](int i) { return contact_iso(ball, cg, w.pow(p, i)); };
      auto w_scope = [&](int i) {
        return wall_scope(ball, i * static_cast<int>(w.length()));
      };
      const int L = static_cast<int>(axis.size()) - 1;
      for (int offset = 1; offset + 6 * E <= L - 1; ++offset) {
        try {
          Curtain c = make_curtain(hyp, axis, offset);
          auto res = flip_then_skewer(hyp, c, i1, i2, scope, budget.tau_k, w_iso, w_scope,
                                      w.str(p));
          if (!res.containment) continue;
          cert.route = "maximal-curtain";
          cert.element = w.str(p);
          cert.g = best_g.str(p);
          cert.m = m;
          cert.has_curtain = true;
          for (VertexId n : axis) cert.curtain_axis_walls.push_back(cg.wall_of_node[n]);
          cert.curtain_offset = offset;
          cert.flip_reports = {res.flip_plus, res.flip_minus};
          cert.tau = res.tau;
          cert.notes = notes + " curtain route succeeded";
          out.certificate = cert;
          return out;
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::PartialAction ||
              e.kind() == ErrorKind::FlipPreconditionFailed ||
              e.kind() == ErrorKind::IntervalTooWide ||
              e.kind() == ErrorKind::ChainBroken)
            continue;
          throw;
        }
      }
    }
    notes += " curtain attempts exhausted without a flip pair;";
  } else {
    notes += " separation below curtain threshold " + std::to_string(needed) + ";";
  }

  // cubical route: a wall separating the two flats, flipped from both sides.
  // Shorter movers give deeper visibility, so candidates go by length: the
  // first transverse mover, then its powers, then the best separated one.
  std::vector<GroupElement> cubical_candidates{b};
  {
    GroupElement cur = b;
    for (int j = 2; j * static_cast<int>(b.length()) + 2 < win.horizon(); ++j) {
      cur = cur.times(p, b);
      cubical_candidates.push_back(cur);
    }
    if (!(best_g == b)) cubical_candidates.push_back(best_g);
  }
  for (const GroupElement& g : cubical_candidates) {
    auto gU = system.translate_domain(g, active.domain);
    if (gU && system.relation(active.domain, *gU) == Rel::Trans) {
      VertexId u_vertex = *ball.find(system.flat_rep(active.domain.flat));
      VertexId g_vertex = *ball.find(system.flat_rep(gU->flat));
      auto path = win.graph().shortest_path(u_vertex, g_vertex);
      std::vector<int> crossing_walls;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int wall = win.wall_of_edge(path[i], path[i + 1]);
        if (wall < 0) continue;
        if (win.wall_side(wall, u_vertex) != win.wall_side(wall, g_vertex))
          crossing_walls.push_back(wall);
      }
      // middle-out deterministic order
      std::vector<std::size_t> order(crossing_walls.size());
      std::iota(order.begin(), order.end(), 0);
      const std::size_t mid = crossing_walls.size() / 2;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        auto dx = x > mid ? x - mid : mid - x;
        auto dy = y > mid ? y - mid : mid - y;
        return dx != dy ? dx < dy : x < y;
      });
      for (std::size_t idx : order) {
        int wall = crossing_walls[idx];
        int u_side = win.wall_side(wall, u_vertex);
        for (int m = 1; m <= budget.m_max; ++m) {
          GroupElement am = a->pow(p, m);
          GroupElement gam = am.conjugate(p, g);
          GroupElement w = am.times(p, gam);
          int r1 = win.horizon() - static_cast<int>(gam.length());
          int r2 = win.horizon() - static_cast<int>(am.length());
          int rw = win.horizon() - static_cast<int>(w.length());
          if (std::min({r1, r2, rw}) < 0) break;
          try {
            auto f1 = wall_flip(ball, wall, u_side, gam, r1);
            if (!f1.holds) continue;
            auto f2 = wall_flip(ball, wall, 1 - u_side, am, r2);
            if (!f2.holds) continue;
            auto sk = wall_skewer(ball, wall, u_side, w, budget.tau_k, rw);
            if (!sk.holds) continue;
            cert.route = "cubical-wall";
            cert.element = w.str(p);
            cert.g = g.str(p);
            cert.m = m;
            cert.cubical_wall = wall;
            const Wall& W = win.walls()[wall];
            cert.wall_edge_labels = {win.label(W.rep_a()), win.label(W.rep_b())};
            cert.cubical_flip_plus = f1;
            cert.cubical_flip_minus = f2;
            cert.cubical_skewer = sk;
            cert.notes = notes + " cubical wall between the flats flipped from both sides";
            out.certificate = cert;
            return out;
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::PartialAction) break;
            throw;
          }
        }
      }
    }
  }

  out.reason = notes + " no certifiable flip pair within budget";
  return out;
}

bool verify_certificate(const BallComplex& ball, const FlatSystem& system,
                        const RecipeCertificate& cert) {
  const Presentation& p = ball.presentation();
  const ContactGraph& cg = system.contact();
  HypGraph hyp = cg.as_hyp(cert.E_maximal);
  GroupElement a = GroupElement::parse(p, cert.a);
  GroupElement g = cert.g == "e" ? GroupElement() : GroupElement::parse(p, cert.g);

  if (cert.route == "direct-maximal" || cert.route == "maximal-curtain") {
    std::vector<VertexId> axis;
    for (int wall : cert.curtain_axis_walls) {
      if (wall < 0 || cg.node_of_wall[wall] < 0) return false;
      axis.push_back(static_cast<VertexId>(cg.node_of_wall[wall]));
    }
    Curtain c = make_curtain(hyp, axis, cert.curtain_offset);
    if (cert.route == "direct-maximal") {
      auto power_iso = [&](int m) { return contact_iso(ball, cg, a.pow(p, m)); };
      auto power_scope = [&](int m) {
        return wall_scope(ball, m * static_cast<int>(a.length()));
      };
      auto sk = skewers(hyp, c, cert.m, power_iso, power_scope);
      return sk && sk->m == cert.m;
    }
    GroupElement am = a.pow(p, cert.m);
    GroupElement gam = am.conjugate(p, g);
    GroupElement w = am.times(p, gam);
    if (w.str(p) != cert.element) return false;
    Scope scope = wall_scope(ball, static_cast<int>(gam.length()));
    auto w_iso = [&](int i) { return contact_iso(ball, cg, w.pow(p, i)); };
    auto w_scope = [&](int i) { return wall_scope(ball, i * static_cast<int>(w.length())); };
    try {
      auto res = flip_then_skewer(hyp, c, contact_iso(ball, cg, gam), contact_iso(ball, cg, am),
                                  scope, cert.tau ? cert.tau->iterations : 1, w_iso, w_scope,
                                  cert.element);
      return res.containment && res.flip_plus.holds && res.flip_minus.holds;
    } catch (const Error&) {
      return false;
    }
  }

  if (cert.route == "cubical-wall") {
    auto va = ball.window().find_label(cert.wall_edge_labels.first);
    auto vb = ball.window().find_label(cert.wall_edge_labels.second);
    if (!va || !vb) return false;
    int wall = ball.window().wall_of_edge(*va, *vb);
    if (wall < 0) return false;
    GroupElement am = a.pow(p, cert.m);
    GroupElement gam = am.conjugate(p, g);
    GroupElement w = am.times(p, gam);
    if (w.str(p) != cert.element) return false;
    if (!cert.cubical_flip_plus || !cert.cubical_flip_minus || !cert.cubical_skewer)
      return false;
    try {
      auto f1 = wall_flip(ball, wall, cert.cubical_flip_plus->side_flipped, gam,
                          cert.cubical_flip_plus->scope_radius);
      auto f2 = wall_flip(ball, wall, cert.cubical_flip_minus->side_flipped, am,
                          cert.cubical_flip_minus->scope_radius);
      auto sk = wall_skewer(ball, wall, cert.cubical_flip_plus->side_flipped == 0 ? 0 : 1, w,
                            cert.cubical_skewer->chain_k, cert.cubical_skewer->scope_radius);
      return f1.holds && f2.holds && sk.holds &&
             sk.chain_verified == cert.cubical_skewer->chain_verified;
    } catch (const Error&) {
      return false;
    }
  }
  return false;
}

}  // namespace curtainlab
