#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curtainlab/curtain.hpp"
#include "curtainlab/generators.hpp"
#include "curtainlab/raag.hpp"

using namespace curtainlab;

namespace {

// path 0..n-1 with levels measured from `center`
HypGraph path_hyp(int n, int E = 1, int center = -1) {
  SimpleGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  g.finish();
  HypGraph h{std::move(g), E, {}};
  if (center >= 0) {
    h.level.resize(n);
    for (int v = 0; v < n; ++v) h.level[v] = std::abs(v - center);
  }
  return h;
}

std::vector<VertexId> full_axis(int n) {
  std::vector<VertexId> a(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  return a;
}

PartialIso shift_iso(int n, int t) {
  return iso_from_fn(
      n,
      [&](VertexId v) -> std::optional<VertexId> {
        int w = static_cast<int>(v) + t;
        if (w < 0 || w >= n) return std::nullopt;
        return static_cast<VertexId>(w);
      },
      "shift" + std::to_string(t));
}

PartialIso reflect_iso(int n, int k) {  // x -> k - x
  return iso_from_fn(
      n,
      [&](VertexId v) -> std::optional<VertexId> {
        int w = k - static_cast<int>(v);
        if (w < 0 || w >= n) return std::nullopt;
        return static_cast<VertexId>(w);
      },
      "reflect@" + std::to_string(k));
}

}  // namespace

TEST_CASE("four point delta") {
  CHECK(four_point_delta(path_hyp(30).g, 1).num == 0);  // paths are trees
  CHECK(measure_E(path_hyp(30).g, 1) == 1);

  // a 4-cycle has delta 1
  SimpleGraph c4(4);
  c4.add_edge(0, 1);
  c4.add_edge(1, 2);
  c4.add_edge(2, 3);
  c4.add_edge(3, 0);
  c4.finish();
  CHECK(four_point_delta(c4, 1) == Rational(1, 1));

  // big cycles are far from hyperbolic
  SimpleGraph c20(20);
  for (int i = 0; i < 20; ++i) c20.add_edge(i, (i + 1) % 20);
  c20.finish();
  CHECK(four_point_delta(c20, 1) > Rational(3, 1));
}

TEST_CASE("projection to a geodesic") {
  auto h = path_hyp(20);
  auto axis = full_axis(20);
  CHECK(project_to_geodesic(h, axis, 7) == std::vector<VertexId>{7});

  // tree: off-axis points project to the branch vertex
  auto f2 = Presentation({"a", "b"}, {});
  auto ball = BallComplex::build(f2, 4, 1 << 20);
  HypGraph tree{ball.window().graph(), 1, {}};
  auto a2 = *ball.find(GroupElement::parse(f2, "a^2"));
  auto am2 = *ball.find(GroupElement::parse(f2, "a^-2"));
  auto path = tree.g.shortest_path(am2, a2);
  auto b = *ball.find(GroupElement::parse(f2, "a b"));
  auto proj = project_to_geodesic(tree, path, b);
  REQUIRE(proj.size() == 1);
  CHECK(ball.element(proj.front()).str(f2) == "a");

  CHECK_THROWS_AS(project_to_geodesic(h, {3, 5, 7}, 0), Error);  // not a path
}

TEST_CASE("make_curtain on a path") {
  auto h = path_hyp(21);
  auto axis = full_axis(21);
  auto c = make_curtain(h, axis, 5);
  CHECK(c.i0 == 5);
  CHECK(c.i1 == 11);
  CHECK(c.pole == std::vector<VertexId>{5, 6, 7, 8, 9, 10, 11});
  CHECK(c.minus.front() == 0);
  CHECK(c.minus.back() == 4);
  CHECK(c.plus.front() == 12);
  CHECK(c.plus.back() == 20);
  CHECK(curtain_violations(h, c).empty());

  auto shifted = make_curtain(h, axis, 6);
  CHECK(shifted.pole == std::vector<VertexId>{6, 7, 8, 9, 10, 11, 12});

  CHECK_THROWS_AS(make_curtain(h, full_axis(7), 1), Error);   // too short
  CHECK_THROWS_AS(make_curtain(h, axis, 0), Error);           // not interior
  CHECK_THROWS_AS(make_curtain(h, axis, 14), Error);          // not interior
}

TEST_CASE("curtains in a tree window split it into two ends") {
  auto f2 = Presentation({"a", "b"}, {});
  auto ball = BallComplex::build(f2, 5, 1 << 20);
  HypGraph tree{ball.window().graph(), 1, {}};
  auto lo = *ball.find(GroupElement::parse(f2, "a^-5"));
  auto hi = *ball.find(GroupElement::parse(f2, "a^5"));
  auto axis = tree.g.shortest_path(lo, hi);
  REQUIRE(axis.size() == 11);
  auto c = make_curtain(tree, axis, 2);
  CHECK(curtain_violations(tree, c).empty());
  // both ends are nonempty and the identity direction sits in the pole side
  CHECK(!c.plus.empty());
  CHECK(!c.minus.empty());
}

TEST_CASE("chains and the greedy chain") {
  auto h = path_hyp(40);
  auto axis = full_axis(40);
  auto c1 = make_curtain(h, axis, 1);
  CHECK(is_chain(h, {c1}));

  auto c2 = make_curtain(h, axis, 20);
  CHECK(is_chain(h, {c1, c2}));

  auto overlapping = make_curtain(h, axis, 3);
  CHECK_FALSE(is_chain(h, {c1, overlapping}));

  auto chain = greedy_chain(h, 0, 39);
  CHECK(chain.size() >= 4);
  CHECK(is_chain(h, chain));
  int d = h.g.distance(0, 39);
  CHECK(d >= h.E * static_cast<int>(chain.size()));
  CHECK(static_cast<int>(chain.size()) >= (d - 2 * h.E) / (8 * h.E));

  // d = 8E + 2 gives exactly one placement
  auto h11 = path_hyp(11);
  auto one = greedy_chain(h11, 0, 10);
  CHECK(one.size() == 1);

  CHECK_THROWS_AS(greedy_chain(path_hyp(9), 0, 8), Error);  // TooClose

  // E = 2 instance
  auto h2 = path_hyp(60, 2);
  auto chain2 = greedy_chain(h2, 0, 59);
  CHECK(is_chain(h2, chain2));
  CHECK(59 >= 2 * static_cast<int>(chain2.size()));
  CHECK(static_cast<int>(chain2.size()) >= (59 - 4) / 16);
}

TEST_CASE("flips: identity fails, offset reflection works") {
  const int n = 161;
  auto h = path_hyp(n, 1, 0);  // level = vertex index
  auto axis = full_axis(n);
  auto c = make_curtain(h, axis, 20);  // pole [20,26]

  Scope all;
  PartialIso id = iso_from_fn(n, [](VertexId v) { return std::optional<VertexId>(v); }, "id");
  auto r = flips(h, id, c, Side::Plus, all);
  CHECK_FALSE(r.holds);

  // x -> 36 - x flips the plus side into the minus side
  Scope s36;
  s36.max_level = 36;
  auto g1 = reflect_iso(n, 36);
  auto rp = flips(h, g1, c, Side::Plus, s36);
  CHECK(rp.holds);
  CHECK(rp.proper);
  CHECK(rp.scope_level == 36);

  // x -> 56 - x flips the minus side into the plus side
  Scope s56;
  s56.max_level = 56;
  auto g2 = reflect_iso(n, 56);
  auto rm = flips(h, g2, c, Side::Minus, s56);
  CHECK(rm.holds);

  // undefined on a required vertex
  Scope wide;
  CHECK_THROWS_AS(flips(h, g1, c, Side::Plus, wide), Error);
}

TEST_CASE("skewers: shifts on the integer-line window") {
  const int n = 40, center = 20;
  auto h = path_hyp(n, 1, center);
  auto axis = full_axis(n);
  auto c = make_curtain(h, axis, 17);  // pole [17,23] around the center

  auto power_iso = [&](int m) { return shift_iso(n, m); };
  auto power_scope = [&](int m) {
    Scope s;
    s.max_level = (n - 1) / 2 - m;  // images stay inside the window
    return s;
  };
  auto r = skewers(h, c, 9, power_iso, power_scope);
  REQUIRE(r.has_value());
  CHECK(r->m == 7);  // 6E + 1

  // identity never skewers
  auto id_iso = [&](int) {
    return iso_from_fn(n, [](VertexId v) { return std::optional<VertexId>(v); }, "id");
  };
  auto none = skewers(h, c, 9, id_iso, [&](int) { return Scope{}; });
  CHECK_FALSE(none.has_value());
}

TEST_CASE("certify_tau on a long shifted line") {
  const int n = 80, center = 40;
  auto h = path_hyp(n, 1, center);
  auto axis = full_axis(n);
  auto c = make_curtain(h, axis, 28);  // pole [28,34]

  auto power_iso = [&](int i) { return shift_iso(n, 7 * i); };
  auto power_scope = [&](int i) {
    Scope s;
    s.max_level = (n - 1) / 2 - 7 * i;
    return s;
  };
  auto cert = certify_tau(h, c, 3, power_iso, power_scope, "shift7");
  CHECK(cert.chain_verified);
  CHECK(cert.tau_lower == Rational(1, 1));
  REQUIRE(cert.min_displacement.size() == 3);
  CHECK(cert.min_displacement[0] == 7);
  CHECK(cert.min_displacement[1] == 14);
  CHECK(cert.min_displacement[2] == 21);
  for (int i = 1; i <= 3; ++i) CHECK(cert.min_displacement[i - 1] >= h.E * (i + 1));

  // k = 1 still certifies, with the conservative bound
  auto small = certify_tau(h, c, 1, power_iso, power_scope, "shift7");
  CHECK(small.chain_verified);
  CHECK(small.ratio_bound == Rational(2, 1));

  // an element that does not skewer at power one is rejected
  auto bad_iso = [&](int i) { return shift_iso(n, 3 * i); };
  CHECK_THROWS_AS(certify_tau(h, c, 2, bad_iso, power_scope, "shift3"), Error);
}

TEST_CASE("flip_then_skewer: two reflections compose to a translation") {
  const int n = 161;
  auto h = path_hyp(n, 1, 0);
  auto axis = full_axis(n);
  auto c = make_curtain(h, axis, 20);  // pole [20,26]

  Scope scope;
  scope.max_level = 36;
  auto g1 = reflect_iso(n, 36);   // flips plus
  auto g2 = reflect_iso(n, 56);   // flips minus
  // w = g2 g1 : x -> x + 20
  auto w_iso = [&](int i) { return shift_iso(n, 20 * i); };
  auto w_scope = [&](int i) {
    Scope s;
    s.max_level = n - 1 - 20 * i;
    return s;
  };
  auto res = flip_then_skewer(h, c, g1, g2, scope, 3, w_iso, w_scope, "translation20");
  CHECK(res.flip_plus.holds);
  CHECK(res.flip_minus.holds);
  CHECK(res.containment);
  CHECK(res.tau.chain_verified);
  CHECK(res.tau.min_displacement == std::vector<int>{20, 40, 60});

  // g1 = g2^): cannot flip both sides
  CHECK_THROWS_AS(flip_then_skewer(h, c, g1, g1, scope, 1, w_iso, w_scope, "bad"), Error);
}
