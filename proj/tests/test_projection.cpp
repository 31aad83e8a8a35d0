#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curtainlab/json_io.hpp"
#include "curtainlab/projection.hpp"

using namespace curtainlab;

namespace {

Presentation tof() { return Presentation({"x", "y", "z"}, {{"x", "y"}}); }
Presentation f2() { return Presentation({"a", "b"}, {}); }

struct Instance {
  BallComplex ball;
  FlatSystem system;
};

Instance make_tof(int horizon) {
  Instance inst{BallComplex::build(tof(), horizon, 1 << 21), FlatSystem()};
  inst.system = FlatSystem::build(inst.ball, 7);
  return inst;
}

}  // namespace

TEST_CASE("tree-of-flats instantiation: flats and relations") {
  auto inst = make_tof(6);
  const auto& s = inst.system;
  CHECK(s.flat_count() >= 3);
  CHECK(s.constants().N == 3);
  CHECK(s.constants().E_window >= 1);

  const Presentation& p = inst.ball.presentation();
  auto e_flat = s.find_flat(GroupElement());
  auto z_flat = s.find_flat(GroupElement::parse(p, "z"));
  REQUIRE(e_flat);
  REQUIRE(z_flat);

  FlatSystem::DomainRef ex{*e_flat, 0}, ey{*e_flat, 1}, zx{*z_flat, 0};
  FlatSystem::DomainRef S{-1, 0};
  CHECK(s.relation(ex, ey) == Rel::Orth);     // two lines of one flat
  CHECK(s.relation(ex, zx) == Rel::Trans);    // lines of different flats
  CHECK(s.relation(ex, S) == Rel::Nested);
  CHECK(s.relation(S, S) == Rel::Same);

  // strip_to_rep: the flat of z x^2 y is the z flat
  CHECK(s.strip_to_rep(GroupElement::parse(p, "z x^2 y")).str(p) == "z");
}

TEST_CASE("line projections and rho points") {
  auto inst = make_tof(6);
  const auto& s = inst.system;
  const Presentation& p = inst.ball.presentation();
  int e_flat = *s.find_flat(GroupElement());
  int z_flat = *s.find_flat(GroupElement::parse(p, "z"));
  FlatSystem::DomainRef ex{e_flat, 0}, ey{e_flat, 1}, zx{z_flat, 0};

  CHECK(s.pi_line(ex, GroupElement::parse(p, "x^3 y^-1")) == 3);
  CHECK(s.pi_line(ey, GroupElement::parse(p, "x^3 y^-1")) == -1);
  // points hanging below the flat project through their attaching vertex
  CHECK(s.pi_line(ex, GroupElement::parse(p, "x^2 z y")) == 2);
  // a whole distant flat projects to the connecting point
  CHECK(s.rho_line_line(zx, ex) == 0);
  CHECK(s.rho_line_line(ex, zx) == 0);
  int far_flat = *s.find_flat(GroupElement::parse(p, "x^4 z"));
  CHECK(s.rho_line_line({far_flat, 0}, ex) == 4);

  // far points in the flat of U project near rho on the other domain
  auto far_in_e = GroupElement::parse(p, "x^4");
  CHECK(s.pi_line(zx, far_in_e) == s.rho_line_line(ex, zx));
}

TEST_CASE("behrstock and bgi sweeps are clean at the frozen lambda") {
  auto inst = make_tof(5);
  const auto& s = inst.system;
  std::vector<GroupElement> samples;
  for (VertexId v = 0; v < inst.ball.window().size(); ++v)
    if (inst.ball.window().depth(v) <= 3) samples.push_back(inst.ball.element(v));
  CHECK(s.verify_behrstock(samples, 20).empty());
  CHECK(s.verify_bgi(12, 30, 7).empty());
}

TEST_CASE("planted violations are reported by the table sweeps") {
  // two transverse domains over 30-vertex path spaces with a dishonest rho
  TableSystem ts;
  ts.domain_names = {"U", "V"};
  for (int i = 0; i < 2; ++i) {
    SimpleGraph g(30);
    for (int v = 0; v + 1 < 30; ++v) g.add_edge(v, v + 1);
    g.finish();
    ts.spaces.push_back(HypGraph{std::move(g), 1, {}});
  }
  ts.rel = {{Rel::Same, Rel::Trans}, {Rel::Trans, Rel::Same}};
  ts.lambda = 2;
  ts.rho[{1, 0}] = {15};
  ts.rho[{0, 1}] = {15};
  // one sample that projects far from rho on both sides: a Behrstock violation
  ts.pi = {{{29}}, {{29}}};
  auto bad = ts.verify_behrstock({0});
  REQUIRE(bad.size() == 1);
  CHECK(bad.front().domain_u == "U");

  // honest sample: far on U, close on V
  ts.pi = {{{29}}, {{16}}};
  CHECK(ts.verify_behrstock({0}).empty());

  // BGI: nested U in V with a fat downward image
  TableSystem nested;
  nested.domain_names = {"U", "V"};
  for (int i = 0; i < 2; ++i) {
    SimpleGraph g(30);
    for (int v = 0; v + 1 < 30; ++v) g.add_edge(v, v + 1);
    g.finish();
    nested.spaces.push_back(HypGraph{std::move(g), 1, {}});
  }
  nested.rel = {{Rel::Same, Rel::Nested}, {Rel::Nested, Rel::Same}};
  nested.lambda = 2;
  nested.rho[{0, 1}] = {0};  // rho^U_V at one end
  auto& down = nested.rho_down[{1, 0}];
  down.assign(30, {});
  for (VertexId v = 0; v < 30; ++v) down[v] = {std::min<VertexId>(v, 14)};  // spread image
  std::vector<std::vector<VertexId>> geodesics{{10, 11, 12, 13, 14, 15, 16}};
  auto bgi_bad = nested.verify_bgi(0, 1, geodesics);
  REQUIRE(bgi_bad.size() == 1);

  // bounded image: clean
  for (VertexId v = 0; v < 30; ++v) down[v] = {14};
  CHECK(nested.verify_bgi(0, 1, geodesics).empty());
}

TEST_CASE("find_active_domain") {
  auto inst = make_tof(6);
  const auto& s = inst.system;
  const Presentation& p = inst.ball.presentation();

  auto rx = s.find_active_domain(GroupElement::parse(p, "x"), 2, Rational(1, 2));
  CHECK_FALSE(rx.domain.is_maximal());
  CHECK(rx.domain.axis == 0);
  CHECK(rx.growth_ratio == Rational(1, 1));
  CHECK(rx.passes_threshold);

  auto ry = s.find_active_domain(GroupElement::parse(p, "y"), 2, Rational(1, 2));
  CHECK(ry.domain.axis == 1);

  auto rz = s.find_active_domain(GroupElement::parse(p, "z"), 2, Rational(1, 2));
  CHECK(rz.domain.is_maximal());
  CHECK(rz.growth_ratio >= Rational(1, 2));

  CHECK_THROWS_AS(s.find_active_domain(GroupElement(), 2, Rational(1, 2)), Error);
}

TEST_CASE("find_transverse_pair") {
  auto inst = make_tof(6);
  const auto& s = inst.system;
  const Presentation& p = inst.ball.presentation();
  int e_flat = *s.find_flat(GroupElement());
  std::vector<GroupElement> T{GroupElement::parse(p, "x"), GroupElement::parse(p, "y"),
                              GroupElement::parse(p, "z")};
  auto pair = s.find_transverse_pair(T, {e_flat, 0}, s.constants().N);
  REQUIRE(pair.has_value());
  CHECK(pair->first.str(p) == "z");
  CHECK(s.relation({e_flat, 0}, pair->second) == Rel::Trans);

  CHECK_THROWS_AS(s.find_transverse_pair(T, {-1, 0}, 3), Error);  // maximal domain

  // hand-built invariant orbit: every generator fixes U, relations never transverse
  TableSystem ts;
  ts.domain_names = {"U", "W"};
  ts.rel = {{Rel::Same, Rel::Orth}, {Rel::Orth, Rel::Same}};
  ts.translate = {{0, 1}, {0, 1}};  // two generators, both fixing each domain
  CHECK_FALSE(ts.find_transverse_pair(0, 4).has_value());
}

TEST_CASE("conjugate_chain: growth, verification, exhaustion") {
  const Presentation p = tof();
  auto a = GroupElement::parse(p, "x");
  auto b = GroupElement::parse(p, "z");

  {
    auto inst = make_tof(6);
    int e_flat = *inst.system.find_flat(GroupElement());
    auto chain = inst.system.conjugate_chain(a, b, {e_flat, 0}, Rational(1, 2), 1);
    CHECK(chain.domains.size() == 2);  // P = 1: just (U, bU)
    CHECK(chain.elements.size() == 1);
    CHECK(chain.elements[0].str(p) == "z x z^-1");
  }
  {
    auto inst = make_tof(7);
    int e_flat = *inst.system.find_flat(GroupElement());
    // K1 past 4E forces s = K1+1 and satisfies the local-to-global hypothesis
    int fourE = 4 * inst.system.constants().E_window;
    auto chain = inst.system.conjugate_chain(a, b, {e_flat, 0}, Rational(fourE, 1), 2);
    REQUIRE(chain.domains.size() == 3);
    CHECK(chain.s == fourE + 1);
    CHECK(chain.local_to_global_hypothesis);
    for (int sep : chain.separations) CHECK(sep > fourE);
    CHECK(inst.system.pairwise_transverse(chain.domains));
  }
  {
    auto inst = make_tof(6);
    int e_flat = *inst.system.find_flat(GroupElement());
    CHECK_THROWS_AS(
        inst.system.conjugate_chain(a, b, {e_flat, 0}, Rational(50, 1), 3), Error);
  }
}

TEST_CASE("conjugate chain feeds passing_up_search") {
  auto inst = make_tof(7);
  const auto& s = inst.system;
  const Presentation& p = inst.ball.presentation();
  int e_flat = *s.find_flat(GroupElement());
  auto chain = s.conjugate_chain(GroupElement::parse(p, "x"), GroupElement::parse(p, "z"),
                                 {e_flat, 0}, Rational(1, 2), 3);
  REQUIRE(chain.domains.size() == 4);
  CHECK(s.pairwise_transverse(chain.domains));

  GroupElement x_pt = GroupElement::parse(p, "x^-2");
  GroupElement y_pt = s.flat_rep(chain.domains.back().flat).times(p, GroupElement::parse(p, "x^2"));
  auto up = s.passing_up_search(chain.domains, x_pt, y_pt, Rational(1, 2), Rational(1, 2));
  REQUIRE(up.has_value());
  CHECK(up->W.is_maximal());
  CHECK(up->triple.size() == 3);
  for (int sep : up->separations) CHECK(sep >= 1);

  // fewer than three proper domains
  auto none = s.passing_up_search({chain.domains[0], chain.domains[1]}, x_pt, y_pt,
                                  Rational(1, 2), Rational(1, 2));
  CHECK_FALSE(none.has_value());
}

TEST_CASE("recipe on the free group: the generator skewers the contact graph directly") {
  BallComplex ball = BallComplex::build(f2(), 9, 1 << 21);
  FlatSystem system = FlatSystem::build(ball, 7);
  CHECK_FALSE(system.has_flats());
  std::vector<GroupElement> T{GroupElement::generator(0, 1), GroupElement::generator(1, 1)};
  auto outcome = recipe_rank_one(ball, system, T, RecipeBudget{});
  REQUIRE(outcome.certificate.has_value());
  const auto& cert = *outcome.certificate;
  CHECK(cert.route == "direct-maximal");
  CHECK(cert.a == "a");
  CHECK(cert.m <= 16);
  REQUIRE(cert.skewer.has_value());
  CHECK(cert.tau.has_value());
  CHECK(verify_certificate(ball, system, cert));

  // serialization round trip preserves re-verifiability
  auto doc = certificate_to_json(cert);
  auto back = certificate_from_json(doc);
  CHECK(verify_certificate(ball, system, back));
}

TEST_CASE("recipe on the tree of flats: cubical wall certificate in the paper's form") {
  auto inst = make_tof(7);
  const Presentation& p = inst.ball.presentation();
  std::vector<GroupElement> T{GroupElement::parse(p, "x"), GroupElement::parse(p, "y"),
                              GroupElement::parse(p, "z")};
  auto outcome = recipe_rank_one(inst.ball, inst.system, T, RecipeBudget{});
  REQUIRE(outcome.certificate.has_value());
  const auto& cert = *outcome.certificate;
  CHECK(cert.route == "cubical-wall");
  CHECK(cert.a == "x");
  CHECK(cert.g == "z");
  CHECK(cert.m == 1);
  CHECK(cert.element == "x z x z^-1");
  REQUIRE(cert.cubical_skewer.has_value());
  CHECK(cert.cubical_skewer->holds);
  CHECK(cert.cubical_skewer->chain_verified);
  CHECK(verify_certificate(inst.ball, inst.system, cert));

  auto doc = certificate_to_json(cert);
  auto back = certificate_from_json(doc);
  CHECK(verify_certificate(inst.ball, inst.system, back));
}

TEST_CASE("recipe refuses product windows with a witness") {
  BallComplex z2ball =
      BallComplex::build(Presentation({"x", "y"}, {{"x", "y"}}), 6, 1 << 21);
  FlatSystem z2sys = FlatSystem::build(z2ball, 7);
  std::vector<GroupElement> T{GroupElement::generator(0, 1), GroupElement::generator(1, 1)};
  auto outcome = recipe_rank_one(z2ball, z2sys, T, RecipeBudget{});
  CHECK_FALSE(outcome.certificate.has_value());
  CHECK(outcome.product_witness.has_value());

  BallComplex fz =
      BallComplex::build(Presentation({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}}), 5, 1 << 21);
  // no flat system for two commuting pairs; the recipe only needs the window
  CHECK_THROWS_AS(FlatSystem::build(fz, 7), Error);
  auto split = detect_product(fz.window(), fz.window().guard());
  REQUIRE(split.has_value());
}
