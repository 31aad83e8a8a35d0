#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curtainlab/contact.hpp"
#include "curtainlab/raag.hpp"
#include "curtainlab/util.hpp"
#include "oracles.hpp"

using namespace curtainlab;

namespace {

Presentation f2() { return Presentation({"a", "b"}, {}); }
Presentation z2() { return Presentation({"x", "y"}, {{"x", "y"}}); }
Presentation tof() { return Presentation({"x", "y", "z"}, {{"x", "y"}}); }
Presentation f2xz() { return Presentation({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}}); }

}  // namespace

TEST_CASE("normal forms: named examples") {
  auto p = z2();
  CHECK(GroupElement::parse(p, "x y x^-1").str(p) == "y");

  auto free2 = f2();
  CHECK(GroupElement::parse(free2, "a a^-1").is_identity());
  CHECK(GroupElement::parse(free2, "a b").times(free2, GroupElement::parse(free2, "b^-1 a"))
            .str(free2) == "a^2");

  auto t = tof();
  auto w = GroupElement::parse(t, "z x z^-1 z x");
  CHECK(w.str(t) == "z x^2");
  CHECK(w.length() == 3);
}

TEST_CASE("normal forms agree with the rewriting-orbit oracle") {
  auto t = tof();
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    int len = rng.range(0, 7);
    std::vector<Letter> word;
    for (int i = 0; i < len; ++i) {
      int gen = rng.range(0, 2);
      word.push_back(static_cast<Letter>((gen + 1) * (rng.coin() ? 1 : -1)));
    }
    auto nf = GroupElement::from_word(t, word);
    auto expect = oracle::brute_normal_form(t, word);
    CAPTURE(trial);
    CHECK(nf.word() == expect);
  }
}

TEST_CASE("normal form is confluent under randomized multiplication order") {
  auto t = tof();
  Rng rng(43);
  for (int trial = 0; trial < 120; ++trial) {
    int len = rng.range(2, 10);
    std::vector<Letter> word;
    for (int i = 0; i < len; ++i)
      word.push_back(static_cast<Letter>((rng.range(0, 2) + 1) * (rng.coin() ? 1 : -1)));
    auto direct = GroupElement::from_word(t, word);
    // random split-and-multiply schedule
    std::size_t cut = 1 + rng.below(word.size() - 1);
    auto left = GroupElement::from_word(t, {word.begin(), word.begin() + cut});
    auto right = GroupElement::from_word(t, {word.begin() + cut, word.end()});
    CHECK(left.times(t, right) == direct);
    CHECK(direct.times(t, direct.inverse(t)).is_identity());
  }
}

TEST_CASE("multiply and powers") {
  auto p = z2();
  auto x = GroupElement::generator(0, 1);
  auto y = GroupElement::generator(1, 1);
  auto xy = x.times(p, y);
  CHECK(xy.str(p) == "x y");
  CHECK(xy.length() == 2);
  CHECK(x.pow(p, 5).str(p) == "x^5");
  CHECK(x.pow(p, -2).str(p) == "x^-2");
  CHECK(xy.times(p, xy.inverse(p)).is_identity());
}

TEST_CASE("ball sizes: counting oracles") {
  // 4-valent tree: 1 + 4 + 12 + 36
  auto f = BallComplex::build(f2(), 3, 1 << 20);
  CHECK(f.window().size() == 53);

  // diamond in the square lattice: 1 + 4 + 8
  auto z = BallComplex::build(z2(), 2, 1 << 20);
  CHECK(z.window().size() == 13);

  // tree of flats at horizon 2: exhaustive dedup over words of length <= 2
  auto t = tof();
  auto ball = BallComplex::build(t, 2, 1 << 20);
  std::set<std::string> elems{GroupElement().key()};
  for (int l1 = -3; l1 <= 3; ++l1) {
    if (l1 == 0) continue;
    std::vector<Letter> w1{static_cast<Letter>(l1)};
    elems.insert(oracle::brute_normal_form(t, w1).empty()
                     ? std::string()
                     : GroupElement::from_word(t, w1).key());
    for (int l2 = -3; l2 <= 3; ++l2) {
      if (l2 == 0) continue;
      std::vector<Letter> w2{static_cast<Letter>(l1), static_cast<Letter>(l2)};
      auto nf = GroupElement::from_word(t, w2);
      if (nf.length() <= 2) elems.insert(nf.key());
    }
  }
  CHECK(ball.window().size() == elems.size());
  CHECK(ball.window().size() == 33);
}

TEST_CASE("window guard and labels") {
  auto f = BallComplex::build(f2(), 6, 1 << 20);
  CHECK(f.window().guard() == 2);
  CHECK(f.window().is_window());
  CHECK(f.element(f.identity_vertex()).is_identity());
  CHECK(f.window().label(0) == "e");
}

TEST_CASE("action on vertices") {
  auto t = tof();
  auto ball = BallComplex::build(t, 5, 1 << 20);
  auto g = GroupElement::parse(t, "z x z^-1");
  auto v = ball.find(GroupElement::parse(t, "z"));
  REQUIRE(v.has_value());
  auto moved = ball.act(g, *v);
  REQUIRE(moved.has_value());
  CHECK(ball.element(*moved).str(t) == "z x");

  // identity fixes everything
  for (VertexId u = 0; u < 20; ++u) CHECK(ball.act(GroupElement(), u) == u);

  // isometry where defined
  Rng rng(47);
  auto a = GroupElement::parse(t, "x z");
  for (int probe = 0; probe < 40; ++probe) {
    VertexId p = static_cast<VertexId>(rng.below(ball.window().size()));
    VertexId q = static_cast<VertexId>(rng.below(ball.window().size()));
    auto gp = ball.act(a, p);
    auto gq = ball.act(a, q);
    if (!gp || !gq) continue;
    if (ball.window().depth(p) > ball.window().guard() ||
        ball.window().depth(q) > ball.window().guard())
      continue;
    CHECK(ball.window().raw_distance(p, q) == ball.window().raw_distance(*gp, *gq));
  }

  // act_checked enforces the guard
  auto far = GroupElement::parse(t, "z^5");
  CHECK_THROWS_AS(ball.act_checked(far, *v), Error);
}

TEST_CASE("tree windows have one wall per edge; lattice walls form two crossing families") {
  auto f = BallComplex::build(f2(), 4, 1 << 20);
  CHECK(f.window().walls().size() == f.window().graph().edge_count());

  auto z = BallComplex::build(z2(), 4, 1 << 20);
  auto split = detect_product(z.window(), z.window().guard());
  REQUIRE(split.has_value());
  CHECK(split->family_a.size() >= 2);
  CHECK(split->family_b.size() >= 2);
  for (int a : split->family_a)
    for (int b : split->family_b) CHECK(z.window().walls_cross(a, b));
}

TEST_CASE("enumerate_elements") {
  auto free2 = f2();
  auto a = GroupElement::generator(0, 1);
  auto out = enumerate_elements(free2, {a}, 2);
  REQUIRE(out.size() == 5);  // e, a, a^-1, a^2, a^-2
  CHECK(out[0].is_identity());

  auto t = tof();
  auto xz = enumerate_elements(t, {GroupElement::generator(0, 1), GroupElement::generator(2, 1)},
                               1);
  CHECK(xz.size() == 5);  // e, x, x^-1, z, z^-1

  // free group: all reduced words of length <= 3 over a,b
  auto full = enumerate_elements(free2, {a, GroupElement::generator(1, 1)}, 3);
  CHECK(full.size() == 53);

  // sorted by (T-length, shortlex)
  auto with_len = enumerate_elements_with_length(free2, {a, GroupElement::generator(1, 1)}, 3);
  for (std::size_t i = 1; i < with_len.size(); ++i)
    CHECK(with_len[i - 1].second <= with_len[i].second);
}

TEST_CASE("relation search") {
  auto free2 = f2();
  auto a = GroupElement::generator(0, 1);
  auto b = GroupElement::generator(1, 1);
  CHECK(relation_search(free2, a, a, 2).has_value());
  CHECK_FALSE(relation_search(free2, a, b, 6, 2).has_value());

  auto p = z2();
  auto rel = relation_search(p, GroupElement::generator(0, 1), GroupElement::generator(1, 1), 4,
                             1);
  REQUIRE(rel.has_value());  // a commutator relator
  CHECK(*rel == "A^-1 B^-1 A B");
}

TEST_CASE("f2 x z walls split into the two join families") {
  auto ball = BallComplex::build(f2xz(), 4, 1 << 20);
  auto split = detect_product(ball.window(), ball.window().guard());
  REQUIRE(split.has_value());
  // one family is the t-walls: every wall in it has a t-edge
  auto has_t_edge = [&](int wi) {
    for (auto [u, v] : ball.window().walls()[wi].edges) {
      const auto& eu = ball.element(u);
      const auto& ev = ball.element(v);
      GroupElement diff = eu.inverse(ball.presentation()).times(ball.presentation(), ev);
      if (gen_of(diff.word().front()) == 2) return true;
    }
    return false;
  };
  auto all_t = [&](const std::vector<int>& fam) {
    for (int w : fam)
      if (!has_t_edge(w)) return false;
    return true;
  };
  auto none_t = [&](const std::vector<int>& fam) {
    for (int w : fam)
      if (has_t_edge(w)) return false;
    return true;
  };
  bool a_is_t = all_t(split->family_a);
  CHECK((a_is_t ? none_t(split->family_b) : none_t(split->family_a)));
  CHECK((a_is_t ? all_t(split->family_a) : all_t(split->family_b)));
}
