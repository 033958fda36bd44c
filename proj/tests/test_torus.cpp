#include <set>

#include "doctest.h"
#include "prohecke/torus.hpp"

using namespace prohecke;
using torus::Torus;
using torus::TorusChar;
using torus::TorusElt;

namespace {
Torus make(GroupKind k, std::uint32_t q) { return Torus(k, q, make_field(q)); }
const std::vector<std::uint32_t> kQs{2, 3, 4, 5, 7, 8, 9};
}  // namespace

TEST_CASE("character enumeration sizes") {
  CHECK(make(GroupKind::GL2, 3).characters().size() == 4);
  CHECK(make(GroupKind::SL2, 5).characters().size() == 4);
  CHECK(make(GroupKind::PGL2, 3).characters().size() == 2);
  for (auto q : kQs) {
    auto gl = make(GroupKind::GL2, q);
    auto chars = gl.characters();
    CHECK(chars.size() == (q - 1) * (q - 1));
    CHECK(std::set<TorusChar>(chars.begin(), chars.end()).size() == chars.size());
  }
}

TEST_CASE("s0 twist") {
  auto gl = make(GroupKind::GL2, 3);
  CHECK(gl.s0_twist({1, 0}) == TorusChar{0, 1});
  auto sl = make(GroupKind::SL2, 5);
  CHECK(sl.s0_twist({1, 0}) == TorusChar{3, 0});
  CHECK(sl.s0_twist({2, 0}) == TorusChar{2, 0});
  for (auto q : kQs)
    for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
      auto T = make(k, q);
      for (const auto& xi : T.characters()) {
        CHECK(T.s0_twist(T.s0_twist(xi)) == xi);
        CHECK(T.n_label(T.s0_twist(xi)) == T.n_label(xi));
        // Twisting the character is the same as twisting the argument.
        for (const auto& t : T.elements()) CHECK(T.value(T.s0_twist(xi), t) == T.value(xi, T.s0(t)));
      }
    }
}

TEST_CASE("orbit partition") {
  auto g3 = make(GroupKind::GL2, 3).orbits();
  int reg = 0, nonreg = 0;
  for (const auto& o : g3) (o.regular ? reg : nonreg)++;
  CHECK(reg == 1);
  CHECK(nonreg == 2);

  for (auto q : kQs) {
    auto T = make(GroupKind::GL2, q);
    reg = nonreg = 0;
    std::set<TorusChar> seen;
    for (const auto& o : T.orbits()) {
      (o.regular ? reg : nonreg)++;
      CHECK(o.regular == (o.members.size() == 2));
      for (const auto& m : o.members) {
        CHECK(seen.insert(m).second);
        CHECK(T.n_label(m) == o.n_label);
      }
    }
    CHECK(seen.size() == T.characters().size());
    CHECK(nonreg == int(q - 1));
    CHECK(reg == int((q - 1) * (q - 2) / 2));
  }

  auto s5 = make(GroupKind::SL2, 5).orbits();
  REQUIRE(s5.size() == 3);
  CHECK(s5[0].members == std::vector<TorusChar>{{0, 0}});
  CHECK(s5[1].members == std::vector<TorusChar>{{1, 0}, {3, 0}});
  CHECK(s5[2].members == std::vector<TorusChar>{{2, 0}});
  CHECK_FALSE(s5[2].regular);
}

TEST_CASE("coroot table") {
  auto gl = make(GroupKind::GL2, 5), sl = make(GroupKind::SL2, 5), pgl = make(GroupKind::PGL2, 5);
  CHECK(gl.coroot(1) == TorusElt{1, 3});
  CHECK(sl.coroot(1) == TorusElt{1, 0});
  CHECK(pgl.coroot(1) == TorusElt{2, 0});
  CHECK(gl.coroot_image().size() == 4);
  CHECK(sl.coroot_image().size() == 4);
  CHECK(pgl.coroot_image().size() == 2);
  CHECK(gl.coroot_minus_one() == TorusElt{2, 2});
  CHECK(sl.coroot_minus_one() == TorusElt{2, 0});
  CHECK(pgl.coroot_minus_one() == TorusElt{0, 0});
  CHECK(pgl.mu_alpha() == pgl.field().from_int(2));
  CHECK(gl.mu_alpha().is_one());
  CHECK(make(GroupKind::SL2, 4).coroot_minus_one() == TorusElt{});
  // Squaring is injective on F_4^x, so the coroot kernel is trivial.
  CHECK(make(GroupKind::PGL2, 4).mu_alpha().is_one());
  CHECK(make(GroupKind::PGL2, 4).coroot_image().size() == 3);
}

TEST_CASE("regularity characterizations") {
  for (auto q : kQs) {
    for (auto k : {GroupKind::GL2, GroupKind::PGL2}) {
      auto T = make(k, q);
      for (const auto& xi : T.characters()) CHECK(T.is_regular(xi) == !T.trivial_on_coroot(xi));
    }
    if (q % 2 == 1) {
      auto S = make(GroupKind::SL2, q);
      std::set<int> nonreg;
      for (const auto& xi : S.characters())
        if (!S.is_regular(xi)) nonreg.insert(xi.j);
      CHECK(nonreg == std::set<int>{0, int(q - 1) / 2});
    }
  }
}

TEST_CASE("idempotents") {
  auto sl = make(GroupKind::SL2, 3);
  auto e = sl.idempotent({1, 0});
  CHECK(e.terms().size() == 2);
  CHECK(e.coeff({0, 0}) == sl.field().from_int(2));
  CHECK(e.coeff({1, 0}) == sl.field().from_int(1));
  CHECK(e.times(e, sl) == e);

  for (auto q : kQs)
    for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
      auto T = make(k, q);
      auto triv = T.idempotent(T.make_char(0, 0));
      auto avg = T.field().from_int(static_cast<std::int64_t>(T.order() % T.field().p())).inv();
      for (const auto& t : T.elements()) CHECK(triv.coeff(t) == avg);

      auto orbits = T.orbits();
      torus::GroupAlgElt sum(&T.field());
      for (std::size_t i = 0; i < orbits.size(); ++i) {
        auto ei = T.orbit_idempotent(orbits[i]);
        sum = sum.plus(ei);
        CHECK(ei.times(ei, T) == ei);
        for (std::size_t j = i + 1; j < orbits.size() && j < i + 4; ++j)
          CHECK(ei.times(T.orbit_idempotent(orbits[j]), T).is_zero());
      }
      CHECK(sum == T.one());
    }
}

TEST_CASE("lifting SL2 characters") {
  auto sl = make(GroupKind::SL2, 5);
  auto gl = make(GroupKind::GL2, 5);
  CHECK(torus::lift_character(sl, {0, 0}) == TorusChar{0, 0});
  auto l2 = torus::lift_character(sl, {2, 0});
  CHECK(l2 == TorusChar{1, 3});
  CHECK(gl.is_regular(l2));
  auto l1 = torus::lift_character(sl, {1, 0});
  CHECK(l1.j == 1);
  CHECK(gl.n_label(l1) == 1);

  for (auto q : kQs) {
    auto S = make(GroupKind::SL2, q);
    auto G = Torus(GroupKind::GL2, q, S.field_ptr());
    for (const auto& xi : S.characters()) {
      auto lift = torus::lift_character(S, xi);
      CHECK(torus::restrict_to_sl2(G, lift) == xi);
      for (const auto& t : S.elements()) CHECK(G.value(lift, G.make(t.a, -t.a)) == S.value(xi, t));
      if (xi.j % 2 == 1) CHECK(G.is_regular(lift));
      CHECK(G.n_label(lift) == G.reduce(2 * lift.j - xi.j));

      // e_xi (SL2), pushed into k[T_GL2], equals the sum of the idempotents of all lifts (j, j - n).
      torus::GroupAlgElt pushed(&S.field());
      auto e_xi = S.idempotent(xi);
      for (const auto& [t, c] : e_xi.terms()) pushed.add_term(G.make(t.a, -t.a), c);
      torus::GroupAlgElt sum(&S.field());
      for (int j = 0; j < G.modulus(); ++j) sum = sum.plus(G.idempotent(G.make_char(j, j - xi.j)));
      CHECK(sum == pushed);
    }
  }
}
