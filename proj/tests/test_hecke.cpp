#include <random>

#include "doctest.h"
#include "prohecke/error.hpp"
#include "prohecke/hecke.hpp"

using namespace prohecke;
using hecke::ExtWeylElt;
using hecke::HeckeAlgebra;
using hecke::HeckeElt;

namespace {

HeckeAlgebra make(GroupKind k, std::uint32_t q) { return HeckeAlgebra(k, q, make_field(q)); }

// Monomial 2x2 matrices over F_q((pi)) modulo the pro-p part: each nonzero entry is zeta^u pi^k.
struct Mono {
  bool anti = false;
  long u1 = 0, k1 = 0, u2 = 0, k2 = 0;  // diagonal: (1,1),(2,2); anti: (1,2),(2,1)
};

struct MonoGroup {
  long n;      // q - 1
  long minus;  // exponent of -1
  Mono mul(const Mono& a, const Mono& b) const {
    Mono r;
    if (!a.anti && !b.anti) r = {false, a.u1 + b.u1, a.k1 + b.k1, a.u2 + b.u2, a.k2 + b.k2};
    if (!a.anti && b.anti) r = {true, a.u1 + b.u1, a.k1 + b.k1, a.u2 + b.u2, a.k2 + b.k2};
    if (a.anti && !b.anti) r = {true, a.u1 + b.u2, a.k1 + b.k2, a.u2 + b.u1, a.k2 + b.k1};
    if (a.anti && b.anti) r = {false, a.u1 + b.u2, a.k1 + b.k2, a.u2 + b.u1, a.k2 + b.k1};
    r.u1 = ((r.u1 % n) + n) % n;
    r.u2 = ((r.u2 % n) + n) % n;
    return r;
  }
  // Modulo scalars (PGL2): make the second entry 1.
  Mono projective(Mono m) const {
    m.u1 = ((m.u1 - m.u2) % n + n) % n;
    m.k1 -= m.k2;
    m.u2 = 0;
    m.k2 = 0;
    return m;
  }
  Mono omega() const { return {true, 0, 0, 0, 1}; }        // (0 1; pi 0)
  Mono omega_inv() const { return {true, 0, -1, 0, 0}; }   // (0 pi^-1; 1 0)
  Mono s0() const { return {true, 0, 0, minus, 0}; }       // (0 1; -1 0)
  Mono s1() const { return {true, minus, -1, 0, 1}; }      // (0 -pi^-1; pi 0)
};

bool same(const Mono& a, const Mono& b) {
  return a.anti == b.anti && a.u1 == b.u1 && a.k1 == b.k1 && a.u2 == b.u2 && a.k2 == b.k2;
}

Mono to_mono(const HeckeAlgebra& alg, const MonoGroup& G, const ExtWeylElt& w) {
  Mono r;
  for (int i = 0; i < std::abs(w.omega); ++i) r = G.mul(r, w.omega > 0 ? G.omega() : G.omega_inv());
  for (auto l : w.word) r = G.mul(r, l == 0 ? G.s0() : G.s1());
  Mono t;
  switch (alg.kind()) {
    case GroupKind::GL2: t = {false, w.t.a, 0, w.t.b, 0}; break;
    case GroupKind::SL2: t = {false, w.t.a, 0, -w.t.a, 0}; break;
    case GroupKind::PGL2: t = {false, w.t.a, 0, 0, 0}; break;
  }
  r = G.mul(r, t);
  return alg.kind() == GroupKind::PGL2 ? G.projective(r) : r;
}

MonoGroup mono_group(std::uint32_t q) { return {long(q) - 1, q % 2 ? (long(q) - 1) / 2 : 0}; }

ExtWeylElt random_elt(const HeckeAlgebra& alg, std::mt19937& rng, std::size_t max_len) {
  ExtWeylElt w;
  if (alg.kind() == GroupKind::GL2) w.omega = int(rng() % 5) - 2;
  if (alg.kind() == GroupKind::PGL2) w.omega = int(rng() % 2);
  std::size_t len = rng() % (max_len + 1);
  std::uint8_t first = rng() % 2;
  for (std::size_t i = 0; i < len; ++i) w.word.push_back(static_cast<std::uint8_t>((first + i) % 2));
  w.t = alg.torus().make(rng(), rng());
  return w;
}

// Product computed straight from the stated rules: length-additive products multiply in W,
// and T_u T_s = T_u * c_s whenever u already ends in s.
HeckeElt reference_mul(const HeckeAlgebra& alg, const ExtWeylElt& u, const ExtWeylElt& v) {
  std::map<ExtWeylElt, gf::FieldElt> cur{{alg.weyl_mul(u, alg.omega(v.omega)), alg.field().one()}};
  auto c = alg.quadratic_constant();
  for (auto l : v.word) {
    HeckeElt next(&alg.field());
    for (const auto& [w, a] : cur) {
      if (!w.word.empty() && w.word.back() == l) {
        for (const auto& [ct, cc] : c.terms()) next.add_term(alg.weyl_mul(w, ct), a * cc);
      } else {
        next.add_term(alg.weyl_mul(w, alg.s(l)), a);
      }
    }
    cur = next.terms();
  }
  HeckeElt out(&alg.field());
  for (const auto& [w, a] : cur) out.add_term(alg.weyl_mul(w, alg.t(v.t)), a);
  return out;
}

}  // namespace

TEST_CASE("Weyl group normal forms") {
  auto gl = make(GroupKind::GL2, 5);
  auto p = gl.weyl_mul(gl.s(0), gl.s(1));
  CHECK(p.word == std::vector<std::uint8_t>{0, 1});
  CHECK(p.length() == 2);
  auto ws0 = gl.weyl_mul(gl.omega(1), gl.s(0));
  CHECK(ws0.omega == 1);
  CHECK(ws0.word == std::vector<std::uint8_t>{0});
  CHECK(gl.weyl_mul(ws0, gl.omega(-1)) == gl.s(1));

  auto sl = make(GroupKind::SL2, 3);
  auto sq = sl.weyl_mul(sl.s(0), sl.s(0));
  CHECK(sq.word.empty());
  CHECK(sq.t == sl.torus().coroot_minus_one());
  CHECK(sq.t == torus::TorusElt{1, 0});

  try {
    (void)sl.omega(1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KindMismatch);
  }
}

TEST_CASE("Weyl multiplication agrees with monomial matrices") {
  std::mt19937 rng(11);
  for (auto q : {3u, 4u, 5u, 7u, 9u})
    for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
      auto alg = make(k, q);
      auto G = mono_group(q);
      for (int i = 0; i < 300; ++i) {
        auto u = random_elt(alg, rng, 5), v = random_elt(alg, rng, 5);
        auto uv = alg.weyl_mul(u, v);
        alg.check(uv);
        auto prod = G.mul(to_mono(alg, G, u), to_mono(alg, G, v));
        if (k == GroupKind::PGL2) prod = G.projective(prod);
        CHECK(same(to_mono(alg, G, uv), prod));
        auto ui = alg.weyl_inv(u);
        CHECK(alg.weyl_mul(u, ui) == alg.identity());
      }
    }
}

TEST_CASE("Hecke multiplication examples") {
  auto gl = make(GroupKind::GL2, 5);
  CHECK(gl.mul(gl.s(0), gl.s(1)) == gl.basis(gl.word({0, 1})));

  auto sl = make(GroupKind::SL2, 3);
  auto sq = sl.mul(sl.s(0), sl.s(0));
  HeckeElt expect(&sl.field());
  expect.add_term(sl.s(0), sl.field().one());
  expect.add_term(sl.weyl_mul(sl.s(0), sl.t({1, 0})), sl.field().one());
  CHECK(sq == expect);

  auto pgl = make(GroupKind::PGL2, 5);
  CHECK(pgl.mul(pgl.omega(1), pgl.omega(1)) == pgl.one());
  CHECK(gl.mul(gl.omega(1), gl.omega(1)) == gl.basis(gl.omega(2)));
  CHECK(gl.mul(gl.zero(), gl.basis(gl.s(0))).is_zero());
}

TEST_CASE("Hecke multiplication agrees with the reference rules and associates") {
  std::mt19937 rng(5);
  for (auto q : {3u, 4u, 5u, 7u})
    for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
      auto alg = make(k, q);
      for (int i = 0; i < 60; ++i) {
        auto u = random_elt(alg, rng, 4), v = random_elt(alg, rng, 4), w = random_elt(alg, rng, 4);
        auto uv = alg.mul(u, v);
        CHECK(uv == reference_mul(alg, u, v));
        CHECK(alg.mul(uv, alg.basis(w)) == alg.mul(alg.basis(u), alg.mul(v, w)));
        for (const auto& [x, c] : uv.terms()) {
          CHECK(x.length() <= u.length() + v.length());
          CHECK(x.length() + std::min(u.length(), v.length()) >= std::max(u.length(), v.length()));
        }
      }
    }
}

TEST_CASE("PGL2 is the quotient of GL2") {
  std::mt19937 rng(3);
  for (auto q : {3u, 4u, 5u, 7u, 8u}) {
    auto field = make_field(q);
    HeckeAlgebra gl(GroupKind::GL2, q, field), pgl(GroupKind::PGL2, q, field);
    auto proj = [&](const HeckeElt& x) {
      HeckeElt r(&pgl.field());
      for (const auto& [w, c] : x.terms()) {
        ExtWeylElt v;
        v.omega = ((w.omega % 2) + 2) % 2;
        v.word = w.word;
        v.t = pgl.torus().make(w.t.a - w.t.b);
        r.add_term(v, c);
      }
      return r;
    };
    for (int i = 0; i < 100; ++i) {
      auto u = random_elt(gl, rng, 4), v = random_elt(gl, rng, 4);
      CHECK(proj(gl.mul(u, v)) == pgl.mul(proj(gl.basis(u)), proj(gl.basis(v))));
    }
  }
}

TEST_CASE("blocks are central orthogonal idempotents") {
  for (auto q : {3u, 5u})
    for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
      auto alg = make(k, q);
      auto orbits = alg.torus().orbits();
      HeckeElt sum = alg.zero();
      for (const auto& g : orbits) {
        auto e = alg.orbit_idempotent(g);
        CHECK(alg.block_project(alg.one(), g) == e);
        CHECK(alg.mul(e, e) == e);
        CHECK(alg.is_central(e));
        auto ts0 = alg.basis(alg.s(0));
        CHECK(alg.mul(e, ts0).minus(alg.mul(ts0, e)).is_zero());
        for (const auto& h : orbits)
          if (!(h == g)) CHECK(alg.mul(e, alg.orbit_idempotent(h)).is_zero());
        sum = sum.plus(e);
      }
      CHECK(sum == alg.one());

      std::mt19937 rng(q);
      HeckeElt x = alg.zero();
      for (int i = 0; i < 4; ++i) x.add_term(random_elt(alg, rng, 3), alg.field().from_int(i + 1));
      HeckeElt back = alg.zero();
      for (const auto& g : orbits) back = back.plus(alg.block_project(x, g));
      CHECK(back == x);
    }
}

TEST_CASE("centrality tests") {
  auto gl = make(GroupKind::GL2, 5);
  CHECK(gl.is_central(gl.basis(gl.omega(2))));
  CHECK_FALSE(gl.is_central(gl.basis(gl.s(0))));
  // A separating torus element: T_t T_s0 != T_s0 T_t for t not fixed by s0.
  auto t = gl.t({1, 0});
  CHECK_FALSE(gl.mul(gl.basis(t), gl.basis(gl.s(0))) == gl.mul(gl.basis(gl.s(0)), gl.basis(t)));
  CHECK(gl.is_central(gl.basis(gl.t({2, 2}))));
}

TEST_CASE("supersingular census") {
  for (auto q : {3u, 5u, 7u, 9u}) {
    auto sl = make(GroupKind::SL2, q);
    auto chars = hecke::enumerate_supersingular_chars(sl);
    std::vector<int> inf;
    for (const auto& c : chars)
      if (!c.finite_pd) inf.push_back(c.restriction.j);
    CHECK(inf.size() == q - 2);
    for (std::size_t i = 0; i < inf.size(); ++i) CHECK(inf[i] == int(i) + 1);
    CHECK(chars.size() == q);
  }

  auto gl = make(GroupKind::GL2, 5);
  auto lam = gl.field().from_int(3);
  auto mods = hecke::enumerate_supersingular(gl, {lam});
  int infinite = 0;
  for (const auto& m : mods) {
    if (!m.chi.finite_pd) ++infinite;
    CHECK_FALSE(hecke::module_relation_failure(gl, m, 3).has_value());
    auto om = m.act(gl, gl.omega(2));
    CHECK(om == la::Matrix::identity(&gl.field(), 2).scaled(lam));
  }
  CHECK(infinite == 6);
}

TEST_CASE("supersingular characters by brute force over all candidate values") {
  // Every k-valued character of the affine subalgebra with T_s values in F_q; supersingular ones are
  // those with either xi nontrivial on the coroot image, or T_s0 and T_s1 values that differ.
  for (auto q : {3u, 5u, 7u}) {
    auto sl = make(GroupKind::SL2, q);
    const auto& f = sl.field();
    std::size_t total = 0, infinite = 0;
    for (const auto& xi : sl.torus().characters())
      for (const auto& v0 : f.elements())
        for (const auto& v1 : f.elements()) {
          hecke::SupersingChar c{xi, 0, 0, false};
          hecke::SupersingModule m = hecke::character_module(sl, c);
          la::Matrix a(&f, 1, 1), b(&f, 1, 1);
          a.set(0, 0, v0);
          b.set(0, 0, v1);
          m.gens["s0"] = a;
          m.gens["s1"] = b;
          if (hecke::module_relation_failure(sl, m, 2)) continue;
          bool nontrivial = !sl.torus().trivial_on_coroot(xi);
          if (nontrivial && v0.is_zero() && v1.is_zero()) {
            ++total;
            ++infinite;
          } else if (!nontrivial && v0 != v1) {
            ++total;
          }
        }
    std::size_t listed_inf = 0;
    auto chars = hecke::enumerate_supersingular_chars(sl);
    for (const auto& c : chars) listed_inf += !c.finite_pd;
    CHECK(total == chars.size());
    CHECK(infinite == listed_inf);
  }
}

TEST_CASE("supersingular modules satisfy the relations") {
  for (auto q : {3u, 5u}) {
    for (auto k : {GroupKind::GL2, GroupKind::PGL2}) {
      auto alg = make(k, q);
      for (const auto& lam : alg.field().units())
        for (const auto& m : hecke::enumerate_supersingular(alg, {lam})) {
          CHECK_FALSE(hecke::module_relation_failure(alg, m, 3).has_value());
          if (k == GroupKind::PGL2) CHECK(m.lambda.is_one());
        }
    }
  }
  auto gl = make(GroupKind::GL2, 5);
  auto m = hecke::supersingular_module(gl, gl.torus().orbits().back(), gl.field().from_int(2));
  m.gens["s0"].set(0, 0, gl.field().one());
  CHECK(hecke::module_relation_failure(gl, m, 2).has_value());
}
