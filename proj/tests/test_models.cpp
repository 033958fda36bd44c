#include <random>

#include "doctest.h"
#include "prohecke/error.hpp"
#include "prohecke/models.hpp"

using namespace prohecke;
using namespace prohecke::models;

namespace {

HeckeAlgebra make(GroupKind k, std::uint32_t q) { return HeckeAlgebra(k, q, make_field(q)); }

CharOrbit first_orbit(const HeckeAlgebra& alg, bool regular) {
  for (const auto& g : alg.torus().orbits())
    if (g.regular == regular && has_model(alg, g)) return g;
  throw std::runtime_error("no orbit");
}

}  // namespace

TEST_CASE("nodal multiplication") {
  auto F = make_field(5);
  const auto* f = F.get();
  auto X1 = NodalPoly::x1(f), X2 = NodalPoly::x2(f), one = NodalPoly::constant(f, f->one());
  CHECK((X1 + X2) * (X1 - X2) == NodalPoly::x1(f, 2) - NodalPoly::x2(f, 2));
  CHECK((X1 * X2).is_zero());
  LaurentNodal a(one + X1), b(X2, -1);
  CHECK(a * b == LaurentNodal(X2, -1));
  CHECK((X1 + one) * (X1 + one) == NodalPoly::x1(f, 2) + X1.scaled(f->from_int(2)) + one);
  CHECK(LaurentNodal::z(f, 3) * LaurentNodal::z(f, -3) == LaurentNodal::constant(f, f->one()));
  CHECK((LaurentNodal::z(f) - LaurentNodal::z(f)).is_zero());
  CHECK(NodalPoly::x1(f, 4).halve_degrees() == NodalPoly::x1(f, 2));
  CHECK_THROWS_AS((void)X1.halve_degrees(), Error);
  CHECK((X1 + X2 + one).eval(f->from_int(2), f->zero()) == f->from_int(3));
  CHECK(LaurentNodal(X1, 2).specialize_z(f->from_int(2)) == X1.scaled(f->from_int(4)));
}

TEST_CASE("nodal ring axioms against a dense bivariate oracle") {
  // Dense oracle: coefficient grid c[i][j] of X1^i X2^j, reduced by zeroing i, j > 0.
  auto F = make_field(3);
  const auto* f = F.get();
  std::mt19937 rng(9);
  auto random_poly = [&]() {
    NodalPoly p(f);
    p = p + NodalPoly::constant(f, f->from_int(rng() % 3));
    for (std::size_t i = 1; i <= 3; ++i) {
      p = p + NodalPoly::monomial(f, 1, i, f->from_int(rng() % 3));
      p = p + NodalPoly::monomial(f, 2, i, f->from_int(rng() % 3));
    }
    return p;
  };
  using Grid = std::vector<std::vector<int>>;
  auto to_grid = [&](const NodalPoly& p) {
    Grid g(8, std::vector<int>(8, 0));
    g[0][0] = int(p.constant_term().code());
    for (std::size_t i = 1; i < 8; ++i) {
      g[i][0] = int(p.coeff(1, i).code());
      g[0][i] = int(p.coeff(2, i).code());
    }
    return g;
  };
  auto grid_mul = [&](const Grid& a, const Grid& b) {
    Grid c(8, std::vector<int>(8, 0));
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k)
          for (int l = 0; l < 8; ++l)
            if (i + k < 8 && j + l < 8) c[i + k][j + l] = (c[i + k][j + l] + a[i][j] * b[k][l]) % 3;
    for (int i = 1; i < 8; ++i)
      for (int j = 1; j < 8; ++j) c[i][j] = 0;
    return c;
  };
  for (int t = 0; t < 100; ++t) {
    auto a = random_poly(), b = random_poly(), c = random_poly();
    CHECK(to_grid(a * b) == grid_mul(to_grid(a), to_grid(b)));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("model generator images") {
  auto gl = make(GroupKind::GL2, 5);
  const auto* f = &gl.field();
  auto X1 = LaurentNodal::x1(f), X2 = LaurentNodal::x2(f), Z = LaurentNodal::z(f);
  auto zero = LaurentNodal(f), one = LaurentNodal::constant(f, f->one());
  auto reg = build_model(gl, first_orbit(gl, true));
  CHECK(reg.gens.at("omega") == Mat2::of(zero, Z, one, zero));
  CHECK(reg.gens.at("s0") == Mat2::of(zero, X1, X2 * LaurentNodal::z(f, -1), zero));
  CHECK(reg.target == ModelTarget::MatB);

  auto sl = make(GroupKind::SL2, 5);
  auto slm = build_model(sl, first_orbit(sl, true));
  CHECK(slm.gens.at("s0") == Mat2::of(zero, X1, X2, zero));
  CHECK(slm.gens.at("s1") == Mat2::of(zero, X2, X1, zero));

  auto pgl = make(GroupKind::PGL2, 5);
  auto pm = build_model(pgl, first_orbit(pgl, false));
  CHECK(pm.gens.at("s0") == Mat2::of(zero, zero, zero, -one));
  CHECK(pm.target == ModelTarget::MatX);

  CHECK_THROWS_AS((void)build_model(sl, sl.torus().orbit_of(sl.torus().make_char(0))), Error);
  try {
    (void)build_model(sl, sl.torus().orbit_of(sl.torus().make_char(0)));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongRegularity);
  }
  auto j = reg.to_json(gl);
  CHECK(j["generators"]["omega"][0][1] == "Z");
}

TEST_CASE("verify_model on every block") {
  for (auto q : {3u, 4u, 5u})
    for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
      auto alg = make(k, q);
      ModelVerifier v(alg, 4);
      for (const auto& g : alg.torus().orbits()) {
        if (!has_model(alg, g)) continue;
        auto rep = v.verify(build_model(alg, g));
        CHECK(rep.passed());
      }
    }
}

TEST_CASE("corrupted models are rejected") {
  auto gl = make(GroupKind::GL2, 5);
  const auto* f = &gl.field();
  auto m = build_model(gl, first_orbit(gl, true));
  m.gens["omega"] = Mat2::of(LaurentNodal(f), LaurentNodal::z(f), LaurentNodal(f), LaurentNodal(f));
  try {
    (void)verify_model(gl, m, 3);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VerificationFailure);
  }
  auto n = build_model(gl, first_orbit(gl, false));
  n.gens["s0"] = Mat2::unit(f, 1, 1);
  CHECK_THROWS_AS((void)verify_model(gl, n, 3), Error);
}

TEST_CASE("centre elements map to scalars") {
  for (auto k : {GroupKind::GL2, GroupKind::SL2, GroupKind::PGL2}) {
    auto alg = make(k, 5);
    for (const auto& g : alg.torus().orbits()) {
      if (!has_model(alg, g)) continue;
      auto model = build_model(alg, g);
      for (const auto& ce : center_elements(alg, g)) {
        CHECK(ce.central);
        CHECK(ce.image.is_scalar());
        CHECK(ce.image == ce.expected);
        for (const auto& [name, gen] : model.gens) CHECK(ce.image * gen == gen * ce.image);
      }
    }
  }
  auto gl = make(GroupKind::GL2, 5);
  auto ces = center_elements(gl, first_orbit(gl, true));
  CHECK(ces[0].image == Mat2::scalar(LaurentNodal::x1(&gl.field())));
  CHECK(ces[1].image == Mat2::scalar(LaurentNodal::x2(&gl.field())));
}

TEST_CASE("spherical specializations") {
  auto sl = make(GroupKind::SL2, 5);
  const auto& f = sl.field();
  auto g = first_orbit(sl, true);
  auto sph = build_spherical(sl, g);
  auto z = f.one();
  // Origin: two characters with T0 = T1 = 0.
  CHECK(sph.specialize(sl, sl.s(0), f.zero(), f.zero(), z).is_zero());
  CHECK(sph.specialize(sl, sl.s(1), f.zero(), f.zero(), z).is_zero());
  auto e1 = sph.specialize(sl, sl.idempotent(sph.model.torus_chars[0]), f.zero(), f.zero(), z);
  CHECK(e1 == la::Matrix::from_ints(&f, {{1, 0}, {0, 0}}));
  // X1 = 0, X2 = lambda: no common invariant line, so the module is simple.
  auto lam = f.from_int(3);
  auto t0 = sph.specialize(sl, sl.s(0), f.zero(), lam, z), t1 = sph.specialize(sl, sl.s(1), f.zero(), lam, z);
  CHECK(t0 == la::Matrix::from_rows(&f, {{f.zero(), f.zero()}, {lam, f.zero()}}));
  auto k0 = la::kernel(t0), k1 = la::kernel(t1);
  CHECK(k0.cols() == 1);
  CHECK(k1.cols() == 1);
  CHECK(la::rank(k0.hstack(k1)) == 2);
  CHECK_THROWS_AS((void)sph.specialize(sl, sl.s(0), lam, lam, z), Error);

  auto gp = build_gp_spherical(sl, g);
  CHECK(gp.degree_basis(0).empty());
  CHECK(gp.degree_basis(3).size() == 4);
  for (const auto& v : gp.degree_basis(2)) {
    CHECK(gp.contains(v));
    // The action preserves m M.
    for (const auto& [name, gen] : gp.ambient.model.gens) {
      std::array<LaurentNodal, 2> w{gen.e[0][0] * v[0] + gen.e[0][1] * v[1], gen.e[1][0] * v[0] + gen.e[1][1] * v[1]};
      CHECK(gp.contains(w));
    }
  }
  CHECK_FALSE(gp.contains({LaurentNodal::constant(&f, f.one()), LaurentNodal(&f)}));
}

TEST_CASE("freeness of M2(A)") {
  for (auto q : {5u, 7u}) {
    auto sl = make(GroupKind::SL2, q);
    for (const auto& g : sl.torus().orbits()) {
      if (!has_model(sl, g)) continue;
      auto rep = freeness_report(sl, g, 4);
      CHECK(rep.passed);
      CHECK(rep.slices[0].slice_dim == 4);
      CHECK(rep.slices[0].pattern_dim == 2);
      CHECK(rep.slices[1].slice_dim == 8);
      CHECK(rep.slices[1].pattern_dim == 4);
      CHECK(rep.slices[1].twisted_dim == 4);
    }
  }
}

TEST_CASE("three-term resolution is exact") {
  for (auto q : {3u, 5u}) {
    auto gl = make(GroupKind::GL2, q);
    for (const auto& g : gl.torus().orbits()) {
      if (!g.regular) continue;
      for (const auto& lam : gl.field().units()) {
        auto m = hecke::supersingular_module(gl, g, lam);
        auto rep = os_resolution_check(gl, g, m, lam, 4);
        CHECK(rep.passed);
        CHECK(rep.counit_surjective);
        CHECK(rep.degrees.size() == 4);
        CHECK(rep.degrees[0].left_dim == 2);
        CHECK(rep.degrees[0].mid_dim == 4);
      }
    }
  }
  auto gl = make(GroupKind::GL2, 5);
  auto g = first_orbit(gl, true);
  auto lam = gl.field().from_int(2);
  auto m = hecke::supersingular_module(gl, g, lam);
  try {
    (void)os_resolution_check(gl, g, m, lam, 1);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationTooSmall);
  }
  hecke::SupersingModule zero;
  zero.dim = 0;
  CHECK(os_resolution_check(gl, g, zero, lam, 3).passed);
  // A module on which T_omega^2 is not lambda.
  CHECK_THROWS_AS((void)os_resolution_check(gl, g, m, gl.field().from_int(3), 3), Error);
}

TEST_CASE("the ring Z~ and the centre embedding") {
  auto sl = make(GroupKind::SL2, 5);
  const auto* f = &sl.field();
  auto z = tilde_z(sl);
  std::size_t kx = 0, a = 0;
  for (const auto& c : z.components) (c.ring == "A" ? a : kx) += 1;
  CHECK(kx == 1);
  CHECK(a == sl.torus().orbits().size() - 1);
  for (const auto& g : sl.torus().orbits()) {
    if (!has_model(sl, g)) continue;
    auto ces = center_elements(sl, g);
    if (g.regular) {
      CHECK(tilde_z_image(sl, g, ces[0].element) == NodalPoly::x1(f));
      CHECK(tilde_z_image(sl, g, ces[1].element) == NodalPoly::x2(f));
    } else {
      // Sign block: X -> X1 + X2, and powers stay independent.
      HeckeElt x = ces[0].element;
      CHECK(tilde_z_image(sl, g, x) == NodalPoly::x1(f) + NodalPoly::x2(f));
      HeckeElt p = x;
      for (std::size_t n = 2; n <= 4; ++n) {
        p = sl.mul(p, x);
        CHECK(tilde_z_image(sl, g, p) == NodalPoly::x1(f, n) + NodalPoly::x2(f, n));
      }
    }
  }
}
