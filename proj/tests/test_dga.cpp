#include <random>

#include "doctest.h"
#include "prohecke/dga.hpp"
#include "prohecke/error.hpp"

using namespace prohecke;
using namespace prohecke::dga;

namespace {

template <class F>
ErrorKind error_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ConfigError;
}

Laurent c(const gf::FieldCtx* f, int v) { return Laurent::constant(f, f->from_int(v)); }

// Straight from the formula: (x_l - (-1)^n x_(l+1)) tau on the untwisted diagonal block.
std::vector<Laurent> naive_d(const std::vector<Laurent>& x, int n, const gf::FieldCtx* f) {
  std::vector<Laurent> out;
  for (std::size_t l = 0; l + 1 < x.size(); ++l) out.push_back(x[l] - x[l + 1].scaled(f->from_int(n % 2 ? -1 : 1)));
  return out;
}

}  // namespace

TEST_CASE("Laurent arithmetic") {
  auto f = make_field(5);
  Laurent z = Laurent::monomial(f.get(), f->one(), 1), zi = Laurent::monomial(f.get(), f->one(), -1);
  CHECK(z * zi == c(f.get(), 1));
  CHECK((z - z).is_zero());
  CHECK((z + c(f.get(), 2)).eval(f->from_int(3)) == f->from_int(0));
  CHECK(zi.eval(f->from_int(2)) == f->from_int(3));
}

TEST_CASE("differential on the listed sequences") {
  auto f = make_field(5);
  const gf::FieldCtx* k = f.get();
  for (int n : {0, 2, -2}) {
    // Constant sequence in the diagonal block is a cocycle.
    WindowHomElt x = WindowHomElt::zero(k, n, -3, 3);
    for (int l = -3; l <= 3; ++l) x.blocks[0][0].at(l) = c(k, 4);
    CHECK(dga_d(x).is_zero());
    // Delta at l0: support {l0 - 1, l0} with coefficients (-(-1)^n, 1) = (-1, 1).
    WindowHomElt dx = WindowHomElt::zero(k, n, -3, 3);
    dx.blocks[0][0].at(0) = c(k, 1);
    WindowHomElt d = dga_d(dx);
    CHECK(d.lo() == -3);
    CHECK(d.hi() == 2);
    CHECK(d.blocks[0][0].tau);
    CHECK(d.blocks[0][0].at(-1) == c(k, -1));
    CHECK(d.blocks[0][0].at(0) == c(k, 1));
    for (int l : {-3, -2, 1, 2}) CHECK(d.blocks[0][0].at(l).is_zero());
  }
  // Odd degree: the diagonal is tau-marked and d vanishes there.
  std::mt19937 rng(3);
  WindowHomElt odd = random_elt(k, 1, -2, 2, rng);
  CHECK(odd.blocks[0][0].tau);
  CHECK_FALSE(odd.blocks[0][1].tau);
  CHECK(dga_d(odd).blocks[0][0].is_zero());
  CHECK(dga_d(odd).blocks[1][1].is_zero());

  // Diagonal blocks follow the formula exactly; the P1[1] copy carries the opposite sign.
  for (int n : {-2, 0, 2, 4}) {
    WindowHomElt x = random_elt(k, n, -3, 3, rng);
    auto want = naive_d(x.blocks[0][0].entries, n, k);
    CHECK(dga_d(x).blocks[0][0].entries == want);
    auto want2 = naive_d(x.blocks[1][1].entries, n, k);
    for (auto& e : want2) e = e.scaled(k->from_int(-1));
    CHECK(dga_d(x).blocks[1][1].entries == want2);
  }
  WindowHomElt tiny = WindowHomElt::zero(k, 0, 0, 0);
  CHECK(error_of([&] { dga_d(tiny); }) == ErrorKind::WindowTooSmall);
}

TEST_CASE("d squared and Leibniz on random elements") {
  for (std::uint32_t q : {3u, 5u, 9u}) {
    auto f = make_field(q);
    std::mt19937 rng(100 + q);
    std::uniform_int_distribution<int> deg(-3, 3), len(2, 8);
    for (int trial = 0; trial < 60; ++trial) {
      int L = len(rng);
      WindowHomElt x = random_elt(f.get(), deg(rng), -L, L, rng);
      WindowHomElt y = random_elt(f.get(), deg(rng), -L, L, rng);
      CHECK(dga_d(dga_d(x)).is_zero());
      WindowHomElt xy = dga_mul(x, y);
      WindowHomElt lhs = dga_d(xy);
      WindowHomElt a = dga_mul(dga_d(x), y);
      WindowHomElt b = dga_mul(x, dga_d(y));
      int lo = std::max({lhs.lo(), a.lo(), b.lo()}), hi = std::min({lhs.hi(), a.hi(), b.hi()});
      REQUIRE(lo <= hi);
      FieldElt sign = f->from_int(x.degree % 2 == 0 ? 1 : -1);
      CHECK(lhs.restrict_to(lo, hi) == a.restrict_to(lo, hi) + b.restrict_to(lo, hi).scaled(sign));
    }
  }
}

TEST_CASE("product: unit, tau squared, windows, associativity") {
  auto f = make_field(7);
  const gf::FieldCtx* k = f.get();
  std::mt19937 rng(11);
  for (int n : {-2, -1, 0, 1, 3}) {
    WindowHomElt x = random_elt(k, n, -4, 4, rng);
    WindowHomElt one = identity(k, -10, 10);
    CHECK(dga_mul(one, x) == x);
    CHECK(dga_mul(x, one) == x);
  }
  // tau-marked times tau-marked vanishes.
  WindowHomElt t = WindowHomElt::zero(k, 1, -2, 2);
  for (int l = -2; l <= 2; ++l) t.blocks[0][0].at(l) = c(k, 1);
  WindowHomElt sq = dga_mul(t, t);
  CHECK(sq.is_zero());
  // Output window is the overlap after the degree shift.
  WindowHomElt x = random_elt(k, 2, 0, 5, rng), y = random_elt(k, 3, 0, 5, rng);
  WindowHomElt p = dga_mul(x, y);
  CHECK(p.lo() == 0);
  CHECK(p.hi() == 2);
  WindowHomElt far = random_elt(k, 0, 20, 22, rng);
  CHECK(error_of([&] { dga_mul(far, x); }) == ErrorKind::WindowMismatch);
  WindowHomElt bad = x;
  bad.blocks[1][0].hi = 4;
  CHECK(error_of([&] { dga_mul(bad, x); }) == ErrorKind::WindowMismatch);
  for (int trial = 0; trial < 20; ++trial) {
    WindowHomElt a = random_elt(k, trial % 3 - 1, -6, 6, rng), b = random_elt(k, trial % 2, -6, 6, rng),
                 cc = random_elt(k, -(trial % 3), -6, 6, rng);
    WindowHomElt l = dga_mul(dga_mul(a, b), cc), r = dga_mul(a, dga_mul(b, cc));
    int lo = std::max(l.lo(), r.lo()), hi = std::min(l.hi(), r.hi());
    CHECK(l.restrict_to(lo, hi) == r.restrict_to(lo, hi));
  }
}

TEST_CASE("cohomology ranks follow the even/odd pattern") {
  auto f = make_field(5);
  for (int n = -4; n <= 4; ++n) {
    auto small = dga_cohomology(f.get(), n, std::abs(n) + 2);
    auto big = dga_cohomology(f.get(), n, std::abs(n) + 4);
    std::size_t diag = n % 2 == 0 ? 1 : 0, off = 1 - diag;
    CHECK(small.block_ranks[0][0] == diag);
    CHECK(small.block_ranks[1][1] == diag);
    CHECK(small.block_ranks[0][1] == off);
    CHECK(small.block_ranks[1][0] == off);
    CHECK(small.block_ranks == big.block_ranks);
    CHECK(dga_d(small.representative).is_zero());
    CHECK_FALSE(is_coboundary(small.representative));
  }
  auto h2 = dga_cohomology(f.get(), 2, 6);
  for (int l = -6; l <= 5; ++l) {
    CHECK(h2.representative.blocks[0][0].at(l) == c(f.get(), 1));
    CHECK(h2.representative.blocks[0][1].at(l).is_zero());
  }
  auto h1 = dga_cohomology(f.get(), 1, 3);
  for (int l = -3; l <= 2; ++l) CHECK(h1.representative.blocks[1][0].at(l) == c(f.get(), 1));
  CHECK(error_of([&] { dga_cohomology(f.get(), 3, 4); }) == ErrorKind::WindowTooSmall);
  CHECK(h2.to_json()["block_ranks"][0][0] == 1);
}

TEST_CASE("products of classes are those of the Laurent matrix ring") {
  for (std::uint32_t q : {3u, 5u}) {
    auto f = make_field(q);
    RingCheck r = cohomology_ring_check(f.get(), 3, 3);
    CHECK(r.ok);
    CHECK(r.products > 50);
    INFO(r.first_failure);
  }
  // iota_m iota_n = iota_(m+n) directly.
  auto f = make_field(5);
  WindowHomElt a = iota(f.get(), 1, 0, 1, -5, 5), b = iota(f.get(), 1, 1, 0, -5, 5);
  WindowHomElt ab = dga_mul(a, b);
  CHECK(ab == iota(f.get(), 2, 0, 0, ab.lo(), ab.hi()));
  CHECK(error_of([&] { iota(f.get(), 1, 0, 0, 0, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("degree-0 dictionary") {
  for (std::uint32_t q : {3u, 5u}) {
    auto f = make_field(q);
    hecke::HeckeAlgebra alg(GroupKind::GL2, q, f);
    for (const auto& g : alg.torus().orbits()) {
      if (!g.regular) {
        CHECK(error_of([&] { degree0_check(alg, g, 1); }) == ErrorKind::WrongRegularity);
        continue;
      }
      for (int L : {0, 1, 2}) {
        Degree0Report r = degree0_check(alg, g, L);
        INFO(r.first_failure);
        CHECK(r.ok());
        CHECK(r.factors == static_cast<std::size_t>(2 * L + 1));
      }
    }
  }
  // Per-index images: e1 -> (1 0; 0 0), T^2 -> 0.
  auto f = make_field(5);
  WindowHomElt t = WindowHomElt::zero(f.get(), 0, -1, 1);
  t.blocks[0][1].at(0) = t.blocks[1][0].at(0) = c(f.get(), 1);
  CHECK(t.blocks[0][1].tau);
  CHECK(dga_mul(t, t).is_zero());
}
