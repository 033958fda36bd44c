#include <random>

#include "doctest.h"
#include "prohecke/error.hpp"
#include "prohecke/gf.hpp"
#include "prohecke/linalg.hpp"

using namespace prohecke;
using gf::FieldCtx;

namespace {

// Independent model of F_p[X]/(f): schoolbook product then long division.
std::vector<int> naive_mul(std::vector<int> a, std::vector<int> b, const std::vector<std::uint32_t>& f, int p) {
  std::size_t m = f.size() - 1;
  std::vector<int> r(2 * m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  for (std::size_t d = 2 * m - 1; d >= m; --d) {
    int c = r[d];
    if (c)
      for (std::size_t i = 0; i <= m; ++i) r[d - m + i] = ((r[d - m + i] - c * int(f[i])) % p + p) % p;
    if (d == m) break;
  }
  r.resize(m);
  return r;
}

std::uint64_t brute_order(const gf::FieldElt& x) {
  auto y = x;
  std::uint64_t k = 1;
  while (!y.is_one()) {
    y = y * x;
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("prime field with default modulus") {
  auto f = FieldCtx::create(3, 1);
  CHECK(f->order() == 3);
  CHECK(f->modulus() == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("F_9 with the supplied modulus X^2+1") {
  auto f = FieldCtx::create(3, 2, std::vector<std::uint32_t>{1, 0, 1});
  CHECK(f->order() == 9);
  // X^2 + 1 has no root in F_3.
  for (int x = 0; x < 3; ++x) CHECK((x * x + 1) % 3 != 0);
  auto X = f->from_coords({0, 1});
  CHECK(X * X == f->from_int(-1));
}

TEST_CASE("composite characteristic and reducible modulus are rejected") {
  try {
    FieldCtx::create(4, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CompositeCharacteristic);
  }
  try {
    FieldCtx::create(3, 2, std::vector<std::uint32_t>{2, 0, 1});  // X^2 - 1
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReducibleModulus);
  }
}

TEST_CASE("generator selection") {
  CHECK(FieldCtx::create(3, 1)->generator().code() == 2);
  CHECK(FieldCtx::create(5, 1)->generator().code() == 2);
  CHECK(FieldCtx::create(2, 1)->generator().code() == 1);
  for (auto [p, m] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {2, 3}, {5, 2}, {2, 4}}) {
    auto f = FieldCtx::create(p, m);
    auto g = f->generator();
    std::uint64_t n = f->order() - 1;
    CHECK(brute_order(g) == n);
    CHECK(g.pow(n).is_one());
    for (std::uint64_t d = 1; d < n; ++d)
      if (n % d == 0) CHECK_FALSE(g.pow(static_cast<std::int64_t>(d)).is_one());
    // Smallest code with full order.
    for (std::uint32_t c = 1; c < g.code(); ++c) CHECK(brute_order(f->elt(c)) < n);
  }
}

TEST_CASE("arithmetic agrees with a schoolbook model") {
  for (auto [p, m] : std::vector<std::pair<int, int>>{{3, 2}, {2, 3}, {5, 2}, {3, 3}}) {
    auto f = FieldCtx::create(p, m);
    for (auto x : f->elements())
      for (auto y : f->elements()) {
        auto a = x.coords(), b = y.coords();
        std::vector<int> ai(a.begin(), a.end()), bi(b.begin(), b.end());
        auto prod = naive_mul(ai, bi, f->modulus(), p);
        std::vector<std::uint32_t> pc(prod.begin(), prod.end());
        CHECK((x * y).coords() == pc);
        auto s = (x + y).coords();
        for (int i = 0; i < m; ++i) CHECK(s[i] == (a[i] + b[i]) % p);
      }
  }
}

TEST_CASE("inverse, negation and Frobenius") {
  auto f = FieldCtx::create(3, 1);
  CHECK(f->from_int(2).inv() == f->from_int(2));
  try {
    (void)f->zero().inv();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroInverse);
  }
  auto g = FieldCtx::create(5, 2);
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto x = g->elt(rng() % g->order()), y = g->elt(rng() % g->order());
    CHECK((x + y).pow(5) == x.pow(5) + y.pow(5));
    CHECK(x + (-x) == g->zero());
    if (!x.is_zero()) CHECK((x * x.inv()).is_one());
  }
}

TEST_CASE("mixing contexts is rejected") {
  auto a = FieldCtx::create(3, 1), b = FieldCtx::create(3, 1);
  try {
    (void)(a->one() + b->one());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CtxMismatch);
  }
}

TEST_CASE("linear algebra basics") {
  auto f = FieldCtx::create(5, 1);
  auto a = la::Matrix::from_ints(f.get(), {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  CHECK(la::rank(a) == 2);
  auto k = la::kernel(a);
  CHECK(k.cols() == 1);
  CHECK((a * k).is_zero());
  auto b = la::Matrix::from_ints(f.get(), {{1}, {2}, {1}});
  auto x = la::solve(a, b);
  REQUIRE(x);
  CHECK(a * *x == b);
  CHECK_FALSE(la::solve(a, la::Matrix::from_ints(f.get(), {{1}, {0}, {0}})));
  auto inv = la::inverse(la::Matrix::from_ints(f.get(), {{1, 2}, {3, 4}}));
  REQUIRE(inv);
  CHECK(la::Matrix::from_ints(f.get(), {{1, 2}, {3, 4}}) * *inv == la::Matrix::identity(f.get(), 2));
  // The empty matrix is its own inverse.
  auto empty = la::inverse(la::Matrix(f.get(), 0, 0));
  REQUIRE(empty);
  CHECK(empty->rows() == 0);
}
