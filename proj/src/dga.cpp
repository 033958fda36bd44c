#include "prohecke/dga.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "prohecke/error.hpp"
#include "prohecke/linalg.hpp"

namespace prohecke::dga {

using la::Matrix;

// ---------------------------------------------------------------------------
// Laurent polynomials

Laurent Laurent::constant(const FieldCtx* f, const FieldElt& c) { return monomial(f, c, 0); }

Laurent Laurent::monomial(const FieldCtx* f, const FieldElt& c, int exp) {
  Laurent r(f);
  r.add_term(exp, c);
  return r;
}

void Laurent::add_term(int exp, const FieldElt& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(exp);
  if (it == terms_.end()) {
    terms_.emplace(exp, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FieldElt Laurent::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? field_->zero() : it->second;
}

FieldElt Laurent::eval(const FieldElt& z) const {
  FieldElt acc = z.ctx()->zero();
  for (const auto& [e, c] : terms_) acc += c * z.pow(e);
  return acc;
}

Laurent Laurent::operator+(const Laurent& o) const {
  Laurent r = *this;
  if (!r.field_) r.field_ = o.field_;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const {
  Laurent r = *this;
  if (!r.field_) r.field_ = o.field_;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
  Laurent r(field_ ? field_ : o.field_);
  for (const auto& [a, x] : terms_)
    for (const auto& [b, y] : o.terms_) r.add_term(a + b, x * y);
  return r;
}

Laurent Laurent::scaled(const FieldElt& c) const {
  Laurent r(field_);
  for (const auto& [e, x] : terms_) r.add_term(e, x * c);
  return r;
}

nlohmann::json Laurent::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [e, c] : terms_) j.push_back({e, c.code()});
  return j;
}

// ---------------------------------------------------------------------------
// Windowed elements

bool WindowSeq::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](const Laurent& x) { return x.is_zero(); });
}

WindowHomElt WindowHomElt::zero(const FieldCtx* f, int degree, int lo, int hi) {
  WindowHomElt x;
  x.field = f;
  x.degree = degree;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      WindowSeq& s = x.blocks[r][c];
      s.lo = lo;
      s.hi = hi;
      s.tau = tau_block(degree, r, c);
      s.entries.assign(static_cast<std::size_t>(std::max(0, hi - lo + 1)), Laurent(f));
    }
  return x;
}

void WindowHomElt::check() const {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const WindowSeq& s = blocks[r][c];
      if (s.lo != lo() || s.hi != hi()) throw Error(ErrorKind::WindowMismatch, "blocks carry different windows");
      if (s.entries.size() != static_cast<std::size_t>(std::max(0, s.hi - s.lo + 1)))
        throw Error(ErrorKind::InvalidArgument, "entry count does not match the window");
      if (s.tau != tau_block(degree, r, c))
        throw Error(ErrorKind::InvalidArgument, "tau marker inconsistent with the degree");
    }
}

WindowHomElt WindowHomElt::restrict_to(int nlo, int nhi) const {
  if (nlo < lo() || nhi > hi()) throw Error(ErrorKind::WindowMismatch, "restriction leaves the window");
  WindowHomElt y = zero(field, degree, nlo, nhi);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int l = nlo; l <= nhi; ++l) y.blocks[r][c].at(l) = blocks[r][c].at(l);
  return y;
}

WindowHomElt WindowHomElt::operator+(const WindowHomElt& o) const {
  if (degree != o.degree || lo() != o.lo() || hi() != o.hi())
    throw Error(ErrorKind::WindowMismatch, "sum of elements on different windows or degrees");
  WindowHomElt y = *this;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int l = lo(); l <= hi(); ++l) y.blocks[r][c].at(l) = y.blocks[r][c].at(l) + o.blocks[r][c].at(l);
  return y;
}

WindowHomElt WindowHomElt::scaled(const FieldElt& s) const {
  WindowHomElt y = *this;
  for (auto& row : y.blocks)
    for (auto& b : row)
      for (auto& e : b.entries) e = e.scaled(s);
  return y;
}

WindowHomElt WindowHomElt::operator-(const WindowHomElt& o) const { return *this + o.scaled(field->from_int(-1)); }

bool WindowHomElt::is_zero() const {
  for (const auto& row : blocks)
    for (const auto& b : row)
      if (!b.is_zero()) return false;
  return true;
}

bool WindowHomElt::operator==(const WindowHomElt& o) const {
  if (degree != o.degree || lo() != o.lo() || hi() != o.hi()) return false;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!(blocks[r][c].entries == o.blocks[r][c].entries)) return false;
  return true;
}

nlohmann::json WindowHomElt::to_json() const {
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& row : blocks) {
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& b : row) {
      nlohmann::json es = nlohmann::json::array();
      for (const auto& e : b.entries) es.push_back(e.to_json());
      jr.push_back({{"tau", b.tau}, {"entries", es}});
    }
    bs.push_back(jr);
  }
  return {{"degree", degree}, {"lo", lo()}, {"hi", hi()}, {"blocks", bs}};
}

WindowHomElt identity(const FieldCtx* f, int lo, int hi) {
  WindowHomElt x = WindowHomElt::zero(f, 0, lo, hi);
  for (int i = 0; i < 2; ++i)
    for (int l = lo; l <= hi; ++l) x.blocks[i][i].at(l) = Laurent::constant(f, f->one());
  return x;
}

WindowHomElt iota(const FieldCtx* f, int degree, int r, int c, int lo, int hi) {
  if (WindowHomElt::tau_block(degree, r, c))
    throw Error(ErrorKind::InvalidArgument, "iota lives only in the untwisted slots");
  WindowHomElt x = WindowHomElt::zero(f, degree, lo, hi);
  for (int l = lo; l <= hi; ++l) x.blocks[r][c].at(l) = Laurent::constant(f, f->one());
  return x;
}

WindowHomElt random_elt(const FieldCtx* f, int degree, int lo, int hi, std::mt19937& rng, int zdeg) {
  WindowHomElt x = WindowHomElt::zero(f, degree, lo, hi);
  std::uniform_int_distribution<std::uint32_t> coef(0, f->order() - 1);
  for (auto& row : x.blocks)
    for (auto& b : row)
      for (auto& e : b.entries)
        for (int k = -zdeg; k <= zdeg; ++k) e = e + Laurent::monomial(f, f->elt(coef(rng)), k);
  return x;
}

// ---------------------------------------------------------------------------
// Differential and product

namespace {

// Sign of the differential on P_r: +T on P1, -T on P1[1].
int target_sign(int r) { return r == 0 ? 1 : -1; }

}  // namespace

WindowHomElt dga_d(const WindowHomElt& x) {
  x.check();
  if (x.hi() - x.lo() + 1 < 2) throw Error(ErrorKind::WindowTooSmall, "the differential needs two indices");
  const FieldCtx* f = x.field;
  WindowHomElt y = WindowHomElt::zero(f, x.degree + 1, x.lo(), x.hi() - 1);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const WindowSeq& s = x.blocks[r][c];
      if (s.tau) continue;  // tau after tau vanishes
      // Effective degree of the block in (E, E[1]; E[1], E).
      int m = x.degree + (r != c ? 1 : 0);
      FieldElt sign = f->from_int(m % 2 == 0 ? 1 : -1);
      FieldElt eps = f->from_int(target_sign(r));
      for (int l = y.lo(); l <= y.hi(); ++l)
        y.blocks[r][c].at(l) = (s.at(l) - s.at(l + 1).scaled(sign)).scaled(eps);
    }
  return y;
}

WindowHomElt dga_mul(const WindowHomElt& x, const WindowHomElt& y) {
  x.check();
  y.check();
  if (x.field != y.field) throw Error(ErrorKind::CtxMismatch, "elements over different fields");
  int shift = y.degree;
  int lo = std::max(y.lo(), x.lo() - shift);
  int hi = std::min(y.hi(), x.hi() - shift);
  if (lo > hi) throw Error(ErrorKind::WindowMismatch, "windows do not overlap after the degree shift");
  WindowHomElt z = WindowHomElt::zero(x.field, x.degree + y.degree, lo, hi);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 2; ++k) {
        if (x.blocks[r][k].tau && y.blocks[k][c].tau) continue;
        for (int l = lo; l <= hi; ++l)
          z.blocks[r][c].at(l) = z.blocks[r][c].at(l) + x.blocks[r][k].at(l + shift) * y.blocks[k][c].at(l);
      }
  return z;
}

namespace {

// Matrix of one block of d_k from [lo, hi] to [lo, hi-1], Z evaluated at z.
Matrix block_differential(const FieldCtx* f, int k, int r, int c, int lo, int hi, const FieldElt& z) {
  std::size_t src = static_cast<std::size_t>(hi - lo + 1), dst = src - 1;
  Matrix m(f, dst, src);
  for (int l = lo; l <= hi; ++l) {
    WindowHomElt e = WindowHomElt::zero(f, k, lo, hi);
    e.blocks[r][c].at(l) = Laurent::constant(f, f->one());
    WindowHomElt de = dga_d(e);
    for (int t = lo; t < hi; ++t)
      m.set(static_cast<std::size_t>(t - lo), static_cast<std::size_t>(l - lo), de.blocks[r][c].at(t).eval(z));
  }
  return m;
}

Matrix column(const FieldCtx* f, const std::vector<FieldElt>& v) {
  Matrix m(f, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
  return m;
}

}  // namespace

bool is_coboundary(const WindowHomElt& x) {
  x.check();
  const FieldCtx* f = x.field;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const WindowSeq& s = x.blocks[r][c];
      if (s.is_zero()) continue;
      // The differential has Z-degree 0, so each power of Z is solved for separately.
      Matrix d = block_differential(f, x.degree - 1, r, c, x.lo(), x.hi() + 1, f->one());
      std::set<int> exps;
      for (const auto& e : s.entries)
        for (const auto& [k, v] : e.terms()) exps.insert(k);
      for (int k : exps) {
        std::vector<FieldElt> v;
        for (const auto& e : s.entries) v.push_back(e.coeff(k));
        if (!la::solve(d, column(f, v))) return false;
      }
    }
  return true;
}

nlohmann::json CohomologyReport::to_json() const {
  nlohmann::json zs = nlohmann::json::array();
  for (const auto& z : z_samples) zs.push_back(z.code());
  return {{"degree", degree},
          {"window", window},
          {"block_ranks", {{block_ranks[0][0], block_ranks[0][1]}, {block_ranks[1][0], block_ranks[1][1]}}},
          {"representative", representative.to_json()},
          {"z_samples", zs}};
}

CohomologyReport dga_cohomology(const FieldCtx* f, int degree, int window) {
  if (window < std::abs(degree) + 2)
    throw Error(ErrorKind::WindowTooSmall, "cohomology in degree n needs L >= |n| + 2");
  CohomologyReport rep;
  rep.degree = degree;
  rep.window = window;
  int lo = -window, hi = window;
  for (const auto& u : f->units()) {
    rep.z_samples.push_back(u);
    if (rep.z_samples.size() == 4) break;
  }
  rep.representative = WindowHomElt::zero(f, degree, lo, hi - 1);
  std::size_t dim = static_cast<std::size_t>(hi - lo);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      std::optional<std::size_t> rank;
      for (const auto& z : rep.z_samples) {
        Matrix d_in = block_differential(f, degree - 1, r, c, lo, hi, z);
        Matrix d_out = block_differential(f, degree, r, c, lo, hi - 1, z);
        std::size_t h = dim - la::rank(d_out) - la::rank(d_in);
        if (rank && *rank != h)
          throw Error(ErrorKind::VerificationFailure, "cohomology rank varies with Z");
        rank = h;
      }
      rep.block_ranks[r][c] = *rank;
      if (*rank == 0) continue;
      // Kernel vectors outside the image, scaled to lead with 1.
      Matrix d_in = block_differential(f, degree - 1, r, c, lo, hi, f->one());
      Matrix d_out = block_differential(f, degree, r, c, lo, hi - 1, f->one());
      Matrix ker = la::kernel(d_out);
      Matrix span = la::column_basis(d_in);
      std::size_t got = 0;
      for (std::size_t j = 0; j < ker.cols() && got < *rank; ++j) {
        Matrix v = ker.col(j);
        Matrix grown = span.cols() ? span.hstack(v) : v;
        if (la::rank(grown) == span.cols()) continue;
        span = grown;
        ++got;
        std::size_t lead = 0;
        while (v.at(lead, 0).is_zero()) ++lead;
        FieldElt s = v.at(lead, 0).inv();
        for (int l = lo; l < hi; ++l)
          rep.representative.blocks[r][c].at(l) =
              rep.representative.blocks[r][c].at(l) +
              Laurent::constant(f, v.at(static_cast<std::size_t>(l - lo), 0) * s);
      }
    }
  return rep;
}

RingCheck cohomology_ring_check(const FieldCtx* f, int max_degree, int window) {
  RingCheck out;
  const int lo = -window - max_degree, hi = window + max_degree;
  for (int m = -max_degree; m <= max_degree; ++m)
    for (int n = -max_degree; n <= max_degree; ++n) {
      if (std::abs(m + n) > max_degree) continue;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            for (int e = 0; e < 2; ++e) {
              if (WindowHomElt::tau_block(m, a, b) || WindowHomElt::tau_block(n, c, e)) continue;
              WindowHomElt p = dga_mul(iota(f, m, a, b, lo, hi), iota(f, n, c, e, lo, hi));
              WindowHomElt expect = WindowHomElt::zero(f, m + n, p.lo(), p.hi());
              if (b == c) expect = iota(f, m + n, a, e, p.lo(), p.hi());
              ++out.products;
              std::string what;
              if (!dga_d(p).is_zero())
                what = "product is not a cocycle";
              else if (!is_coboundary(p - expect))
                what = "product differs from the expected class";
              else if (!expect.is_zero() && is_coboundary(expect))
                what = "expected class vanishes";
              if (!what.empty() && out.ok) {
                std::ostringstream os;
                os << what << " for degrees " << m << ", " << n << " in slots (" << a << b << ")(" << c << e << ")";
                out.ok = false;
                out.first_failure = os.str();
              }
            }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Degree-0 dictionary

nlohmann::json Degree0Report::to_json() const {
  return {{"factors", factors},     {"homomorphism", homomorphism}, {"central", central},
          {"local", local},         {"bijective", bijective},       {"ok", ok()},
          {"first_failure", first_failure}};
}

namespace {

// Coordinates of x in the span of basis, or nullopt.
std::optional<std::vector<FieldElt>> coordinates(const hecke::HeckeElt& x, const std::vector<hecke::HeckeElt>& basis,
                                                 const FieldCtx* f) {
  std::vector<hecke::ExtWeylElt> keys;
  std::set<hecke::ExtWeylElt> seen;
  auto collect = [&](const hecke::HeckeElt& h) {
    for (const auto& [w, c] : h.terms())
      if (seen.insert(w).second) keys.push_back(w);
  };
  for (const auto& b : basis) collect(b);
  collect(x);
  Matrix a(f, keys.size(), basis.size()), v(f, keys.size(), 1);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) a.set(i, j, basis[j].coeff(keys[i]));
    v.set(i, 0, x.coeff(keys[i]));
  }
  auto sol = la::solve(a, v);
  if (!sol) return std::nullopt;
  std::vector<FieldElt> out;
  for (std::size_t j = 0; j < basis.size(); ++j) out.push_back(sol->at(j, 0));
  return out;
}

}  // namespace

Degree0Report degree0_check(const hecke::HeckeAlgebra& alg, const torus::CharOrbit& gamma, int window) {
  if (alg.kind() != GroupKind::GL2) throw Error(ErrorKind::UnsupportedKind, "the DGA is built for GL2");
  if (!gamma.regular) throw Error(ErrorKind::WrongRegularity, "the DGA lives on a regular block");
  if (window < 0) throw Error(ErrorKind::WindowTooSmall, "window must be nonnegative");
  const FieldCtx* f = &alg.field();
  Degree0Report rep;
  const int lo = -window, hi = window;
  rep.factors = static_cast<std::size_t>(hi - lo + 1);

  // The block e_gamma H_x0 with its centre element, computed in H.
  const torus::TorusChar& xi = gamma.members.front();
  hecke::HeckeElt eg = alg.orbit_idempotent(gamma);
  hecke::HeckeElt e1 = alg.idempotent(xi);
  hecke::HeckeElt e2 = alg.idempotent(alg.torus().s0_twist(xi));
  hecke::HeckeElt t = alg.mul(eg, alg.basis(alg.s(0)));
  hecke::HeckeElt z = alg.mul(eg, alg.basis(alg.omega(2)));
  hecke::HeckeElt zinv = alg.mul(eg, alg.basis(alg.omega(-2)));
  std::vector<hecke::HeckeElt> basis{e1, e2, alg.mul(t, e1), alg.mul(t, e2)};

  auto fail = [&](const std::string& why) {
    if (rep.first_failure.empty()) rep.first_failure = why;
  };

  rep.central = true;
  for (const auto& b : basis)
    if (!(alg.mul(z, b) == alg.mul(b, z))) {
      rep.central = false;
      fail("e_gamma T_omega^2 is not central in the block");
    }
  if (!(alg.mul(z, zinv) == eg) || !(e1.plus(e2) == eg)) {
    rep.central = false;
    fail("block unit relations fail in H");
  }

  // Images at index l.
  auto gen_image = [&](int which, int l) {
    WindowHomElt x = WindowHomElt::zero(f, 0, lo, hi);
    Laurent one = Laurent::constant(f, f->one());
    if (which == 0) x.blocks[0][0].at(l) = one;
    if (which == 1) x.blocks[1][1].at(l) = one;
    if (which == 2) x.blocks[0][1].at(l) = x.blocks[1][0].at(l) = one;  // (0 tau; tau 0)
    if (which == 3) x.blocks[0][0].at(l) = x.blocks[1][1].at(l) = Laurent::monomial(f, f->one(), 1);
    return x;
  };
  auto basis_image = [&](int l) {
    std::vector<WindowHomElt> im{gen_image(0, l), gen_image(1, l)};
    im.push_back(dga_mul(gen_image(2, l), gen_image(0, l)));
    im.push_back(dga_mul(gen_image(2, l), gen_image(1, l)));
    return im;
  };

  // Structure constants from H, then on the images.
  rep.homomorphism = true;
  std::vector<std::vector<std::vector<FieldElt>>> table(4, std::vector<std::vector<FieldElt>>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      auto c = coordinates(alg.mul(basis[a], basis[b]), basis, f);
      if (!c) {
        rep.homomorphism = false;
        fail("block product leaves the span of e1, e2, T e1, T e2");
        continue;
      }
      table[a][b] = *c;
    }
  for (int l = lo; l <= hi && rep.homomorphism; ++l) {
    auto im = basis_image(l);
    WindowHomElt zi = gen_image(3, l);
    for (std::size_t a = 0; a < 4; ++a) {
      if (!(dga_mul(zi, im[a]) == dga_mul(im[a], zi))) {
        rep.homomorphism = false;
        fail("image of Z is not central");
      }
      for (std::size_t b = 0; b < 4; ++b) {
        WindowHomElt expect = WindowHomElt::zero(f, 0, lo, hi);
        for (std::size_t k = 0; k < 4; ++k) expect = expect + im[k].scaled(table[a][b][k]);
        if (!(dga_mul(im[a], im[b]) == expect)) {
          rep.homomorphism = false;
          std::ostringstream os;
          os << "product of basis elements " << a << " and " << b << " at index " << l;
          fail(os.str());
        }
      }
    }
    // Z has an inverse in each factor, and e1 + e2 is that factor's unit.
    WindowHomElt zinv_img = WindowHomElt::zero(f, 0, lo, hi);
    zinv_img.blocks[0][0].at(l) = zinv_img.blocks[1][1].at(l) = Laurent::monomial(f, f->one(), -1);
    if (!(dga_mul(zi, zinv_img) == im[0] + im[1])) {
      rep.homomorphism = false;
      fail("Z is not invertible on the factor");
    }
  }

  rep.local = true;
  for (int l = lo; l <= hi; ++l)
    for (int l2 = lo; l2 <= hi; ++l2) {
      if (l == l2) continue;
      auto a = basis_image(l), b = basis_image(l2);
      for (const auto& x : a)
        for (const auto& y : b)
          if (!dga_mul(x, y).is_zero()) {
            rep.local = false;
            fail("product across different indices");
          }
    }

  // Each basis image is a single constant 1; together they hit every (block, index) slot once.
  rep.bijective = true;
  std::set<std::tuple<int, int, int>> slots;
  for (int l = lo; l <= hi; ++l)
    for (const auto& x : basis_image(l)) {
      int nonzero = 0;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          for (int k = lo; k <= hi; ++k) {
            const Laurent& e = x.blocks[r][c].at(k);
            if (e.is_zero()) continue;
            ++nonzero;
            if (!(e == Laurent::constant(f, f->one()))) rep.bijective = false;
            slots.insert({r, c, k});
          }
      if (nonzero != 1) rep.bijective = false;
    }
  if (slots.size() != 4 * rep.factors) rep.bijective = false;
  if (!rep.bijective) fail("dictionary is not a basis of the degree-0 window");
  return rep;
}

}  // namespace prohecke::dga
