#include "prohecke/nodal.hpp"

#include <algorithm>
#include <sstream>

#include "prohecke/error.hpp"

namespace prohecke::nodal {

namespace {

const gf::FieldCtx* pick(const gf::FieldCtx* a, const gf::FieldCtx* b) {
  if (a && b && a != b) throw Error(ErrorKind::CtxMismatch, "nodal ring elements over different fields");
  return a ? a : b;
}

void add_into(const gf::FieldCtx* f, std::vector<std::uint32_t>& dst, const std::vector<std::uint32_t>& src,
              bool negate) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f->add(dst[i], negate ? f->neg(src[i]) : src[i]);
}

void strip(std::vector<std::uint32_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

std::string monomial_string(const FieldElt& c, const std::string& var, bool first) {
  std::string s;
  if (!first) s += " + ";
  if (var.empty()) return s + c.to_string();
  if (!c.is_one()) s += c.to_string() + "*";
  return s + var;
}

}  // namespace

NodalPoly NodalPoly::constant(const gf::FieldCtx* f, const FieldElt& c) {
  NodalPoly r(f);
  r.c0_ = c.code();
  return r;
}

NodalPoly NodalPoly::monomial(const gf::FieldCtx* f, int branch, std::size_t power, const FieldElt& c) {
  if (power == 0) return constant(f, c);
  if (branch != 1 && branch != 2) throw Error(ErrorKind::InvalidArgument, "branch must be 1 or 2");
  NodalPoly r(f);
  auto& t = branch == 1 ? r.t1_ : r.t2_;
  t.assign(power, 0);
  t[power - 1] = c.code();
  r.trim();
  return r;
}

NodalPoly NodalPoly::x1(const gf::FieldCtx* f, std::size_t power) { return monomial(f, 1, power, f->one()); }
NodalPoly NodalPoly::x2(const gf::FieldCtx* f, std::size_t power) { return monomial(f, 2, power, f->one()); }

FieldElt NodalPoly::constant_term() const { return {f_, c0_}; }

FieldElt NodalPoly::coeff(int branch, std::size_t power) const {
  if (power == 0) return constant_term();
  const auto& t = tail(branch);
  return {f_, power <= t.size() ? t[power - 1] : 0u};
}

int NodalPoly::degree() const {
  if (is_zero()) return -1;
  return static_cast<int>(std::max(t1_.size(), t2_.size()));
}

bool NodalPoly::is_homogeneous(int d) const {
  if (is_zero()) return true;
  if (d == 0) return t1_.empty() && t2_.empty();
  if (c0_ != 0) return false;
  for (const auto* t : {&t1_, &t2_})
    for (std::size_t i = 0; i < t->size(); ++i)
      if ((*t)[i] != 0 && int(i) + 1 != d) return false;
  return true;
}

void NodalPoly::trim() {
  strip(t1_);
  strip(t2_);
}

NodalPoly NodalPoly::operator+(const NodalPoly& o) const {
  NodalPoly r(pick(f_, o.f_));
  if (!r.f_) return r;
  r.c0_ = r.f_->add(c0_, o.c0_);
  r.t1_ = t1_;
  r.t2_ = t2_;
  add_into(r.f_, r.t1_, o.t1_, false);
  add_into(r.f_, r.t2_, o.t2_, false);
  r.trim();
  return r;
}

NodalPoly NodalPoly::operator-() const {
  NodalPoly r(f_);
  if (!f_) return r;
  r.c0_ = f_->neg(c0_);
  for (auto c : t1_) r.t1_.push_back(f_->neg(c));
  for (auto c : t2_) r.t2_.push_back(f_->neg(c));
  return r;
}

NodalPoly NodalPoly::operator-(const NodalPoly& o) const { return *this + (-o); }

NodalPoly NodalPoly::operator*(const NodalPoly& o) const {
  NodalPoly r(pick(f_, o.f_));
  const auto* f = r.f_;
  if (!f || is_zero() || o.is_zero()) return r;
  r.c0_ = f->mul(c0_, o.c0_);
  // Each tail convolves with the other factor's same tail and constant; mixed products vanish.
  auto branch = [&](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f->add(out[i], f->mul(a[i], o.c0_));
    for (std::size_t j = 0; j < b.size(); ++j) out[j] = f->add(out[j], f->mul(c0_, b[j]));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j + 1] = f->add(out[i + j + 1], f->mul(a[i], b[j]));
    }
    strip(out);
    return out;
  };
  r.t1_ = branch(t1_, o.t1_);
  r.t2_ = branch(t2_, o.t2_);
  return r;
}

NodalPoly NodalPoly::scaled(const FieldElt& c) const {
  NodalPoly r(pick(f_, c.ctx()));
  if (c.is_zero() || !r.f_) return r;
  r.c0_ = r.f_->mul(c0_, c.code());
  for (auto x : t1_) r.t1_.push_back(r.f_->mul(x, c.code()));
  for (auto x : t2_) r.t2_.push_back(r.f_->mul(x, c.code()));
  return r;
}

bool NodalPoly::operator==(const NodalPoly& o) const {
  return c0_ == o.c0_ && t1_ == o.t1_ && t2_ == o.t2_;
}

FieldElt NodalPoly::eval(const FieldElt& a1, const FieldElt& a2) const {
  FieldElt acc = constant_term();
  FieldElt pw = a1;
  for (auto c : t1_) {
    acc += FieldElt(f_, c) * pw;
    pw *= a1;
  }
  pw = a2;
  for (auto c : t2_) {
    acc += FieldElt(f_, c) * pw;
    pw *= a2;
  }
  return acc;
}

NodalPoly NodalPoly::parity_part(int parity) const {
  NodalPoly r(f_);
  if (parity == 0) r.c0_ = c0_;
  r.t1_ = t1_;
  r.t2_ = t2_;
  for (auto* t : {&r.t1_, &r.t2_})
    for (std::size_t i = 0; i < t->size(); ++i)
      if (int((i + 1) % 2) != parity) (*t)[i] = 0;
  r.trim();
  return r;
}

NodalPoly NodalPoly::halve_degrees() const {
  if (!(parity_part(1).is_zero())) throw Error(ErrorKind::InvalidArgument, "element has odd-degree terms");
  NodalPoly r(f_);
  r.c0_ = c0_;
  for (std::size_t i = 1; i < t1_.size(); i += 2) r.t1_.push_back(t1_[i]);
  for (std::size_t i = 1; i < t2_.size(); i += 2) r.t2_.push_back(t2_[i]);
  r.trim();
  return r;
}

NodalPoly NodalPoly::truncated(std::size_t d) const {
  NodalPoly r = *this;
  if (d == 0) {
    r.t1_.clear();
    r.t2_.clear();
  }
  if (r.t1_.size() > d) r.t1_.resize(d);
  if (r.t2_.size() > d) r.t2_.resize(d);
  r.trim();
  return r;
}

std::string NodalPoly::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  bool first = true;
  if (c0_ != 0) {
    s += monomial_string(constant_term(), "", first);
    first = false;
  }
  for (int b : {1, 2}) {
    const auto& t = tail(b);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == 0) continue;
      std::string var = "X" + std::to_string(b) + (i ? "^" + std::to_string(i + 1) : "");
      s += monomial_string(FieldElt(f_, t[i]), var, first);
      first = false;
    }
  }
  return s;
}

LaurentNodal::LaurentNodal(const NodalPoly& p, int z_power) : f_(p.field()) {
  if (!p.is_zero()) terms_[z_power] = p;
}

LaurentNodal LaurentNodal::z(const gf::FieldCtx* f, int power) { return {NodalPoly::constant(f, f->one()), power}; }

NodalPoly LaurentNodal::z_coeff(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? NodalPoly(f_) : it->second;
}

void LaurentNodal::add(int power, const NodalPoly& p) {
  if (p.is_zero()) return;
  auto it = terms_.find(power);
  if (it == terms_.end()) {
    terms_.emplace(power, p);
    return;
  }
  it->second = it->second + p;
  if (it->second.is_zero()) terms_.erase(it);
}

LaurentNodal LaurentNodal::operator+(const LaurentNodal& o) const {
  LaurentNodal r = *this;
  r.f_ = pick(f_, o.f_);
  for (const auto& [k, c] : o.terms_) r.add(k, c);
  return r;
}

LaurentNodal LaurentNodal::operator-() const {
  LaurentNodal r(f_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

LaurentNodal LaurentNodal::operator-(const LaurentNodal& o) const { return *this + (-o); }

LaurentNodal LaurentNodal::operator*(const LaurentNodal& o) const {
  LaurentNodal r(pick(f_, o.f_));
  for (const auto& [k1, c1] : terms_)
    for (const auto& [k2, c2] : o.terms_) r.add(k1 + k2, c1 * c2);
  return r;
}

LaurentNodal LaurentNodal::scaled(const FieldElt& c) const {
  LaurentNodal r(pick(f_, c.ctx()));
  for (const auto& [k, p] : terms_) r.add(k, p.scaled(c));
  return r;
}

NodalPoly LaurentNodal::specialize_z(const FieldElt& lambda) const {
  NodalPoly r(f_);
  for (const auto& [k, p] : terms_) r = r + p.scaled(lambda.pow(k));
  return r;
}

std::string LaurentNodal::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, p] : terms_) {
    if (!s.empty()) s += " + ";
    if (k == 0) {
      s += terms_.size() == 1 ? p.to_string() : "(" + p.to_string() + ")";
      continue;
    }
    std::string z = k == 1 ? "Z" : "Z^" + std::to_string(k);
    if (p == NodalPoly::constant(f_, f_->one()))
      s += z;
    else
      s += "(" + p.to_string() + ")*" + z;
  }
  return s;
}

Mat2 Mat2::zero(const gf::FieldCtx* f) {
  Mat2 m;
  for (auto& row : m.e)
    for (auto& x : row) x = LaurentNodal(f);
  return m;
}

Mat2 Mat2::identity(const gf::FieldCtx* f) { return scalar(LaurentNodal::constant(f, f->one())); }

Mat2 Mat2::unit(const gf::FieldCtx* f, int i, int j) {
  Mat2 m = zero(f);
  m.e[i][j] = LaurentNodal::constant(f, f->one());
  return m;
}

Mat2 Mat2::scalar(const LaurentNodal& c) {
  Mat2 m = zero(c.field());
  m.e[0][0] = c;
  m.e[1][1] = c;
  return m;
}

Mat2 Mat2::of(const LaurentNodal& a, const LaurentNodal& b, const LaurentNodal& c, const LaurentNodal& d) {
  Mat2 m;
  m.e[0][0] = a;
  m.e[0][1] = b;
  m.e[1][0] = c;
  m.e[1][1] = d;
  const auto* f = pick(pick(a.field(), b.field()), pick(c.field(), d.field()));
  for (auto& row : m.e)
    for (auto& x : row)
      if (!x.field()) x = LaurentNodal(f);
  return m;
}

Mat2 Mat2::operator+(const Mat2& o) const {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = e[i][j] + o.e[i][j];
  return m;
}

Mat2 Mat2::operator-(const Mat2& o) const {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = e[i][j] - o.e[i][j];
  return m;
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = e[i][0] * o.e[0][j] + e[i][1] * o.e[1][j];
  return m;
}

Mat2 Mat2::scaled(const FieldElt& c) const {
  return map_entries([&](const LaurentNodal& x) { return x.scaled(c); });
}

Mat2 Mat2::times(const LaurentNodal& c) const {
  return map_entries([&](const LaurentNodal& x) { return x * c; });
}

Mat2 Mat2::map_entries(const std::function<LaurentNodal(const LaurentNodal&)>& f) const {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = f(e[i][j]);
  return m;
}

bool Mat2::operator==(const Mat2& o) const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!(e[i][j] == o.e[i][j])) return false;
  return true;
}

bool Mat2::is_zero() const {
  for (const auto& row : e)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

bool Mat2::is_scalar() const { return e[0][1].is_zero() && e[1][0].is_zero() && e[0][0] == e[1][1]; }

std::string Mat2::to_string() const {
  return "[[" + e[0][0].to_string() + ", " + e[0][1].to_string() + "], [" + e[1][0].to_string() + ", " +
         e[1][1].to_string() + "]]";
}

}  // namespace prohecke::nodal
