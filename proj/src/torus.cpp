#include "prohecke/torus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "prohecke/error.hpp"

namespace prohecke {

const char* to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::GL2: return "GL2";
    case GroupKind::SL2: return "SL2";
    case GroupKind::PGL2: return "PGL2";
  }
  return "?";
}

GroupKind parse_group_kind(const std::string& s) {
  if (s == "GL2") return GroupKind::GL2;
  if (s == "SL2") return GroupKind::SL2;
  if (s == "PGL2") return GroupKind::PGL2;
  throw Error(ErrorKind::ConfigError, "unknown group kind '" + s + "'");
}

std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint32_t q) {
  if (q < 2) throw Error(ErrorKind::InvalidArgument, "q must be a prime power");
  auto primes = gf::prime_factors(q);
  if (primes.size() != 1) throw Error(ErrorKind::CompositeCharacteristic, std::to_string(q) + " is not a prime power");
  std::uint32_t p = static_cast<std::uint32_t>(primes[0]), e = 0;
  for (std::uint32_t v = q; v > 1; v /= p) ++e;
  return {p, e};
}

gf::FieldPtr make_field(std::uint32_t q, std::uint32_t ambient_degree) {
  auto [p, e] = split_prime_power(q);
  if (ambient_degree < 1) throw Error(ErrorKind::InvalidArgument, "ambient degree must be >= 1");
  return gf::FieldCtx::create(p, e * ambient_degree);
}

}  // namespace prohecke

namespace prohecke::torus {

void GroupAlgElt::add_term(const TorusElt& t, const FieldElt& c) {
  if (c.is_zero()) return;
  if (!field_) field_ = c.ctx();
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    terms_.emplace(t, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FieldElt GroupAlgElt::coeff(const TorusElt& t) const {
  auto it = terms_.find(t);
  if (it != terms_.end()) return it->second;
  return field_ ? field_->zero() : FieldElt();
}

GroupAlgElt GroupAlgElt::plus(const GroupAlgElt& o) const {
  GroupAlgElt r = *this;
  if (!r.field_) r.field_ = o.field_;
  for (const auto& [t, c] : o.terms_) r.add_term(t, c);
  return r;
}

GroupAlgElt GroupAlgElt::minus(const GroupAlgElt& o) const {
  GroupAlgElt r = *this;
  if (!r.field_) r.field_ = o.field_;
  for (const auto& [t, c] : o.terms_) r.add_term(t, -c);
  return r;
}

GroupAlgElt GroupAlgElt::times(const GroupAlgElt& o, const Torus& torus) const {
  GroupAlgElt r(&torus.field());
  for (const auto& [t, c] : terms_)
    for (const auto& [u, d] : o.terms_) r.add_term(torus.mul(t, u), c * d);
  return r;
}

Torus::Torus(GroupKind kind, std::uint32_t q, gf::FieldPtr field)
    : kind_(kind), q_(q), field_(std::move(field)) {
  split_prime_power(q);
  if (field_->p() != split_prime_power(q).first || (field_->order() - 1) % (q - 1) != 0)
    throw Error(ErrorKind::InvalidArgument, "ambient field does not contain F_q");
  zeta_ = field_->gen_pow((field_->order() - 1) / (q - 1));
}

FieldElt Torus::zeta_pow(std::int64_t k) const { return zeta_.pow(reduce(k)); }

int Torus::reduce(std::int64_t x) const {
  std::int64_t n = modulus();
  return static_cast<int>(((x % n) + n) % n);
}

TorusElt Torus::make(std::int64_t a, std::int64_t b) const {
  if (kind_ == GroupKind::GL2) return {reduce(a), reduce(b)};
  return {reduce(a), 0};
}

std::vector<TorusElt> Torus::elements() const {
  std::vector<TorusElt> out;
  int n = modulus();
  for (int a = 0; a < n; ++a) {
    if (kind_ == GroupKind::GL2)
      for (int b = 0; b < n; ++b) out.push_back({a, b});
    else
      out.push_back({a, 0});
  }
  return out;
}

std::vector<TorusElt> Torus::generators() const {
  if (modulus() == 1) return {};
  if (kind_ == GroupKind::GL2) return {make(1, 0), make(0, 1)};
  return {make(1)};
}

std::size_t Torus::order() const {
  std::size_t n = static_cast<std::size_t>(modulus());
  return kind_ == GroupKind::GL2 ? n * n : n;
}

TorusElt Torus::mul(const TorusElt& x, const TorusElt& y) const { return make(x.a + y.a, x.b + y.b); }

TorusElt Torus::inv(const TorusElt& x) const { return make(-x.a, -x.b); }

TorusElt Torus::s0(const TorusElt& x) const {
  if (kind_ == GroupKind::GL2) return make(x.b, x.a);
  return make(-x.a);
}

TorusElt Torus::coroot(std::int64_t c) const {
  switch (kind_) {
    case GroupKind::GL2: return make(c, -c);
    case GroupKind::SL2: return make(c);
    case GroupKind::PGL2: return make(2 * c);
  }
  return {};
}

TorusElt Torus::coroot_minus_one() const {
  // -1 = zeta^((q-1)/2) for q odd, and -1 = 1 for q even.
  if (q_ % 2 == 0) return identity();
  return coroot(modulus() / 2);
}

std::vector<TorusElt> Torus::coroot_image() const {
  std::set<TorusElt> s;
  for (int c = 0; c < modulus(); ++c) s.insert(coroot(c));
  return {s.begin(), s.end()};
}

FieldElt Torus::mu_alpha() const {
  // Order of the kernel of the coroot on F_q^x: squaring on PGL2 has kernel {+-1}, trivial for q even.
  return field_->from_int(kind_ == GroupKind::PGL2 && q_ % 2 == 1 ? 2 : 1);
}

std::vector<TorusChar> Torus::characters() const {
  std::vector<TorusChar> out;
  int n = modulus();
  for (int j = 0; j < n; ++j) {
    if (kind_ == GroupKind::GL2)
      for (int l = 0; l < n; ++l) out.push_back({j, l});
    else
      out.push_back({j, 0});
  }
  return out;
}

TorusChar Torus::make_char(std::int64_t j, std::int64_t l) const {
  if (kind_ == GroupKind::GL2) return {reduce(j), reduce(l)};
  return {reduce(j), 0};
}

FieldElt Torus::value(const TorusChar& xi, const TorusElt& t) const {
  std::int64_t e = std::int64_t(t.a) * xi.j;
  if (kind_ == GroupKind::GL2) e += std::int64_t(t.b) * xi.l;
  return zeta_pow(e);
}

TorusChar Torus::s0_twist(const TorusChar& xi) const {
  if (kind_ == GroupKind::GL2) return make_char(xi.l, xi.j);
  return make_char(-xi.j);
}

bool Torus::trivial_on_coroot(const TorusChar& xi) const {
  for (const auto& t : coroot_image())
    if (!value(xi, t).is_one()) return false;
  return true;
}

int Torus::n_label(const TorusChar& xi) const {
  switch (kind_) {
    case GroupKind::GL2: return reduce(xi.j + xi.l);
    case GroupKind::SL2: return std::min(xi.j, modulus() - xi.j) % 2;
    case GroupKind::PGL2: return 0;
  }
  return 0;
}

CharOrbit Torus::orbit_of(const TorusChar& xi) const {
  CharOrbit o;
  TorusChar tw = s0_twist(xi);
  o.members = {std::min(xi, tw), std::max(xi, tw)};
  if (tw == xi) o.members.pop_back();
  o.regular = o.members.size() == 2;
  o.n_label = n_label(xi);
  return o;
}

std::vector<CharOrbit> Torus::orbits() const {
  std::vector<CharOrbit> out;
  for (const auto& xi : characters()) {
    CharOrbit o = orbit_of(xi);
    if (o.members.front() == xi) out.push_back(o);
  }
  return out;
}

GroupAlgElt Torus::basis(const TorusElt& t) const {
  GroupAlgElt r(field_.get());
  r.add_term(t, field_->one());
  return r;
}

GroupAlgElt Torus::idempotent(const TorusChar& xi) const {
  GroupAlgElt r(field_.get());
  FieldElt scale = field_->from_int(static_cast<std::int64_t>(order() % field_->p())).inv();
  for (const auto& t : elements()) r.add_term(t, scale * value(xi, inv(t)));
  return r;
}

GroupAlgElt Torus::orbit_idempotent(const CharOrbit& gamma) const {
  GroupAlgElt r(field_.get());
  for (const auto& xi : gamma.members) r = r.plus(idempotent(xi));
  return r;
}

std::string Torus::to_string(const TorusElt& t) const {
  std::ostringstream os;
  if (kind_ == GroupKind::GL2)
    os << "(" << t.a << "," << t.b << ")";
  else
    os << t.a;
  return os.str();
}

std::string Torus::to_string(const TorusChar& xi) const {
  std::ostringstream os;
  if (kind_ == GroupKind::GL2)
    os << "(" << xi.j << "," << xi.l << ")";
  else
    os << xi.j;
  return os.str();
}

TorusChar lift_character(const Torus& sl2, const TorusChar& xi) {
  if (sl2.kind() != GroupKind::SL2) throw Error(ErrorKind::KindMismatch, "lift_character expects an SL2 character");
  int n = sl2.reduce(xi.j);
  int j = (n + 1) / 2;
  return {j, sl2.reduce(j - n)};
}

TorusChar restrict_to_sl2(const Torus& gl2, const TorusChar& xi) {
  if (gl2.kind() != GroupKind::GL2) throw Error(ErrorKind::KindMismatch, "restrict_to_sl2 expects a GL2 character");
  return {gl2.reduce(xi.j - xi.l), 0};
}

}  // namespace prohecke::torus
