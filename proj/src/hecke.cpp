#include "prohecke/hecke.hpp"

#include <sstream>

#include "prohecke/error.hpp"

namespace prohecke::hecke {

bool ExtWeylElt::operator<(const ExtWeylElt& o) const {
  if (word.size() != o.word.size()) return word.size() < o.word.size();
  if (omega != o.omega) return omega < o.omega;
  if (word != o.word) return word < o.word;
  return t < o.t;
}

void HeckeElt::add_term(const ExtWeylElt& w, const FieldElt& c) {
  if (c.is_zero()) return;
  if (!field_) field_ = c.ctx();
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FieldElt HeckeElt::coeff(const ExtWeylElt& w) const {
  auto it = terms_.find(w);
  if (it != terms_.end()) return it->second;
  return field_ ? field_->zero() : FieldElt();
}

HeckeElt HeckeElt::plus(const HeckeElt& o) const {
  HeckeElt r = *this;
  if (!r.field_) r.field_ = o.field_;
  for (const auto& [w, c] : o.terms_) r.add_term(w, c);
  return r;
}

HeckeElt HeckeElt::minus(const HeckeElt& o) const {
  HeckeElt r = *this;
  if (!r.field_) r.field_ = o.field_;
  for (const auto& [w, c] : o.terms_) r.add_term(w, -c);
  return r;
}

HeckeElt HeckeElt::scaled(const FieldElt& c) const {
  HeckeElt r(field_ ? field_ : c.ctx());
  for (const auto& [w, d] : terms_) r.add_term(w, d * c);
  return r;
}

HeckeAlgebra::HeckeAlgebra(GroupKind kind, std::uint32_t q, gf::FieldPtr field)
    : torus_(kind, q, std::move(field)) {}

int HeckeAlgebra::reduce_omega(int k) const {
  switch (kind()) {
    case GroupKind::GL2: return k;
    case GroupKind::PGL2: return ((k % 2) + 2) % 2;
    case GroupKind::SL2:
      if (k != 0) throw Error(ErrorKind::KindMismatch, "SL2 has no omega");
      return 0;
  }
  return k;
}

std::vector<std::uint8_t> HeckeAlgebra::flip(const std::vector<std::uint8_t>& w, int k) {
  if (k % 2 == 0) return w;
  std::vector<std::uint8_t> r(w);
  for (auto& x : r) x = static_cast<std::uint8_t>(1 - x);
  return r;
}

ExtWeylElt HeckeAlgebra::omega(int k) const {
  ExtWeylElt w;
  w.omega = reduce_omega(k);
  return w;
}

ExtWeylElt HeckeAlgebra::s(int i) const {
  if (i != 0 && i != 1) throw Error(ErrorKind::InvalidArgument, "simple reflection index must be 0 or 1");
  ExtWeylElt w;
  w.word = {static_cast<std::uint8_t>(i)};
  return w;
}

ExtWeylElt HeckeAlgebra::t(const TorusElt& x) const {
  ExtWeylElt w;
  w.t = torus_.make(x.a, x.b);
  return w;
}

ExtWeylElt HeckeAlgebra::word(const std::vector<int>& letters) const {
  ExtWeylElt r;
  for (int i : letters) r = weyl_mul(r, s(i));
  return r;
}

void HeckeAlgebra::check(const ExtWeylElt& u) const {
  if (reduce_omega(u.omega) != u.omega) throw Error(ErrorKind::KindMismatch, "omega power out of range for kind");
  for (std::size_t i = 0; i < u.word.size(); ++i) {
    if (u.word[i] > 1) throw Error(ErrorKind::InvalidArgument, "letters must be 0 or 1");
    if (i && u.word[i] == u.word[i - 1]) throw Error(ErrorKind::InvalidArgument, "word is not alternating");
  }
  if (torus_.make(u.t.a, u.t.b) != u.t) throw Error(ErrorKind::InvalidArgument, "torus part not reduced");
}

ExtWeylElt HeckeAlgebra::weyl_mul(const ExtWeylElt& u, const ExtWeylElt& v) const {
  // u v = w^a x t w^b y t' = w^(a+b) x^(b) t^(b) y t'
  int b = v.omega;
  std::vector<std::uint8_t> x = flip(u.word, b);
  TorusElt tu = (b % 2 != 0) ? torus_.s0(u.t) : u.t;
  // t y = y t^(s0^|y|)
  if (v.word.size() % 2 == 1) tu = torus_.s0(tu);
  TorusElt tt = torus_.mul(tu, v.t);
  // Concatenate x and y, cancelling s s = alpha-check(-1) at the junction.
  TorusElt sq = torus_.coroot_minus_one();
  std::size_t k = 0;
  while (k < x.size() && k < v.word.size() && x[x.size() - 1 - k] == v.word[k]) ++k;
  std::vector<std::uint8_t> w(x.begin(), x.end() - static_cast<std::ptrdiff_t>(k));
  w.insert(w.end(), v.word.begin() + static_cast<std::ptrdiff_t>(k), v.word.end());
  // The cancelled squares are s0-invariant, so they move freely into the torus part.
  for (std::size_t i = 0; i < k; ++i) tt = torus_.mul(tt, sq);
  ExtWeylElt r;
  r.omega = reduce_omega(u.omega + b);
  r.word = std::move(w);
  r.t = tt;
  return r;
}

ExtWeylElt HeckeAlgebra::weyl_inv(const ExtWeylElt& u) const {
  TorusElt sq = torus_.coroot_minus_one();
  ExtWeylElt r = t(torus_.inv(u.t));
  for (std::size_t i = u.word.size(); i-- > 0;) {
    // s^-1 = s * alpha-check(-1)
    r = weyl_mul(r, s(u.word[i]));
    r = weyl_mul(r, t(sq));
  }
  return weyl_mul(r, omega(-u.omega));
}

HeckeElt HeckeAlgebra::basis(const ExtWeylElt& w) const {
  HeckeElt r(&field());
  r.add_term(w, field().one());
  return r;
}

HeckeElt HeckeAlgebra::from_group_alg(const torus::GroupAlgElt& g) const {
  HeckeElt r(&field());
  for (const auto& [x, c] : g.terms()) r.add_term(t(x), c);
  return r;
}

HeckeElt HeckeAlgebra::quadratic_constant() const {
  HeckeElt r(&field());
  FieldElt mu = torus_.mu_alpha();
  for (const auto& x : torus_.coroot_image()) r.add_term(t(x), mu);
  return r;
}

HeckeElt HeckeAlgebra::mul(const HeckeElt& x, const HeckeElt& y) const {
  HeckeElt result(&field());
  if (x.is_zero() || y.is_zero()) return result;
  const auto coroots = torus_.coroot_image();
  const FieldElt mu = torus_.mu_alpha();
  for (const auto& [v, cv] : y.terms()) {
    // Peel y = omega^b * s_{i1} ... s_{ik} * t' one factor at a time.
    std::map<ExtWeylElt, FieldElt> cur;
    for (const auto& [u, cu] : x.terms()) {
      ExtWeylElt w = weyl_mul(u, omega(v.omega));
      auto [it, ins] = cur.try_emplace(w, cu * cv);
      if (!ins) it->second += cu * cv;
    }
    for (std::uint8_t letter : v.word) {
      std::map<ExtWeylElt, FieldElt> next;
      auto acc = [&next](const ExtWeylElt& w, const FieldElt& c) {
        if (c.is_zero()) return;
        auto [it, ins] = next.try_emplace(w, c);
        if (!ins) it->second += c;
      };
      for (const auto& [u, c] : cur) {
        if (c.is_zero()) continue;
        if (!u.word.empty() && u.word.back() == letter) {
          // T_{w t} T_s = T_w T_s T_{t^s0} = T_w c_s T_{t^s0}
          TorusElt ts = torus_.s0(u.t);
          FieldElt cm = c * mu;
          for (const auto& a : coroots) {
            ExtWeylElt w = u;
            w.t = torus_.mul(a, ts);
            acc(w, cm);
          }
        } else {
          ExtWeylElt w = weyl_mul(u, s(letter));
          acc(w, c);
        }
      }
      cur = std::move(next);
    }
    for (const auto& [u, c] : cur) result.add_term(weyl_mul(u, t(v.t)), c);
  }
  return result;
}

HeckeElt HeckeAlgebra::block_project(const HeckeElt& x, const CharOrbit& g) const {
  return mul(orbit_idempotent(g), x);
}

std::vector<ExtWeylElt> HeckeAlgebra::generators() const {
  std::vector<ExtWeylElt> out;
  for (const auto& x : torus_.generators()) out.push_back(t(x));
  out.push_back(s(0));
  out.push_back(s(1));
  if (has_omega()) {
    out.push_back(omega(1));
    if (kind() == GroupKind::GL2) out.push_back(omega(-1));
  }
  return out;
}

bool HeckeAlgebra::is_central(const HeckeElt& x) const {
  for (const auto& g : generators()) {
    HeckeElt tg = basis(g);
    if (!(mul(x, tg) == mul(tg, x))) return false;
  }
  return true;
}

std::vector<std::vector<std::uint8_t>> HeckeAlgebra::words(std::size_t max_len) const {
  std::vector<std::vector<std::uint8_t>> out{{}};
  for (std::size_t len = 1; len <= max_len; ++len)
    for (std::uint8_t first = 0; first < 2; ++first) {
      std::vector<std::uint8_t> w(len);
      for (std::size_t i = 0; i < len; ++i) w[i] = static_cast<std::uint8_t>((first + i) % 2);
      out.push_back(w);
    }
  return out;
}

std::vector<ExtWeylElt> HeckeAlgebra::basis_elements(std::size_t max_len, const std::vector<int>& omega_range,
                                                     const std::vector<TorusElt>& tori) const {
  std::vector<ExtWeylElt> out;
  for (int k : omega_range)
    for (const auto& w : words(max_len))
      for (const auto& x : tori) {
        ExtWeylElt e;
        e.omega = reduce_omega(k);
        e.word = w;
        e.t = torus_.make(x.a, x.b);
        out.push_back(e);
      }
  return out;
}

std::string HeckeAlgebra::to_string(const ExtWeylElt& w) const {
  std::ostringstream os;
  bool any = false;
  if (w.omega != 0) {
    os << "w^" << w.omega;
    any = true;
  }
  for (auto l : w.word) {
    os << (any ? "*" : "") << "s" << int(l);
    any = true;
  }
  if (w.t != TorusElt{} || !any) os << (any ? "*" : "") << "t" << torus_.to_string(w.t);
  return os.str();
}

std::string HeckeAlgebra::to_string(const HeckeElt& x) const {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : x.terms()) {
    os << (first ? "" : " + ") << c.to_string() << "*T[" << to_string(w) << "]";
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Supersingular characters and modules

std::vector<SupersingChar> enumerate_supersingular_chars(const HeckeAlgebra& alg) {
  std::vector<SupersingChar> out;
  const auto& T = alg.torus();
  for (const auto& xi : T.characters()) {
    if (T.trivial_on_coroot(xi)) {
      out.push_back({xi, 0, -1, true});
      out.push_back({xi, -1, 0, true});
    } else {
      out.push_back({xi, 0, 0, false});
    }
  }
  return out;
}

namespace {

la::Matrix diag2(const gf::FieldCtx* f, const FieldElt& a, const FieldElt& b) {
  la::Matrix m(f, 2, 2);
  m.set(0, 0, a);
  m.set(1, 1, b);
  return m;
}

}  // namespace

SupersingModule character_module(const HeckeAlgebra& alg, const SupersingChar& chi) {
  if (alg.kind() != GroupKind::SL2)
    throw Error(ErrorKind::UnsupportedKind, "one-dimensional supersingular modules are the SL2 case");
  const gf::FieldCtx* f = &alg.field();
  SupersingModule m;
  m.kind = alg.kind();
  m.chi = chi;
  m.dim = 1;
  m.torus_chars = {chi.restriction};
  la::Matrix s0(f, 1, 1), s1(f, 1, 1);
  s0.set(0, 0, f->from_int(chi.ts0_val));
  s1.set(0, 0, f->from_int(chi.ts1_val));
  m.gens["s0"] = s0;
  m.gens["s1"] = s1;
  return m;
}

SupersingModule supersingular_module(const HeckeAlgebra& alg, const CharOrbit& gamma, const FieldElt& lambda) {
  if (alg.kind() == GroupKind::SL2)
    throw Error(ErrorKind::UnsupportedKind, "SL2 supersingular modules are characters");
  if (lambda.is_zero()) throw Error(ErrorKind::ZeroLambda, "lambda must be nonzero");
  const gf::FieldCtx* f = &alg.field();
  const auto& T = alg.torus();
  FieldElt lam = alg.kind() == GroupKind::PGL2 ? f->one() : lambda;
  SupersingModule m;
  m.kind = alg.kind();
  m.orbit = gamma;
  m.lambda = lam;
  m.dim = 2;
  TorusChar xi = gamma.members.front();
  if (gamma.regular)
    m.chi = {xi, 0, 0, false};
  else
    m.chi = {xi, 0, -1, true};
  m.torus_chars = {xi, T.s0_twist(xi)};
  // e0 carries chi, e1 carries chi^omega, which swaps the values on T_s0 and T_s1.
  FieldElt v0 = f->from_int(m.chi.ts0_val), v1 = f->from_int(m.chi.ts1_val);
  m.gens["s0"] = diag2(f, v0, v1);
  m.gens["s1"] = diag2(f, v1, v0);
  la::Matrix om(f, 2, 2);
  om.set(1, 0, f->one());
  om.set(0, 1, lam);
  m.gens["omega"] = om;
  la::Matrix oi(f, 2, 2);
  oi.set(0, 1, f->one());
  oi.set(1, 0, lam.inv());
  m.gens["omega_inv"] = oi;
  return m;
}

std::vector<SupersingModule> enumerate_supersingular(const HeckeAlgebra& alg, const std::vector<FieldElt>& lambdas) {
  std::vector<SupersingModule> out;
  if (alg.kind() == GroupKind::SL2) {
    for (const auto& chi : enumerate_supersingular_chars(alg)) out.push_back(character_module(alg, chi));
    return out;
  }
  std::vector<FieldElt> lams = lambdas;
  if (alg.kind() == GroupKind::PGL2 || lams.empty()) lams = {alg.field().one()};
  for (const auto& lam : lams)
    for (const auto& g : alg.torus().orbits()) out.push_back(supersingular_module(alg, g, lam));
  return out;
}

la::Matrix SupersingModule::act(const HeckeAlgebra& alg, const ExtWeylElt& w) const {
  const gf::FieldCtx* f = &alg.field();
  la::Matrix r = la::Matrix::identity(f, dim);
  if (w.omega != 0) {
    const la::Matrix& g = w.omega > 0 ? gens.at("omega") : gens.at("omega_inv");
    for (int i = 0; i < std::abs(w.omega); ++i) r = r * g;
  }
  for (auto l : w.word) r = r * gens.at(l == 0 ? "s0" : "s1");
  la::Matrix d(f, dim, dim);
  for (std::size_t i = 0; i < dim; ++i) d.set(i, i, alg.torus().value(torus_chars[i], w.t));
  return r * d;
}

la::Matrix SupersingModule::act(const HeckeAlgebra& alg, const HeckeElt& x) const {
  return representation(alg).apply(x);
}

Representation<la::Matrix> SupersingModule::representation(const HeckeAlgebra& alg) const {
  Representation<la::Matrix> rep;
  rep.image = [this, &alg](const ExtWeylElt& w) { return act(alg, w); };
  rep.mul = [](const la::Matrix& a, const la::Matrix& b) { return a * b; };
  rep.add = [](const la::Matrix& a, const la::Matrix& b) { return a + b; };
  rep.scale = [](const la::Matrix& a, const FieldElt& c) { return a.scaled(c); };
  rep.equal = [](const la::Matrix& a, const la::Matrix& b) { return a == b; };
  rep.zero = la::Matrix(&alg.field(), dim, dim);
  return rep;
}

std::optional<std::string> module_relation_failure(const HeckeAlgebra& alg, const SupersingModule& m,
                                                   std::size_t max_len) {
  std::vector<int> omegas{0};
  if (alg.kind() == GroupKind::GL2) omegas = {-1, 0, 1, 2};
  if (alg.kind() == GroupKind::PGL2) omegas = {0, 1};
  auto elems = alg.basis_elements(max_len, omegas, alg.torus().elements().size() <= 16
                                                       ? alg.torus().elements()
                                                       : [&] {
                                                           auto g = alg.torus().generators();
                                                           g.insert(g.begin(), alg.torus().identity());
                                                           return g;
                                                         }());
  // Multiplicativity against generators on the right implies it for all products.
  auto fail = first_homomorphism_failure(alg, m.representation(alg), elems, alg.generators());
  if (!fail) {
    if (m.dim == 2) {
      // T_omega e0 = e1, T_omega e1 = lambda e0, and T_omega^2 acts by lambda.
      la::Matrix om = m.act(alg, alg.omega(1));
      if (!(om.at(1, 0).is_one() && om.at(0, 0).is_zero() && om.at(1, 1).is_zero() && om.at(0, 1) == m.lambda))
        return std::string("T_omega does not act by (0 lambda; 1 0)");
    }
    return std::nullopt;
  }
  return "relation fails on T[" + alg.to_string(fail->first) + "] * T[" + alg.to_string(fail->second) + "]";
}

}  // namespace prohecke::hecke
