#include "prohecke/models.hpp"

#include <algorithm>
#include <sstream>

#include "prohecke/error.hpp"
#include "prohecke/linalg.hpp"

namespace prohecke::models {

namespace {

using la::Matrix;

LaurentNodal cst(const gf::FieldCtx* f, std::int64_t v) { return LaurentNodal::constant(f, f->from_int(v)); }
LaurentNodal zero_b(const gf::FieldCtx* f) { return LaurentNodal(f); }

[[noreturn]] void fail(const std::string& check, const std::string& detail) {
  throw Error(ErrorKind::VerificationFailure, check + ": " + detail);
}

std::vector<int> omega_sample(GroupKind k) {
  switch (k) {
    case GroupKind::GL2: return {-1, 0, 1};
    case GroupKind::PGL2: return {0, 1};
    case GroupKind::SL2: return {0};
  }
  return {0};
}

std::vector<int> omega_basis_range(GroupKind k) {
  switch (k) {
    case GroupKind::GL2: return {-1, 0, 1, 2};
    case GroupKind::PGL2: return {0, 1};
    case GroupKind::SL2: return {0};
  }
  return {0};
}

std::vector<TorusElt> torus_sample(const HeckeAlgebra& alg) {
  std::vector<TorusElt> out{alg.torus().identity()};
  for (const auto& g : alg.torus().generators()) out.push_back(g);
  return out;
}

// omega^n as a normal form, reducing as the group requires.
ExtWeylElt omega_power(const HeckeAlgebra& alg, int n) {
  ExtWeylElt r = alg.identity();
  for (int i = 0; i < std::abs(n); ++i) r = alg.weyl_mul(r, n > 0 ? alg.omega(1) : alg.omega(-1));
  return r;
}

// Alternating word of length n starting with s_first.
ExtWeylElt alternating(const HeckeAlgebra& alg, int first, std::size_t n) {
  std::vector<int> letters;
  for (std::size_t i = 0; i < n; ++i) letters.push_back(static_cast<int>((first + i) % 2));
  return alg.word(letters);
}

// Flattened k-coordinates of a matrix over B, keyed by (entry, Z power, branch, X power).
using CoordKey = std::tuple<int, int, int, std::size_t>;
std::map<CoordKey, FieldElt> coordinates(const Mat2& m) {
  std::map<CoordKey, FieldElt> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (const auto& [z, p] : m.e[i][j].terms()) {
        if (!p.constant_term().is_zero()) out[{2 * i + j, z, 0, 0}] = p.constant_term();
        for (int b : {1, 2}) {
          const auto& t = p.tail(b);
          for (std::size_t k = 0; k < t.size(); ++k)
            if (t[k]) out[{2 * i + j, z, b, k + 1}] = FieldElt(m.field(), t[k]);
        }
      }
  return out;
}

std::size_t rank_of(const gf::FieldCtx* f, const std::vector<Mat2>& mats) {
  std::map<CoordKey, std::size_t> index;
  std::vector<std::map<CoordKey, FieldElt>> coords;
  for (const auto& m : mats) {
    coords.push_back(coordinates(m));
    for (const auto& [k, v] : coords.back()) index.emplace(k, 0);
  }
  std::size_t r = 0;
  for (auto& [k, v] : index) v = r++;
  Matrix a(f, index.size(), mats.size());
  for (std::size_t c = 0; c < coords.size(); ++c)
    for (const auto& [k, v] : coords[c]) a.set(index.at(k), c, v);
  return la::rank(a);
}

// Every entry homogeneous of degree d, supported on the diagonal for even d and off it for odd d.
bool parity_pattern(const Mat2& m, int d) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto& x = m.e[i][j];
      if (x.is_zero()) continue;
      if (!x.is_z_free() || !x.z_coeff(0).is_homogeneous(d)) return false;
      if ((i == j) != (d % 2 == 0)) return false;
    }
  return true;
}

Mat2 specialize_z(const Mat2& m, const FieldElt& lambda) {
  return m.map_entries([&](const LaurentNodal& x) { return LaurentNodal(x.specialize_z(lambda)); });
}

Matrix evaluate(const Mat2& m, const FieldElt& a1, const FieldElt& a2, const FieldElt& z) {
  const auto* f = a1.ctx();
  Matrix r(f, 2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.set(i, j, m.e[i][j].specialize_z(z).eval(a1, a2));
  return r;
}

}  // namespace

std::string to_string(ModelTarget t) {
  switch (t) {
    case ModelTarget::MatB: return "M2(B)";
    case ModelTarget::MatXZ: return "M2(k[X,Z^+-1])";
    case ModelTarget::MatA: return "M2(A)";
    case ModelTarget::MatX: return "M2(k[X])";
  }
  return "?";
}

Mat2 ModelMap::torus_image(const torus::Torus& tor, const TorusElt& t) const {
  return Mat2::of(LaurentNodal::constant(field, tor.value(torus_chars[0], t)), zero_b(field), zero_b(field),
                  LaurentNodal::constant(field, tor.value(torus_chars[1], t)));
}

Mat2 ModelMap::image(const HeckeAlgebra& alg, const ExtWeylElt& w) const {
  Mat2 r = Mat2::identity(field);
  if (w.omega != 0) {
    const Mat2& g = gens.at(w.omega > 0 ? "omega" : "omega_inv");
    for (int i = 0; i < std::abs(w.omega); ++i) r = r * g;
  }
  for (auto l : w.word) r = r * gens.at(l == 0 ? "s0" : "s1");
  return r * torus_image(alg.torus(), w.t);
}

Mat2 ModelMap::apply(const HeckeAlgebra& alg, const HeckeElt& x) const {
  Mat2 acc = Mat2::zero(field);
  for (const auto& [w, c] : x.terms()) acc = acc + image(alg, w).scaled(c);
  return acc;
}

hecke::Representation<Mat2> ModelMap::representation(const HeckeAlgebra& alg) const {
  auto cache = std::make_shared<std::map<ExtWeylElt, Mat2>>();
  hecke::Representation<Mat2> rep;
  rep.image = [this, &alg, cache](const ExtWeylElt& w) {
    auto it = cache->find(w);
    if (it != cache->end()) return it->second;
    return cache->emplace(w, image(alg, w)).first->second;
  };
  rep.mul = [](const Mat2& a, const Mat2& b) { return a * b; };
  rep.add = [](const Mat2& a, const Mat2& b) { return a + b; };
  rep.scale = [](const Mat2& a, const FieldElt& c) { return a.scaled(c); };
  rep.equal = [](const Mat2& a, const Mat2& b) { return a == b; };
  rep.zero = Mat2::zero(field);
  return rep;
}

nlohmann::json ModelMap::to_json(const HeckeAlgebra& alg) const {
  auto mat = [](const Mat2& m) {
    return nlohmann::json::array({nlohmann::json::array({m.e[0][0].to_string(), m.e[0][1].to_string()}),
                                  nlohmann::json::array({m.e[1][0].to_string(), m.e[1][1].to_string()})});
  };
  nlohmann::json j;
  j["kind"] = prohecke::to_string(kind);
  nlohmann::json members = nlohmann::json::array();
  for (const auto& xi : orbit.members) members.push_back(alg.torus().to_string(xi));
  j["orbit"] = members;
  j["regular"] = orbit.regular;
  j["target"] = to_string(target);
  if (lift) j["lift"] = torus::Torus(GroupKind::GL2, alg.q(), alg.torus().field_ptr()).to_string(*lift);
  for (const auto& [name, m] : gens) j["generators"][name] = mat(m);
  for (const auto& t : alg.torus().generators())
    j["generators"]["t" + alg.torus().to_string(t)] = mat(torus_image(alg.torus(), t));
  return j;
}

bool has_model(const HeckeAlgebra& alg, const CharOrbit& gamma) {
  if (alg.kind() != GroupKind::SL2) return true;
  return !alg.torus().trivial_on_coroot(gamma.members.front()) || gamma.regular;
}

ModelMap build_model(const HeckeAlgebra& alg, const CharOrbit& gamma) {
  const auto* f = &alg.field();
  const auto& T = alg.torus();
  ModelMap m;
  m.kind = alg.kind();
  m.orbit = gamma;
  m.field = f;
  const TorusChar xi = gamma.members.front();
  auto X1 = LaurentNodal::x1(f), X2 = LaurentNodal::x2(f), Z = LaurentNodal::z(f), Zi = LaurentNodal::z(f, -1);
  auto one = cst(f, 1), zero = zero_b(f);

  if (alg.kind() == GroupKind::SL2) {
    if (!has_model(alg, gamma))
      throw Error(ErrorKind::WrongRegularity, "the trivial SL2 block has no 2x2 matrix model");
    m.target = ModelTarget::MatA;
    m.lift = torus::lift_character(T, xi);
    m.torus_chars[0] = xi;
    m.torus_chars[1] = gamma.regular ? T.s0_twist(xi) : xi;
    m.gens["s0"] = Mat2::of(zero, X1, X2, zero);
    m.gens["s1"] = Mat2::of(zero, X2, X1, zero);
    return m;
  }

  const bool pgl = alg.kind() == GroupKind::PGL2;
  if (gamma.regular) {
    m.target = pgl ? ModelTarget::MatA : ModelTarget::MatB;
    m.torus_chars[0] = xi;
    m.torus_chars[1] = T.s0_twist(xi);
    if (pgl) {
      m.gens["omega"] = Mat2::of(zero, one, one, zero);
      m.gens["s0"] = Mat2::of(zero, X1, X2, zero);
      m.gens["s1"] = Mat2::of(zero, X2, X1, zero);
    } else {
      m.gens["omega"] = Mat2::of(zero, Z, one, zero);
      m.gens["omega_inv"] = Mat2::of(zero, one, Zi, zero);
      m.gens["s0"] = Mat2::of(zero, X1, X2 * Zi, zero);
      m.gens["s1"] = Mat2::of(zero, X2, X1 * Zi, zero);
    }
    return m;
  }

  // Non-regular: centre k[X, Z^+-1] (k[X] for PGL2) with X embedded as X1.
  const auto& X = X1;
  m.target = pgl ? ModelTarget::MatX : ModelTarget::MatXZ;
  m.torus_chars[0] = xi;
  m.torus_chars[1] = xi;
  LaurentNodal z = pgl ? one : Z;
  Mat2 om = Mat2::of(X, X * X - z, -one, -X);
  m.gens["omega"] = om;
  if (!pgl) m.gens["omega_inv"] = om.times(Zi);
  m.gens["s0"] = Mat2::of(zero, zero, zero, -one);
  m.gens["s1"] = om * m.gens["s0"] * (pgl ? om : om.times(Zi));
  return m;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json Report::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : checks)
    j.push_back({{"name", c.name}, {"passed", c.passed}, {"checked", c.checked}, {"detail", c.detail}});
  return j;
}

ModelVerifier::ModelVerifier(const HeckeAlgebra& alg, std::size_t max_len)
    : alg_(alg), max_len_(max_len) {
  sample_ = alg.basis_elements(max_len, omega_sample(alg.kind()), torus_sample(alg));
  products_.resize(sample_.size());
  for (std::size_t i = 0; i < sample_.size(); ++i) {
    products_[i].reserve(sample_.size());
    for (const auto& v : sample_) products_[i].push_back(alg.mul(sample_[i], v));
  }
}

Report ModelVerifier::verify(const ModelMap& map) const {
  const auto& alg = alg_;
  const auto* f = map.field;
  Report report;
  auto rep = map.representation(alg);

  // (a) multiplicativity on the basis sample.
  {
    CheckResult c{"homomorphism", true, 0, ""};
    std::vector<Mat2> images;
    for (const auto& w : sample_) images.push_back(rep.image(w));
    for (std::size_t i = 0; i < sample_.size(); ++i)
      for (std::size_t j = 0; j < sample_.size(); ++j) {
        ++c.checked;
        if (!(rep.apply(products_[i][j]) == images[i] * images[j]))
          fail(c.name, "T[" + alg.to_string(sample_[i]) + "] * T[" + alg.to_string(sample_[j]) + "]");
      }
    report.checks.push_back(c);
  }

  // (b) block basis e_a T_{omega^k w} maps to independent matrices.
  {
    CheckResult c{"injectivity", true, 0, ""};
    std::vector<Mat2> imgs;
    for (const auto& a : map.orbit.members) {
      Mat2 ea = map.apply(alg, alg.idempotent(a));
      for (int k : omega_basis_range(alg.kind()))
        for (const auto& word : alg.words(max_len_)) {
          ExtWeylElt w = omega_power(alg, k);
          w = alg.weyl_mul(w, alg.word(std::vector<int>(word.begin(), word.end())));
          imgs.push_back(ea * rep.image(w));
        }
    }
    c.checked = imgs.size();
    std::size_t r = rank_of(f, imgs);
    c.detail = "rank " + std::to_string(r) + " of " + std::to_string(imgs.size());
    if (r != imgs.size()) fail(c.name, c.detail);
    report.checks.push_back(c);
  }

  // (c) closed-form powers.
  {
    CheckResult c{"power identities", true, 0, ""};
    auto X1 = LaurentNodal::x1(f), X2 = LaurentNodal::x2(f);
    auto zero = zero_b(f);
    if (alg.kind() == GroupKind::SL2) {
      for (std::size_t m = 0; 2 * m <= max_len_; ++m) {
        auto x1e = LaurentNodal::x1(f, 2 * m), x2e = LaurentNodal::x2(f, 2 * m);
        auto x1o = LaurentNodal::x1(f, 2 * m + 1), x2o = LaurentNodal::x2(f, 2 * m + 1);
        if (m == 0) x1e = x2e = cst(f, 1);
        const std::pair<ExtWeylElt, Mat2> cases[] = {
            {alternating(alg, 0, 2 * m), Mat2::of(x1e, zero, zero, x2e)},
            {alternating(alg, 1, 2 * m), Mat2::of(x2e, zero, zero, x1e)},
            {alternating(alg, 0, 2 * m + 1), Mat2::of(zero, x1o, x2o, zero)},
            {alternating(alg, 1, 2 * m + 1), Mat2::of(zero, x2o, x1o, zero)},
        };
        for (const auto& [w, expect] : cases) {
          ++c.checked;
          if (!(map.image(alg, w) == expect)) fail(c.name, "T[" + alg.to_string(w) + "]");
        }
      }
    } else if (map.orbit.regular) {
      // (e_1 T_{s_i omega})^n = e_1 T_{w_{i,n} omega^n}, sent to X_{i+1}^n E11.
      HeckeElt e1 = alg.idempotent(map.torus_chars[0]);
      for (int i : {0, 1}) {
        HeckeElt gen = alg.mul(e1, alg.basis(alg.weyl_mul(alg.s(i), alg.omega(1))));
        HeckeElt pw = gen;
        for (std::size_t n = 1; n <= max_len_; ++n) {
          if (n > 1) pw = alg.mul(pw, gen);
          HeckeElt rhs = alg.mul(e1, alg.basis(alg.weyl_mul(alternating(alg, i, n), omega_power(alg, int(n)))));
          auto xn = i == 0 ? LaurentNodal::x1(f, n) : LaurentNodal::x2(f, n);
          c.checked += 2;
          if (!(pw == rhs)) fail(c.name, "(e1 T_{s" + std::to_string(i) + " omega})^" + std::to_string(n));
          if (!(map.apply(alg, pw) == Mat2::of(xn, zero, zero, zero)))
            fail(c.name, "image of (e1 T_{s" + std::to_string(i) + " omega})^" + std::to_string(n));
        }
      }
    } else {
      // Non-regular: the four basis families, with Z = 1 for PGL2.
      const bool pgl = alg.kind() == GroupKind::PGL2;
      auto Z = pgl ? cst(f, 1) : LaurentNodal::z(f);
      auto X = [&](int n) { return n == 0 ? cst(f, 1) : LaurentNodal::x1(f, std::size_t(n)); };
      ExtWeylElt ws0 = alg.weyl_mul(alg.omega(1), alg.s(0)), s0w = alg.weyl_mul(alg.s(0), alg.omega(1));
      ExtWeylElt p1 = alg.identity(), p2 = alg.identity();
      for (int n = 1; n <= int(max_len_); ++n) {
        ExtWeylElt fam3 = alg.weyl_mul(alg.s(0), p1), fam4 = alg.weyl_mul(alg.omega(1), p2);
        p1 = alg.weyl_mul(p1, ws0);
        p2 = alg.weyl_mul(p2, s0w);
        Mat2 e1 = Mat2::of(zero, (Z - X(2)) * X(n - 1), zero, X(n));
        Mat2 e2 = Mat2::of(zero, zero, X(n - 1), X(n));
        Mat2 e3 = Mat2::of(zero, zero, zero, -X(n - 1));
        Mat2 e4 = Mat2::of(X(n) - (n >= 2 ? Z * X(n - 2) : zero), X(n + 1) - Z * X(n - 1), -X(n - 1), -X(n));
        const std::pair<ExtWeylElt, Mat2> cases[] = {{p1, e1}, {p2, e2}, {fam3, e3}, {fam4, e4}};
        for (const auto& [w, expect] : cases) {
          ++c.checked;
          if (!(map.image(alg, w) == expect)) fail(c.name, "T[" + alg.to_string(w) + "]");
        }
      }
      HeckeElt ts0 = alg.basis(alg.s(0));
      c.checked += 2;
      if (!(map.apply(alg, ts0.plus(alg.one())) == Mat2::unit(f, 0, 0))) fail(c.name, "T_s0 + 1");
      if (!(map.apply(alg, ts0.scaled(f->from_int(-1))) == Mat2::unit(f, 1, 1))) fail(c.name, "-T_s0");
    }
    report.checks.push_back(c);
  }

  // (d) shape of basis images.
  if (alg.kind() == GroupKind::SL2) {
    CheckResult c{"parity pattern", true, 0, ""};
    for (const auto& w : sample_) {
      ++c.checked;
      if (!parity_pattern(rep.image(w), int(w.length()))) fail(c.name, "T[" + alg.to_string(w) + "]");
    }
    report.checks.push_back(c);
  } else if (map.orbit.regular) {
    // e_1 T_{omega^k w} sits in the (1,1) slot iff l(w) = k mod 2, else in the (1,2) slot.
    CheckResult c{"block shape", true, 0, ""};
    Mat2 e1 = Mat2::unit(f, 0, 0);
    for (const auto& w : sample_) {
      ++c.checked;
      Mat2 img = e1 * rep.image(w);
      int slot = (int(w.length()) - w.omega) % 2 == 0 ? 0 : 1;
      if (img.e[0][slot].is_zero() || !img.e[0][1 - slot].is_zero() || !img.e[1][0].is_zero() ||
          !img.e[1][1].is_zero())
        fail(c.name, "e1 T[" + alg.to_string(w) + "]");
    }
    report.checks.push_back(c);
  }

  // Scalar images of the centre generators.
  {
    CheckResult c{"centre", true, 0, ""};
    for (const auto& ce : center_elements(alg, map.orbit)) {
      ++c.checked;
      if (!ce.central || !(ce.image == ce.expected)) fail(c.name, ce.name);
    }
    report.checks.push_back(c);
  }
  return report;
}

Report verify_model(const HeckeAlgebra& alg, const ModelMap& map, std::size_t max_len) {
  return ModelVerifier(alg, max_len).verify(map);
}

std::vector<CenterElement> center_elements(const HeckeAlgebra& alg, const CharOrbit& gamma) {
  ModelMap map = build_model(alg, gamma);
  const auto* f = &alg.field();
  std::vector<CenterElement> out;
  auto add = [&](const std::string& name, const HeckeElt& x, const LaurentNodal& scalar) {
    CenterElement ce;
    ce.name = name;
    ce.element = x;
    ce.expected = Mat2::scalar(scalar);
    ce.image = map.apply(alg, x);
    ce.central = alg.is_central(x);
    out.push_back(std::move(ce));
  };
  auto X1 = LaurentNodal::x1(f), X2 = LaurentNodal::x2(f);

  if (alg.kind() == GroupKind::SL2) {
    HeckeElt t01 = alg.basis(alg.word({0, 1})), t10 = alg.basis(alg.word({1, 0}));
    if (gamma.regular) {
      HeckeElt e1 = alg.idempotent(map.torus_chars[0]), e2 = alg.idempotent(map.torus_chars[1]);
      add("e1 T0T1 + e2 T1T0", alg.mul(e1, t01).plus(alg.mul(e2, t10)), LaurentNodal::x1(f, 2));
      add("e2 T0T1 + e1 T1T0", alg.mul(e2, t01).plus(alg.mul(e1, t10)), LaurentNodal::x2(f, 2));
    } else {
      HeckeElt e = alg.orbit_idempotent(gamma);
      add("e(T0T1 + T1T0)", alg.mul(e, t01.plus(t10)), LaurentNodal::x1(f, 2) + LaurentNodal::x2(f, 2));
    }
    return out;
  }

  const bool gl = alg.kind() == GroupKind::GL2;
  HeckeElt eg = alg.orbit_idempotent(gamma);
  if (gamma.regular) {
    HeckeElt e1 = alg.idempotent(map.torus_chars[0]), e2 = alg.idempotent(map.torus_chars[1]);
    HeckeElt s0w = alg.basis(alg.weyl_mul(alg.s(0), alg.omega(1)));
    HeckeElt s1w = alg.basis(alg.weyl_mul(alg.s(1), alg.omega(1)));
    add("e1 T_{s0 omega} + e2 T_{s1 omega}", alg.mul(e1, s0w).plus(alg.mul(e2, s1w)), X1);
    add("e1 T_{s1 omega} + e2 T_{s0 omega}", alg.mul(e1, s1w).plus(alg.mul(e2, s0w)), X2);
  } else {
    HeckeElt tw = alg.basis(alg.omega(1));
    HeckeElt ts0 = alg.basis(alg.s(0));
    HeckeElt x = alg.mul(alg.mul(eg, ts0.plus(alg.one())), tw)
                     .plus(alg.mul(eg, alg.basis(alg.weyl_mul(alg.omega(1), alg.s(0)))));
    add("e(T_s0 + 1)T_omega + e T_{omega s0}", x, X1);
  }
  if (gl) {
    add("e T_{omega^2}", alg.mul(eg, alg.basis(alg.omega(2))), LaurentNodal::z(f));
    add("e T_{omega^-2}", alg.mul(eg, alg.basis(alg.omega(-2))), LaurentNodal::z(f, -1));
  }
  return out;
}

Matrix SphericalModule::specialize(const HeckeAlgebra& alg, const ExtWeylElt& w, const FieldElt& a1,
                                   const FieldElt& a2, const FieldElt& z) const {
  if (!(a1 * a2).is_zero()) throw Error(ErrorKind::InvalidArgument, "the point must satisfy X1 X2 = 0");
  return evaluate(model.image(alg, w), a1, a2, z);
}

Matrix SphericalModule::specialize(const HeckeAlgebra& alg, const HeckeElt& x, const FieldElt& a1,
                                   const FieldElt& a2, const FieldElt& z) const {
  if (!(a1 * a2).is_zero()) throw Error(ErrorKind::InvalidArgument, "the point must satisfy X1 X2 = 0");
  return evaluate(model.apply(alg, x), a1, a2, z);
}

SphericalModule build_spherical(const HeckeAlgebra& alg, const CharOrbit& gamma) {
  return SphericalModule{build_model(alg, gamma)};
}

std::vector<std::array<LaurentNodal, 2>> GPSphericalModule::degree_basis(int d) const {
  std::vector<std::array<LaurentNodal, 2>> out;
  if (d <= 0) return out;
  const auto* f = ambient.model.field;
  for (int slot : {0, 1})
    for (int b : {1, 2}) {
      std::array<LaurentNodal, 2> v{LaurentNodal(f), LaurentNodal(f)};
      v[slot] = b == 1 ? LaurentNodal::x1(f, d) : LaurentNodal::x2(f, d);
      out.push_back(v);
    }
  return out;
}

bool GPSphericalModule::contains(const std::array<LaurentNodal, 2>& v) const {
  for (const auto& x : v)
    for (const auto& [z, p] : x.terms())
      if (!p.constant_term().is_zero()) return false;
  return true;
}

GPSphericalModule build_gp_spherical(const HeckeAlgebra& alg, const CharOrbit& gamma) {
  return GPSphericalModule{build_spherical(alg, gamma)};
}

FreenessReport freeness_report(const HeckeAlgebra& sl2, const CharOrbit& gamma, int max_degree) {
  if (sl2.kind() != GroupKind::SL2) throw Error(ErrorKind::UnsupportedKind, "freeness_check is for SL2 blocks");
  ModelMap map = build_model(sl2, gamma);
  const auto* f = map.field;
  const Mat2 J = Mat2::of(zero_b(f), cst(f, 1), cst(f, 1), zero_b(f));
  const Mat2 E[2] = {Mat2::unit(f, 0, 0), Mat2::unit(f, 1, 1)};
  FreenessReport rep;
  for (int d = 0; d <= max_degree; ++d) {
    std::vector<ExtWeylElt> words;
    if (d == 0)
      words.push_back(sl2.identity());
    else
      for (int first : {0, 1}) words.push_back(alternating(sl2, first, std::size_t(d)));
    std::vector<Mat2> pattern, twisted, right;
    for (const auto& w : words) {
      Mat2 img = map.image(sl2, w);
      for (const auto& e : E) {
        pattern.push_back(e * img);
        twisted.push_back(e * img * J);
        right.push_back(img * e);
      }
    }
    FreenessSlice s;
    s.degree = d;
    s.slice_dim = d == 0 ? 4 : 8;
    s.pattern_dim = rank_of(f, pattern);
    s.twisted_dim = rank_of(f, twisted);
    std::vector<Mat2> all = pattern;
    all.insert(all.end(), twisted.begin(), twisted.end());
    s.union_rank = rank_of(f, all);
    bool ok = s.pattern_dim + s.twisted_dim == s.slice_dim && s.union_rank == s.slice_dim;
    // The sign block acts without its idempotents: the two idempotent translates must stay free.
    if (!gamma.regular) ok = ok && rank_of(f, right) == right.size();
    rep.passed = rep.passed && ok;
    rep.slices.push_back(s);
  }
  return rep;
}

bool freeness_check(const HeckeAlgebra& sl2, const CharOrbit& gamma, int max_degree) {
  return freeness_report(sl2, gamma, max_degree).passed;
}

nlohmann::json ResolutionReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed;
  j["counit_surjective"] = counit_surjective;
  for (const auto& d : degrees)
    j["degrees"].push_back({{"degree", d.degree},
                            {"left", d.left_dim},
                            {"middle", d.mid_dim},
                            {"target", d.target_dim},
                            {"image", d.image_dim},
                            {"kernel", d.kernel_dim},
                            {"exact", d.exact}});
  return j;
}

namespace {

// Degree-d slice of M2(A): basis E_ij * mono, mono in {1} (d = 0) or {X1^d, X2^d}.
struct Slice {
  const gf::FieldCtx* f;
  int d;
  std::size_t monos() const { return d == 0 ? 1 : 2; }
  std::size_t dim() const { return 4 * monos(); }
  Mat2 basis(std::size_t idx) const {
    std::size_t entry = idx / monos(), mono = idx % monos();
    Mat2 m = Mat2::zero(f);
    m.e[entry / 2][entry % 2] =
        d == 0 ? cst(f, 1) : (mono == 0 ? LaurentNodal::x1(f, d) : LaurentNodal::x2(f, d));
    return m;
  }
  // Coordinates of the degree-d part of a Z-free matrix.
  std::vector<FieldElt> coords(const Mat2& m) const {
    std::vector<FieldElt> out(dim(), f->zero());
    for (std::size_t entry = 0; entry < 4; ++entry) {
      NodalPoly p = m.e[entry / 2][entry % 2].z_coeff(0);
      for (std::size_t mono = 0; mono < monos(); ++mono)
        out[entry * monos() + mono] = d == 0 ? p.constant_term() : p.coeff(int(mono) + 1, std::size_t(d));
    }
    return out;
  }
};

// Column vector of sum_b coeff_b * (basis_b tensor v) in H_d (x) M.
Matrix tensor(const Slice& s, const std::vector<FieldElt>& h, const Matrix& v) {
  std::size_t dm = v.rows();
  Matrix out(s.f, s.dim() * dm, 1);
  for (std::size_t b = 0; b < h.size(); ++b) {
    if (h[b].is_zero()) continue;
    for (std::size_t k = 0; k < dm; ++k) out.set(b * dm + k, 0, out.at(b * dm + k, 0) + h[b] * v.at(k, 0));
  }
  return out;
}

Matrix hstack_all(const gf::FieldCtx* f, std::size_t rows, const std::vector<Matrix>& cols) {
  Matrix out(f, rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows; ++r) out.set(r, c, cols[c].at(r, 0));
  return out;
}

}  // namespace

ResolutionReport os_resolution_check(const HeckeAlgebra& gl2, const CharOrbit& gamma,
                                     const hecke::SupersingModule& mod, const FieldElt& lambda, int max_degree) {
  if (gl2.kind() != GroupKind::GL2) throw Error(ErrorKind::UnsupportedKind, "the resolution check is for GL2");
  if (!gamma.regular) throw Error(ErrorKind::WrongRegularity, "the resolution check needs a regular block");
  if (max_degree < 2) throw Error(ErrorKind::TruncationTooSmall, "need truncation degree >= 2");
  if (lambda.is_zero()) throw Error(ErrorKind::ZeroLambda, "lambda must be nonzero");
  const auto* f = &gl2.field();
  ResolutionReport report;
  const std::size_t dm = mod.dim;
  if (dm == 0) {
    for (int d = 0; d < max_degree; ++d) report.degrees.push_back({d, 0, 0, 0, 0, 0, true});
    return report;
  }

  ModelMap map = build_model(gl2, gamma);
  const Mat2 E11 = Mat2::unit(f, 0, 0), E22 = Mat2::unit(f, 1, 1);
  const Mat2 Tw = specialize_z(map.gens.at("omega"), lambda);
  const Mat2 Ts = specialize_z(map.gens.at("s0"), lambda);

  const Matrix mE11 = mod.act(gl2, gl2.idempotent(map.torus_chars[0]));
  const Matrix mE22 = mod.act(gl2, gl2.idempotent(map.torus_chars[1]));
  const Matrix mTw = mod.act(gl2, gl2.omega(1)), mTwi = mod.act(gl2, gl2.omega(-1));
  if (!mod.act(gl2, gl2.s(0)).is_zero() || !mod.act(gl2, gl2.s(1)).is_zero())
    throw Error(ErrorKind::InvalidArgument, "the module must be killed by T_s0 and T_s1");
  if (mTw * mTw != Matrix::identity(f, dm).scaled(lambda))
    throw Error(ErrorKind::InvalidArgument, "T_omega^2 must act by lambda");
  // Degree-0 matrix units acting on M.
  Matrix unit_action[4] = {mE11, mTw * mE22 * Matrix::identity(f, dm).scaled(lambda.inv()), mTw * mE11, mE22};

  auto basis_vec = [&](std::size_t k) {
    Matrix v(f, dm, 1);
    v.set(k, 0, f->one());
    return v;
  };

  for (int d = 0; d < max_degree; ++d) {
    Slice s{f, d};
    const std::size_t U = s.dim() * dm;
    std::vector<Matrix> mid_rel, left_rel, delta_cols, delta_left;
    for (std::size_t b = 0; b < s.dim(); ++b) {
      Mat2 h = s.basis(b);
      for (std::size_t k = 0; k < dm; ++k) {
        Matrix v = basis_vec(k);
        std::vector<FieldElt> hb = s.coords(h);
        // Idempotents are shared by both tensor products.
        for (const auto& [E, mE] : {std::pair{E11, mE11}, std::pair{E22, mE22}}) {
          Matrix r = tensor(s, s.coords(h * E), v) - tensor(s, hb, mE * v);
          mid_rel.push_back(r);
          left_rel.push_back(r);
        }
        // T_omega acts on the sign twist by -T_omega.
        left_rel.push_back(tensor(s, s.coords(h * Tw), v) + tensor(s, hb, mTw * v));
        delta_cols.push_back(tensor(s, s.coords(h * Tw), mTwi * v) - tensor(s, hb, v));
      }
    }
    if (d >= 1) {
      Slice lower{f, d - 1};
      for (std::size_t b = 0; b < lower.dim(); ++b)
        for (std::size_t k = 0; k < dm; ++k) mid_rel.push_back(tensor(s, s.coords(lower.basis(b) * Ts), basis_vec(k)));
    }
    Matrix R = hstack_all(f, U, mid_rel), L = hstack_all(f, U, left_rel), D = hstack_all(f, U, delta_cols);
    // Images of the left relations under delta, expanded in the basis of H_d (x) M.
    Matrix deltaL = D * L;
    std::size_t rR = la::rank(R), rL = la::rank(L);
    ResolutionDegree rd;
    rd.degree = d;
    rd.left_dim = U - rL;
    rd.mid_dim = U - rR;
    rd.target_dim = d == 0 ? dm : 0;
    bool well_defined = la::rank(R.hstack(deltaL)) == rR;
    rd.image_dim = la::rank(R.hstack(D)) - rR;

    // Counit h (x) m -> h.m, nonzero only in degree 0.
    Matrix eps(f, dm, U);
    if (d == 0)
      for (std::size_t b = 0; b < s.dim(); ++b)
        for (std::size_t k = 0; k < dm; ++k) {
          Matrix col = unit_action[b] * basis_vec(k);
          for (std::size_t r = 0; r < dm; ++r) eps.set(r, b * dm + k, col.at(r, 0));
        }
    bool eps_defined = (eps * R).is_zero();
    std::size_t eps_rank = la::rank(eps);
    rd.kernel_dim = rd.mid_dim - eps_rank;
    bool composite_zero = (eps * D).is_zero();
    rd.exact = well_defined && eps_defined && composite_zero && rd.image_dim == rd.left_dim &&
               rd.image_dim == rd.kernel_dim && eps_rank == rd.target_dim;
    if (d == 0) report.counit_surjective = eps_rank == dm;
    report.passed = report.passed && rd.exact;
    report.degrees.push_back(rd);
  }
  report.passed = report.passed && report.counit_surjective;
  return report;
}

TildeZ tilde_z(const HeckeAlgebra& sl2) {
  if (sl2.kind() != GroupKind::SL2) throw Error(ErrorKind::UnsupportedKind, "the ring Z~ is defined for SL2");
  TildeZ z;
  for (const auto& g : sl2.torus().orbits()) z.components.push_back({g, has_model(sl2, g) ? "A" : "k[X]"});
  return z;
}

NodalPoly tilde_z_image(const HeckeAlgebra& sl2, const CharOrbit& gamma, const HeckeElt& central) {
  ModelMap map = build_model(sl2, gamma);
  Mat2 img = map.apply(sl2, central);
  if (!img.is_scalar() || !img.e[0][0].is_z_free())
    throw Error(ErrorKind::VerificationFailure, "element does not map to an A-scalar matrix");
  return img.e[0][0].z_coeff(0).halve_degrees();
}

}  // namespace prohecke::models
