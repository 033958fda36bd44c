#include "prohecke/scheme.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "prohecke/error.hpp"

namespace prohecke::scheme {

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

// Pieces of the SL2 even and odd chains: indices 0..floor((q-1)/4) and 1..ceil((q-1)/4).
int sl2_even_last(std::uint32_t q) { return static_cast<int>((q - 1) / 4); }
int sl2_odd_last(std::uint32_t q) { return static_cast<int>((q - 1 + 3) / 4); }

ChainPoint make_point(int comp, std::size_t seg, ProjCoord c, std::optional<FieldElt> gm) {
  ChainPoint p;
  p.component = comp;
  p.segment = seg;
  p.coord = c;
  p.gm = gm;
  return p.canonical();
}

}  // namespace

const ChainComponent& ChainScheme::component(int label) const {
  for (const auto& c : components)
    if (c.label == label) return c;
  throw Error(ErrorKind::InvalidArgument, "no component labelled " + std::to_string(label));
}

std::size_t ChainScheme::node_count() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.node_count();
  return n;
}

nlohmann::json ChainScheme::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components)
    comps.push_back({{"label", c.label}, {"chain_length", c.length}, {"has_gm", c.has_gm}});
  return {{"kind", prohecke::to_string(kind)}, {"q", q}, {"components", comps}, {"node_count", node_count()}};
}

ChainScheme build_scheme(GroupKind kind, std::uint32_t q) {
  auto [p, e] = split_prime_power(q);
  (void)e;
  if (p == 2) throw Error(ErrorKind::EvenCharacteristic, "chains of projective lines need p > 2");
  ChainScheme s;
  s.kind = kind;
  s.q = q;
  switch (kind) {
    case GroupKind::GL2:
      for (std::uint32_t n = 0; n + 1 < q; ++n)
        s.components.push_back({static_cast<int>(n), n % 2 == 0 ? (q - 1) / 2 : (q + 1) / 2, true});
      break;
    case GroupKind::PGL2:
      s.components.push_back({0, (q - 1) / 2, false});
      break;
    case GroupKind::SL2:
      s.components.push_back({0, (q + 3) / 4, false});
      s.components.push_back({1, (q + 3 + 3) / 4, false});
      break;
  }
  return s;
}

ProjCoord phi(const FieldElt& t) {
  if (t.is_zero()) return ProjCoord::infinity();
  return ProjCoord::affine(t + t.inv());
}

ProjCoord phi_prime(const FieldElt& t) {
  if (t.is_zero()) return ProjCoord::affine(t);
  FieldElt w = t + t.inv();
  if (w.is_zero()) return ProjCoord::infinity();
  return ProjCoord::affine(w.inv());
}

ChainPoint ChainPoint::canonical() const {
  ChainPoint c = *this;
  if (!coord.at_infinity && coord.value.is_zero() && segment > 0) {
    c.segment = segment - 1;
    c.coord = ProjCoord::infinity();
  }
  return c;
}

bool ChainPoint::is_node(const ChainScheme& s) const {
  ChainPoint c = canonical();
  return c.coord.at_infinity && c.segment + 1 < s.component(component).length;
}

bool ChainPoint::operator==(const ChainPoint& o) const {
  ChainPoint a = canonical(), b = o.canonical();
  return a.component == b.component && a.segment == b.segment && a.coord == b.coord && a.gm == b.gm;
}

bool ChainPoint::operator<(const ChainPoint& o) const {
  ChainPoint a = canonical(), b = o.canonical();
  auto key = [](const ChainPoint& p) {
    return std::make_tuple(p.component, p.segment, p.coord.at_infinity,
                           p.coord.at_infinity ? 0u : p.coord.value.code(), p.gm.has_value(),
                           p.gm ? p.gm->code() : 0u);
  };
  return key(a) < key(b);
}

nlohmann::json ChainPoint::to_json() const {
  ChainPoint c = canonical();
  nlohmann::json j;
  j["component"] = c.component;
  j["segment"] = c.segment;
  if (c.coord.at_infinity)
    j["coord"] = "inf";
  else
    j["coord"] = c.coord.value.code();
  if (c.gm)
    j["gm"] = c.gm->code();
  else
    j["gm"] = nullptr;
  return j;
}

std::string ChainPoint::to_string() const {
  ChainPoint c = canonical();
  std::ostringstream os;
  os << "X" << c.component << ":C" << c.segment << "[" << (c.coord.at_infinity ? "inf" : c.coord.value.to_string())
     << "]";
  if (c.gm) os << "*z=" << c.gm->to_string();
  return os.str();
}

OrbitSlot orbit_slot(const ChainScheme& s, const CharOrbit& gamma) {
  const int m = static_cast<int>(s.q) - 1;
  const int half = m / 2;
  OrbitSlot slot;
  bool found = false;
  // Pick the member whose index lands in the allowed window.
  auto try_member = [&](const TorusChar& xi, int i, int lo, int hi) {
    if (found || i < lo || i > hi) return;
    slot.index = i;
    slot.representative = xi;
    found = true;
  };
  switch (s.kind) {
    case GroupKind::GL2:
    case GroupKind::PGL2: {
      int n = s.kind == GroupKind::GL2 ? mod(gamma.members.front().j + gamma.members.front().l, m) : 0;
      slot.component = n;
      if (n % 2 == 0) {
        // xi_i(diag(zeta, 1)) = zeta^(s + i), n = 2s.
        int sh = n / 2;
        for (const auto& xi : gamma.members) try_member(xi, mod(xi.j - sh, m), 0, half);
        if (!found) break;
        slot.shape = slot.index == 0 ? PieceShape::LineStart
                     : slot.index == half ? PieceShape::LineEnd
                                          : PieceShape::Middle;
      } else {
        // xi_i(diag(zeta, 1)) = -zeta^(s + i - 1), n = 2s - 1.
        int sh = (n + 1) / 2;
        for (const auto& xi : gamma.members) try_member(xi, mod(xi.j - sh + 1 - half, m), 1, half);
        if (!found) break;
        slot.shape = half == 1              ? PieceShape::PhiBoth
                     : slot.index == 1    ? PieceShape::PhiStart
                     : slot.index == half ? PieceShape::PhiEnd
                                          : PieceShape::Middle;
      }
      break;
    }
    case GroupKind::SL2: {
      for (const auto& xi : gamma.members) {
        int n = mod(xi.j, m);
        if (n % 2 == 0)
          try_member(xi, n / 2, 0, sl2_even_last(s.q));
        else
          try_member(xi, (n + 1) / 2, 1, sl2_odd_last(s.q));
        if (found) slot.component = n % 2;
      }
      if (!found) break;
      int last = slot.component == 0 ? sl2_even_last(s.q) : sl2_odd_last(s.q);
      if (slot.component == 0)
        slot.shape = slot.index == 0 ? PieceShape::LineStart : slot.index == last ? PieceShape::PhiEnd
                                                                                  : PieceShape::Middle;
      else
        slot.shape = last == 1               ? PieceShape::PhiBoth
                     : slot.index == 1    ? PieceShape::PhiStart
                     : slot.index == last ? PieceShape::PhiEnd
                                          : PieceShape::Middle;
      break;
    }
  }
  if (!found) throw Error(ErrorKind::InvalidArgument, "orbit does not match any piece of the chain");
  return slot;
}

ChainPoint L_map(const ChainScheme& s, const SpecZPoint& pt) {
  if (!(pt.x1 * pt.x2).is_zero()) throw Error(ErrorKind::InvalidArgument, "x1 x2 must vanish");
  std::optional<FieldElt> gm;
  if (s.kind == GroupKind::GL2) {
    if (!pt.z || pt.z->is_zero()) throw Error(ErrorKind::InvalidArgument, "GL2 points need a nonzero z");
    gm = pt.z;
  } else if (pt.z && !(s.kind == GroupKind::PGL2 && pt.z->is_one())) {
    throw Error(ErrorKind::InvalidArgument, "z is fixed to 1 for PGL2 and absent for SL2");
  }
  OrbitSlot slot = orbit_slot(s, pt.orbit);
  const std::size_t len = s.component(slot.component).length;
  const std::size_t i = static_cast<std::size_t>(slot.index);
  const int c = slot.component;
  const FieldElt& x1 = pt.x1;
  const FieldElt& x2 = pt.x2;
  auto inv_or_inf = [](const FieldElt& x) { return x.is_zero() ? ProjCoord::infinity() : ProjCoord::affine(x.inv()); };
  switch (slot.shape) {
    case PieceShape::LineStart:
    case PieceShape::LineEnd:
      if (!x2.is_zero()) throw Error(ErrorKind::UnsupportedKind, "point off the single line of a non-regular piece");
      if (slot.shape == PieceShape::LineStart) return make_point(c, 0, ProjCoord::affine(x1), gm);
      return make_point(c, len - 1, inv_or_inf(x1), gm);
    case PieceShape::Middle:
      if (!x1.is_zero()) return make_point(c, i - 1, inv_or_inf(x1), gm);
      return make_point(c, i, ProjCoord::affine(x2), gm);
    case PieceShape::PhiStart:
      if (!x1.is_zero()) return make_point(c, 0, phi(x1), gm);
      return make_point(c, 1, ProjCoord::affine(x2), gm);
    case PieceShape::PhiEnd:
      if (!x1.is_zero()) return make_point(c, i - 1, inv_or_inf(x1), gm);
      return make_point(c, i, phi_prime(x2), gm);
    case PieceShape::PhiBoth:
      if (!x1.is_zero()) return make_point(c, 0, phi(x1), gm);
      return make_point(c, 1, phi_prime(x2), gm);
  }
  return {};
}

std::vector<ChainPoint> singular_points(const ChainScheme& s, const std::optional<FieldElt>& gm) {
  std::vector<ChainPoint> out;
  for (const auto& c : s.components)
    for (std::size_t i = 0; i + 1 < c.length; ++i)
      out.push_back(make_point(c.label, i, ProjCoord::infinity(), c.has_gm ? gm : std::nullopt));
  return out;
}

ChainPoint langlands_parameter(const hecke::HeckeAlgebra& alg, const hecke::SupersingModule& m) {
  if (m.kind == GroupKind::SL2) return langlands_parameter(alg, m.chi);
  if (m.chi.finite_pd || !m.orbit)
    throw Error(ErrorKind::FinitePDModule, "supersingular module of finite projective dimension");
  ChainScheme s = build_scheme(alg.kind(), alg.q());
  SpecZPoint pt;
  pt.orbit = *m.orbit;
  pt.x1 = pt.x2 = alg.field().zero();
  if (alg.kind() == GroupKind::GL2) {
    // Central character: T_omega^2 must act by a scalar.
    la::Matrix om2 = m.act(alg, alg.omega(2));
    FieldElt z = om2.at(0, 0);
    if (!(om2 == la::Matrix::identity(&alg.field(), m.dim).scaled(z)))
      throw Error(ErrorKind::VerificationFailure, "T_omega^2 is not scalar on the module");
    pt.z = z;
  }
  return L_map(s, pt);
}

ChainPoint langlands_parameter(const hecke::HeckeAlgebra& alg, const hecke::SupersingChar& chi) {
  if (alg.kind() != GroupKind::SL2)
    throw Error(ErrorKind::UnsupportedKind, "supersingular characters index the SL2 case");
  if (chi.finite_pd) throw Error(ErrorKind::FinitePDModule, "supersingular character of finite projective dimension");
  ChainScheme s = build_scheme(alg.kind(), alg.q());
  SpecZPoint pt;
  pt.orbit = alg.torus().orbit_of(chi.restriction);
  pt.x1 = pt.x2 = alg.field().zero();
  return L_map(s, pt);
}

nlohmann::json CorrespondenceReport::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) rs.push_back({{"module", r.module}, {"point", r.point.to_json()}, {"fiber_id", r.fiber_id}});
  return {{"kind", prohecke::to_string(kind)},
          {"q", q},
          {"rows", rs},
          {"fibers", fibers},
          {"node_count", node_count},
          {"image_size", image_size},
          {"injective", injective},
          {"surjective", surjective},
          {"nodes_only", nodes_only},
          {"fibers_match_packets", fibers_match_packets}};
}

CorrespondenceReport correspondence_table(GroupKind kind, std::uint32_t q, const std::vector<FieldElt>& lambdas,
                                          const gf::FieldPtr& field) {
  ChainScheme s = build_scheme(kind, q);
  hecke::HeckeAlgebra alg(kind, q, field);
  CorrespondenceReport rep;
  rep.kind = kind;
  rep.q = q;

  std::vector<std::pair<std::string, ChainPoint>> pairs;
  std::set<ChainPoint> nodes;
  if (kind == GroupKind::SL2) {
    for (const auto& chi : hecke::enumerate_supersingular_chars(alg)) {
      if (chi.finite_pd) continue;
      pairs.push_back({"chi_" + std::to_string(chi.restriction.j), langlands_parameter(alg, chi)});
    }
    for (const auto& p : singular_points(s)) nodes.insert(p);
  } else {
    std::vector<FieldElt> lams = lambdas;
    if (kind == GroupKind::PGL2 || lams.empty()) lams = {field->one()};
    for (const auto& lam : lams) {
      for (const auto& g : alg.torus().orbits()) {
        if (!g.regular) continue;
        hecke::SupersingModule m = hecke::supersingular_module(alg, g, lam);
        const TorusChar& xi = g.members.front();
        std::string label = "M(" + std::to_string(xi.j) +
                            (kind == GroupKind::GL2 ? "," + std::to_string(xi.l) : std::string()) + ")";
        if (kind == GroupKind::GL2) label += "@" + lam.to_string();
        pairs.push_back({label, langlands_parameter(alg, m)});
      }
      for (const auto& p : singular_points(s, kind == GroupKind::GL2 ? std::optional<FieldElt>(lam) : std::nullopt))
        nodes.insert(p);
    }
  }

  std::map<ChainPoint, std::size_t> fiber_of;
  std::set<ChainPoint> image;
  for (const auto& [label, pt] : pairs) image.insert(pt);
  std::size_t id = 0;
  for (const auto& pt : image) fiber_of[pt] = id++;
  rep.fibers.assign(image.size(), {});
  rep.nodes_only = true;
  for (const auto& [label, pt] : pairs) {
    std::size_t f = fiber_of.at(pt);
    rep.rows.push_back({label, pt, f});
    rep.fibers[f].push_back(label);
    if (!pt.is_node(s)) rep.nodes_only = false;
  }
  rep.node_count = nodes.size();
  rep.image_size = image.size();
  rep.injective = image.size() == pairs.size();
  rep.surjective = image == nodes;

  if (kind == GroupKind::SL2) {
    // Expected packets {chi_(q-1)/2} and {chi_i, chi_(q-1-i)}.
    std::set<std::set<std::string>> expected, got;
    int m = static_cast<int>(q) - 1;
    expected.insert({"chi_" + std::to_string(m / 2)});
    for (int i = 1; i < m / 2; ++i) expected.insert({"chi_" + std::to_string(i), "chi_" + std::to_string(m - i)});
    for (const auto& f : rep.fibers) got.insert(std::set<std::string>(f.begin(), f.end()));
    rep.fibers_match_packets = got == expected;
  } else {
    rep.fibers_match_packets = rep.injective;
  }
  return rep;
}

}  // namespace prohecke::scheme
