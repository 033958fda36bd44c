#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prohecke/gf.hpp"

namespace prohecke {

enum class GroupKind { GL2, SL2, PGL2 };

const char* to_string(GroupKind kind);
GroupKind parse_group_kind(const std::string& s);

// q = p^e; returns (p, e) or throws CompositeCharacteristic / InvalidArgument.
std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint32_t q);
// Ambient field F_{q^m}.
gf::FieldPtr make_field(std::uint32_t q, std::uint32_t ambient_degree = 1);

}  // namespace prohecke

namespace prohecke::torus {

using gf::FieldElt;

// GL2: diag(z^a, z^b). SL2: diag(z^a, z^-a), b = 0. PGL2: class of diag(z^a, 1), b = 0.
struct TorusElt {
  int a = 0;
  int b = 0;
  auto operator<=>(const TorusElt&) const = default;
};

// GL2: value z^(a j + b l) on diag(z^a, z^b). SL2/PGL2: single exponent j, l = 0.
struct TorusChar {
  int j = 0;
  int l = 0;
  auto operator<=>(const TorusChar&) const = default;
};

struct CharOrbit {
  std::vector<TorusChar> members;  // sorted; size 1 or 2
  bool regular = false;
  int n_label = 0;  // GL2: j + l mod q-1; SL2: parity of n; PGL2: 0
  bool operator==(const CharOrbit& o) const { return members == o.members; }
};

class Torus;

// Element of the group algebra k[T(F_q)]. No zero coefficients are stored.
class GroupAlgElt {
 public:
  GroupAlgElt() = default;
  explicit GroupAlgElt(const gf::FieldCtx* field) : field_(field) {}

  const std::map<TorusElt, FieldElt>& terms() const { return terms_; }
  void add_term(const TorusElt& t, const FieldElt& c);
  FieldElt coeff(const TorusElt& t) const;
  bool is_zero() const { return terms_.empty(); }

  GroupAlgElt plus(const GroupAlgElt& o) const;
  GroupAlgElt minus(const GroupAlgElt& o) const;
  GroupAlgElt times(const GroupAlgElt& o, const Torus& torus) const;
  bool operator==(const GroupAlgElt& o) const { return terms_ == o.terms_; }

 private:
  const gf::FieldCtx* field_ = nullptr;
  std::map<TorusElt, FieldElt> terms_;
};

class Torus {
 public:
  // field must contain F_q, i.e. q - 1 divides |field| - 1.
  Torus(GroupKind kind, std::uint32_t q, gf::FieldPtr field);

  GroupKind kind() const { return kind_; }
  std::uint32_t q() const { return q_; }
  int modulus() const { return static_cast<int>(q_) - 1; }
  const gf::FieldCtx& field() const { return *field_; }
  const gf::FieldPtr& field_ptr() const { return field_; }
  // Fixed generator of F_q^x inside the ambient field.
  FieldElt zeta() const { return zeta_; }
  FieldElt zeta_pow(std::int64_t k) const;

  int reduce(std::int64_t x) const;
  TorusElt make(std::int64_t a, std::int64_t b = 0) const;
  std::vector<TorusElt> elements() const;
  std::vector<TorusElt> generators() const;
  std::size_t order() const;
  TorusElt identity() const { return {}; }
  TorusElt mul(const TorusElt& x, const TorusElt& y) const;
  TorusElt inv(const TorusElt& x) const;
  TorusElt s0(const TorusElt& x) const;
  // alpha-check applied to zeta^c.
  TorusElt coroot(std::int64_t c) const;
  TorusElt coroot_minus_one() const;
  std::vector<TorusElt> coroot_image() const;  // alpha-check(F_q^x), sorted
  FieldElt mu_alpha() const;                   // |mu_alpha| as a scalar in k

  std::vector<TorusChar> characters() const;
  TorusChar make_char(std::int64_t j, std::int64_t l = 0) const;
  FieldElt value(const TorusChar& xi, const TorusElt& t) const;
  TorusChar s0_twist(const TorusChar& xi) const;
  bool is_regular(const TorusChar& xi) const { return s0_twist(xi) != xi; }
  bool trivial_on_coroot(const TorusChar& xi) const;
  int n_label(const TorusChar& xi) const;
  CharOrbit orbit_of(const TorusChar& xi) const;
  std::vector<CharOrbit> orbits() const;

  GroupAlgElt basis(const TorusElt& t) const;
  GroupAlgElt one() const { return basis(identity()); }
  GroupAlgElt idempotent(const TorusChar& xi) const;
  GroupAlgElt orbit_idempotent(const CharOrbit& gamma) const;

  std::string to_string(const TorusElt& t) const;
  std::string to_string(const TorusChar& xi) const;

 private:
  GroupKind kind_;
  std::uint32_t q_;
  gf::FieldPtr field_;
  FieldElt zeta_;
};

// SL2 character n lifted to the GL2 character with exponents (j, j - n), j = ceil(n / 2).
TorusChar lift_character(const Torus& sl2, const TorusChar& xi);
// Restriction of a GL2 character to the SL2 torus diag(z^a, z^-a).
TorusChar restrict_to_sl2(const Torus& gl2, const TorusChar& xi);

}  // namespace prohecke::torus
