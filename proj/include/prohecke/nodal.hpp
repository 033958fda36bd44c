#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "prohecke/gf.hpp"

// The node A = k[X1, X2]/(X1 X2) and its Laurent extension B = A[Z, Z^-1].
// k[X] and k[X, Z^+-1] are embedded through X -> X1.
namespace prohecke::nodal {

using gf::FieldElt;

class NodalPoly {
 public:
  NodalPoly() = default;
  explicit NodalPoly(const gf::FieldCtx* f) : f_(f) {}

  static NodalPoly constant(const gf::FieldCtx* f, const FieldElt& c);
  // c * X_branch^power, branch in {1, 2}; power 0 gives the constant c.
  static NodalPoly monomial(const gf::FieldCtx* f, int branch, std::size_t power, const FieldElt& c);
  static NodalPoly x1(const gf::FieldCtx* f, std::size_t power = 1);
  static NodalPoly x2(const gf::FieldCtx* f, std::size_t power = 1);

  const gf::FieldCtx* field() const { return f_; }
  FieldElt constant_term() const;
  // Coefficient of X_branch^power (power >= 1), or the constant for power 0.
  FieldElt coeff(int branch, std::size_t power) const;
  const std::vector<std::uint32_t>& tail(int branch) const { return branch == 1 ? t1_ : t2_; }
  bool is_zero() const { return c0_ == 0 && t1_.empty() && t2_.empty(); }
  // Highest power present, -1 for zero.
  int degree() const;
  // True when every monomial has total degree exactly d.
  bool is_homogeneous(int d) const;

  NodalPoly operator+(const NodalPoly& o) const;
  NodalPoly operator-(const NodalPoly& o) const;
  NodalPoly operator-() const;
  NodalPoly operator*(const NodalPoly& o) const;
  NodalPoly scaled(const FieldElt& c) const;
  bool operator==(const NodalPoly& o) const;

  // Point evaluation at (a1, a2); a ring map when a1 * a2 = 0.
  FieldElt eval(const FieldElt& a1, const FieldElt& a2) const;
  // Monomials of even (parity 0) or odd (parity 1) degree.
  NodalPoly parity_part(int parity) const;
  // X_i^(2m) -> X_i^m; requires an even element.
  NodalPoly halve_degrees() const;
  // Drop all monomials of degree > d.
  NodalPoly truncated(std::size_t d) const;

  std::string to_string() const;

 private:
  void trim();
  const gf::FieldCtx* f_ = nullptr;
  std::uint32_t c0_ = 0;
  std::vector<std::uint32_t> t1_, t2_;  // index i holds the coefficient of X^(i+1)
};

class LaurentNodal {
 public:
  LaurentNodal() = default;
  explicit LaurentNodal(const gf::FieldCtx* f) : f_(f) {}
  LaurentNodal(const NodalPoly& p, int z_power = 0);

  static LaurentNodal constant(const gf::FieldCtx* f, const FieldElt& c) { return {NodalPoly::constant(f, c)}; }
  static LaurentNodal z(const gf::FieldCtx* f, int power = 1);
  static LaurentNodal x1(const gf::FieldCtx* f, std::size_t power = 1) { return {NodalPoly::x1(f, power)}; }
  static LaurentNodal x2(const gf::FieldCtx* f, std::size_t power = 1) { return {NodalPoly::x2(f, power)}; }

  const gf::FieldCtx* field() const { return f_; }
  const std::map<int, NodalPoly>& terms() const { return terms_; }
  NodalPoly z_coeff(int power) const;
  bool is_zero() const { return terms_.empty(); }
  bool is_z_free() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

  LaurentNodal operator+(const LaurentNodal& o) const;
  LaurentNodal operator-(const LaurentNodal& o) const;
  LaurentNodal operator-() const;
  LaurentNodal operator*(const LaurentNodal& o) const;
  LaurentNodal scaled(const FieldElt& c) const;
  bool operator==(const LaurentNodal& o) const { return terms_ == o.terms_; }

  // Z -> lambda.
  NodalPoly specialize_z(const FieldElt& lambda) const;
  // Apply f to each Z-coefficient, dropping zeros.
  template <class F>
  LaurentNodal map_coeffs(F f) const {
    LaurentNodal r(f_);
    for (const auto& [k, c] : terms_) r.add(k, f(c));
    return r;
  }

  std::string to_string() const;

 private:
  void add(int power, const NodalPoly& p);
  const gf::FieldCtx* f_ = nullptr;
  std::map<int, NodalPoly> terms_;
};

// 2x2 matrices over B.
struct Mat2 {
  LaurentNodal e[2][2];

  static Mat2 zero(const gf::FieldCtx* f);
  static Mat2 identity(const gf::FieldCtx* f);
  static Mat2 unit(const gf::FieldCtx* f, int i, int j);
  static Mat2 scalar(const LaurentNodal& c);
  static Mat2 of(const LaurentNodal& a, const LaurentNodal& b, const LaurentNodal& c, const LaurentNodal& d);

  const gf::FieldCtx* field() const { return e[0][0].field(); }
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  Mat2 operator*(const Mat2& o) const;
  Mat2 scaled(const FieldElt& c) const;
  Mat2 times(const LaurentNodal& c) const;
  bool operator==(const Mat2& o) const;
  bool is_zero() const;
  bool is_scalar() const;
  Mat2 map_entries(const std::function<LaurentNodal(const LaurentNodal&)>& f) const;

  std::string to_string() const;
};

}  // namespace prohecke::nodal
