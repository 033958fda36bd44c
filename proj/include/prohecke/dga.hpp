#pragma once

#include <array>
#include <map>
#include <random>
#include <vector>

#include "json.hpp"
#include "prohecke/hecke.hpp"

// The endomorphism DGA of the 2-periodic complete resolution P = P1 + P1[1] over S = R[Z^+-1],
// restricted to finite windows of indices.
namespace prohecke::dga {

using gf::FieldCtx;
using gf::FieldElt;

// Laurent polynomial in Z. No zero coefficients are stored.
class Laurent {
 public:
  Laurent() = default;
  explicit Laurent(const FieldCtx* f) : field_(f) {}
  static Laurent constant(const FieldCtx* f, const FieldElt& c);
  static Laurent monomial(const FieldCtx* f, const FieldElt& c, int exp);

  const FieldCtx* field() const { return field_; }
  const std::map<int, FieldElt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  FieldElt coeff(int exp) const;
  FieldElt eval(const FieldElt& z) const;

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator*(const Laurent& o) const;
  Laurent scaled(const FieldElt& c) const;
  bool operator==(const Laurent& o) const { return terms_ == o.terms_; }
  nlohmann::json to_json() const;

 private:
  void add_term(int exp, const FieldElt& c);
  const FieldCtx* field_ = nullptr;
  std::map<int, FieldElt> terms_;
};

// Entries on the source indices lo..hi. tau marks maps of the form (Laurent) * tau.
struct WindowSeq {
  int lo = 0, hi = -1;
  bool tau = false;
  std::vector<Laurent> entries;

  const Laurent& at(int l) const { return entries.at(static_cast<std::size_t>(l - lo)); }
  Laurent& at(int l) { return entries.at(static_cast<std::size_t>(l - lo)); }
  bool is_zero() const;
};

// A degree-n endomorphism. blocks[r][c] maps P_c to P_r: its entry at l is the component
// P_{c,l} -> P_{r,l+n}. P_0 = P1 and P_1 = P1[1], whose differential is -T.
struct WindowHomElt {
  const FieldCtx* field = nullptr;
  int degree = 0;
  std::array<std::array<WindowSeq, 2>, 2> blocks;

  int lo() const { return blocks[0][0].lo; }
  int hi() const { return blocks[0][0].hi; }
  static WindowHomElt zero(const FieldCtx* f, int degree, int lo, int hi);
  // Whether block (r, c) carries tau in degree n.
  static bool tau_block(int degree, int r, int c) { return ((degree + (r != c ? 1 : 0)) % 2 + 2) % 2 == 1; }

  WindowHomElt restrict_to(int lo, int hi) const;
  WindowHomElt operator+(const WindowHomElt& o) const;
  WindowHomElt operator-(const WindowHomElt& o) const;
  WindowHomElt scaled(const FieldElt& c) const;
  bool is_zero() const;
  bool operator==(const WindowHomElt& o) const;
  // Throws WindowMismatch or InvalidArgument.
  void check() const;
  nlohmann::json to_json() const;
};

// Unit: degree 0, constant 1 on the diagonal.
WindowHomElt identity(const FieldCtx* f, int lo, int hi);
// Constant sequence 1 in block (r, c) of degree n, the cocycle representing iota_n there.
WindowHomElt iota(const FieldCtx* f, int degree, int r, int c, int lo, int hi);
// Random element with Laurent entries of Z-degree in [-zdeg, zdeg].
WindowHomElt random_elt(const FieldCtx* f, int degree, int lo, int hi, std::mt19937& rng, int zdeg = 1);

// Output on [lo, hi-1]. Throws WindowTooSmall below two indices.
WindowHomElt dga_d(const WindowHomElt& x);
// Composition x o y; output window is where both are defined. Throws WindowMismatch when empty.
WindowHomElt dga_mul(const WindowHomElt& x, const WindowHomElt& y);

// Whether x = d(w) for some w on [lo, hi+1].
bool is_coboundary(const WindowHomElt& x);

struct CohomologyReport {
  int degree = 0;
  int window = 0;
  std::array<std::array<std::size_t, 2>, 2> block_ranks{};
  WindowHomElt representative;
  std::vector<FieldElt> z_samples;
  nlohmann::json to_json() const;
};
// Degree-n cochains on [-L, L-1], with d_(n-1) from [-L, L] and d_n into [-L, L-2].
// Ranks are taken at each sampled value of Z and must agree. Throws WindowTooSmall when L < |n| + 2.
CohomologyReport dga_cohomology(const FieldCtx* f, int degree, int window);

// iota_m iota_n = iota_(m+n) slot by slot, i.e. products of classes follow (R_e R_o; R_o R_e).
struct RingCheck {
  std::size_t products = 0;
  bool ok = true;
  std::string first_failure;
};
RingCheck cohomology_ring_check(const FieldCtx* f, int max_degree, int window);

struct Degree0Report {
  std::size_t factors = 0;
  bool homomorphism = false;  // the block's structure constants hold on the images
  bool central = false;       // e_gamma T_omega^2 commutes with the block basis in H
  bool local = false;         // products across different indices vanish
  bool bijective = false;     // images of (basis x Z^k) give a basis of the degree-0 window
  bool ok() const { return homomorphism && central && local && bijective; }
  std::string first_failure;
  nlohmann::json to_json() const;
};
// Factor-wise dictionary e1, e2, e_gamma T_s0, e_gamma T_omega^2 -> E11, E22, (0 tau; tau 0), Z Id,
// checked against products computed in the Hecke algebra. GL2 and a regular orbit.
Degree0Report degree0_check(const hecke::HeckeAlgebra& alg, const torus::CharOrbit& gamma, int window);

}  // namespace prohecke::dga
