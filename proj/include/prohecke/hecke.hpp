#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prohecke/linalg.hpp"
#include "prohecke/torus.hpp"

namespace prohecke::hecke {

using gf::FieldElt;
using torus::CharOrbit;
using torus::TorusChar;
using torus::TorusElt;

// Normal form omega^omega * s_{word[0]} s_{word[1]} ... * t, word alternating over {0, 1}.
struct ExtWeylElt {
  int omega = 0;
  std::vector<std::uint8_t> word;
  TorusElt t;

  std::size_t length() const { return word.size(); }
  bool operator==(const ExtWeylElt&) const = default;
  // Order: length, omega power, word, torus.
  bool operator<(const ExtWeylElt& o) const;
};

class HeckeElt {
 public:
  HeckeElt() = default;
  explicit HeckeElt(const gf::FieldCtx* field) : field_(field) {}

  const std::map<ExtWeylElt, FieldElt>& terms() const { return terms_; }
  const gf::FieldCtx* field() const { return field_; }
  void add_term(const ExtWeylElt& w, const FieldElt& c);
  FieldElt coeff(const ExtWeylElt& w) const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  HeckeElt plus(const HeckeElt& o) const;
  HeckeElt minus(const HeckeElt& o) const;
  HeckeElt scaled(const FieldElt& c) const;
  bool operator==(const HeckeElt& o) const { return terms_ == o.terms_; }

 private:
  const gf::FieldCtx* field_ = nullptr;
  std::map<ExtWeylElt, FieldElt> terms_;
};

class HeckeAlgebra {
 public:
  HeckeAlgebra(GroupKind kind, std::uint32_t q, gf::FieldPtr field);

  GroupKind kind() const { return torus_.kind(); }
  std::uint32_t q() const { return torus_.q(); }
  const torus::Torus& torus() const { return torus_; }
  const gf::FieldCtx& field() const { return torus_.field(); }
  bool has_omega() const { return kind() != GroupKind::SL2; }

  ExtWeylElt identity() const { return {}; }
  ExtWeylElt omega(int k = 1) const;
  ExtWeylElt s(int i) const;
  ExtWeylElt t(const TorusElt& x) const;
  // Product of the letters in order (need not alternate).
  ExtWeylElt word(const std::vector<int>& letters) const;
  ExtWeylElt weyl_mul(const ExtWeylElt& u, const ExtWeylElt& v) const;
  ExtWeylElt weyl_inv(const ExtWeylElt& u) const;
  // Validates kind-specific invariants (alternating word, omega range).
  void check(const ExtWeylElt& u) const;

  HeckeElt zero() const { return HeckeElt(&field()); }
  HeckeElt basis(const ExtWeylElt& w) const;
  HeckeElt one() const { return basis(identity()); }
  HeckeElt from_group_alg(const torus::GroupAlgElt& g) const;
  HeckeElt mul(const HeckeElt& x, const HeckeElt& y) const;
  HeckeElt mul(const ExtWeylElt& u, const ExtWeylElt& v) const { return mul(basis(u), basis(v)); }
  // |mu_alpha| * sum over alpha-check(F_q^x) of T_t.
  HeckeElt quadratic_constant() const;

  HeckeElt idempotent(const TorusChar& xi) const { return from_group_alg(torus_.idempotent(xi)); }
  HeckeElt orbit_idempotent(const CharOrbit& g) const { return from_group_alg(torus_.orbit_idempotent(g)); }
  HeckeElt block_project(const HeckeElt& x, const CharOrbit& g) const;

  // T_t for torus generators, T_s0, T_s1, and T_omega, T_omega^-1 when present.
  std::vector<ExtWeylElt> generators() const;
  bool is_central(const HeckeElt& x) const;

  // All normal forms with |word| <= max_len, omega power in omega_range, torus in tori.
  std::vector<ExtWeylElt> basis_elements(std::size_t max_len, const std::vector<int>& omega_range,
                                         const std::vector<TorusElt>& tori) const;
  std::vector<std::vector<std::uint8_t>> words(std::size_t max_len) const;

  std::string to_string(const ExtWeylElt& w) const;
  std::string to_string(const HeckeElt& x) const;

 private:
  int reduce_omega(int k) const;
  // Letters flipped when conjugating by an odd power of omega.
  static std::vector<std::uint8_t> flip(const std::vector<std::uint8_t>& w, int k);

  torus::Torus torus_;
};

// A homomorphism candidate from H into some matrix ring, given by the image of every basis element.
template <class Mat>
struct Representation {
  std::function<Mat(const ExtWeylElt&)> image;
  std::function<Mat(const Mat&, const Mat&)> mul;
  std::function<Mat(const Mat&, const Mat&)> add;
  std::function<Mat(const Mat&, const FieldElt&)> scale;
  std::function<bool(const Mat&, const Mat&)> equal;
  Mat zero;

  Mat apply(const HeckeElt& x) const {
    Mat acc = zero;
    for (const auto& [w, c] : x.terms()) acc = add(acc, scale(image(w), c));
    return acc;
  }
};

// First pair (u, v) in left x right with image(T_u T_v) != image(u) image(v).
template <class Mat>
std::optional<std::pair<ExtWeylElt, ExtWeylElt>> first_homomorphism_failure(
    const HeckeAlgebra& alg, const Representation<Mat>& rep, const std::vector<ExtWeylElt>& left,
    const std::vector<ExtWeylElt>& right) {
  std::vector<Mat> li, ri;
  for (const auto& w : left) li.push_back(rep.image(w));
  for (const auto& w : right) ri.push_back(rep.image(w));
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j) {
      Mat lhs = rep.apply(alg.mul(left[i], right[j]));
      Mat rhs = rep.mul(li[i], ri[j]);
      if (!rep.equal(lhs, rhs)) return std::make_pair(left[i], right[j]);
    }
  return std::nullopt;
}

template <class Mat>
std::optional<std::pair<ExtWeylElt, ExtWeylElt>> first_homomorphism_failure(
    const HeckeAlgebra& alg, const Representation<Mat>& rep, const std::vector<ExtWeylElt>& elems) {
  return first_homomorphism_failure(alg, rep, elems, elems);
}

// Character of the affine subalgebra (torus and T_s0, T_s1).
struct SupersingChar {
  TorusChar restriction;
  int ts0_val = 0;  // 0 or -1
  int ts1_val = 0;
  bool finite_pd = false;
  bool operator==(const SupersingChar&) const = default;
};

// Supersingular module: M_{gamma, lambda} (GL2/PGL2, dimension 2) or a character (SL2, dimension 1).
struct SupersingModule {
  GroupKind kind = GroupKind::GL2;
  std::optional<CharOrbit> orbit;
  SupersingChar chi;
  FieldElt lambda;
  std::size_t dim = 0;
  // Generator matrices: "omega", "omega_inv" (when present), "s0", "s1".
  std::map<std::string, la::Matrix> gens;
  // Diagonal torus values on the basis vectors.
  std::vector<TorusChar> torus_chars;

  la::Matrix act(const HeckeAlgebra& alg, const ExtWeylElt& w) const;
  la::Matrix act(const HeckeAlgebra& alg, const HeckeElt& x) const;
  Representation<la::Matrix> representation(const HeckeAlgebra& alg) const;
};

std::vector<SupersingChar> enumerate_supersingular_chars(const HeckeAlgebra& alg);
// SL2: one 1-dimensional module per supersingular character. GL2/PGL2: for each lambda, one
// M_{gamma,lambda} per regular orbit and one finite-pd module per non-regular character.
std::vector<SupersingModule> enumerate_supersingular(const HeckeAlgebra& alg,
                                                     const std::vector<FieldElt>& lambdas);
SupersingModule supersingular_module(const HeckeAlgebra& alg, const CharOrbit& gamma, const FieldElt& lambda);
SupersingModule character_module(const HeckeAlgebra& alg, const SupersingChar& chi);

// Checks every relation of H on the module by comparing products of basis elements of
// length <= max_len; returns a description of the first failure.
std::optional<std::string> module_relation_failure(const HeckeAlgebra& alg, const SupersingModule& m,
                                                   std::size_t max_len = 3);

}  // namespace prohecke::hecke
