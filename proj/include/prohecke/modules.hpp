#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prohecke/hecke.hpp"
#include "prohecke/linalg.hpp"

// Finite-dimensional modules over the regular block R of the finite Hecke algebra,
// over k[T]/(T^2), and over R[Z^+-1] with Z acting invertibly.
namespace prohecke::modules {

using gf::FieldCtx;
using gf::FieldElt;
using la::Matrix;

// R: e1 + e2 = 1, e_i e_j = delta_ij e_i, e_i T = T e_(3-i), T^2 = 0.
// KT2: T^2 = 0. S_at_lambda: R plus an invertible central Z.
enum class AlgebraKind { R, KT2, S_at_lambda };
std::string to_string(AlgebraKind k);
AlgebraKind algebra_kind_from_string(const std::string& s);
const std::vector<std::string>& generator_names(AlgebraKind k);

struct FDModule {
  AlgebraKind kind = AlgebraKind::R;
  const FieldCtx* field = nullptr;
  std::size_t dim = 0;
  std::map<std::string, Matrix> action;

  const Matrix& act(const std::string& gen) const;
  std::optional<std::string> relation_failure() const;
  // Throws RelationViolation.
  void check() const;
  FDModule direct_sum(const FDModule& o) const;
  // Same module in the basis given by the columns of p.
  FDModule change_basis(const Matrix& p) const;
  // Restriction of an S-module to R.
  FDModule restrict_to_r() const;

  nlohmann::json to_json() const;
  static FDModule from_json(const nlohmann::json& j, const FieldCtx* field);
};

// chi_i: e_i -> 1, T -> 0.
FDModule chi(const FieldCtx* f, int i);
// R e_i with basis (e_i, T e_i).
FDModule projective(const FieldCtx* f, int i);
FDModule regular_module(const FieldCtx* f);
// KT2: the trivial module and the free module of rank one.
FDModule kt2_trivial(const FieldCtx* f);
FDModule kt2_free(const FieldCtx* f);
// chi_i with Z acting by lambda.
FDModule chi_s(const FieldCtx* f, int i, const FieldElt& lambda);
FDModule zero_module(AlgebraKind k, const FieldCtx* f);
// Random R-module with dim e1 M = d1, dim e2 M = d2: T = (0 B; C 0) with BC = 0 = CB, ranks spread
// out by sometimes factoring B, then a random change of basis when conjugate is set.
FDModule random_r_module(const FieldCtx* f, std::size_t d1, std::size_t d2, std::mt19937& rng, bool conjugate = true);

struct DecompResult {
  AlgebraKind kind = AlgebraKind::R;
  // R: multiplicities of chi_1, chi_2, R e_1, R e_2. KT2: a1 = trivial, b1 = free.
  std::size_t a1 = 0, a2 = 0, b1 = 0, b2 = 0;
  // Columns: the adapted basis. In it the module is the standard direct sum
  // (R e_1 blocks, then R e_2 blocks, then chi_1, then chi_2).
  Matrix basis;
  bool operator==(const DecompResult& o) const {
    return kind == o.kind && a1 == o.a1 && a2 == o.a2 && b1 == o.b1 && b2 == o.b2;
  }
  nlohmann::json to_json() const;
};
DecompResult decompose(const FDModule& m);
// The standard module with the given multiplicities, in the block order used by decompose.
FDModule standard_module(const FieldCtx* f, AlgebraKind kind, std::size_t a1, std::size_t a2, std::size_t b1,
                         std::size_t b2);

// Basis of Hom(M, N); each map is a dim N x dim M matrix.
std::vector<Matrix> hom_basis(const FDModule& m, const FDModule& n);

struct StableHom {
  std::size_t dim = 0;
  std::vector<Matrix> representatives;
  std::size_t hom_dim = 0, projective_dim = 0;
};
// Hom(M, N) modulo maps through the projective cover of N. Kinds R and KT2.
StableHom stable_hom(const FDModule& m, const FDModule& n);
// Projective cover P -> N as (P, surjection).
std::pair<FDModule, Matrix> projective_cover(const FDModule& n);

// dim Ext^n(M, N), R or KT2.
std::size_t ext_group(const FDModule& m, const FDModule& n, int degree);
// Cokernel of a minimal injective hull.
FDModule shift(const FDModule& m);

// Ext^n over S of chi_{i,lambda} into an S-module N, from the totalized periodic x Koszul resolution.
std::size_t ext_s(int i, const FieldElt& lambda, const FDModule& n, int degree);
std::size_t ext_s_specialized(int i, int j, const FieldElt& lambda, int degree);

struct StableAlgebra {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  // table[a][b] = coordinates of b_a * b_b (composition, b_b applied first).
  std::vector<std::vector<std::vector<FieldElt>>> table;

  std::vector<FieldElt> mul(const std::vector<FieldElt>& x, const std::vector<FieldElt>& y) const;
  bool is_associative() const;
  std::optional<std::vector<FieldElt>> unit() const;
  nlohmann::json to_json() const;
};

// Structure constants of R in the basis e1, e2, T e1, T e2, read off from the regular module.
StableAlgebra r_algebra(const FieldCtx* f);

struct StableEndoResult {
  StableAlgebra algebra;  // basis e~1, e~2, t~1, t~2
  bool matches = false;
  // Restriction of M_{gamma,lambda} to R[Z^+-1].
  DecompResult restriction;
  nlohmann::json to_json() const;
};
// Throws ComparisonFailure naming the first product that disagrees with R.
StableEndoResult stable_endo(const FieldCtx* f, const FieldElt& lambda);
StableEndoResult stable_endo_supersingular(const hecke::HeckeAlgebra& alg, const hecke::CharOrbit& gamma,
                                           const FieldElt& lambda);

// True iff [chi_i, M] = 0 = [chi_i, shift M] for i = 1, 2.
bool generator_test(const FDModule& m);

// Graded A-side Ext with A = k[X1, X2]/(X1 X2), M_1 = A/X2 A, M_2 = A/X1 A, truncated at X-degree D.
// Entry j is dim Ext^j(M_source, M_target), counted in X-degrees <= D - 1.
std::vector<std::size_t> a_side_ext(int source, int target, int max_j, int truncation = 8);

struct CatalogueEntry {
  // "chi_R" (i), "proj_R" (i), "chi_S" (i, lambda), "M_gamma_lambda" (lambda), "A_M" (i).
  std::string family;
  int index = 1;
  FieldElt lambda;
};
struct PdVerdict {
  bool infinite_pd = false;
  bool singular_support = false;
  std::string support;
  std::vector<std::size_t> ext_dims;  // self-Ext in degrees 0..
  nlohmann::json to_json() const;
};
// Throws OutsideCatalogue.
PdVerdict infinite_pd_detect(const CatalogueEntry& e, const FieldCtx* f);

// Restrictions to R (at x0) and to R^omega (at x1, relabelled to R via e_i -> e_(3-i)) of the
// spherical SL2 module built from M_i truncated at X-degree D.
std::pair<FDModule, FDModule> sl2_restrictions(const hecke::HeckeAlgebra& sl2, const hecke::CharOrbit& gamma,
                                               int index, int truncation);

}  // namespace prohecke::modules
