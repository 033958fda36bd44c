#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "prohecke/hecke.hpp"
#include "prohecke/nodal.hpp"

// Hecke blocks as 2x2 matrix algebras over the node and its Laurent extension.
namespace prohecke::models {

using gf::FieldElt;
using hecke::ExtWeylElt;
using hecke::HeckeAlgebra;
using hecke::HeckeElt;
using nodal::LaurentNodal;
using nodal::Mat2;
using nodal::NodalPoly;
using torus::CharOrbit;
using torus::TorusChar;
using torus::TorusElt;

// Coefficient ring of the target matrix algebra. All four embed in B.
enum class ModelTarget { MatB, MatXZ, MatA, MatX };
std::string to_string(ModelTarget t);

struct ModelMap {
  GroupKind kind = GroupKind::GL2;
  CharOrbit orbit;
  std::optional<TorusChar> lift;  // SL2: chosen GL2 lift of orbit.members[0]
  ModelTarget target = ModelTarget::MatB;
  const gf::FieldCtx* field = nullptr;
  // T_t is sent to diag(torus_chars[0](t), torus_chars[1](t)).
  TorusChar torus_chars[2];
  // "omega", "omega_inv" (GL2), "s0", "s1".
  std::map<std::string, Mat2> gens;

  Mat2 torus_image(const torus::Torus& tor, const TorusElt& t) const;
  // Image of T_w in the block, i.e. of e_gamma T_w.
  Mat2 image(const HeckeAlgebra& alg, const ExtWeylElt& w) const;
  Mat2 apply(const HeckeAlgebra& alg, const HeckeElt& x) const;
  // Memoizes basis images.
  hecke::Representation<Mat2> representation(const HeckeAlgebra& alg) const;
  nlohmann::json to_json(const HeckeAlgebra& alg) const;
};

// WrongRegularity for the SL2 trivial orbit, which has no matrix model.
ModelMap build_model(const HeckeAlgebra& alg, const CharOrbit& gamma);
bool has_model(const HeckeAlgebra& alg, const CharOrbit& gamma);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

// Reuses the Hecke products of a fixed basis sample across blocks of one algebra.
class ModelVerifier {
 public:
  ModelVerifier(const HeckeAlgebra& alg, std::size_t max_len);
  // Throws VerificationFailure naming the first counterexample.
  Report verify(const ModelMap& map) const;

 private:
  const HeckeAlgebra& alg_;
  std::size_t max_len_;
  std::vector<ExtWeylElt> sample_;
  std::vector<std::vector<HeckeElt>> products_;
};

Report verify_model(const HeckeAlgebra& alg, const ModelMap& map, std::size_t max_len = 6);

struct CenterElement {
  std::string name;
  HeckeElt element;
  Mat2 expected;  // scalar matrix
  Mat2 image;
  bool central = false;
};
std::vector<CenterElement> center_elements(const HeckeAlgebra& alg, const CharOrbit& gamma);

// Rank-2 module over the block centre: h . v = image(h) v.
struct SphericalModule {
  ModelMap model;
  // Entry-wise specialization at the point X1 = a1, X2 = a2 (a1 a2 = 0), Z = z.
  la::Matrix specialize(const HeckeAlgebra& alg, const ExtWeylElt& w, const FieldElt& a1, const FieldElt& a2,
                        const FieldElt& z) const;
  la::Matrix specialize(const HeckeAlgebra& alg, const HeckeElt& x, const FieldElt& a1, const FieldElt& a2,
                        const FieldElt& z) const;
};
SphericalModule build_spherical(const HeckeAlgebra& alg, const CharOrbit& gamma);

// The submodule m M with m = (X1, X2).
struct GPSphericalModule {
  SphericalModule ambient;
  // k-basis of the Z^0, X-degree d part.
  std::vector<std::array<LaurentNodal, 2>> degree_basis(int d) const;
  bool contains(const std::array<LaurentNodal, 2>& v) const;
};
GPSphericalModule build_gp_spherical(const HeckeAlgebra& alg, const CharOrbit& gamma);

struct FreenessSlice {
  int degree = 0;
  std::size_t slice_dim = 0, pattern_dim = 0, twisted_dim = 0, union_rank = 0;
};
struct FreenessReport {
  bool passed = true;
  std::vector<FreenessSlice> slices;
};
// M2(A) = P + P J with P the parity-pattern image and J = (0 1; 1 0), checked per X-degree <= max_degree.
FreenessReport freeness_report(const HeckeAlgebra& sl2, const CharOrbit& gamma, int max_degree);
bool freeness_check(const HeckeAlgebra& sl2, const CharOrbit& gamma, int max_degree);

struct ResolutionDegree {
  int degree = 0;
  std::size_t left_dim = 0, mid_dim = 0, target_dim = 0, image_dim = 0, kernel_dim = 0;
  bool exact = false;
};
struct ResolutionReport {
  bool passed = true;
  bool counit_surjective = true;
  std::vector<ResolutionDegree> degrees;
  nlohmann::json to_json() const;
};
// Three-term resolution of M over the block with Z = lambda, truncated to X-degree <= max_degree.
// Exactness is asserted in degrees <= max_degree - 1. M must be killed by T_s0, T_s1.
ResolutionReport os_resolution_check(const HeckeAlgebra& gl2, const CharOrbit& gamma,
                                     const hecke::SupersingModule& m, const FieldElt& lambda, int max_degree);

struct TildeZComponent {
  CharOrbit orbit;
  std::string ring;  // "k[X]" or "A"
};
struct TildeZ {
  std::vector<TildeZComponent> components;
};
TildeZ tilde_z(const HeckeAlgebra& sl2);
// Image of a central element of a non-trivial SL2 block in its A-factor (A_e identified with A).
NodalPoly tilde_z_image(const HeckeAlgebra& sl2, const CharOrbit& gamma, const HeckeElt& central);

}  // namespace prohecke::models
