#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "prohecke/hecke.hpp"

// Chains of projective lines, the maps L from spectra of block centres onto them, and the
// resulting correspondence between supersingular modules and nodes.
namespace prohecke::scheme {

using gf::FieldElt;
using torus::CharOrbit;
using torus::TorusChar;

struct ChainComponent {
  int label = 0;  // GL2: n in {0..q-2}. SL2: parity m. PGL2: 0.
  std::size_t length = 1;
  bool has_gm = false;
  std::size_t node_count() const { return length - 1; }
};

struct ChainScheme {
  GroupKind kind = GroupKind::GL2;
  std::uint32_t q = 0;
  std::vector<ChainComponent> components;

  const ChainComponent& component(int label) const;
  std::size_t node_count() const;
  nlohmann::json to_json() const;
};

// Throws EvenCharacteristic for p = 2.
ChainScheme build_scheme(GroupKind kind, std::uint32_t q);

// A point of P^1 in the chart Y0/Y1; infinity is [1:0].
struct ProjCoord {
  bool at_infinity = false;
  FieldElt value;

  static ProjCoord infinity() { return {true, {}}; }
  static ProjCoord affine(const FieldElt& v) { return {false, v}; }
  bool operator==(const ProjCoord& o) const {
    return at_infinity == o.at_infinity && (at_infinity || value == o.value);
  }
};

// t -> t + 1/t, 0 -> infinity.
ProjCoord phi(const FieldElt& t);
// t -> [1 : t + 1/t], 0 -> [0:1].
ProjCoord phi_prime(const FieldElt& t);

struct ChainPoint {
  int component = 0;
  std::size_t segment = 0;
  ProjCoord coord;
  std::optional<FieldElt> gm;

  // (i, 0) with i > 0 becomes (i - 1, infinity).
  ChainPoint canonical() const;
  bool is_node(const ChainScheme& s) const;
  bool operator==(const ChainPoint& o) const;
  bool operator<(const ChainPoint& o) const;
  nlohmann::json to_json() const;
  std::string to_string() const;
};

// Where an orbit sits: the component, the index i of its piece U_i, and the representative
// relative to which the centre is k[X1, X2]/(X1 X2) (or k[X1] on a single line).
enum class PieceShape {
  LineStart,  // A^1 onto C_0 minus infinity
  LineEnd,    // A^1 onto C_(l-1) minus the origin
  Middle,     // X1 onto C_(i-1) minus the origin, X2 onto C_i minus infinity
  PhiStart,   // X1 through phi onto C_0, X2 onto C_1 minus infinity
  PhiEnd,     // X1 onto C_(i-1) minus the origin, X2 through phi' onto C_i
  PhiBoth,    // X1 through phi onto C_0, X2 through phi' onto C_1
};
struct OrbitSlot {
  int component = 0;
  int index = 0;
  TorusChar representative;
  PieceShape shape = PieceShape::Middle;
};
OrbitSlot orbit_slot(const ChainScheme& s, const CharOrbit& gamma);

// A k-point of Spec Z(e_gamma H): x1 x2 = 0, z the value of T_omega^2 (GL2 only).
// On a single-line piece the coordinate is x1 and x2 must vanish.
struct SpecZPoint {
  CharOrbit orbit;
  FieldElt x1, x2;
  std::optional<FieldElt> z;
};

// Throws InvalidArgument when x1 x2 != 0, UnsupportedKind for a trivial-orbit point off its line.
ChainPoint L_map(const ChainScheme& s, const SpecZPoint& pt);

// Nodes (i, infinity), i < l - 1, of every component; gm attached when the component has one.
std::vector<ChainPoint> singular_points(const ChainScheme& s, const std::optional<FieldElt>& gm = std::nullopt);

// Image of the central character of an infinite-pd supersingular module. Throws FinitePDModule.
ChainPoint langlands_parameter(const hecke::HeckeAlgebra& alg, const hecke::SupersingModule& m);
ChainPoint langlands_parameter(const hecke::HeckeAlgebra& alg, const hecke::SupersingChar& chi);

struct CorrespondenceRow {
  std::string module;
  ChainPoint point;
  std::size_t fiber_id = 0;
};

struct CorrespondenceReport {
  GroupKind kind = GroupKind::GL2;
  std::uint32_t q = 0;
  std::vector<CorrespondenceRow> rows;
  std::vector<std::vector<std::string>> fibers;
  std::size_t node_count = 0;  // over the sampled gm values
  std::size_t image_size = 0;
  bool injective = false;
  bool surjective = false;
  bool nodes_only = false;  // every image point is a node
  // SL2: the fibers are {chi_(q-1)/2} and {chi_i, chi_(q-1-i)}.
  bool fibers_match_packets = false;
  nlohmann::json to_json() const;
};

// lambdas: the gm values sampled (GL2); ignored for PGL2 and SL2.
CorrespondenceReport correspondence_table(GroupKind kind, std::uint32_t q, const std::vector<FieldElt>& lambdas,
                                          const gf::FieldPtr& field);

}  // namespace prohecke::scheme
