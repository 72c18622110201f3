#pragma once
// Regular polytope data (Platonic solids, hypercubes, orthoplexes), their
// rotation groups, chord-orbit classification, equivariant configuration
// builders over the space zoo, and the edge-angle / Gram-sum verification
// chains at the configuration circumcenter.

#include "catk/isometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace catk {

enum class PolytopeFamily {
  Tetrahedron,
  Cube,
  Octahedron,
  Icosahedron,
  Dodecahedron,
  Hypercube,
  Orthoplex,
};

std::string family_name(PolytopeFamily family);
PolytopeFamily family_from_name(const std::string& name);

struct PolytopeSpec {
  PolytopeFamily family = PolytopeFamily::Tetrahedron;
  int dim = 3;  // hypercube/orthoplex dimension; fixed to 3 for the solids

  int ambient_dim() const;
  int vertex_count() const;
};

// Vertex coordinates at unit circumradius, one row per vertex, centroid at
// the origin; deterministic ordering and orientation.
Eigen::MatrixXd polytope_vertices(const PolytopeSpec& spec);

// Unordered edge list: vertex pairs at the minimal pairwise distance.
std::vector<std::pair<int, int>> polytope_edges(const PolytopeSpec& spec);

// Euclidean central angle subtended by an edge at the circumcenter.
double expected_edge_angle(const PolytopeSpec& spec);

struct SymmetryGroup {
  PolytopeSpec spec;
  Eigen::MatrixXd vertices;
  std::vector<Eigen::MatrixXd> generators;
  std::vector<std::vector<int>> generator_perms;
  std::uint64_t order = 0;  // full rotation group order (formula-verified)
  bool materialized = false;
  std::vector<Eigen::MatrixXd> elements;  // includes the identity
  std::vector<std::vector<int>> element_perms;
};

// Rotation (orientation-preserving) symmetry group from standard
// generators. Elements are enumerated by breadth-first closure when the
// expected order is at most enumeration_cap; otherwise only the generators
// are materialized and the order comes from the family formula.
SymmetryGroup symmetry_group(const PolytopeSpec& spec, std::uint64_t enumeration_cap = 50000);

struct ChordOrbit {
  std::pair<int, int> representative;  // lexicographically smallest pair
  long long ordered_multiplicity = 0;
  double euclid_cos = 0.0;
  double euclid_angle = 0.0;
};

struct ChordOrbitTable {
  PolytopeSpec spec;
  int vertex_count = 0;
  std::vector<ChordOrbit> orbits;  // sorted by decreasing Euclidean cos
  Eigen::MatrixXi labels;          // labels(i,j) = orbit id; -1 on the diagonal
};

// Orbit decomposition of unordered vertex pairs under the rotation group
// (generator closure); multiplicities count ordered pairs.
ChordOrbitTable chord_orbits(const SymmetryGroup& group);

enum class ConfigTag { EuclideanEmbed, HyperbolicOrbit, SphericalCap, TreeStar, ProductTree };

std::string tag_name(ConfigTag tag);
ConfigTag tag_from_name(const std::string& name);

struct ConfigParams {
  double scale = 1.0;             // Euclidean embed scale
  double offset = 0.7;            // tree-star leg offset
  double leg_length = 1.0;        // star tree leg length
  double cap_radius = 1.0;        // geodesic radius of the spherical cap orbit
  double sphere_radius = 1.0;     // ambient sphere radius
  double hyperbolic_radius = 1.0;
  double euclidean_weight = 1.0;  // product tag: Euclidean coordinate scale
  double tree_offset = 1.0;       // product tag: leg offset
};

struct EquivariantConfiguration {
  PolytopeSpec spec;
  ConfigTag tag = ConfigTag::EuclideanEmbed;
  ConfigParams params;
  SpaceRef space;
  std::vector<Point> points;
  SymmetryGroup group;
  std::vector<Isometry> realized_generators;
  std::vector<Isometry> realized_elements;  // when the group is materialized
  double equivariance_defect = 0.0;         // worst d(g x_i, x_{sigma_g(i)})
};

// Realizes the polytope orbit in the target space selected by the tag; the
// realized action is certified equivariant with the vertex permutations.
EquivariantConfiguration build_equivariant_configuration(const PolytopeSpec& spec, ConfigTag tag,
                                                         const ConfigParams& params = {},
                                                         std::uint64_t seed = 0);

// Circumcenter of the configuration through the common fixed point of the
// realized generators; falls back to the general solver.
CircumcenterResult equivariant_circumcenter(const EquivariantConfiguration& config);

struct PolytopeAngleReport {
  PolytopeSpec spec;
  ConfigTag tag = ConfigTag::EuclideanEmbed;
  Point center;
  double radius = 0.0;
  std::string center_method;
  double expected_angle = 0.0;
  AngleEstimate measured;  // representative edge angle at the center
  double slack = 0.0;
  bool lang_schroeder_case = false;  // tetrahedron: the simplex theorem's case
  std::vector<std::string> notes;
  bool pass = false;
};

PolytopeAngleReport verify_polytope_angles(const EquivariantConfiguration& config,
                                           const VerifyTolerances& tol = {});

struct ChainStep {
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs, nonnegative when the step holds
  bool ok = false;
};

struct GramCertificateReport {
  PolytopeSpec spec;
  ConfigTag tag = ConfigTag::EuclideanEmbed;
  double gram_total = 0.0;
  bool gram_nonpositive = false;
  std::vector<OrbitAggregate> per_orbit;
  std::vector<double> orbit_cos;       // measured mean cos per chord orbit
  std::vector<double> unit_chord_sq;   // 2 - 2 cos per chord orbit
  std::vector<ChainStep> chain;        // family-specific inequality chain
  double chain_bound_a1_sq = 0.0;      // implied lower bound for the edge chord^2
  double final_angle_bound = 0.0;      // implied edge-angle lower bound
  double measured_edge_angle = 0.0;
  std::vector<std::string> notes;      // includes source-misprint notes
  bool chain_ok = false;
  bool pass = false;
};

GramCertificateReport gram_sum_certificate(const EquivariantConfiguration& config,
                                           const VerifyTolerances& tol = {});

// Successive geodesic averaging over a group element list:
// p_1 = g_1 p, p_{k+1} = point at parameter 1/(k+1) on [p_k, g_{k+1} p].
Point iterated_average(const std::vector<Isometry>& elements, const Point& p);

}  // namespace catk
