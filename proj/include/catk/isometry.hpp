#pragma once
// Finite-order isometries of the concrete spaces, their orbits, and the
// verification engines for the rotation angle lower bound 2*pi/n at the
// orbit circumcenter, the chord inequality d(g^2 x, x) <= 2 cos(pi/n)
// d(g x, x), and the equality-case circle/flat signatures.

#include "catk/analysis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace catk {

class Isometry {
 public:
  enum class Kind { Orthogonal, Lorentz, SphereRotation, TreeAutomorphism, Product, ConeMap };

  // Factories validate the defining data (orthogonality, Lorentz relations,
  // automorphism compatibility) and certify the claimed order by probing.
  static Isometry orthogonal(SpaceRef space, Eigen::MatrixXd matrix, int order);
  static Isometry lorentz(SpaceRef space, Eigen::MatrixXd matrix, int order);
  static Isometry sphere_rotation(SpaceRef space, Eigen::MatrixXd matrix, int order);
  static Isometry tree_automorphism(SpaceRef space, std::vector<int> vertex_perm, int order);
  static Isometry product(SpaceRef space, std::vector<Isometry> components, int order);
  static Isometry cone_map(SpaceRef space, Isometry base_map, int order);

  Kind kind() const { return kind_; }
  const SpaceRef& space() const { return space_; }
  int order() const { return order_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::vector<int>& vertex_perm() const { return perm_; }
  const std::vector<Isometry>& components() const { return components_; }

  Point apply(const Point& p) const;
  Point apply_power(const Point& p, int k) const;

  // Order certification: g^order fixes 32 random probe points within 1e-10
  // (relative), no proper divisor power does, and random pair distances are
  // preserved. Throws InvalidInput on failure.
  void certify(std::uint64_t seed = 0xC0FFEEull) const;

  // Closest point of Fix(g) to x in the space's metric. For orbits of g this
  // is the orbit circumcenter. Empty when no fixed point is reachable (e.g.
  // the projection collapses on a sphere).
  std::optional<Point> closest_fixed_point(const Point& x) const;

 private:
  Isometry(Kind kind, SpaceRef space, int order) : kind_(kind), space_(std::move(space)), order_(order) {}

  Kind kind_;
  SpaceRef space_;
  int order_ = 1;
  Eigen::MatrixXd matrix_;                  // matrix kinds
  std::vector<int> perm_;                   // tree automorphism
  std::vector<std::pair<int, bool>> edge_map_;  // tree: edge id -> (image, flipped)
  std::vector<Isometry> components_;        // product factors, or cone base map
};

// [x, g x, ..., g^{n-1} x].
std::vector<Point> orbit(const Isometry& g, const Point& x);

struct VerifyTolerances {
  double verify = 1e-6;
  double kernel = 1e-9;
  double equality_threshold = 1e-6;  // |slack| below: equality case
  double strict_threshold = 1e-4;    // slack above: strict case
  double signature = 1e-5;           // direction-distance signature match
};

enum class EqualityClass { Equality, Strict, Inconclusive, Vacuous };

struct OrbitReport {
  std::vector<Point> orbit_points;
  Point center;
  double radius = 0.0;
  std::string center_method;
  double center_invariance = 0.0;  // d(c, g c)

  AngleEstimate angle;  // measured angle at the center between x and g x
  double bound = 0.0;   // 2 pi / n
  double slack = 0.0;   // angle - bound
  double baseline = 0.0;  // 1/n
  bool baseline_ok = false;

  double chord_ratio = 0.0;  // d(g^2 x, x) / d(g x, x)
  double chord_bound = 0.0;  // 2 cos(pi/n)
  double chord_slack = 0.0;  // chord_bound * d(gx,x) - d(g^2 x, x)

  EqualityClass equality = EqualityClass::Inconclusive;
  bool vacuous = false;
  bool flat_check_ran = false;
  FlatNgonReport flat_report;
  bool pass = false;
};

// Angle bound at the orbit circumcenter: requires order >= 3 and, for
// kappa > 0, orbit radius < pi/(2 sqrt(kappa)) (RadiusGuardError otherwise).
OrbitReport verify_rotation_bound(const Isometry& g, const Point& x,
                                  const VerifyTolerances& tol = {});

// Chord inequality on CAT(0) spaces, order >= 4; near-equality triggers the
// flat n-gon signature check on the orbit.
OrbitReport verify_chord_inequality(const Isometry& g, const Point& x,
                                    const VerifyTolerances& tol = {});

struct EqualityProbeReport {
  bool applicable = false;   // the rotation bound was an equality case
  std::vector<double> measured;  // angle at c between x and g^i x, i = 1..n-1
  std::vector<double> expected;  // min(2 pi i / n, 2 pi - 2 pi i / n)
  double worst_dev = 0.0;
  bool pass = false;
};

// Measures the pairwise direction distances of the orbit directions at the
// center and compares them with the circle signature.
EqualityProbeReport equality_case_probe(const Isometry& g, const Point& x,
                                        const VerifyTolerances& tol = {});

struct TangentFlatReport {
  int n = 0;
  double worst_dev = 0.0;
  bool pass = false;
};

// Builds the Euclidean cone over the sampled direction circle and compares
// all pairwise cone distances against the planar rotation-orbit model.
TangentFlatReport tangent_flat_check(const std::vector<double>& signature, int n,
                                     double tol = 1e-6);

}  // namespace catk
