#pragma once
// A zoo of concrete geodesic spaces with verified curvature bounds:
// Euclidean E^k, hyperbolic H^k (hyperboloid model), round spheres S^k,
// weighted metric trees, finite l^2-products, and Euclidean cones.
// Every space exposes distance and geodesic evaluation; points carry a
// reference to the space they live in.

#include "catk/model.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace catk {

class Space;
using SpaceRef = std::shared_ptr<const Space>;

// Position on a metric tree: offset (in length units) from the first
// endpoint of the given edge, 0 <= offset <= edge length.
struct TreePos {
  int edge = 0;
  double offset = 0.0;
};

class Point;

// Position on a Euclidean cone: radius >= 0 plus a base point. All points
// with radius 0 are the apex and compare equal regardless of base.
struct ConePos {
  double radius = 0.0;
  std::shared_ptr<const Point> base;  // may be null only at the apex
};

class Point {
 public:
  using Payload = std::variant<Eigen::VectorXd, TreePos, std::vector<Point>, ConePos>;

  Point() = default;
  Point(SpaceRef space, Payload payload);

  bool valid() const { return space_ != nullptr; }
  const Space& space() const;
  const SpaceRef& space_ref() const { return space_; }

  const Eigen::VectorXd& vec() const;
  const TreePos& tree() const;
  const std::vector<Point>& factors() const;
  const ConePos& cone() const;
  const Payload& payload() const { return payload_; }

 private:
  SpaceRef space_;
  Payload payload_;
};

// Metric and geodesic entry points; both ends must live in the same space.
double distance(const Point& p, const Point& q);
Point geodesic_point(const Point& p, const Point& q, double t);

class Space : public std::enable_shared_from_this<Space> {
 public:
  enum class Kind { Euclidean, Hyperbolic, Sphere, Tree, Product, Cone };

  virtual ~Space() = default;

  Kind kind() const { return kind_; }
  virtual Curvature curvature_bound() const = 0;
  virtual double distance(const Point& p, const Point& q) const = 0;
  virtual Point geodesic(const Point& p, const Point& q, double t) const = 0;
  virtual void validate(const Point& p) const = 0;
  virtual Point basepoint() const = 0;
  // Random point within the given distance of the basepoint.
  virtual Point sample_ball(std::mt19937_64& rng, double radius) const = 0;
  virtual bool equals(const Space& other) const = 0;
  virtual std::string describe() const = 0;

 protected:
  explicit Space(Kind k) : kind_(k) {}
  void check_same_space(const Point& p, const Point& q) const;

  Kind kind_;
};

class EuclideanSpace final : public Space {
 public:
  static std::shared_ptr<const EuclideanSpace> make(int dim);

  int dim() const { return dim_; }
  Point point(Eigen::VectorXd coords) const;

  Curvature curvature_bound() const override { return Curvature::flat(); }
  double distance(const Point& p, const Point& q) const override;
  Point geodesic(const Point& p, const Point& q, double t) const override;
  void validate(const Point& p) const override;
  Point basepoint() const override;
  Point sample_ball(std::mt19937_64& rng, double radius) const override;
  bool equals(const Space& other) const override;
  std::string describe() const override;

 private:
  explicit EuclideanSpace(int dim) : Space(Kind::Euclidean), dim_(dim) {}
  int dim_;
};

// Hyperboloid model of H^k: ambient R^{k+1}, Lorentz signature (-,+,...,+)
// with the time coordinate first, <x,x> = -1, x_0 > 0. Curvature -1.
class HyperbolicSpace final : public Space {
 public:
  static std::shared_ptr<const HyperbolicSpace> make(int dim);

  int dim() const { return dim_; }
  Point point(Eigen::VectorXd hyperboloid_coords) const;
  // exp at the basepoint (1,0,...,0) of a spatial direction and length.
  Point exp_at_base(const Eigen::VectorXd& spatial_unit, double dist) const;

  Curvature curvature_bound() const override { return Curvature::hyperbolic(-1.0); }
  double distance(const Point& p, const Point& q) const override;
  Point geodesic(const Point& p, const Point& q, double t) const override;
  void validate(const Point& p) const override;
  Point basepoint() const override;
  Point sample_ball(std::mt19937_64& rng, double radius) const override;
  bool equals(const Space& other) const override;
  std::string describe() const override;

 private:
  explicit HyperbolicSpace(int dim) : Space(Kind::Hyperbolic), dim_(dim) {}
  int dim_;
};

// Round sphere S^k of the given radius, embedded in R^{k+1}. Curvature
// 1/radius^2. k = 1 gives a circle of circumference 2*pi*radius.
class SphereSpace final : public Space {
 public:
  static std::shared_ptr<const SphereSpace> make(int dim, double radius);

  int dim() const { return dim_; }
  double radius() const { return radius_; }
  Point point(Eigen::VectorXd coords) const;
  // exp at the pole radius*e_{k+1} of a tangent direction and length.
  Point exp_at_pole(const Eigen::VectorXd& tangent_unit, double dist) const;

  Curvature curvature_bound() const override {
    return Curvature::spherical(1.0 / (radius_ * radius_));
  }
  double distance(const Point& p, const Point& q) const override;
  Point geodesic(const Point& p, const Point& q, double t) const override;
  void validate(const Point& p) const override;
  Point basepoint() const override;
  Point sample_ball(std::mt19937_64& rng, double radius) const override;
  bool equals(const Space& other) const override;
  std::string describe() const override;

 private:
  SphereSpace(int dim, double radius) : Space(Kind::Sphere), dim_(dim), radius_(radius) {}
  int dim_;
  double radius_;
};

// Weighted metric tree: connected acyclic graph with strictly positive edge
// lengths; points live on edges. Vertex-to-vertex distances and next-hop
// tables are precomputed at construction.
class MetricTree final : public Space {
 public:
  struct Edge {
    int u = 0, v = 0;
    double length = 0.0;
  };

  static std::shared_ptr<const MetricTree> make(std::vector<Edge> edges);
  // Star tree: hub vertex 0 with `legs` unit-ish legs of the given length.
  static std::shared_ptr<const MetricTree> star(int legs, double leg_length);

  int vertex_count() const { return n_vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  double vertex_distance(int u, int v) const;

  Point edge_point(int edge, double offset) const;
  Point vertex_point(int v) const;
  // Distance from a tree position to a vertex.
  double distance_to_vertex(const TreePos& p, int v) const;
  // True if the two positions coincide after canonicalization.
  bool same_position(const TreePos& a, const TreePos& b, double tol = 1e-12) const;

  Curvature curvature_bound() const override { return Curvature::flat(); }
  double distance(const Point& p, const Point& q) const override;
  Point geodesic(const Point& p, const Point& q, double t) const override;
  void validate(const Point& p) const override;
  Point basepoint() const override;
  Point sample_ball(std::mt19937_64& rng, double radius) const override;
  bool equals(const Space& other) const override;
  std::string describe() const override;

 private:
  explicit MetricTree(std::vector<Edge> edges);
  double tree_distance(const TreePos& p, const TreePos& q) const;

  std::vector<Edge> edges_;
  int n_vertices_ = 0;
  Eigen::MatrixXd vertex_dist_;            // n x n
  std::vector<std::vector<int>> next_hop_val_;  // next_hop_val_[target][v]: neighbor of v toward target
};

// Finite l^2 product of CAT(0) factors.
class ProductSpace final : public Space {
 public:
  static std::shared_ptr<const ProductSpace> make(std::vector<SpaceRef> factors);

  int factor_count() const { return static_cast<int>(factors_.size()); }
  const std::vector<SpaceRef>& factor_spaces() const { return factors_; }
  Point point(std::vector<Point> components) const;

  Curvature curvature_bound() const override { return Curvature::flat(); }
  double distance(const Point& p, const Point& q) const override;
  Point geodesic(const Point& p, const Point& q, double t) const override;
  void validate(const Point& p) const override;
  Point basepoint() const override;
  Point sample_ball(std::mt19937_64& rng, double radius) const override;
  bool equals(const Space& other) const override;
  std::string describe() const override;

 private:
  explicit ProductSpace(std::vector<SpaceRef> factors)
      : Space(Kind::Product), factors_(std::move(factors)) {}
  std::vector<SpaceRef> factors_;
};

// Euclidean cone over a CAT(1) base (curvature bound <= 1). Cone metric:
// d((s,xi),(t,eta))^2 = s^2 + t^2 - 2 s t cos(min(pi, d_base(xi,eta))).
class ConeSpace final : public Space {
 public:
  static std::shared_ptr<const ConeSpace> make(SpaceRef base);

  const SpaceRef& base() const { return base_; }
  Point point(double radius, Point base_point) const;
  Point apex() const;

  Curvature curvature_bound() const override { return Curvature::flat(); }
  double distance(const Point& p, const Point& q) const override;
  Point geodesic(const Point& p, const Point& q, double t) const override;
  void validate(const Point& p) const override;
  Point basepoint() const override;
  Point sample_ball(std::mt19937_64& rng, double radius) const override;
  bool equals(const Space& other) const override;
  std::string describe() const override;

 private:
  explicit ConeSpace(SpaceRef base) : Space(Kind::Cone), base_(std::move(base)) {}
  SpaceRef base_;
};

// Cone distance on raw pieces, without constructing cone points.
double cone_distance(const Space& base, double s, const Point& xi, double t, const Point& eta);

// ---------------------------------------------------------------------------
// Curvature sanity certificate: random triangles with an interior point on
// one side, checked against the comparison triangle in M^2(kappa).

struct CurvatureCertificate {
  int samples = 0;
  int failures = 0;
  double worst_slack = 0.0;  // min over samples of d(mbar, zbar) - d(m, z)
  bool pass = false;
  std::uint64_t seed = 0;
};

CurvatureCertificate curvature_certificate(const SpaceRef& space, int samples, std::uint64_t seed);

}  // namespace catk
