#pragma once
// Analytic core: circumcenters by minimax optimization, Alexandrov angles as
// extrapolated limits of comparison angles, first-variation directional
// derivatives, tangent-cone scalar products and Gram sums, plus the small
// slack-style inequality checks used by the verification engines.

#include "catk/spaces.hpp"

#include <optional>
#include <string>
#include <vector>

namespace catk {

// ---------------------------------------------------------------------------
// Circumcenter (minimax center)

struct CircumcenterOptions {
  double tol = 1e-9;
  int max_iter = 100000;
};

struct CircumcenterResult {
  Point center;
  double radius = 0.0;
  int iterations = 0;
  // Convergence estimate at termination (0 for closed-form paths). The exact
  // maximum distance from center to the input points always equals `radius`.
  double residual = 0.0;
  // For kappa > 0 the solve checked radius < pi/(2 sqrt(kappa)).
  bool uniqueness_guard = false;
  std::string method;
};

// Minimizes max_i d(c, x_i). Closed-form paths: Euclidean (Welzl), sphere
// (ambient Welzl + radial projection), hyperbolic (Lorentz support solve),
// trees (diametral pair midpoint). Other spaces run the iterative scheme:
// move a 1/(k+2) fraction toward the farthest point (smallest index wins
// ties), reject steps that increase the max by more than tol, then polish
// with geodesic line searches.
CircumcenterResult circumcenter(const SpaceRef& space, const std::vector<Point>& points,
                                const CircumcenterOptions& opts = {});

// Smallest enclosing ball of raw Euclidean coordinate vectors.
struct EuclideanBall {
  Eigen::VectorXd center;
  double radius = 0.0;
};
EuclideanBall smallest_enclosing_ball(const std::vector<Eigen::VectorXd>& pts);

// ---------------------------------------------------------------------------
// Shrinking-scale limits

struct LimitSchedule {
  double initial_fraction = 0.25;  // initial arclength = fraction * min distance
  double shrink = 0.5;
  int rungs = 14;
  int tail = 4;  // extrapolation window
};

// d/ds of s -> d(gamma(s), x0) at s = 0 along the unit-speed geodesic from p
// toward q, with the sign convention that the limit equals
// cos(angle at p between [p,q] and [p,x0]).
double distance_directional_derivative(const Point& p, const Point& q, const Point& x0,
                                       const LimitSchedule& schedule = {});

struct AngleEstimate {
  double value = 0.0;                              // in [0, pi]
  std::vector<std::pair<double, double>> ladder;   // (scale, comparison angle)
  bool extrapolated = false;
  double upper_bias_bound = 0.0;  // value may exceed the true angle by at most this
};

// Alexandrov angle at p between the geodesics [p,x] and [p,y], evaluated as
// the limit of comparison angles in M^2(kappa) at geometrically shrinking
// scales. On spaces with curvature bound <= 0 the ladder must be
// non-increasing; a gross violation signals a broken space and throws.
AngleEstimate alexandrov_angle(const Point& p, const Point& x, const Point& y,
                               const LimitSchedule& schedule = {});

// cos of the Alexandrov angle at c between the directions toward x and y
// (unit radial normalization).
double tangent_scalar_product(const Point& c, const Point& x, const Point& y,
                              const LimitSchedule& schedule = {});

// ---------------------------------------------------------------------------
// Gram sums

struct OrbitAggregate {
  int orbit = -1;
  long long ordered_pairs = 0;
  double mean_cos = 0.0;
  double sum = 0.0;
};

struct GramSummary {
  Eigen::MatrixXd cosines;  // pairwise cos angle at c, unit diagonal
  double total = 0.0;       // sum of all entries including the diagonal
  std::vector<OrbitAggregate> per_orbit;
};

// Pairwise tangent scalar products of the directions from c toward each
// point; optional labels(i,j) assign ordered off-diagonal pairs to orbits
// for the per-orbit aggregates (-1 entries are skipped).
GramSummary gram_sum(const Point& c, const std::vector<Point>& points,
                     const Eigen::MatrixXi* orbit_labels = nullptr,
                     const LimitSchedule& schedule = {});

// ---------------------------------------------------------------------------
// Inequality slack checks

// Cone scalar product with true norms: <a,b> = (|a|^2 + |b|^2 - d(a,b)^2)/2.
double cone_scalar_product(const Point& a, const Point& b);

// Concavity of the cone scalar product along geodesics:
// <gamma(t), w> - (1-t)<u,w> - t<v,w>, gamma the geodesic from u to v.
// Nonnegative (within tolerance) on CAT(0) cones.
double concavity_check(const Point& u, const Point& v, const Point& w, double t);

// d(x_i,x_j)^2 - diam(points)^2 (1 - cos alpha)/2, for points equidistant
// from c. Throws if the equidistance precondition fails.
double chord_diameter_bound_check(const std::vector<Point>& points, const Point& c, int i, int j,
                                  double alpha);

// Four-point quadrilateral inequality: sum of squared sides minus sum of
// squared diagonals; nonnegative in CAT(0).
double parallelogram_check(const Point& x0, const Point& x1, const Point& x2, const Point& x3);

// Equality-case signature of a cyclically ordered point set around c:
// all consecutive central angles 2*pi/n, vertex angle sum (n-2)*pi, and
// chord lengths matching the flat regular n-gon at the common radius.
struct FlatNgonReport {
  bool flat = false;
  double worst_deviation = 0.0;
  double central_angle_dev = 0.0;
  double vertex_angle_sum_dev = 0.0;  // per-vertex normalized
  double chord_dev = 0.0;             // normalized by the circumradius
  double radius_dev = 0.0;            // relative spread of d(c, x_i)
};

FlatNgonReport flat_ngon_check(const std::vector<Point>& cycle, const Point& c, double tol = 1e-6);

}  // namespace catk
