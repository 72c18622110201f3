#pragma once
// Constant-curvature model geometry M^k(kappa): distances, geodesics, laws
// of cosines, comparison triangles, and the hemisphere-center construction
// for short closed curves on the unit sphere.
//
// All trigonometric kernels use half-angle (haversine-style) forms built on
// atan2/asinh so they stay accurate for tiny and near-degenerate triangles.
// Lengths are handled on the unit-curvature model internally; a general
// curvature value only rescales them.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace catk {

// ---------------------------------------------------------------------------
// Errors

// Malformed input: wrong dimensions, constraint violations, bad configs.
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Mathematically out-of-domain input (triangle inequality, antipodal pairs).
struct MathDomainError : std::runtime_error {
  explicit MathDomainError(const std::string& what) : std::runtime_error(what) {}
};

// A positive-curvature radius guard was violated (uniqueness lost).
struct RadiusGuardError : std::runtime_error {
  explicit RadiusGuardError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Curvature

// Curvature bound of a model space. The sign selects the formula family;
// scale() = sqrt(|kappa|) converts lengths to/from the unit model.
struct Curvature {
  double kappa = 0.0;

  static Curvature flat() { return Curvature{0.0}; }
  static Curvature spherical(double k = 1.0);
  static Curvature hyperbolic(double k = -1.0);

  int sign() const { return kappa > 0.0 ? 1 : (kappa < 0.0 ? -1 : 0); }
  double scale() const { return std::sqrt(std::abs(kappa)); }

  // pi/sqrt(kappa) for kappa > 0, +infinity otherwise.
  double model_diameter() const;
};

// ---------------------------------------------------------------------------
// Scalar triangle kernels on the unit model (kappa in {-1, 0, +1}).
// "angle" kernels return the angle between the sides a and b, i.e. the angle
// opposite side c. Side kernels are their inverses in the angle argument.

namespace detail {
template <typename Scalar>
Scalar clamp_nonneg(Scalar x, const char* what) {
  // Rounding may drive a structurally nonnegative quantity slightly below
  // zero; anything beyond stray ulps is a genuine domain violation.
  if (x < Scalar(0)) {
    if (x < Scalar(-1e-12)) throw MathDomainError(what);
    return Scalar(0);
  }
  return x;
}
}  // namespace detail

// Flat law of cosines, c from (a, b, gamma). Stable form:
// c^2 = (a-b)^2 + 4ab sin^2(gamma/2).
template <typename Scalar>
Scalar flat_side(Scalar a, Scalar b, Scalar gamma) {
  const Scalar sh = std::sin(gamma / 2);
  return std::sqrt((a - b) * (a - b) + 4 * a * b * sh * sh);
}

// Spherical law of cosines via the haversine split
//   sin^2(c/2) = sin^2((a-b)/2) + sin a sin b sin^2(gamma/2)
//   cos^2(c/2) = cos^2((a-b)/2) - sin a sin b sin^2(gamma/2)
template <typename Scalar>
Scalar sphere_side(Scalar a, Scalar b, Scalar gamma) {
  const Scalar sh = std::sin(gamma / 2);
  const Scalar cross = std::sin(a) * std::sin(b) * sh * sh;
  const Scalar sd = std::sin((a - b) / 2);
  const Scalar cd = std::cos((a - b) / 2);
  const Scalar num = sd * sd + cross;
  const Scalar den = detail::clamp_nonneg(cd * cd - cross, "sphere_side: degenerate configuration");
  return 2 * std::atan2(std::sqrt(num), std::sqrt(den));
}

// Hyperbolic law of cosines via
//   sinh^2(c/2) = sinh^2((a-b)/2) + sinh a sinh b sin^2(gamma/2)
template <typename Scalar>
Scalar hyperbolic_side(Scalar a, Scalar b, Scalar gamma) {
  const Scalar sh = std::sin(gamma / 2);
  const Scalar sd = std::sinh((a - b) / 2);
  return 2 * std::asinh(std::sqrt(sd * sd + std::sinh(a) * std::sinh(b) * sh * sh));
}

// Flat angle from sides (Kahan's stable form):
//   gamma = 2 atan2( sqrt((c-a+b)(c+a-b)), sqrt((a+b-c)(a+b+c)) )
template <typename Scalar>
Scalar flat_angle(Scalar a, Scalar b, Scalar c) {
  const Scalar p = detail::clamp_nonneg((c - a + b) * (c + a - b), "flat_angle: side c below |a-b|");
  const Scalar q = detail::clamp_nonneg((a + b - c) * (a + b + c), "flat_angle: side c exceeds a+b");
  return 2 * std::atan2(std::sqrt(p), std::sqrt(q));
}

// Spherical angle from sides:
//   sin a sin b sin^2(gamma/2) = sin((c+a-b)/2) sin((c-a+b)/2)
//   sin a sin b cos^2(gamma/2) = sin((a+b+c)/2) sin((a+b-c)/2)
template <typename Scalar>
Scalar sphere_angle(Scalar a, Scalar b, Scalar c) {
  const Scalar p = detail::clamp_nonneg(std::sin((c + a - b) / 2) * std::sin((c - a + b) / 2),
                                        "sphere_angle: side c below |a-b|");
  const Scalar q = detail::clamp_nonneg(std::sin((a + b + c) / 2) * std::sin((a + b - c) / 2),
                                        "sphere_angle: side c exceeds a+b or perimeter >= 2*pi");
  return 2 * std::atan2(std::sqrt(p), std::sqrt(q));
}

// Hyperbolic angle from sides, same split with sinh.
template <typename Scalar>
Scalar hyperbolic_angle(Scalar a, Scalar b, Scalar c) {
  const Scalar p = detail::clamp_nonneg(std::sinh((c + a - b) / 2) * std::sinh((c - a + b) / 2),
                                        "hyperbolic_angle: side c below |a-b|");
  const Scalar q = detail::clamp_nonneg(std::sinh((a + b + c) / 2) * std::sinh((a + b - c) / 2),
                                        "hyperbolic_angle: side c exceeds a+b");
  return 2 * std::atan2(std::sqrt(p), std::sqrt(q));
}

// arccos with a tolerance-guarded clamp: drift beyond 1e-9 outside [-1,1]
// is treated as a bug in the caller, not silently fixed.
double safe_acos(double x);

// ---------------------------------------------------------------------------
// Points and coordinate-level helpers

// A point of the model space M^k(kappa):
//   kappa = 0: Euclidean coordinates in R^k,
//   kappa > 0: coordinates on the sphere of radius 1/sqrt(kappa) in R^{k+1},
//   kappa < 0: hyperboloid coordinates in R^{k+1}, Lorentz signature
//              (-,+,...,+) with the time coordinate first and
//              <x,x> = -1/|kappa|, x_0 > 0.
struct ModelPoint {
  Eigen::VectorXd coords;

  ModelPoint() = default;
  explicit ModelPoint(Eigen::VectorXd c) : coords(std::move(c)) {}
};

// Lorentz bilinear form with signature (-,+,...,+).
double lorentz_dot(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Unit-model distances on explicit coordinates.
double unit_sphere_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double unit_hyperboloid_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Geodesic interpolation on explicit unit-model coordinates; t in [0,1].
Eigen::VectorXd unit_sphere_geodesic(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t);
Eigen::VectorXd unit_hyperboloid_geodesic(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t);

// Validates the model constraint of p for the given curvature (1e-12
// relative tolerance). Throws InvalidInput on violation.
void validate_model_point(const Curvature& curv, const ModelPoint& p);

// ---------------------------------------------------------------------------
// Model operations

double model_distance(const Curvature& curv, const ModelPoint& p, const ModelPoint& q);

ModelPoint model_geodesic_point(const Curvature& curv, const ModelPoint& p, const ModelPoint& q,
                                double t);

// Side opposite gamma in the M^2(kappa) triangle with adjacent sides a, b.
double side_from_angle(const Curvature& curv, double a, double b, double gamma);

// Angle between the sides a and b (opposite side c) in M^2(kappa).
double comparison_angle(const Curvature& curv, double a, double b, double c);

// A triangle in M^2(kappa) realizing three side lengths, with canonical
// vertex placement so equal inputs give bit-identical output.
struct ComparisonTriangle {
  Curvature curvature;
  double side_01 = 0, side_12 = 0, side_20 = 0;  // d(v0,v1), d(v1,v2), d(v2,v0)
  double angle_0 = 0, angle_1 = 0, angle_2 = 0;  // vertex angles
  ModelPoint v0, v1, v2;
};

// Canonical placement: v0 at the origin (pole for kappa != 0), v1 along the
// first axis/meridian, v2 in the upper half-plane.
ComparisonTriangle build_comparison_triangle(const Curvature& curv, double d01, double d12,
                                             double d20);

// A closed polygonal curve on the unit sphere (kappa = +1); consecutive
// vertices joined by minor great-circle arcs, last vertex joined to first.
struct SphericalCurve {
  std::vector<ModelPoint> vertices;

  double total_length() const;
};

// Center of a hemisphere containing a closed spherical curve of length
// < 2*pi. Constructive: take the curve point x at arclength 0 and the point
// x' at arclength L/2, return the midpoint of the geodesic [x, x'].  Every
// point of the curve then lies strictly within distance pi/2 of the result.
ModelPoint hemisphere_center(const SphericalCurve& curve);

}  // namespace catk
