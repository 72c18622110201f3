#include "catk/model.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace catk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kConstraintTol = 1e-12;
// Threshold (in radians on the unit model) below which kappa>0 endpoints are
// reported as antipodal rather than interpolated.
constexpr double kAntipodalTol = 1e-9;
}  // namespace

Curvature Curvature::spherical(double k) {
  if (!(k > 0.0)) throw InvalidInput("Curvature::spherical: kappa must be positive");
  return Curvature{k};
}

Curvature Curvature::hyperbolic(double k) {
  if (!(k < 0.0)) throw InvalidInput("Curvature::hyperbolic: kappa must be negative");
  return Curvature{k};
}

double Curvature::model_diameter() const {
  if (kappa > 0.0) return kPi / std::sqrt(kappa);
  return std::numeric_limits<double>::infinity();
}

double safe_acos(double x) {
  if (x > 1.0 || x < -1.0) {
    if (x > 1.0 + 1e-9 || x < -1.0 - 1e-9)
      throw MathDomainError("safe_acos: cosine argument " + std::to_string(x) +
                            " outside [-1,1] beyond tolerance");
    x = std::clamp(x, -1.0, 1.0);
  }
  return std::acos(x);
}

double lorentz_dot(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size() || u.size() < 2)
    throw InvalidInput("lorentz_dot: dimension mismatch");
  return -u(0) * v(0) + u.tail(u.size() - 1).dot(v.tail(v.size() - 1));
}

double unit_sphere_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  // theta = 2 atan2(|u-v|, |u+v|); exact at both ends of [0, pi].
  return 2.0 * std::atan2((u - v).norm(), (u + v).norm());
}

double unit_hyperboloid_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  // The Lorentz quadrance of u-v is 2(cosh d - 1) = 4 sinh^2(d/2) and is
  // computed by coordinate differencing, so no cancellation near d = 0.
  const Eigen::VectorXd w = u - v;
  const double q = std::max(0.0, lorentz_dot(w, w));
  return 2.0 * std::asinh(0.5 * std::sqrt(q));
}

Eigen::VectorXd unit_sphere_geodesic(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double t) {
  const double theta = unit_sphere_distance(u, v);
  if (theta >= kPi - kAntipodalTol)
    throw MathDomainError("unit_sphere_geodesic: endpoints are (numerically) antipodal");
  if (theta < 1e-300) return u;
  const double s = std::sin(theta);
  Eigen::VectorXd out = (std::sin((1.0 - t) * theta) / s) * u + (std::sin(t * theta) / s) * v;
  out.normalize();
  return out;
}

Eigen::VectorXd unit_hyperboloid_geodesic(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                          double t) {
  const double d = unit_hyperboloid_distance(u, v);
  if (d < 1e-300) return u;
  const double s = std::sinh(d);
  Eigen::VectorXd out = (std::sinh((1.0 - t) * d) / s) * u + (std::sinh(t * d) / s) * v;
  // Re-project onto the hyperboloid to shed rounding drift.
  const double nn = -lorentz_dot(out, out);
  if (nn > 0.0) out /= std::sqrt(nn);
  return out;
}

void validate_model_point(const Curvature& curv, const ModelPoint& p) {
  const int s = curv.sign();
  if (s == 0) {
    if (p.coords.size() < 1) throw InvalidInput("model point: empty coordinates");
    return;
  }
  if (p.coords.size() < 2)
    throw InvalidInput("model point: curved models need ambient dimension >= 2");
  const double r2 = 1.0 / std::abs(curv.kappa);
  if (s > 0) {
    const double err = std::abs(p.coords.squaredNorm() - r2);
    if (err > 64 * kConstraintTol * r2 + 64 * kConstraintTol)
      throw InvalidInput("model point: not on the sphere of radius 1/sqrt(kappa)");
  } else {
    const double err = std::abs(lorentz_dot(p.coords, p.coords) + r2);
    if (err > 64 * kConstraintTol * r2 + 64 * kConstraintTol)
      throw InvalidInput("model point: hyperboloid constraint violated");
    if (p.coords(0) <= 0.0) throw InvalidInput("model point: not on the future hyperboloid sheet");
  }
}

namespace {
void check_pair(const Curvature& curv, const ModelPoint& p, const ModelPoint& q) {
  if (p.coords.size() != q.coords.size())
    throw InvalidInput("model points: dimension mismatch");
  validate_model_point(curv, p);
  validate_model_point(curv, q);
}
}  // namespace

double model_distance(const Curvature& curv, const ModelPoint& p, const ModelPoint& q) {
  check_pair(curv, p, q);
  const int s = curv.sign();
  if (s == 0) return (p.coords - q.coords).norm();
  const double scale = curv.scale();
  if (s > 0) return unit_sphere_distance(scale * p.coords, scale * q.coords) / scale;
  return unit_hyperboloid_distance(scale * p.coords, scale * q.coords) / scale;
}

ModelPoint model_geodesic_point(const Curvature& curv, const ModelPoint& p, const ModelPoint& q,
                                double t) {
  check_pair(curv, p, q);
  if (t < 0.0 || t > 1.0)
    throw InvalidInput("model_geodesic_point: parameter t outside [0,1]");
  const int s = curv.sign();
  if (s == 0) return ModelPoint{(1.0 - t) * p.coords + t * q.coords};
  const double scale = curv.scale();
  if (s > 0)
    return ModelPoint{unit_sphere_geodesic(scale * p.coords, scale * q.coords, t) / scale};
  return ModelPoint{unit_hyperboloid_geodesic(scale * p.coords, scale * q.coords, t) / scale};
}

double side_from_angle(const Curvature& curv, double a, double b, double gamma) {
  if (a < 0 || b < 0) throw MathDomainError("side_from_angle: negative side length");
  if (gamma < 0 || gamma > kPi) throw MathDomainError("side_from_angle: angle outside [0,pi]");
  const int s = curv.sign();
  if (s == 0) return flat_side(a, b, gamma);
  const double scale = curv.scale();
  if (s > 0) {
    if (a * scale > kPi || b * scale > kPi)
      throw MathDomainError("side_from_angle: side exceeds the model diameter");
    return sphere_side(a * scale, b * scale, gamma) / scale;
  }
  return hyperbolic_side(a * scale, b * scale, gamma) / scale;
}

double comparison_angle(const Curvature& curv, double a, double b, double c) {
  if (a <= 0 || b <= 0)
    throw MathDomainError("comparison_angle: degenerate triangle (a or b is zero)");
  if (c < 0) throw MathDomainError("comparison_angle: negative side length");
  const int s = curv.sign();
  if (s == 0) return flat_angle(a, b, c);
  const double scale = curv.scale();
  if (s > 0) {
    if ((a + b + c) * scale >= 2.0 * kPi)
      throw MathDomainError("comparison_angle: perimeter >= 2*pi/sqrt(kappa)");
    return sphere_angle(a * scale, b * scale, c * scale);
  }
  return hyperbolic_angle(a * scale, b * scale, c * scale);
}

ComparisonTriangle build_comparison_triangle(const Curvature& curv, double d01, double d12,
                                             double d20) {
  ComparisonTriangle tri;
  tri.curvature = curv;
  tri.side_01 = d01;
  tri.side_12 = d12;
  tri.side_20 = d20;
  tri.angle_0 = comparison_angle(curv, d01, d20, d12);
  tri.angle_1 = comparison_angle(curv, d01, d12, d20);
  tri.angle_2 = comparison_angle(curv, d12, d20, d01);

  const int s = curv.sign();
  const double phi = tri.angle_0;
  if (s == 0) {
    tri.v0 = ModelPoint{Eigen::Vector2d(0.0, 0.0)};
    tri.v1 = ModelPoint{Eigen::Vector2d(d01, 0.0)};
    tri.v2 = ModelPoint{Eigen::Vector2d(d20 * std::cos(phi), d20 * std::sin(phi))};
    return tri;
  }
  const double scale = curv.scale();
  const double a = d01 * scale;  // colatitude of v1
  const double c = d20 * scale;  // colatitude of v2
  Eigen::Vector3d v0u(0.0, 0.0, 1.0);
  Eigen::Vector3d v1u, v2u;
  if (s > 0) {
    v1u = Eigen::Vector3d(std::sin(a), 0.0, std::cos(a));
    v2u = Eigen::Vector3d(std::sin(c) * std::cos(phi), std::sin(c) * std::sin(phi), std::cos(c));
    tri.v0 = ModelPoint{v0u / scale};
    tri.v1 = ModelPoint{v1u / scale};
    tri.v2 = ModelPoint{v2u / scale};
  } else {
    // Hyperboloid with time coordinate first: pole (1,0,0).
    Eigen::Vector3d p0(1.0, 0.0, 0.0);
    Eigen::Vector3d p1(std::cosh(a), std::sinh(a), 0.0);
    Eigen::Vector3d p2(std::cosh(c), std::sinh(c) * std::cos(phi), std::sinh(c) * std::sin(phi));
    tri.v0 = ModelPoint{p0 / scale};
    tri.v1 = ModelPoint{p1 / scale};
    tri.v2 = ModelPoint{p2 / scale};
  }
  return tri;
}

double SphericalCurve::total_length() const {
  if (vertices.size() < 2) return 0.0;
  double len = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) {
    const auto& u = vertices[i].coords;
    const auto& v = vertices[(i + 1) % vertices.size()].coords;
    len += unit_sphere_distance(u, v);
  }
  return len;
}

ModelPoint hemisphere_center(const SphericalCurve& curve) {
  const Curvature unit = Curvature::spherical(1.0);
  if (curve.vertices.size() < 2) throw InvalidInput("hemisphere_center: need at least 2 vertices");
  for (const auto& v : curve.vertices) validate_model_point(unit, v);

  const size_t m = curve.vertices.size();
  std::vector<double> edge_len(m);
  double total = 0.0;
  for (size_t i = 0; i < m; ++i) {
    edge_len[i] =
        unit_sphere_distance(curve.vertices[i].coords, curve.vertices[(i + 1) % m].coords);
    total += edge_len[i];
  }
  if (total >= 2.0 * kPi)
    throw MathDomainError("hemisphere_center: curve length >= 2*pi");
  if (total <= 0.0) return curve.vertices[0];

  // x = arclength 0 (first vertex); x' = point at arclength total/2,
  // located piecewise-linearly in the edge parameterization.
  const Eigen::VectorXd x = curve.vertices[0].coords;
  double target = 0.5 * total;
  Eigen::VectorXd xp = x;
  for (size_t i = 0; i < m; ++i) {
    if (target <= edge_len[i] || i + 1 == m) {
      const double f = edge_len[i] > 0.0 ? std::min(1.0, target / edge_len[i]) : 0.0;
      xp = unit_sphere_geodesic(curve.vertices[i].coords, curve.vertices[(i + 1) % m].coords, f);
      break;
    }
    target -= edge_len[i];
  }

  const double d = unit_sphere_distance(x, xp);
  if (d >= kPi - kAntipodalTol)
    throw MathDomainError("hemisphere_center: bisection points are numerically antipodal");
  return ModelPoint{unit_sphere_geodesic(x, xp, 0.5)};
}

}  // namespace catk
