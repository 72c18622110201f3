#include <doctest.h>

#include "catk/model.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

using namespace catk;

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::Vector3d sph(double colat, double lon) {
  return {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon), std::cos(colat)};
}

// Independent minimax-center oracle: dense direction grid on S^2.
Eigen::Vector3d fibonacci_dir(int i, int n) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double z = 1.0 - (2.0 * i + 1.0) / n;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * kPi * i / golden;
  return {r * std::cos(phi), r * std::sin(phi), z};
}
}  // namespace

TEST_CASE("curvature classification and diameter") {
  CHECK(Curvature::flat().sign() == 0);
  CHECK(Curvature::spherical(4.0).sign() == 1);
  CHECK(Curvature::hyperbolic(-1.0).sign() == -1);
  CHECK(Curvature::spherical(4.0).scale() == doctest::Approx(2.0));
  CHECK(Curvature::spherical(4.0).model_diameter() == doctest::Approx(kPi / 2.0));
  CHECK(std::isinf(Curvature::flat().model_diameter()));
  CHECK_THROWS_AS(Curvature::spherical(-1.0), InvalidInput);
}

TEST_CASE("model_distance on the three models") {
  const Curvature flat = Curvature::flat();
  CHECK(model_distance(flat, ModelPoint{Eigen::Vector2d(0, 0)}, ModelPoint{Eigen::Vector2d(3, 4)}) ==
        doctest::Approx(5.0).epsilon(1e-14));

  const Curvature sphere = Curvature::spherical(1.0);
  const ModelPoint pole{Eigen::Vector3d(0, 0, 1)};
  const ModelPoint equator{Eigen::Vector3d(1, 0, 0)};
  CHECK(model_distance(sphere, pole, equator) == doctest::Approx(kPi / 2).epsilon(1e-14));

  // Hyperboloid pair with Lorentz product -cosh(1); oracle: arccosh.
  const Curvature hyp = Curvature::hyperbolic(-1.0);
  const ModelPoint h0{Eigen::Vector3d(1, 0, 0)};
  const ModelPoint h1{Eigen::Vector3d(std::cosh(1.0), std::sinh(1.0), 0)};
  CHECK(lorentz_dot(h0.coords, h1.coords) == doctest::Approx(-std::cosh(1.0)));
  CHECK(model_distance(hyp, h0, h1) == doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("symmetry, identity, and bound") {
    CHECK(model_distance(hyp, h1, h0) == model_distance(hyp, h0, h1));
    CHECK(model_distance(sphere, pole, pole) == 0.0);
    CHECK(model_distance(sphere, pole, ModelPoint{Eigen::Vector3d(0, 0, -1)}) <=
          sphere.model_diameter() + 1e-15);
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(model_distance(flat, ModelPoint{Eigen::Vector2d(0, 0)},
                                   ModelPoint{Eigen::Vector3d(0, 0, 0)}),
                    InvalidInput);
    CHECK_THROWS_AS(model_distance(sphere, ModelPoint{Eigen::Vector3d(0, 0, 2)}, pole),
                    InvalidInput);
    CHECK_THROWS_AS(
        model_distance(hyp, ModelPoint{Eigen::Vector3d(-1, 0, 0)}, h0),  // past sheet
        InvalidInput);
  }
}

TEST_CASE("model_geodesic_point satisfies distance post-conditions") {
  const Curvature flat = Curvature::flat();
  const ModelPoint a{Eigen::Vector2d(0, 0)};
  const ModelPoint b{Eigen::Vector2d(2, 0)};
  CHECK(model_geodesic_point(flat, a, b, 0.5).coords.isApprox(Eigen::Vector2d(1, 0)));

  const Curvature sphere = Curvature::spherical(1.0);
  const ModelPoint pole{Eigen::Vector3d(0, 0, 1)};
  const ModelPoint eq{Eigen::Vector3d(1, 0, 0)};
  const ModelPoint mid = model_geodesic_point(sphere, pole, eq, 0.5);
  CHECK(mid.coords.isApprox(sph(kPi / 4, 0.0), 1e-12));

  const Curvature hyp = Curvature::hyperbolic(-1.0);
  const ModelPoint h0{Eigen::Vector3d(std::cosh(0.3), 0, std::sinh(0.3))};
  const ModelPoint h1{Eigen::Vector3d(std::cosh(1.7), std::sinh(1.7), 0)};
  const ModelPoint g = model_geodesic_point(hyp, h0, h1, 0.3);
  const double d = model_distance(hyp, h0, h1);
  CHECK(model_distance(hyp, h0, g) == doctest::Approx(0.3 * d).epsilon(1e-10));
  CHECK(model_distance(hyp, g, h1) == doctest::Approx(0.7 * d).epsilon(1e-10));

  SUBCASE("antipodal and bad t errors") {
    CHECK_THROWS_AS(model_geodesic_point(sphere, pole, ModelPoint{Eigen::Vector3d(0, 0, -1)}, 0.5),
                    MathDomainError);
    CHECK_THROWS_AS(model_geodesic_point(flat, a, b, 1.5), InvalidInput);
  }
}

TEST_CASE("side_from_angle examples") {
  CHECK(side_from_angle(Curvature::flat(), 3, 4, kPi / 2) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(side_from_angle(Curvature::spherical(1.0), kPi / 2, kPi / 2, kPi / 2) ==
        doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(side_from_angle(Curvature::hyperbolic(-1.0), 1, 1, kPi) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(side_from_angle(Curvature::flat(), -1, 1, 1), MathDomainError);
  CHECK_THROWS_AS(side_from_angle(Curvature::spherical(1.0), 4.0, 1, 1), MathDomainError);
}

TEST_CASE("comparison_angle examples and error reporting") {
  CHECK(comparison_angle(Curvature::flat(), 3, 4, 5) == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(comparison_angle(Curvature::flat(), 1, 1, 1) == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK(comparison_angle(Curvature::spherical(1.0), kPi / 2, kPi / 2, kPi / 2) ==
        doctest::Approx(kPi / 2).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(comparison_angle(Curvature::flat(), 1, 1, 3) == 0.0,
                       "flat_angle: side c exceeds a+b", MathDomainError);
  CHECK_THROWS_WITH_AS(comparison_angle(Curvature::flat(), 1, 3, 1) == 0.0,
                       "flat_angle: side c below |a-b|", MathDomainError);
  CHECK_THROWS_AS(comparison_angle(Curvature::flat(), 0, 1, 1), MathDomainError);
  CHECK_THROWS_AS(comparison_angle(Curvature::spherical(1.0), 2.5, 2.5, 1.5), MathDomainError);
}

TEST_CASE("round trip side_from_angle <-> comparison_angle across curvatures") {
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> side(0.02, 1.4);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  const Curvature curvs[3] = {Curvature::hyperbolic(-1.0), Curvature::flat(),
                              Curvature::spherical(1.0)};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = side(rng), b = side(rng), gamma = ang(rng);
    for (const auto& k : curvs) {
      const double c = side_from_angle(k, a, b, gamma);
      if (c < 1e-12) continue;  // gamma ~ 0 with a ~ b: angle is ill-posed at c = 0
      const double back = comparison_angle(k, a, b, c);
      worst = std::max(worst, std::abs(back - gamma));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("comparison angle is monotone in curvature for fixed sides") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> side(0.05, 1.2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = side(rng), b = side(rng);
    const double lo = std::abs(a - b), hi = a + b;
    const double c = lo + (hi - lo) * unif(rng);
    if (c < 1e-6 || hi - c < 1e-6) continue;
    const double hyp = comparison_angle(Curvature::hyperbolic(-1.0), a, b, c);
    const double flt = comparison_angle(Curvature::flat(), a, b, c);
    const double sph_angle = comparison_angle(Curvature::spherical(1.0), a, b, c);
    CHECK(hyp <= flt + 1e-12);
    CHECK(flt <= sph_angle + 1e-12);
  }
}

TEST_CASE("flat kernels scale homogeneously") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> side(0.1, 2.0);
  std::uniform_real_distribution<double> ang(0.05, kPi - 0.05);
  for (int i = 0; i < 200; ++i) {
    const double a = side(rng), b = side(rng), gamma = ang(rng);
    const double lambda = 0.25 + 4.0 * side(rng);
    const double c = side_from_angle(Curvature::flat(), a, b, gamma);
    const double cs = side_from_angle(Curvature::flat(), lambda * a, lambda * b, gamma);
    CHECK(cs == doctest::Approx(lambda * c).epsilon(1e-12));
    CHECK(comparison_angle(Curvature::flat(), lambda * a, lambda * b, lambda * c) ==
          doctest::Approx(gamma).epsilon(1e-11));
  }
}

TEST_CASE("build_comparison_triangle") {
  SUBCASE("flat right isoceles") {
    const auto tri = build_comparison_triangle(Curvature::flat(), 1.0, 1.0, std::sqrt(2.0));
    CHECK(tri.angle_1 == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(tri.angle_0 == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(tri.angle_2 == doctest::Approx(kPi / 4).epsilon(1e-12));
  }
  SUBCASE("flat equilateral") {
    const auto tri = build_comparison_triangle(Curvature::flat(), 2.0, 2.0, 2.0);
    for (double ang : {tri.angle_0, tri.angle_1, tri.angle_2})
      CHECK(ang == doctest::Approx(kPi / 3).epsilon(1e-12));
  }
  SUBCASE("realized distances match requested sides") {
    for (const Curvature& k :
         {Curvature::hyperbolic(-1.0), Curvature::flat(), Curvature::spherical(1.0)}) {
      const auto tri = build_comparison_triangle(k, 0.7, 0.8, 0.9);
      CHECK(model_distance(k, tri.v0, tri.v1) == doctest::Approx(0.7).epsilon(1e-10));
      CHECK(model_distance(k, tri.v1, tri.v2) == doctest::Approx(0.8).epsilon(1e-10));
      CHECK(model_distance(k, tri.v2, tri.v0) == doctest::Approx(0.9).epsilon(1e-10));
    }
  }
  SUBCASE("spherical excess matches l'Huilier") {
    const double a = 0.3, b = 0.4, c = 0.5;
    const auto tri = build_comparison_triangle(Curvature::spherical(1.0), a, b, c);
    const double s = (a + b + c) / 2;
    const double excess =
        4.0 * std::atan(std::sqrt(std::tan(s / 2) * std::tan((s - a) / 2) *
                                  std::tan((s - b) / 2) * std::tan((s - c) / 2)));
    const double sum = tri.angle_0 + tri.angle_1 + tri.angle_2;
    CHECK(sum > kPi);
    CHECK(sum == doctest::Approx(kPi + excess).epsilon(1e-12));
  }
  SUBCASE("deterministic placement is bit-identical") {
    const auto t1 = build_comparison_triangle(Curvature::spherical(1.0), 0.31, 0.47, 0.59);
    const auto t2 = build_comparison_triangle(Curvature::spherical(1.0), 0.31, 0.47, 0.59);
    CHECK(std::memcmp(t1.v2.coords.data(), t2.v2.coords.data(), 3 * sizeof(double)) == 0);
    CHECK(std::memcmp(t1.v1.coords.data(), t2.v1.coords.data(), 3 * sizeof(double)) == 0);
  }
}

TEST_CASE("hemisphere_center: symmetric 64-gon at colatitude pi/3") {
  SphericalCurve curve;
  for (int i = 0; i < 64; ++i) curve.vertices.push_back(ModelPoint{sph(kPi / 3, 2 * kPi * i / 64)});
  REQUIRE(curve.total_length() < 2 * kPi);
  const ModelPoint m = hemisphere_center(curve);
  CHECK((m.coords - Eigen::Vector3d(0, 0, 1)).norm() < 1e-9);
  double worst = 0.0;
  for (const auto& v : curve.vertices)
    worst = std::max(worst, unit_sphere_distance(m.coords, v.coords));
  CHECK(worst == doctest::Approx(kPi / 3).epsilon(1e-9));
  CHECK(worst < kPi / 2);
}

TEST_CASE("hemisphere_center: doubled segment") {
  const double L = 0.8;
  SphericalCurve curve;
  curve.vertices.push_back(ModelPoint{sph(0.0, 0.0)});
  curve.vertices.push_back(ModelPoint{sph(L, 0.0)});
  const ModelPoint m = hemisphere_center(curve);
  CHECK((m.coords - sph(L / 2, 0.0)).norm() < 1e-12);
  double worst = 0.0;
  for (const auto& v : curve.vertices)
    worst = std::max(worst, unit_sphere_distance(m.coords, v.coords));
  CHECK(worst == doctest::Approx(L / 2).epsilon(1e-12));
}

namespace {
SphericalCurve random_short_curve(std::mt19937_64& rng, int n_vertices, double max_length) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    std::vector<Eigen::Vector3d> raw(n_vertices);
    for (auto& v : raw) {
      do {
        v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
      } while (v.norm() < 1e-6);
      v.normalize();
    }
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& v : raw) center += v;
    if (center.norm() < 1e-3) continue;
    center.normalize();
    double lambda = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
      SphericalCurve curve;
      bool degenerate = false;
      for (const auto& v : raw) {
        const double theta = unit_sphere_distance(center, v);
        if (theta >= kPi - 1e-6) {
          degenerate = true;
          break;
        }
        curve.vertices.push_back(
            ModelPoint{unit_sphere_geodesic(center, v, lambda)});
      }
      if (!degenerate && curve.total_length() < max_length && curve.total_length() > 1e-3)
        return curve;
      lambda *= 0.85;
    }
  }
}
}  // namespace

TEST_CASE("hemisphere_center: random short curve with grid-search oracle") {
  std::mt19937_64 rng(123456);
  // Shoot for a length close to the 5.8 regime: long but below 2*pi.
  SphericalCurve curve = random_short_curve(rng, 9, 5.8);
  const ModelPoint m = hemisphere_center(curve);
  double ours = 0.0;
  for (const auto& v : curve.vertices)
    ours = std::max(ours, unit_sphere_distance(m.coords, v.coords));
  CHECK(ours < kPi / 2);

  // Oracle: dense grid search for the minimax spherical center.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20000; ++i) {
    const Eigen::Vector3d dir = fibonacci_dir(i, 20000);
    double worst = 0.0;
    for (const auto& v : curve.vertices)
      worst = std::max(worst, unit_sphere_distance(dir, v.coords));
    best = std::min(best, worst);
  }
  CHECK(best < kPi / 2);   // containment is achievable
  CHECK(ours >= best - 1e-3);  // grid oracle lower-bounds any valid center
}

TEST_CASE("hemisphere_center: containment property on random short curves") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> nv(3, 12);
  for (int trial = 0; trial < 100; ++trial) {
    SphericalCurve curve = random_short_curve(rng, nv(rng), 2 * kPi - 0.05);
    const ModelPoint m = hemisphere_center(curve);
    for (const auto& v : curve.vertices)
      CHECK(unit_sphere_distance(m.coords, v.coords) < kPi / 2);
  }
}

TEST_CASE("hemisphere_center: rejects long curves") {
  // Two laps around the equator: length 4*pi.
  SphericalCurve curve;
  for (int lap = 0; lap < 2; ++lap)
    for (int i = 0; i < 64; ++i)
      curve.vertices.push_back(ModelPoint{sph(kPi / 2, 2 * kPi * i / 64)});
  CHECK(curve.total_length() > 2 * kPi);
  CHECK_THROWS_AS(hemisphere_center(curve), MathDomainError);
}
