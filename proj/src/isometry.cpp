#include "catk/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace catk {

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd lorentz_metric(int n) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  d(0) = -1.0;
  return d.asDiagonal();
}

std::vector<int> proper_divisors(int n) {
  std::vector<int> out;
  for (int m = 1; m < n; ++m)
    if (n % m == 0) out.push_back(m);
  return out;
}
}  // namespace

Isometry Isometry::orthogonal(SpaceRef space, Eigen::MatrixXd matrix, int order) {
  const auto* euc = dynamic_cast<const EuclideanSpace*>(space.get());
  if (!euc) throw InvalidInput("Isometry::orthogonal: space is not Euclidean");
  if (matrix.rows() != euc->dim() || matrix.cols() != euc->dim())
    throw InvalidInput("Isometry::orthogonal: matrix dimension mismatch");
  if ((matrix.transpose() * matrix - Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw InvalidInput("Isometry::orthogonal: matrix is not orthogonal");
  Isometry g(Kind::Orthogonal, std::move(space), order);
  g.matrix_ = std::move(matrix);
  g.certify();
  return g;
}

Isometry Isometry::lorentz(SpaceRef space, Eigen::MatrixXd matrix, int order) {
  const auto* hyp = dynamic_cast<const HyperbolicSpace*>(space.get());
  if (!hyp) throw InvalidInput("Isometry::lorentz: space is not hyperbolic");
  const int n = hyp->dim() + 1;
  if (matrix.rows() != n || matrix.cols() != n)
    throw InvalidInput("Isometry::lorentz: matrix dimension mismatch");
  const Eigen::MatrixXd J = lorentz_metric(n);
  if ((matrix.transpose() * J * matrix - J).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidInput("Isometry::lorentz: matrix does not preserve the Lorentz form");
  if (matrix(0, 0) <= 0.0)
    throw InvalidInput("Isometry::lorentz: matrix is not orthochronous");
  Isometry g(Kind::Lorentz, std::move(space), order);
  g.matrix_ = std::move(matrix);
  g.certify();
  return g;
}

Isometry Isometry::sphere_rotation(SpaceRef space, Eigen::MatrixXd matrix, int order) {
  const auto* sph = dynamic_cast<const SphereSpace*>(space.get());
  if (!sph) throw InvalidInput("Isometry::sphere_rotation: space is not a sphere");
  const int n = sph->dim() + 1;
  if (matrix.rows() != n || matrix.cols() != n)
    throw InvalidInput("Isometry::sphere_rotation: matrix dimension mismatch");
  if ((matrix.transpose() * matrix - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() >
      1e-10)
    throw InvalidInput("Isometry::sphere_rotation: matrix is not orthogonal");
  Isometry g(Kind::SphereRotation, std::move(space), order);
  g.matrix_ = std::move(matrix);
  g.certify();
  return g;
}

Isometry Isometry::tree_automorphism(SpaceRef space, std::vector<int> vertex_perm, int order) {
  const auto* tree = dynamic_cast<const MetricTree*>(space.get());
  if (!tree) throw InvalidInput("Isometry::tree_automorphism: space is not a tree");
  const int n = tree->vertex_count();
  if (static_cast<int>(vertex_perm.size()) != n)
    throw InvalidInput("Isometry::tree_automorphism: permutation size mismatch");
  std::vector<char> seen(n, 0);
  for (int v : vertex_perm) {
    if (v < 0 || v >= n || seen[v])
      throw InvalidInput("Isometry::tree_automorphism: not a permutation");
    seen[v] = 1;
  }
  // Edge compatibility: every edge must map to an edge of equal length.
  std::vector<std::pair<int, bool>> edge_map(tree->edge_count(), {-1, false});
  const auto& edges = tree->edges();
  for (size_t e = 0; e < edges.size(); ++e) {
    const int iu = vertex_perm[edges[e].u];
    const int iv = vertex_perm[edges[e].v];
    bool found = false;
    for (size_t f = 0; f < edges.size(); ++f) {
      if (edges[f].u == iu && edges[f].v == iv) {
        edge_map[e] = {static_cast<int>(f), false};
        found = true;
      } else if (edges[f].u == iv && edges[f].v == iu) {
        edge_map[e] = {static_cast<int>(f), true};
        found = true;
      }
      if (found) {
        if (std::abs(edges[f].length - edges[e].length) > 1e-12)
          throw InvalidInput("Isometry::tree_automorphism: edge lengths not preserved");
        break;
      }
    }
    if (!found) throw InvalidInput("Isometry::tree_automorphism: permutation breaks adjacency");
  }
  Isometry g(Kind::TreeAutomorphism, std::move(space), order);
  g.perm_ = std::move(vertex_perm);
  g.edge_map_ = std::move(edge_map);
  g.certify();
  return g;
}

Isometry Isometry::product(SpaceRef space, std::vector<Isometry> components, int order) {
  const auto* prod = dynamic_cast<const ProductSpace*>(space.get());
  if (!prod) throw InvalidInput("Isometry::product: space is not a product");
  if (static_cast<int>(components.size()) != prod->factor_count())
    throw InvalidInput("Isometry::product: component count mismatch");
  for (int i = 0; i < prod->factor_count(); ++i)
    if (!components[i].space()->equals(*prod->factor_spaces()[i]))
      throw InvalidInput("Isometry::product: component acts on the wrong factor");
  Isometry g(Kind::Product, std::move(space), order);
  g.components_ = std::move(components);
  g.certify();
  return g;
}

Isometry Isometry::cone_map(SpaceRef space, Isometry base_map, int order) {
  const auto* cone = dynamic_cast<const ConeSpace*>(space.get());
  if (!cone) throw InvalidInput("Isometry::cone_map: space is not a cone");
  if (!base_map.space()->equals(*cone->base()))
    throw InvalidInput("Isometry::cone_map: base map acts on the wrong space");
  Isometry g(Kind::ConeMap, std::move(space), order);
  g.components_.push_back(std::move(base_map));
  g.certify();
  return g;
}

Point Isometry::apply(const Point& p) const {
  if (!p.space().equals(*space_)) throw InvalidInput("Isometry::apply: space mismatch");
  switch (kind_) {
    case Kind::Orthogonal:
      return Point(space_, Eigen::VectorXd(matrix_ * p.vec()));
    case Kind::Lorentz: {
      Eigen::VectorXd y = matrix_ * p.vec();
      const double nn = -lorentz_dot(y, y);
      if (nn > 0.0) y /= std::sqrt(nn);  // shed rounding drift
      return Point(space_, std::move(y));
    }
    case Kind::SphereRotation: {
      const auto* sph = static_cast<const SphereSpace*>(space_.get());
      Eigen::VectorXd y = matrix_ * p.vec();
      y *= sph->radius() / y.norm();
      return Point(space_, std::move(y));
    }
    case Kind::TreeAutomorphism: {
      const auto* tree = static_cast<const MetricTree*>(space_.get());
      const TreePos& tp = p.tree();
      const auto [image, flipped] = edge_map_[tp.edge];
      const double len = tree->edges()[image].length;
      return tree->edge_point(image, flipped ? len - tp.offset : tp.offset);
    }
    case Kind::Product: {
      const auto& comps = p.factors();
      std::vector<Point> out;
      out.reserve(comps.size());
      for (size_t i = 0; i < comps.size(); ++i) out.push_back(components_[i].apply(comps[i]));
      return Point(space_, std::move(out));
    }
    case Kind::ConeMap: {
      const auto* cone = static_cast<const ConeSpace*>(space_.get());
      const ConePos& cp = p.cone();
      if (cp.radius == 0.0) return cone->apex();
      return cone->point(cp.radius, components_[0].apply(*cp.base));
    }
  }
  throw InvalidInput("Isometry::apply: unknown kind");
}

Point Isometry::apply_power(const Point& p, int k) const {
  Point out = p;
  for (int i = 0; i < k; ++i) out = apply(out);
  return out;
}

void Isometry::certify(std::uint64_t seed) const {
  if (order_ < 1) throw InvalidInput("Isometry: order must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Point> probes;
  for (int i = 0; i < 32; ++i) probes.push_back(space_->sample_ball(rng, 1.0));

  // Distance preservation on consecutive probe pairs.
  for (size_t i = 0; i + 1 < probes.size(); ++i) {
    const double before = space_->distance(probes[i], probes[i + 1]);
    const double after = space_->distance(apply(probes[i]), apply(probes[i + 1]));
    if (std::abs(before - after) > 1e-10 * (1.0 + before))
      throw InvalidInput("Isometry: distances not preserved");
  }

  std::vector<double> max_move(order_ + 1, 0.0);
  for (const auto& p : probes) {
    Point q = p;
    for (int k = 1; k <= order_; ++k) {
      q = apply(q);
      max_move[k] = std::max(max_move[k], space_->distance(p, q));
    }
  }
  if (max_move[order_] > 1e-8)
    throw InvalidInput("Isometry: claimed order does not return points to themselves");
  for (int m : proper_divisors(order_)) {
    if (max_move[m] < 1e-8)
      throw InvalidInput("Isometry: a proper divisor power already acts as the identity");
  }
}

std::optional<Point> Isometry::closest_fixed_point(const Point& x) const {
  switch (kind_) {
    case Kind::Orthogonal:
    case Kind::SphereRotation:
    case Kind::Lorentz: {
      // Group averaging projects onto the fixed subspace; the isotypic
      // decomposition of a form-preserving map is orthogonal for that form,
      // so this is the metric projection in all three models.
      const int n = static_cast<int>(matrix_.rows());
      Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
      Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
      for (int k = 1; k < order_; ++k) {
        power = matrix_ * power;
        P += power;
      }
      P /= static_cast<double>(order_);
      Eigen::VectorXd y = P * x.vec();
      if (kind_ == Kind::Orthogonal) return Point(space_, std::move(y));
      if (kind_ == Kind::SphereRotation) {
        const auto* sph = static_cast<const SphereSpace*>(space_.get());
        if (y.norm() < 1e-9 * sph->radius()) return std::nullopt;
        y *= sph->radius() / y.norm();
        return Point(space_, std::move(y));
      }
      const double nn = -lorentz_dot(y, y);
      if (!(nn > 1e-18)) return std::nullopt;
      y /= std::sqrt(nn);
      if (y(0) < 0) y = -y;
      return Point(space_, std::move(y));
    }
    case Kind::TreeAutomorphism: {
      const auto* tree = static_cast<const MetricTree*>(space_.get());
      if (space_->distance(x, apply(x)) < 1e-12) return x;
      std::vector<Point> candidates;
      for (int v = 0; v < tree->vertex_count(); ++v)
        if (perm_[v] == v) candidates.push_back(tree->vertex_point(v));
      const auto& edges = tree->edges();
      for (size_t e = 0; e < edges.size(); ++e) {
        const auto [image, flipped] = edge_map_[e];
        if (image == static_cast<int>(e) && flipped)
          candidates.push_back(tree->edge_point(static_cast<int>(e), 0.5 * edges[e].length));
      }
      if (candidates.empty()) return std::nullopt;
      const Point* best = &candidates[0];
      double best_d = space_->distance(x, candidates[0]);
      for (const auto& c : candidates) {
        const double d = space_->distance(x, c);
        if (d < best_d) {
          best_d = d;
          best = &c;
        }
      }
      return *best;
    }
    case Kind::Product: {
      const auto& comps = x.factors();
      std::vector<Point> out;
      out.reserve(comps.size());
      for (size_t i = 0; i < comps.size(); ++i) {
        auto c = components_[i].closest_fixed_point(comps[i]);
        if (!c) return std::nullopt;
        out.push_back(std::move(*c));
      }
      return Point(space_, std::move(out));
    }
    case Kind::ConeMap: {
      const auto* cone = static_cast<const ConeSpace*>(space_.get());
      const ConePos& cp = x.cone();
      if (cp.radius == 0.0) return cone->apex();
      auto base_fix = components_[0].closest_fixed_point(*cp.base);
      if (!base_fix) return cone->apex();
      const double theta = cone->base()->distance(*cp.base, *base_fix);
      if (theta >= kPi / 2) return cone->apex();
      return cone->point(cp.radius * std::cos(theta), *base_fix);
    }
  }
  return std::nullopt;
}

std::vector<Point> orbit(const Isometry& g, const Point& x) {
  std::vector<Point> out;
  out.reserve(g.order());
  out.push_back(x);
  for (int i = 1; i < g.order(); ++i) out.push_back(g.apply(out.back()));
  return out;
}

namespace {

// Circumcenter of a g-orbit: the closest-fixed-point projection when it is
// available and equidistant, the general solver otherwise.
void orbit_center(const Isometry& g, const Point& x, const std::vector<Point>& orb,
                  OrbitReport& rep) {
  const SpaceRef& space = g.space();
  bool done = false;
  if (auto cf = g.closest_fixed_point(x)) {
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& p : orb) {
      const double d = space->distance(*cf, p);
      rmin = std::min(rmin, d);
      rmax = std::max(rmax, d);
    }
    if (rmax - rmin <= 1e-8 * (1.0 + rmax)) {
      rep.center = *cf;
      rep.radius = rmax;
      rep.center_method = "fixed-point-projection";
      done = true;
    }
  }
  if (!done) {
    auto res = circumcenter(space, orb);
    rep.center = res.center;
    rep.radius = res.radius;
    rep.center_method = res.method;
  }
  if (space->curvature_bound().sign() > 0) {
    const auto* sph = dynamic_cast<const SphereSpace*>(space.get());
    const double limit = 0.5 * kPi * (sph ? sph->radius() : 1.0);
    if (rep.radius >= limit)
      throw RadiusGuardError("orbit radius >= pi/(2 sqrt(kappa)); circumcenter not unique");
  }
  rep.center_invariance = space->distance(rep.center, g.apply(rep.center));
}

EqualityClass classify(double slack, const VerifyTolerances& tol) {
  if (std::abs(slack) < tol.equality_threshold) return EqualityClass::Equality;
  if (slack > tol.strict_threshold) return EqualityClass::Strict;
  return EqualityClass::Inconclusive;
}

bool is_vacuous(const Isometry& g, const Point& x) {
  const double scale = std::max(1.0, g.space()->distance(x, g.space()->basepoint()));
  return g.space()->distance(x, g.apply(x)) < 1e-12 * scale;
}

}  // namespace

OrbitReport verify_rotation_bound(const Isometry& g, const Point& x,
                                  const VerifyTolerances& tol) {
  if (g.order() < 3)
    throw InvalidInput("verify_rotation_bound: order must be >= 3");
  OrbitReport rep;
  rep.bound = 2.0 * kPi / g.order();
  rep.baseline = 1.0 / g.order();
  if (is_vacuous(g, x)) {
    rep.vacuous = true;
    rep.equality = EqualityClass::Vacuous;
    rep.pass = true;
    return rep;
  }
  rep.orbit_points = orbit(g, x);
  orbit_center(g, x, rep.orbit_points, rep);

  rep.angle = alexandrov_angle(rep.center, rep.orbit_points[0], rep.orbit_points[1]);
  rep.slack = rep.angle.value - rep.bound;
  rep.baseline_ok = rep.angle.value > rep.baseline;
  rep.equality = classify(rep.slack, tol);

  const double d1 = distance(rep.orbit_points[1], rep.orbit_points[0]);
  const double d2 = distance(g.apply(rep.orbit_points[1]), rep.orbit_points[0]);
  rep.chord_ratio = d2 / d1;
  rep.chord_bound = 2.0 * std::cos(kPi / g.order());
  rep.chord_slack = rep.chord_bound * d1 - d2;

  rep.pass = rep.slack >= -tol.verify && rep.baseline_ok;
  return rep;
}

OrbitReport verify_chord_inequality(const Isometry& g, const Point& x,
                                    const VerifyTolerances& tol) {
  if (g.order() < 4)
    throw InvalidInput(
        "verify_chord_inequality: order must be >= 4 (an order-3 orbit is an equilateral "
        "triangle)");
  if (g.space()->curvature_bound().kappa > 0.0)
    throw InvalidInput("verify_chord_inequality: requires a nonpositive curvature bound");
  OrbitReport rep;
  rep.bound = 2.0 * kPi / g.order();
  rep.baseline = 1.0 / g.order();
  rep.chord_bound = 2.0 * std::cos(kPi / g.order());
  if (is_vacuous(g, x)) {
    rep.vacuous = true;
    rep.equality = EqualityClass::Vacuous;
    rep.pass = true;
    return rep;
  }
  rep.orbit_points = orbit(g, x);
  const double d1 = distance(rep.orbit_points[1], rep.orbit_points[0]);
  const double d2 = distance(rep.orbit_points[2], rep.orbit_points[0]);
  rep.chord_ratio = d2 / d1;
  rep.chord_slack = rep.chord_bound * d1 - d2;
  rep.equality = classify(rep.chord_slack / d1, tol);
  rep.pass = rep.chord_slack >= -tol.verify * d1;

  orbit_center(g, x, rep.orbit_points, rep);
  if (rep.equality == EqualityClass::Equality) {
    rep.flat_check_ran = true;
    rep.flat_report = flat_ngon_check(rep.orbit_points, rep.center, tol.verify);
    rep.pass = rep.pass && rep.flat_report.flat;
  }
  return rep;
}

EqualityProbeReport equality_case_probe(const Isometry& g, const Point& x,
                                        const VerifyTolerances& tol) {
  EqualityProbeReport probe;
  const OrbitReport rep = verify_rotation_bound(g, x, tol);
  if (rep.vacuous || rep.equality != EqualityClass::Equality) return probe;  // declines
  probe.applicable = true;
  const int n = g.order();
  for (int i = 1; i < n; ++i) {
    const double measured =
        alexandrov_angle(rep.center, rep.orbit_points[0], rep.orbit_points[i]).value;
    const double expected = std::min(2.0 * kPi * i / n, 2.0 * kPi - 2.0 * kPi * i / n);
    probe.measured.push_back(measured);
    probe.expected.push_back(expected);
    probe.worst_dev = std::max(probe.worst_dev, std::abs(measured - expected));
  }
  probe.pass = probe.worst_dev < tol.signature;
  return probe;
}

TangentFlatReport tangent_flat_check(const std::vector<double>& signature, int n, double tol) {
  if (static_cast<int>(signature.size()) != n - 1)
    throw InvalidInput("tangent_flat_check: signature must have n-1 entries");
  TangentFlatReport rep;
  rep.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double sig = signature[(j - i) - 1];
      const double cone_d = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::cos(std::min(kPi, sig))));
      const double planar = 2.0 * std::sin(kPi * std::min(j - i, n - (j - i)) / n);
      rep.worst_dev = std::max(rep.worst_dev, std::abs(cone_d - planar));
    }
  rep.pass = rep.worst_dev < tol;
  return rep;
}

}  // namespace catk
