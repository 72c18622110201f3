#include "catk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace catk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Euclidean smallest enclosing ball (Welzl with move-to-front)

struct EBall {
  Eigen::VectorXd center;
  double radius = -1.0;  // negative: empty ball

  bool contains(const Eigen::VectorXd& p) const {
    if (radius < 0) return false;
    return (p - center).norm() <= radius * (1.0 + 1e-12) + 1e-13;
  }
};

EBall eball_from_support(const std::vector<const Eigen::VectorXd*>& sup) {
  EBall b;
  if (sup.empty()) return b;
  const Eigen::VectorXd& p0 = *sup[0];
  if (sup.size() == 1) {
    b.center = p0;
    b.radius = 0.0;
    return b;
  }
  const int m = static_cast<int>(sup.size());
  Eigen::MatrixXd A(p0.size(), m - 1);
  Eigen::VectorXd rhs(m - 1);
  for (int i = 1; i < m; ++i) {
    A.col(i - 1) = *sup[i] - p0;
    rhs(i - 1) = 0.5 * A.col(i - 1).squaredNorm();
  }
  // Equidistance conditions (p_i - p0) . (c - p0) = |p_i - p0|^2 / 2; the
  // least-squares solve also covers affinely dependent supports.
  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  b.center = p0 + A * lambda;
  b.radius = 0.0;
  for (const auto* p : sup) b.radius = std::max(b.radius, (*p - b.center).norm());
  return b;
}

EBall welzl_rec(std::vector<const Eigen::VectorXd*>& pts, int n,
                std::vector<const Eigen::VectorXd*>& sup, int cap) {
  if (n == 0 || static_cast<int>(sup.size()) == cap) return eball_from_support(sup);
  EBall b = welzl_rec(pts, n - 1, sup, cap);
  const Eigen::VectorXd* p = pts[n - 1];
  if (b.contains(*p)) return b;
  sup.push_back(p);
  b = welzl_rec(pts, n - 1, sup, cap);
  sup.pop_back();
  std::rotate(pts.begin(), pts.begin() + (n - 1), pts.begin() + n);
  return b;
}

EBall welzl(const std::vector<Eigen::VectorXd>& pts) {
  std::vector<const Eigen::VectorXd*> work(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) work[i] = &pts[i];
  // Deterministic shuffle; Welzl expects randomized order for its runtime.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::shuffle(work.begin(), work.end(), rng);
  std::vector<const Eigen::VectorXd*> sup;
  const int cap = static_cast<int>(pts[0].size()) + 1;
  EBall b = welzl_rec(work, static_cast<int>(work.size()), sup, cap);
  // Exact radius at the returned center.
  b.radius = 0.0;
  for (const auto& p : pts) b.radius = std::max(b.radius, (p - b.center).norm());
  return b;
}

// ---------------------------------------------------------------------------
// Hyperbolic (Lorentz) smallest enclosing ball

struct HBall {
  Eigen::VectorXd center;  // unit hyperboloid point
  double h = -1.0;         // cosh of the radius; negative: empty

  bool contains(const Eigen::VectorXd& x) const {
    if (h < 0) return false;
    return -lorentz_dot(center, x) <= h * (1.0 + 1e-12) + 1e-13;
  }
};

HBall hball_from_support(const std::vector<const Eigen::VectorXd*>& sup) {
  HBall b;
  if (sup.empty()) return b;
  const int m = static_cast<int>(sup.size());
  Eigen::MatrixXd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = lorentz_dot(*sup[i], *sup[j]);
  // Equal Lorentz products: center = sum a_i x_i with G a proportional to 1.
  const Eigen::VectorXd a =
      G.completeOrthogonalDecomposition().solve(Eigen::VectorXd::Ones(m));
  const double denom = a.sum();
  Eigen::VectorXd c;
  if (denom < -1e-300) {
    c = Eigen::VectorXd::Zero(sup[0]->size());
    for (int i = 0; i < m; ++i) c += a(i) * (*sup[i]);
    const double nn = -lorentz_dot(c, c);
    if (!(nn > 0.0)) {
      c = *sup[0];  // degenerate support; fall back to the first point
    } else {
      c /= std::sqrt(nn);
      if (c(0) < 0.0) c = -c;
    }
  } else {
    c = *sup[0];
  }
  b.center = c;
  b.h = 1.0;
  for (const auto* x : sup) b.h = std::max(b.h, -lorentz_dot(c, *x));
  return b;
}

HBall hwelzl_rec(std::vector<const Eigen::VectorXd*>& pts, int n,
                 std::vector<const Eigen::VectorXd*>& sup, int cap) {
  if (n == 0 || static_cast<int>(sup.size()) == cap) return hball_from_support(sup);
  HBall b = hwelzl_rec(pts, n - 1, sup, cap);
  const Eigen::VectorXd* p = pts[n - 1];
  if (b.contains(*p)) return b;
  sup.push_back(p);
  b = hwelzl_rec(pts, n - 1, sup, cap);
  sup.pop_back();
  std::rotate(pts.begin(), pts.begin() + (n - 1), pts.begin() + n);
  return b;
}

HBall hwelzl(const std::vector<Eigen::VectorXd>& pts) {
  std::vector<const Eigen::VectorXd*> work(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) work[i] = &pts[i];
  std::mt19937_64 rng(0x853c49e6748fea9bull);
  std::shuffle(work.begin(), work.end(), rng);
  std::vector<const Eigen::VectorXd*> sup;
  const int cap = static_cast<int>(pts[0].size());  // ambient dim = k+1
  return hwelzl_rec(work, static_cast<int>(work.size()), sup, cap);
}

// ---------------------------------------------------------------------------
// Generic minimax helpers

std::pair<int, double> farthest_point(const SpaceRef& space, const std::vector<Point>& pts,
                                      const Point& c) {
  int best_i = 0;
  double best_d = -1.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double d = space->distance(c, pts[i]);
    if (d > best_d) {  // strict: ties keep the smallest index
      best_d = d;
      best_i = static_cast<int>(i);
    }
  }
  return {best_i, best_d};
}

template <typename F>
double golden_section_min(F f, double lo, double hi, int iters, double* arg_min) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = (f1 <= f2) ? x1 : x2;
  if (arg_min) *arg_min = xm;
  return std::min(f1, f2);
}

CircumcenterResult iterative_circumcenter(const SpaceRef& space, const std::vector<Point>& pts,
                                          const CircumcenterOptions& opts) {
  CircumcenterResult res;
  res.method = "subgradient";

  // Seed with a sequential averaging pass.
  Point c = pts[0];
  for (size_t i = 1; i < pts.size(); ++i)
    c = space->geodesic(c, pts[i], 1.0 / static_cast<double>(i + 1));

  auto f_of = [&](const Point& p) { return farthest_point(space, pts, p).second; };

  // Phase 1: safeguarded move-toward-farthest with step fraction 1/(k+2).
  const int phase1 = std::min(opts.max_iter, 2000);
  std::vector<double> window;
  double r = f_of(c);
  int iters = 0;
  double window_change = std::numeric_limits<double>::infinity();
  for (int k = 0; k < phase1; ++k) {
    ++iters;
    const auto [fi, rk] = farthest_point(space, pts, c);
    r = rk;
    window.push_back(r);
    if (window.size() > 50) {
      window.erase(window.begin());
      window_change = std::abs(window.front() - window.back());
      if (window_change < opts.tol * 1e-2) break;
    }
    if (rk <= 0.0) break;
    const Point cand = space->geodesic(c, pts[fi], 1.0 / (k + 2.0));
    if (f_of(cand) <= r + opts.tol) c = cand;
  }

  // Phase 2: pattern polish with geodesic line searches toward the farthest
  // point, the midpoint of the two most separated active points, and an
  // averaged active-set target.
  double improvement = std::numeric_limits<double>::infinity();
  double delta = 0.1;
  int stall = 0;
  r = f_of(c);
  for (int round = 0; round < 600 && iters < opts.max_iter; ++round) {
    ++iters;
    std::vector<int> active;
    for (size_t i = 0; i < pts.size(); ++i)
      if (space->distance(c, pts[i]) >= r * (1.0 - delta) - 1e-15)
        active.push_back(static_cast<int>(i));

    std::vector<Point> targets;
    targets.push_back(pts[farthest_point(space, pts, c).first]);
    if (active.size() >= 2) {
      int ai = active[0], aj = active[1];
      double best = -1;
      for (size_t a = 0; a < active.size(); ++a)
        for (size_t b = a + 1; b < active.size(); ++b) {
          const double d = space->distance(pts[active[a]], pts[active[b]]);
          if (d > best) {
            best = d;
            ai = active[a];
            aj = active[b];
          }
        }
      targets.push_back(space->geodesic(pts[ai], pts[aj], 0.5));
      Point avg = pts[active[0]];
      for (size_t a = 1; a < active.size(); ++a)
        avg = space->geodesic(avg, pts[active[a]], 1.0 / static_cast<double>(a + 1));
      targets.push_back(avg);
    }

    double best_val = r;
    Point best_c = c;
    for (const Point& q : targets) {
      double arg = 0.0;
      const double val = golden_section_min(
          [&](double t) { return f_of(space->geodesic(c, q, t)); }, 0.0, 1.0, 36, &arg);
      if (val < best_val) {
        best_val = val;
        best_c = space->geodesic(c, q, arg);
      }
    }
    improvement = r - best_val;
    if (improvement > 0.0) {
      c = best_c;
      r = best_val;
    }
    if (improvement < opts.tol * 1e-2) {
      ++stall;
      delta *= 0.5;
      if (stall >= 4 && delta < 1e-12) break;
    } else {
      stall = 0;
    }
  }

  res.center = c;
  res.radius = f_of(c);
  res.iterations = iters;
  res.residual = std::min(window_change, std::max(improvement, 0.0));
  if (!(res.residual <= opts.tol) && iters >= opts.max_iter)
    throw ConvergenceError("circumcenter: iterative solve did not converge within max_iter");
  return res;
}

}  // namespace

EuclideanBall smallest_enclosing_ball(const std::vector<Eigen::VectorXd>& pts) {
  if (pts.empty()) throw InvalidInput("smallest_enclosing_ball: no points");
  const EBall b = welzl(pts);
  return EuclideanBall{b.center, b.radius};
}

CircumcenterResult circumcenter(const SpaceRef& space, const std::vector<Point>& points,
                                const CircumcenterOptions& opts) {
  if (!space) throw InvalidInput("circumcenter: null space");
  if (points.empty()) throw InvalidInput("circumcenter: empty point set");
  for (const auto& p : points)
    if (!p.space().equals(*space)) throw InvalidInput("circumcenter: point in a different space");

  CircumcenterResult res;
  res.uniqueness_guard = false;

  switch (space->kind()) {
    case Space::Kind::Euclidean: {
      std::vector<Eigen::VectorXd> raw;
      raw.reserve(points.size());
      for (const auto& p : points) raw.push_back(p.vec());
      const EBall b = welzl(raw);
      res.center = Point(space, b.center);
      res.radius = b.radius;
      res.method = "welzl-euclidean";
      break;
    }
    case Space::Kind::Sphere: {
      const auto* sph = dynamic_cast<const SphereSpace*>(space.get());
      std::vector<Eigen::VectorXd> raw;
      raw.reserve(points.size());
      for (const auto& p : points) raw.push_back(p.vec());
      const EBall b = welzl(raw);
      const double R = sph->radius();
      if (b.center.norm() < 1e-12 * R)
        throw RadiusGuardError("circumcenter: point set spans a closed hemisphere");
      Eigen::VectorXd c = (R / b.center.norm()) * b.center;
      res.center = Point(space, std::move(c));
      res.radius = farthest_point(space, points, res.center).second;
      res.method = "welzl-sphere";
      res.uniqueness_guard = true;
      if (res.radius >= 0.5 * kPi * R)
        throw RadiusGuardError("circumcenter: radius >= pi/(2 sqrt(kappa))");
      break;
    }
    case Space::Kind::Hyperbolic: {
      std::vector<Eigen::VectorXd> raw;
      raw.reserve(points.size());
      for (const auto& p : points) raw.push_back(p.vec());
      const HBall b = hwelzl(raw);
      res.center = Point(space, b.center);
      res.radius = farthest_point(space, points, res.center).second;
      res.method = "welzl-lorentz";
      break;
    }
    case Space::Kind::Tree: {
      // The minimax center of a point set on a tree is the midpoint of a
      // most-separated pair (0-hyperbolicity).
      size_t bi = 0, bj = 0;
      double best = -1.0;
      for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i; j < points.size(); ++j) {
          const double d = space->distance(points[i], points[j]);
          if (d > best) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      res.center = space->geodesic(points[bi], points[bj], 0.5);
      res.radius = farthest_point(space, points, res.center).second;
      res.method = "tree-diameter";
      break;
    }
    default:
      res = iterative_circumcenter(space, points, opts);
      break;
  }

  if (res.method != "subgradient") res.residual = 0.0;
  if (space->curvature_bound().sign() > 0) res.uniqueness_guard = true;
  return res;
}

// ---------------------------------------------------------------------------
// Shrinking-scale limits

namespace {

// Geometric-tail extrapolation from the last entries of a sequence.
std::pair<double, bool> extrapolate_tail(const std::vector<double>& seq) {
  const size_t n = seq.size();
  if (n == 0) return {0.0, false};
  if (n < 3) return {seq.back(), false};
  const double t0 = seq[n - 3], t1 = seq[n - 2], t2 = seq[n - 1];
  const double d1 = t1 - t0, d2 = t2 - t1;
  if (std::abs(d2) < 64 * kEps * kPi || std::abs(d1) < 64 * kEps * kPi) return {t2, false};
  const double rho = d2 / d1;
  if (!(rho > 0.0 && rho < 0.9)) return {t2, false};
  return {t2 + d2 * rho / (1.0 - rho), true};
}

}  // namespace

double distance_directional_derivative(const Point& p, const Point& q, const Point& x0,
                                       const LimitSchedule& schedule) {
  const double dq = distance(p, q);
  const double dx = distance(p, x0);
  if (dq < 1e-14) throw MathDomainError("directional derivative: probe q coincides with p");
  if (dx < 1e-14) throw MathDomainError("directional derivative: target x0 coincides with p");

  const double s0 = schedule.initial_fraction * std::min(dq, dx);
  std::vector<double> quotients;
  for (int i = 0; i < schedule.rungs; ++i) {
    const double s = s0 * std::pow(schedule.shrink, i);
    if (s < 1e3 * kEps * std::max({1.0, dq, dx})) break;
    const Point gs = geodesic_point(p, q, s / dq);
    quotients.push_back((dx - distance(gs, x0)) / s);
  }
  if (quotients.empty()) throw MathDomainError("directional derivative: no usable scales");
  const auto [value, extrapolated] = extrapolate_tail(quotients);
  (void)extrapolated;
  return std::clamp(value, -1.0, 1.0);
}

AngleEstimate alexandrov_angle(const Point& p, const Point& x, const Point& y,
                               const LimitSchedule& schedule) {
  const double dx = distance(p, x);
  const double dy = distance(p, y);
  if (dx < 1e-14 || dy < 1e-14)
    throw MathDomainError("alexandrov_angle: endpoint coincides with the vertex");
  const Curvature kappa = p.space().curvature_bound();

  AngleEstimate est;
  const double r0 = schedule.initial_fraction * std::min(dx, dy);
  for (int i = 0; i < schedule.rungs; ++i) {
    const double s = r0 * std::pow(schedule.shrink, i);
    if (s < 1e3 * kEps * std::max({1.0, dx, dy})) break;
    const Point xt = geodesic_point(p, x, s / dx);
    const Point yt = geodesic_point(p, y, s / dy);
    const double a = distance(p, xt);
    const double b = distance(p, yt);
    const double c = distance(xt, yt);
    if (a < 1e3 * kEps || b < 1e3 * kEps) break;
    est.ladder.push_back({s, comparison_angle(kappa, a, b, c)});
  }
  if (est.ladder.empty()) throw MathDomainError("alexandrov_angle: no usable scales");

  if (kappa.kappa <= 0.0) {
    // Comparison angles must not increase as the scale shrinks.
    for (size_t i = 1; i < est.ladder.size(); ++i) {
      if (est.ladder[i].second > est.ladder[i - 1].second + 1e-6)
        throw MathDomainError(
            "alexandrov_angle: comparison-angle ladder increases on a space claimed "
            "nonpositively curved");
    }
  }

  std::vector<double> seq;
  seq.reserve(est.ladder.size());
  for (const auto& [s, theta] : est.ladder) seq.push_back(theta);
  const auto [value, extrapolated] = extrapolate_tail(seq);
  est.value = std::clamp(value, 0.0, kPi);
  est.extrapolated = extrapolated;
  est.upper_bias_bound = std::max(0.0, est.ladder.back().second - est.value) + 1e-12;
  return est;
}

double tangent_scalar_product(const Point& c, const Point& x, const Point& y,
                              const LimitSchedule& schedule) {
  if (distance(x, y) == 0.0) return 1.0;
  return std::cos(alexandrov_angle(c, x, y, schedule).value);
}

GramSummary gram_sum(const Point& c, const std::vector<Point>& points,
                     const Eigen::MatrixXi* orbit_labels, const LimitSchedule& schedule) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw InvalidInput("gram_sum: empty point set");
  GramSummary g;
  g.cosines = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = tangent_scalar_product(c, points[i], points[j], schedule);
      g.cosines(i, j) = v;
      g.cosines(j, i) = v;
    }
  g.total = g.cosines.sum();

  if (orbit_labels) {
    if (orbit_labels->rows() != n || orbit_labels->cols() != n)
      throw InvalidInput("gram_sum: orbit label matrix has wrong shape");
    int max_label = -1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) max_label = std::max(max_label, (*orbit_labels)(i, j));
    g.per_orbit.resize(max_label + 1);
    for (int o = 0; o <= max_label; ++o) g.per_orbit[o].orbit = o;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int o = (*orbit_labels)(i, j);
        if (o < 0) continue;
        g.per_orbit[o].ordered_pairs += 1;
        g.per_orbit[o].sum += g.cosines(i, j);
      }
    for (auto& agg : g.per_orbit)
      if (agg.ordered_pairs > 0) agg.mean_cos = agg.sum / agg.ordered_pairs;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Slack checks

double cone_scalar_product(const Point& a, const Point& b) {
  const auto* cone = dynamic_cast<const ConeSpace*>(&a.space());
  if (!cone) throw InvalidInput("cone_scalar_product: points must live on a cone");
  const double na = a.cone().radius;
  const double nb = b.cone().radius;
  const double d = distance(a, b);
  return 0.5 * (na * na + nb * nb - d * d);
}

double concavity_check(const Point& u, const Point& v, const Point& w, double t) {
  if (t < 0.0 || t > 1.0) throw InvalidInput("concavity_check: t outside [0,1]");
  const Point gt = geodesic_point(u, v, t);
  return cone_scalar_product(gt, w) - (1.0 - t) * cone_scalar_product(u, w) -
         t * cone_scalar_product(v, w);
}

double chord_diameter_bound_check(const std::vector<Point>& points, const Point& c, int i, int j,
                                  double alpha) {
  if (points.size() < 2) throw InvalidInput("chord_diameter_bound_check: need >= 2 points");
  if (i < 0 || j < 0 || i >= static_cast<int>(points.size()) ||
      j >= static_cast<int>(points.size()) || i == j)
    throw InvalidInput("chord_diameter_bound_check: bad indices");
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const auto& p : points) {
    const double r = distance(c, p);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rmax - rmin > 1e-9 * (1.0 + rmax))
    throw InvalidInput("chord_diameter_bound_check: points are not equidistant from c");
  double diam = 0.0;
  for (size_t a = 0; a < points.size(); ++a)
    for (size_t b = a + 1; b < points.size(); ++b)
      diam = std::max(diam, distance(points[a], points[b]));
  const double dij = distance(points[i], points[j]);
  return dij * dij - diam * diam * (1.0 - std::cos(alpha)) / 2.0;
}

double parallelogram_check(const Point& x0, const Point& x1, const Point& x2, const Point& x3) {
  const double s01 = distance(x0, x1), s12 = distance(x1, x2);
  const double s23 = distance(x2, x3), s30 = distance(x3, x0);
  const double d02 = distance(x0, x2), d13 = distance(x1, x3);
  return s01 * s01 + s12 * s12 + s23 * s23 + s30 * s30 - d02 * d02 - d13 * d13;
}

FlatNgonReport flat_ngon_check(const std::vector<Point>& cycle, const Point& c, double tol) {
  const int n = static_cast<int>(cycle.size());
  if (n < 3) throw InvalidInput("flat_ngon_check: need at least 3 points");
  FlatNgonReport rep;

  double rbar = 0.0;
  for (const auto& p : cycle) rbar += distance(c, p);
  rbar /= n;
  if (rbar <= 0.0) throw InvalidInput("flat_ngon_check: degenerate cycle");
  for (const auto& p : cycle)
    rep.radius_dev = std::max(rep.radius_dev, std::abs(distance(c, p) - rbar) / rbar);

  const double target = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    const double a = alexandrov_angle(c, cycle[i], cycle[(i + 1) % n]).value;
    rep.central_angle_dev = std::max(rep.central_angle_dev, std::abs(a - target));
  }

  double vertex_sum = 0.0;
  for (int i = 0; i < n; ++i)
    vertex_sum += alexandrov_angle(cycle[i], cycle[(i + n - 1) % n], cycle[(i + 1) % n]).value;
  rep.vertex_angle_sum_dev = std::abs(vertex_sum - (n - 2) * kPi) / n;

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int k = std::min(j - i, n - (j - i));
      const double expected = 2.0 * rbar * std::sin(kPi * k / n);
      rep.chord_dev =
          std::max(rep.chord_dev, std::abs(distance(cycle[i], cycle[j]) - expected) / rbar);
    }

  rep.worst_deviation = std::max(
      {rep.central_angle_dev, rep.vertex_angle_sum_dev, rep.chord_dev, rep.radius_dev});
  rep.flat = rep.worst_deviation < tol;
  return rep;
}

}  // namespace catk
