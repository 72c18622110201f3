#pragma once
// Test-only brute-force oracles, independent of the library's solver paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

// Exact planar minimax radius: the optimal center is the midpoint of a pair
// or the circumcenter of a triple, so enumerate all candidates and take the
// smallest covering radius. Circumcenters via the perpendicular-bisector
// determinant formula (no linear-algebra solver shared with the library).
inline double grid_minimax_radius_2d(const std::vector<Eigen::Vector2d>& pts) {
  const size_t n = pts.size();
  auto covering = [&](const Eigen::Vector2d& c) {
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, (p - c).norm());
    return worst;
  };
  double best = std::numeric_limits<double>::infinity();
  if (n == 1) return 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      best = std::min(best, covering(0.5 * (pts[i] + pts[j])));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector2d a = pts[i], b = pts[j], c = pts[k];
        const double d = 2.0 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) +
                                c.x() * (a.y() - b.y()));
        if (std::abs(d) < 1e-14) continue;  // collinear
        const double ux = (a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) +
                           c.squaredNorm() * (a.y() - b.y())) /
                          d;
        const double uy = (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) +
                           c.squaredNorm() * (b.x() - a.x())) /
                          d;
        best = std::min(best, covering(Eigen::Vector2d(ux, uy)));
      }
  return best;
}

// Exact minimax-center radius for finitely many points on a weighted tree.
// Points are (edge index, offset from edge.u). Works directly on the edge
// list with its own Floyd-Warshall. On each edge the objective is a max of
// slope +-1 linear pieces, so its minimum sits at a crossing of one
// ascending and one descending piece; all crossings are enumerated.
struct TreeEdge {
  int u, v;
  double length;
};

inline double tree_minimax_radius(const std::vector<TreeEdge>& edges,
                                  const std::vector<std::pair<int, double>>& pts) {
  int n = 0;
  for (const auto& e : edges) n = std::max(n, std::max(e.u, e.v) + 1);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> D(n, std::vector<double>(n, inf));
  for (int i = 0; i < n; ++i) D[i][i] = 0.0;
  for (const auto& e : edges) D[e.u][e.v] = D[e.v][e.u] = e.length;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D[i][j] = std::min(D[i][j], D[i][k] + D[k][j]);

  auto point_to_vertex = [&](const std::pair<int, double>& p, int v) {
    const auto& e = edges[p.first];
    return std::min(p.second + D[e.u][v], (e.length - p.second) + D[e.v][v]);
  };

  double best = inf;
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    const auto& e = edges[ei];
    auto dist_at = [&](double t, size_t i) {
      if (pts[i].first == static_cast<int>(ei)) return std::abs(t - pts[i].second);
      const double a = point_to_vertex(pts[i], e.u);
      const double b = point_to_vertex(pts[i], e.v);
      return std::min(t + a, (e.length - t) + b);
    };
    // Intercepts of the ascending (t + c) and descending (-t + c) pieces.
    std::vector<double> up, down;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].first == static_cast<int>(ei)) {
        up.push_back(-pts[i].second);
        down.push_back(pts[i].second);
      } else {
        up.push_back(point_to_vertex(pts[i], e.u));
        down.push_back(e.length + point_to_vertex(pts[i], e.v));
      }
    }
    std::vector<double> candidates = {0.0, e.length};
    for (double cu : up)
      for (double cd : down) {
        const double t = 0.5 * (cd - cu);
        if (t > 0.0 && t < e.length) candidates.push_back(t);
      }
    for (double t : candidates) {
      double worst = 0.0;
      for (size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, dist_at(t, i));
      best = std::min(best, worst);
    }
  }
  return best;
}

// Exact minimax cap radius on the unit 2-sphere (angle metric): candidate
// centers are pair midpoints and the two equidistant directions of each
// triple (cross products of chord differences).
inline double grid_minimax_radius_sphere(const std::vector<Eigen::Vector3d>& pts) {
  auto angle = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
  };
  auto covering = [&](const Eigen::Vector3d& c) {
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, angle(c, p));
    return worst;
  };
  const size_t n = pts.size();
  double best = std::numeric_limits<double>::infinity();
  if (n == 1) return 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const Eigen::Vector3d s = pts[i] + pts[j];
      if (s.norm() < 1e-12) continue;
      best = std::min(best, covering(s.normalized()));
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector3d w = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        if (w.norm() < 1e-12) continue;
        best = std::min(best, covering(w.normalized()));
        best = std::min(best, covering(-w.normalized()));
      }
  return best;
}

// Exact minimax radius on the unit hyperboloid in 2+1 Minkowski space.
// Equidistant centers of pairs/triples found with the Lorentz adjoint of the
// Euclidean cross product: w = J (a x b) is Lorentz-orthogonal to a and b.
inline double exact_minimax_radius_hyperbolic2(const std::vector<Eigen::Vector3d>& pts) {
  auto ldot = [](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    return -u(0) * v(0) + u(1) * v(1) + u(2) * v(2);
  };
  auto covering = [&](const Eigen::Vector3d& c) {
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::acosh(std::max(1.0, -ldot(c, p))));
    return worst;
  };
  auto try_center = [&](Eigen::Vector3d w, double& best) {
    const double nn = -ldot(w, w);
    if (!(nn > 1e-18)) return;  // not timelike
    w /= std::sqrt(nn);
    if (w(0) < 0) w = -w;
    best = std::min(best, covering(w));
  };
  const size_t n = pts.size();
  double best = std::numeric_limits<double>::infinity();
  if (n == 1) return 0.0;
  const Eigen::Matrix3d J = Eigen::Vector3d(-1, 1, 1).asDiagonal();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) try_center(pts[i] + pts[j], best);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        const Eigen::Vector3d a = pts[j] - pts[i];
        const Eigen::Vector3d b = pts[k] - pts[i];
        try_center(J * a.cross(b), best);
      }
  return best;
}

}  // namespace oracles
