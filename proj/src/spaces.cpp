#include "catk/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <sstream>

namespace catk {

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
  Eigen::VectorXd v;
  do {
    v = gaussian_vector(rng, dim);
  } while (v.norm() < 1e-12);
  v.normalize();
  return v;
}
}  // namespace

// ---------------------------------------------------------------------------
// Point

Point::Point(SpaceRef space, Payload payload)
    : space_(std::move(space)), payload_(std::move(payload)) {
  if (!space_) throw InvalidInput("Point: null space");
  space_->validate(*this);
}

const Space& Point::space() const {
  if (!space_) throw InvalidInput("Point: uninitialized");
  return *space_;
}

const Eigen::VectorXd& Point::vec() const {
  const auto* v = std::get_if<Eigen::VectorXd>(&payload_);
  if (!v) throw InvalidInput("Point: payload is not a coordinate vector");
  return *v;
}

const TreePos& Point::tree() const {
  const auto* v = std::get_if<TreePos>(&payload_);
  if (!v) throw InvalidInput("Point: payload is not a tree position");
  return *v;
}

const std::vector<Point>& Point::factors() const {
  const auto* v = std::get_if<std::vector<Point>>(&payload_);
  if (!v) throw InvalidInput("Point: payload is not a product tuple");
  return *v;
}

const ConePos& Point::cone() const {
  const auto* v = std::get_if<ConePos>(&payload_);
  if (!v) throw InvalidInput("Point: payload is not a cone position");
  return *v;
}

double distance(const Point& p, const Point& q) { return p.space().distance(p, q); }

Point geodesic_point(const Point& p, const Point& q, double t) {
  return p.space().geodesic(p, q, t);
}

void Space::check_same_space(const Point& p, const Point& q) const {
  if (!p.space().equals(*this) || !q.space().equals(*this))
    throw InvalidInput("space mismatch between points and space");
}

// ---------------------------------------------------------------------------
// Euclidean

std::shared_ptr<const EuclideanSpace> EuclideanSpace::make(int dim) {
  if (dim < 1) throw InvalidInput("EuclideanSpace: dim must be >= 1");
  return std::shared_ptr<const EuclideanSpace>(new EuclideanSpace(dim));
}

Point EuclideanSpace::point(Eigen::VectorXd coords) const {
  return Point(shared_from_this(), std::move(coords));
}

double EuclideanSpace::distance(const Point& p, const Point& q) const {
  check_same_space(p, q);
  return (p.vec() - q.vec()).norm();
}

Point EuclideanSpace::geodesic(const Point& p, const Point& q, double t) const {
  check_same_space(p, q);
  if (t < 0.0 || t > 1.0) throw InvalidInput("geodesic: t outside [0,1]");
  return Point(shared_from_this(), Eigen::VectorXd((1.0 - t) * p.vec() + t * q.vec()));
}

void EuclideanSpace::validate(const Point& p) const {
  if (p.vec().size() != dim_) throw InvalidInput("euclidean point: wrong dimension");
}

Point EuclideanSpace::basepoint() const {
  return Point(shared_from_this(), Eigen::VectorXd(Eigen::VectorXd::Zero(dim_)));
}

Point EuclideanSpace::sample_ball(std::mt19937_64& rng, double radius) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = radius * std::pow(unif(rng), 1.0 / dim_);
  return Point(shared_from_this(), Eigen::VectorXd(r * random_unit(rng, dim_)));
}

bool EuclideanSpace::equals(const Space& other) const {
  const auto* o = dynamic_cast<const EuclideanSpace*>(&other);
  return o && o->dim_ == dim_;
}

std::string EuclideanSpace::describe() const {
  return "euclidean(" + std::to_string(dim_) + ")";
}

// ---------------------------------------------------------------------------
// Hyperbolic

std::shared_ptr<const HyperbolicSpace> HyperbolicSpace::make(int dim) {
  if (dim < 1) throw InvalidInput("HyperbolicSpace: dim must be >= 1");
  return std::shared_ptr<const HyperbolicSpace>(new HyperbolicSpace(dim));
}

Point HyperbolicSpace::point(Eigen::VectorXd coords) const {
  return Point(shared_from_this(), std::move(coords));
}

Point HyperbolicSpace::exp_at_base(const Eigen::VectorXd& spatial_unit, double dist) const {
  if (spatial_unit.size() != dim_) throw InvalidInput("exp_at_base: wrong dimension");
  Eigen::VectorXd x(dim_ + 1);
  x(0) = std::cosh(dist);
  x.tail(dim_) = std::sinh(dist) * spatial_unit.normalized();
  return Point(shared_from_this(), std::move(x));
}

double HyperbolicSpace::distance(const Point& p, const Point& q) const {
  check_same_space(p, q);
  return unit_hyperboloid_distance(p.vec(), q.vec());
}

Point HyperbolicSpace::geodesic(const Point& p, const Point& q, double t) const {
  check_same_space(p, q);
  if (t < 0.0 || t > 1.0) throw InvalidInput("geodesic: t outside [0,1]");
  return Point(shared_from_this(), unit_hyperboloid_geodesic(p.vec(), q.vec(), t));
}

void HyperbolicSpace::validate(const Point& p) const {
  if (p.vec().size() != dim_ + 1) throw InvalidInput("hyperbolic point: wrong ambient dimension");
  validate_model_point(Curvature::hyperbolic(-1.0), ModelPoint{p.vec()});
}

Point HyperbolicSpace::basepoint() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_ + 1);
  x(0) = 1.0;
  return Point(shared_from_this(), std::move(x));
}

Point HyperbolicSpace::sample_ball(std::mt19937_64& rng, double radius) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = radius * std::pow(unif(rng), 1.0 / dim_);
  return exp_at_base(random_unit(rng, dim_), r);
}

bool HyperbolicSpace::equals(const Space& other) const {
  const auto* o = dynamic_cast<const HyperbolicSpace*>(&other);
  return o && o->dim_ == dim_;
}

std::string HyperbolicSpace::describe() const {
  return "hyperbolic(" + std::to_string(dim_) + ")";
}

// ---------------------------------------------------------------------------
// Sphere

std::shared_ptr<const SphereSpace> SphereSpace::make(int dim, double radius) {
  if (dim < 1) throw InvalidInput("SphereSpace: dim must be >= 1");
  if (!(radius > 0.0)) throw InvalidInput("SphereSpace: radius must be positive");
  return std::shared_ptr<const SphereSpace>(new SphereSpace(dim, radius));
}

Point SphereSpace::point(Eigen::VectorXd coords) const {
  return Point(shared_from_this(), std::move(coords));
}

Point SphereSpace::exp_at_pole(const Eigen::VectorXd& tangent_unit, double dist) const {
  if (tangent_unit.size() != dim_) throw InvalidInput("exp_at_pole: wrong dimension");
  const double theta = dist / radius_;
  Eigen::VectorXd x(dim_ + 1);
  x.head(dim_) = std::sin(theta) * tangent_unit.normalized();
  x(dim_) = std::cos(theta);
  return Point(shared_from_this(), Eigen::VectorXd(radius_ * x));
}

double SphereSpace::distance(const Point& p, const Point& q) const {
  check_same_space(p, q);
  return radius_ * unit_sphere_distance(p.vec() / radius_, q.vec() / radius_);
}

Point SphereSpace::geodesic(const Point& p, const Point& q, double t) const {
  check_same_space(p, q);
  if (t < 0.0 || t > 1.0) throw InvalidInput("geodesic: t outside [0,1]");
  return Point(shared_from_this(),
               Eigen::VectorXd(radius_ * unit_sphere_geodesic(p.vec() / radius_,
                                                              q.vec() / radius_, t)));
}

void SphereSpace::validate(const Point& p) const {
  if (p.vec().size() != dim_ + 1) throw InvalidInput("sphere point: wrong ambient dimension");
  const double err = std::abs(p.vec().norm() - radius_);
  if (err > 1e-10 * std::max(1.0, radius_))
    throw InvalidInput("sphere point: not on the sphere of the given radius");
}

Point SphereSpace::basepoint() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_ + 1);
  x(dim_) = radius_;
  return Point(shared_from_this(), std::move(x));
}

Point SphereSpace::sample_ball(std::mt19937_64& rng, double radius) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double capped = std::min(radius, 0.99 * kPi * radius_);
  const double r = capped * std::pow(unif(rng), 1.0 / dim_);
  return exp_at_pole(random_unit(rng, dim_), r);
}

bool SphereSpace::equals(const Space& other) const {
  const auto* o = dynamic_cast<const SphereSpace*>(&other);
  return o && o->dim_ == dim_ && o->radius_ == radius_;
}

std::string SphereSpace::describe() const {
  std::ostringstream os;
  os << "sphere(" << dim_ << ", r=" << radius_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// MetricTree

MetricTree::MetricTree(std::vector<Edge> edges) : Space(Kind::Tree), edges_(std::move(edges)) {
  if (edges_.empty()) throw InvalidInput("MetricTree: no edges");
  int n = 0;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u == e.v) throw InvalidInput("MetricTree: bad edge endpoints");
    if (!(e.length > 0.0)) throw InvalidInput("MetricTree: edge lengths must be positive");
    n = std::max(n, std::max(e.u, e.v) + 1);
  }
  n_vertices_ = n;
  if (static_cast<int>(edges_.size()) != n - 1)
    throw InvalidInput("MetricTree: edge count must be vertex count - 1 (acyclic, connected)");

  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
  for (size_t i = 0; i < edges_.size(); ++i) {
    adj[edges_[i].u].push_back({edges_[i].v, static_cast<int>(i)});
    adj[edges_[i].v].push_back({edges_[i].u, static_cast<int>(i)});
  }

  vertex_dist_ = Eigen::MatrixXd::Constant(n, n, -1.0);
  next_hop_val_.assign(n, std::vector<int>(n, -1));
  for (int root = 0; root < n; ++root) {
    std::vector<int> parent(n, -1);
    std::vector<char> seen(n, 0);
    std::queue<int> bfs;
    bfs.push(root);
    seen[root] = 1;
    vertex_dist_(root, root) = 0.0;
    while (!bfs.empty()) {
      const int u = bfs.front();
      bfs.pop();
      for (const auto& [w, eid] : adj[u]) {
        if (seen[w]) continue;
        seen[w] = 1;
        parent[w] = u;
        vertex_dist_(root, w) = vertex_dist_(root, u) + edges_[eid].length;
        bfs.push(w);
      }
    }
    for (int v = 0; v < n; ++v) {
      if (!seen[v]) throw InvalidInput("MetricTree: graph is not connected");
      next_hop_val_[root][v] = parent[v];  // neighbor of v toward root
    }
  }
}

std::shared_ptr<const MetricTree> MetricTree::make(std::vector<Edge> edges) {
  return std::shared_ptr<const MetricTree>(new MetricTree(std::move(edges)));
}

std::shared_ptr<const MetricTree> MetricTree::star(int legs, double leg_length) {
  if (legs < 1) throw InvalidInput("MetricTree::star: need at least one leg");
  std::vector<Edge> edges;
  edges.reserve(legs);
  for (int i = 0; i < legs; ++i) edges.push_back({0, i + 1, leg_length});
  return make(std::move(edges));
}

double MetricTree::vertex_distance(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_vertices_ || v >= n_vertices_)
    throw InvalidInput("vertex_distance: vertex id out of range");
  return vertex_dist_(u, v);
}

Point MetricTree::edge_point(int edge, double offset) const {
  return Point(shared_from_this(), TreePos{edge, offset});
}

Point MetricTree::vertex_point(int v) const {
  if (v < 0 || v >= n_vertices_) throw InvalidInput("vertex_point: vertex id out of range");
  // Canonical representation: offset 0 or full length on the lowest incident edge.
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].u == v) return edge_point(static_cast<int>(i), 0.0);
    if (edges_[i].v == v) return edge_point(static_cast<int>(i), edges_[i].length);
  }
  throw InvalidInput("vertex_point: isolated vertex");
}

double MetricTree::distance_to_vertex(const TreePos& p, int v) const {
  const Edge& e = edges_[p.edge];
  return std::min(p.offset + vertex_dist_(e.u, v), (e.length - p.offset) + vertex_dist_(e.v, v));
}

bool MetricTree::same_position(const TreePos& a, const TreePos& b, double tol) const {
  return tree_distance(a, b) <= tol;
}

double MetricTree::tree_distance(const TreePos& p, const TreePos& q) const {
  if (p.edge == q.edge) return std::abs(p.offset - q.offset);
  const Edge& ep = edges_[p.edge];
  const Edge& eq = edges_[q.edge];
  const double via_uu = p.offset + vertex_dist_(ep.u, eq.u) + q.offset;
  const double via_uv = p.offset + vertex_dist_(ep.u, eq.v) + (eq.length - q.offset);
  const double via_vu = (ep.length - p.offset) + vertex_dist_(ep.v, eq.u) + q.offset;
  const double via_vv =
      (ep.length - p.offset) + vertex_dist_(ep.v, eq.v) + (eq.length - q.offset);
  return std::min(std::min(via_uu, via_uv), std::min(via_vu, via_vv));
}

double MetricTree::distance(const Point& p, const Point& q) const {
  check_same_space(p, q);
  return tree_distance(p.tree(), q.tree());
}

Point MetricTree::geodesic(const Point& p, const Point& q, double t) const {
  check_same_space(p, q);
  if (t < 0.0 || t > 1.0) throw InvalidInput("geodesic: t outside [0,1]");
  const TreePos a = p.tree();
  const TreePos b = q.tree();

  struct Seg {
    int edge;
    double from, to;
  };
  std::vector<Seg> segs;
  if (a.edge == b.edge) {
    segs.push_back({a.edge, a.offset, b.offset});
  } else {
    const Edge& ea = edges_[a.edge];
    const Edge& eb = edges_[b.edge];
    // Pick the exit/entry endpoints realizing the tree distance.
    int best_exit = ea.u, best_entry = eb.u;
    double best = std::numeric_limits<double>::infinity();
    for (int exit_v : {ea.u, ea.v}) {
      for (int entry_v : {eb.u, eb.v}) {
        const double d_exit = (exit_v == ea.u) ? a.offset : ea.length - a.offset;
        const double d_entry = (entry_v == eb.u) ? b.offset : eb.length - b.offset;
        const double total = d_exit + vertex_dist_(exit_v, entry_v) + d_entry;
        if (total < best - 1e-15) {
          best = total;
          best_exit = exit_v;
          best_entry = entry_v;
        }
      }
    }
    segs.push_back({a.edge, a.offset, best_exit == ea.u ? 0.0 : ea.length});
    // Vertex chain from exit to entry via precomputed next hops.
    std::vector<std::pair<int, int>> adj_lookup;
    int cur = best_exit;
    while (cur != best_entry) {
      const int nxt = next_hop_val_[best_entry][cur];
      // Find the edge joining cur and nxt.
      int eid = -1;
      for (size_t i = 0; i < edges_.size(); ++i) {
        if ((edges_[i].u == cur && edges_[i].v == nxt) ||
            (edges_[i].v == cur && edges_[i].u == nxt)) {
          eid = static_cast<int>(i);
          break;
        }
      }
      if (eid < 0) throw InvalidInput("MetricTree: broken next-hop table");
      if (edges_[eid].u == cur)
        segs.push_back({eid, 0.0, edges_[eid].length});
      else
        segs.push_back({eid, edges_[eid].length, 0.0});
      cur = nxt;
    }
    segs.push_back({b.edge, best_entry == eb.u ? 0.0 : eb.length, b.offset});
  }

  double total = 0.0;
  for (const auto& s : segs) total += std::abs(s.to - s.from);
  double target = t * total;
  for (const auto& s : segs) {
    const double len = std::abs(s.to - s.from);
    if (target <= len || &s == &segs.back()) {
      if (len == 0.0) continue;
      const double dir = (s.to >= s.from) ? 1.0 : -1.0;
      const double off = s.from + dir * std::min(target, len);
      return edge_point(s.edge, off);
    }
    target -= len;
  }
  return q;
}

void MetricTree::validate(const Point& p) const {
  const TreePos& tp = p.tree();
  if (tp.edge < 0 || tp.edge >= static_cast<int>(edges_.size()))
    throw InvalidInput("tree point: edge id out of range");
  const double len = edges_[tp.edge].length;
  if (tp.offset < -1e-12 || tp.offset > len + 1e-12)
    throw InvalidInput("tree point: offset outside the edge");
}

Point MetricTree::basepoint() const { return vertex_point(0); }

Point MetricTree::sample_ball(std::mt19937_64& rng, double radius) const {
  std::uniform_int_distribution<int> edge_pick(0, static_cast<int>(edges_.size()) - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int e = edge_pick(rng);
  const Point sample = edge_point(e, unif(rng) * edges_[e].length);
  const Point base = basepoint();
  const double d = distance(base, sample);
  if (d <= radius) return sample;
  return geodesic(base, sample, radius / d);
}

bool MetricTree::equals(const Space& other) const {
  const auto* o = dynamic_cast<const MetricTree*>(&other);
  if (!o || o->edges_.size() != edges_.size()) return false;
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].u != o->edges_[i].u || edges_[i].v != o->edges_[i].v ||
        edges_[i].length != o->edges_[i].length)
      return false;
  }
  return true;
}

std::string MetricTree::describe() const {
  std::ostringstream os;
  os << "tree(" << n_vertices_ << " vertices)";
  return os.str();
}

// ---------------------------------------------------------------------------
// Product

std::shared_ptr<const ProductSpace> ProductSpace::make(std::vector<SpaceRef> factors) {
  if (factors.empty()) throw InvalidInput("ProductSpace: no factors");
  for (const auto& f : factors) {
    if (!f) throw InvalidInput("ProductSpace: null factor");
    if (f->curvature_bound().kappa > 0.0)
      throw InvalidInput("ProductSpace: factors must be nonpositively curved");
  }
  return std::shared_ptr<const ProductSpace>(new ProductSpace(std::move(factors)));
}

Point ProductSpace::point(std::vector<Point> components) const {
  return Point(shared_from_this(), std::move(components));
}

double ProductSpace::distance(const Point& p, const Point& q) const {
  check_same_space(p, q);
  const auto& a = p.factors();
  const auto& b = q.factors();
  double sq = 0.0;
  for (size_t i = 0; i < factors_.size(); ++i) {
    const double d = factors_[i]->distance(a[i], b[i]);
    sq += d * d;
  }
  return std::sqrt(sq);
}

Point ProductSpace::geodesic(const Point& p, const Point& q, double t) const {
  check_same_space(p, q);
  if (t < 0.0 || t > 1.0) throw InvalidInput("geodesic: t outside [0,1]");
  const auto& a = p.factors();
  const auto& b = q.factors();
  std::vector<Point> out;
  out.reserve(factors_.size());
  for (size_t i = 0; i < factors_.size(); ++i) out.push_back(factors_[i]->geodesic(a[i], b[i], t));
  return Point(shared_from_this(), std::move(out));
}

void ProductSpace::validate(const Point& p) const {
  const auto& comps = p.factors();
  if (comps.size() != factors_.size()) throw InvalidInput("product point: wrong factor count");
  for (size_t i = 0; i < comps.size(); ++i) {
    if (!comps[i].space().equals(*factors_[i]))
      throw InvalidInput("product point: component lives in the wrong factor");
  }
}

Point ProductSpace::basepoint() const {
  std::vector<Point> comps;
  comps.reserve(factors_.size());
  for (const auto& f : factors_) comps.push_back(f->basepoint());
  return Point(shared_from_this(), std::move(comps));
}

Point ProductSpace::sample_ball(std::mt19937_64& rng, double radius) const {
  const double per = radius / std::sqrt(static_cast<double>(factors_.size()));
  std::vector<Point> comps;
  comps.reserve(factors_.size());
  for (const auto& f : factors_) comps.push_back(f->sample_ball(rng, per));
  return Point(shared_from_this(), std::move(comps));
}

bool ProductSpace::equals(const Space& other) const {
  const auto* o = dynamic_cast<const ProductSpace*>(&other);
  if (!o || o->factors_.size() != factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (!factors_[i]->equals(*o->factors_[i])) return false;
  return true;
}

std::string ProductSpace::describe() const {
  std::string s = "product(";
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " x ";
    s += factors_[i]->describe();
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Cone

std::shared_ptr<const ConeSpace> ConeSpace::make(SpaceRef base) {
  if (!base) throw InvalidInput("ConeSpace: null base");
  if (base->curvature_bound().kappa > 1.0 + 1e-12)
    throw InvalidInput("ConeSpace: base curvature bound must be <= 1");
  return std::shared_ptr<const ConeSpace>(new ConeSpace(std::move(base)));
}

Point ConeSpace::point(double radius, Point base_point) const {
  return Point(shared_from_this(),
               ConePos{radius, std::make_shared<const Point>(std::move(base_point))});
}

Point ConeSpace::apex() const { return Point(shared_from_this(), ConePos{0.0, nullptr}); }

double cone_distance(const Space& base, double s, const Point& xi, double t, const Point& eta) {
  if (s < 0.0 || t < 0.0) throw InvalidInput("cone_distance: negative radius");
  if (s == 0.0) return t;
  if (t == 0.0) return s;
  const double theta = std::min(std::numbers::pi, base.distance(xi, eta));
  const double sh = std::sin(theta / 2);
  return std::sqrt((s - t) * (s - t) + 4.0 * s * t * sh * sh);
}

double ConeSpace::distance(const Point& p, const Point& q) const {
  check_same_space(p, q);
  const ConePos& a = p.cone();
  const ConePos& b = q.cone();
  if (a.radius == 0.0 || b.radius == 0.0) return std::abs(a.radius - b.radius);
  return cone_distance(*base_, a.radius, *a.base, b.radius, *b.base);
}

Point ConeSpace::geodesic(const Point& p, const Point& q, double t) const {
  check_same_space(p, q);
  if (t < 0.0 || t > 1.0) throw InvalidInput("geodesic: t outside [0,1]");
  const ConePos& a = p.cone();
  const ConePos& b = q.cone();
  if (a.radius == 0.0 && b.radius == 0.0) return apex();
  if (a.radius == 0.0) return point(t * b.radius, *b.base);
  if (b.radius == 0.0) return point((1.0 - t) * a.radius, *a.base);

  const double theta = base_->distance(*a.base, *b.base);
  if (theta >= kPi) {
    // The geodesic passes through the apex: two radial segments.
    const double total = a.radius + b.radius;
    const double ell = t * total;
    if (ell <= a.radius) {
      const double r = a.radius - ell;
      return r == 0.0 ? apex() : point(r, *a.base);
    }
    const double r = ell - a.radius;
    return r == 0.0 ? apex() : point(r, *b.base);
  }
  // Develop into a planar wedge of angle theta.
  const Eigen::Vector2d u(a.radius, 0.0);
  const Eigen::Vector2d v(b.radius * std::cos(theta), b.radius * std::sin(theta));
  const Eigen::Vector2d w = (1.0 - t) * u + t * v;
  const double r = w.norm();
  if (r < 1e-300) return apex();
  if (theta < 1e-300) return point(r, *a.base);
  const double phi = std::atan2(w.y(), w.x());
  const double frac = std::clamp(phi / theta, 0.0, 1.0);
  return point(r, base_->geodesic(*a.base, *b.base, frac));
}

void ConeSpace::validate(const Point& p) const {
  const ConePos& c = p.cone();
  if (c.radius < 0.0) throw InvalidInput("cone point: negative radius");
  if (c.radius > 0.0) {
    if (!c.base) throw InvalidInput("cone point: missing base point");
    if (!c.base->space().equals(*base_))
      throw InvalidInput("cone point: base point lives in the wrong base space");
  }
}

Point ConeSpace::basepoint() const { return point(1.0, base_->basepoint()); }

Point ConeSpace::sample_ball(std::mt19937_64& rng, double radius) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = std::max(0.0, 1.0 + radius * (2.0 * unif(rng) - 1.0));
  if (r == 0.0) return apex();
  return point(r, base_->sample_ball(rng, radius));
}

bool ConeSpace::equals(const Space& other) const {
  const auto* o = dynamic_cast<const ConeSpace*>(&other);
  return o && base_->equals(*o->base_);
}

std::string ConeSpace::describe() const { return "cone(" + base_->describe() + ")"; }

// ---------------------------------------------------------------------------
// Curvature certificate

CurvatureCertificate curvature_certificate(const SpaceRef& space, int samples,
                                           std::uint64_t seed) {
  if (!space) throw InvalidInput("curvature_certificate: null space");
  CurvatureCertificate cert;
  cert.samples = samples;
  cert.seed = seed;
  cert.worst_slack = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Curvature kappa = space->curvature_bound();
  double radius = 1.0;
  if (const auto* sph = dynamic_cast<const SphereSpace*>(space.get()))
    radius = 0.25 * kPi * sph->radius();

  int done = 0;
  int attempts = 0;
  while (done < samples && attempts < 100 * samples + 1000) {
    ++attempts;
    const Point x = space->sample_ball(rng, radius);
    const Point y = space->sample_ball(rng, radius);
    const Point z = space->sample_ball(rng, radius);
    const double dxy = space->distance(x, y);
    const double dyz = space->distance(y, z);
    const double dzx = space->distance(z, x);
    if (dxy < 1e-9 || dyz < 1e-9 || dzx < 1e-9) continue;
    const double t = unif(rng);
    ComparisonTriangle tri;
    try {
      tri = build_comparison_triangle(kappa, dxy, dyz, dzx);
    } catch (const MathDomainError&) {
      continue;  // numerically inconsistent triple; resample
    }
    const Point m = space->geodesic(x, y, t);
    const ModelPoint mbar = model_geodesic_point(kappa, tri.v0, tri.v1, t);
    const double slack = model_distance(kappa, mbar, tri.v2) - space->distance(m, z);
    cert.worst_slack = std::min(cert.worst_slack, slack);
    if (slack < -1e-9) ++cert.failures;
    ++done;
  }
  cert.samples = done;
  cert.pass = (cert.failures == 0) && done > 0;
  return cert;
}

}  // namespace catk
