#include "catk/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

namespace catk {

namespace {
constexpr double kPi = std::numbers::pi;
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

int perm_order(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<char> seen(n, 0);
  long long order = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = 1;
      j = perm[j];
      ++len;
    }
    order = std::lcm(order, static_cast<long long>(len));
  }
  return static_cast<int>(order);
}

Eigen::MatrixXd cyclic_shift_matrix(int k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) m((i + 1) % k, i) = 1.0;
  if (k % 2 == 0) m.col(k - 1) *= -1.0;  // restore det +1
  return m;
}

Eigen::MatrixXd plane_rotation_matrix(int k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
  m(0, 0) = 0.0;
  m(0, 1) = -1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 0.0;
  return m;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis_unit, double theta) {
  Eigen::Matrix3d K;
  K << 0, -axis_unit.z(), axis_unit.y(), axis_unit.z(), 0, -axis_unit.x(), -axis_unit.y(),
      axis_unit.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(theta) * K + (1.0 - std::cos(theta)) * K * K;
}

std::uint64_t expected_group_order(const PolytopeSpec& spec) {
  switch (spec.family) {
    case PolytopeFamily::Tetrahedron:
      return 12;
    case PolytopeFamily::Cube:
    case PolytopeFamily::Octahedron:
      return 24;
    case PolytopeFamily::Icosahedron:
    case PolytopeFamily::Dodecahedron:
      return 60;
    case PolytopeFamily::Hypercube:
    case PolytopeFamily::Orthoplex: {
      std::uint64_t order = 1;
      for (int i = 2; i <= spec.dim; ++i) order *= static_cast<std::uint64_t>(i);
      return order << (spec.dim - 1);
    }
  }
  throw InvalidInput("expected_group_order: unknown family");
}

std::vector<int> matrix_vertex_permutation(const Eigen::MatrixXd& vertices,
                                           const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(vertices.rows());
  std::vector<int> perm(n, -1);
  std::vector<char> used(n, 0);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd image = m * vertices.row(i).transpose();
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      if ((image - vertices.row(j).transpose()).norm() < 1e-9) {
        perm[i] = j;
        used[j] = 1;
        break;
      }
    }
    if (perm[i] < 0)
      throw InvalidInput("symmetry_group: generator does not permute the vertex set");
  }
  return perm;
}
}  // namespace

std::string family_name(PolytopeFamily family) {
  switch (family) {
    case PolytopeFamily::Tetrahedron: return "tetrahedron";
    case PolytopeFamily::Cube: return "cube";
    case PolytopeFamily::Octahedron: return "octahedron";
    case PolytopeFamily::Icosahedron: return "icosahedron";
    case PolytopeFamily::Dodecahedron: return "dodecahedron";
    case PolytopeFamily::Hypercube: return "hypercube";
    case PolytopeFamily::Orthoplex: return "orthoplex";
  }
  return "unknown";
}

PolytopeFamily family_from_name(const std::string& name) {
  if (name == "tetrahedron") return PolytopeFamily::Tetrahedron;
  if (name == "cube") return PolytopeFamily::Cube;
  if (name == "octahedron") return PolytopeFamily::Octahedron;
  if (name == "icosahedron") return PolytopeFamily::Icosahedron;
  if (name == "dodecahedron") return PolytopeFamily::Dodecahedron;
  if (name == "hypercube") return PolytopeFamily::Hypercube;
  if (name == "orthoplex") return PolytopeFamily::Orthoplex;
  throw InvalidInput("unknown polytope family: " + name);
}

int PolytopeSpec::ambient_dim() const {
  switch (family) {
    case PolytopeFamily::Hypercube:
    case PolytopeFamily::Orthoplex:
      return dim;
    default:
      return 3;
  }
}

int PolytopeSpec::vertex_count() const {
  switch (family) {
    case PolytopeFamily::Tetrahedron: return 4;
    case PolytopeFamily::Cube: return 8;
    case PolytopeFamily::Octahedron: return 6;
    case PolytopeFamily::Icosahedron: return 12;
    case PolytopeFamily::Dodecahedron: return 20;
    case PolytopeFamily::Hypercube: return 1 << dim;
    case PolytopeFamily::Orthoplex: return 2 * dim;
  }
  throw InvalidInput("vertex_count: unknown family");
}

Eigen::MatrixXd polytope_vertices(const PolytopeSpec& spec) {
  switch (spec.family) {
    case PolytopeFamily::Tetrahedron: {
      Eigen::MatrixXd v(4, 3);
      v << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
      return v / std::sqrt(3.0);
    }
    case PolytopeFamily::Cube:
      return polytope_vertices({PolytopeFamily::Hypercube, 3});
    case PolytopeFamily::Octahedron:
      return polytope_vertices({PolytopeFamily::Orthoplex, 3});
    case PolytopeFamily::Icosahedron: {
      Eigen::MatrixXd v(12, 3);
      int r = 0;
      for (int cyc = 0; cyc < 3; ++cyc)
        for (double s1 : {1.0, -1.0})
          for (double s2 : {1.0, -1.0}) {
            Eigen::Vector3d base(0.0, s1, s2 * kGolden);
            Eigen::Vector3d p;
            for (int i = 0; i < 3; ++i) p((i + cyc) % 3) = base(i);
            v.row(r++) = p.transpose();
          }
      return v / std::sqrt(1.0 + kGolden * kGolden);
    }
    case PolytopeFamily::Dodecahedron: {
      Eigen::MatrixXd v(20, 3);
      int r = 0;
      for (double s1 : {1.0, -1.0})
        for (double s2 : {1.0, -1.0})
          for (double s3 : {1.0, -1.0}) v.row(r++) = Eigen::RowVector3d(s1, s2, s3);
      for (int cyc = 0; cyc < 3; ++cyc)
        for (double s1 : {1.0, -1.0})
          for (double s2 : {1.0, -1.0}) {
            Eigen::Vector3d base(0.0, s1 / kGolden, s2 * kGolden);
            Eigen::Vector3d p;
            for (int i = 0; i < 3; ++i) p((i + cyc) % 3) = base(i);
            v.row(r++) = p.transpose();
          }
      return v / std::sqrt(3.0);
    }
    case PolytopeFamily::Hypercube: {
      if (spec.dim < 2) throw InvalidInput("hypercube: dim must be >= 2");
      const int n = 1 << spec.dim;
      Eigen::MatrixXd v(n, spec.dim);
      for (int b = 0; b < n; ++b)
        for (int i = 0; i < spec.dim; ++i) v(b, i) = (b >> i) & 1 ? 1.0 : -1.0;
      return v / std::sqrt(static_cast<double>(spec.dim));
    }
    case PolytopeFamily::Orthoplex: {
      if (spec.dim < 2) throw InvalidInput("orthoplex: dim must be >= 2");
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * spec.dim, spec.dim);
      for (int i = 0; i < spec.dim; ++i) {
        v(i, i) = 1.0;
        v(spec.dim + i, i) = -1.0;
      }
      return v;
    }
  }
  throw InvalidInput("polytope_vertices: unknown family");
}

std::vector<std::pair<int, int>> polytope_edges(const PolytopeSpec& spec) {
  const Eigen::MatrixXd v = polytope_vertices(spec);
  const int n = static_cast<int>(v.rows());
  double min_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      min_d = std::min(min_d, (v.row(i) - v.row(j)).norm());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((v.row(i) - v.row(j)).norm() < min_d + 1e-9) edges.push_back({i, j});
  return edges;
}

double expected_edge_angle(const PolytopeSpec& spec) {
  switch (spec.family) {
    case PolytopeFamily::Tetrahedron: return std::acos(-1.0 / 3.0);
    case PolytopeFamily::Cube: return std::acos(1.0 / 3.0);
    case PolytopeFamily::Octahedron: return kPi / 2.0;
    case PolytopeFamily::Icosahedron: return std::acos(1.0 / std::sqrt(5.0));
    case PolytopeFamily::Dodecahedron: return std::acos(std::sqrt(5.0) / 3.0);
    case PolytopeFamily::Hypercube: return std::acos(1.0 - 2.0 / spec.dim);
    case PolytopeFamily::Orthoplex: return kPi / 2.0;
  }
  throw InvalidInput("expected_edge_angle: unknown family");
}

SymmetryGroup symmetry_group(const PolytopeSpec& spec, std::uint64_t enumeration_cap) {
  SymmetryGroup g;
  g.spec = spec;
  g.vertices = polytope_vertices(spec);
  g.order = expected_group_order(spec);

  switch (spec.family) {
    case PolytopeFamily::Tetrahedron: {
      g.generators.push_back(cyclic_shift_matrix(3));
      Eigen::Matrix3d d = Eigen::Vector3d(1, -1, -1).asDiagonal();
      g.generators.push_back(d);
      break;
    }
    case PolytopeFamily::Icosahedron:
    case PolytopeFamily::Dodecahedron: {
      g.generators.push_back(cyclic_shift_matrix(3));
      // 5-fold axis: a vertex direction for the icosahedron, a face-center
      // direction for the dodecahedron.
      const Eigen::Vector3d axis = spec.family == PolytopeFamily::Icosahedron
                                       ? Eigen::Vector3d(0, 1, kGolden).normalized()
                                       : Eigen::Vector3d(0, kGolden, 1).normalized();
      g.generators.push_back(rodrigues(axis, 2.0 * kPi / 5.0));
      break;
    }
    default: {  // cube, octahedron, hypercube(k), orthoplex(k)
      const int k = spec.ambient_dim();
      g.generators.push_back(plane_rotation_matrix(k));
      if (k > 2) g.generators.push_back(cyclic_shift_matrix(k));
      break;
    }
  }
  for (const auto& m : g.generators)
    g.generator_perms.push_back(matrix_vertex_permutation(g.vertices, m));

  if (g.order <= enumeration_cap) {
    // Breadth-first closure, deduplicated by the (faithful) vertex action.
    std::map<std::vector<int>, int> seen;
    const int nv = static_cast<int>(g.vertices.rows());
    std::vector<int> identity(nv);
    std::iota(identity.begin(), identity.end(), 0);
    g.elements.push_back(Eigen::MatrixXd::Identity(g.vertices.cols(), g.vertices.cols()));
    g.element_perms.push_back(identity);
    seen[identity] = 0;
    for (size_t head = 0; head < g.elements.size(); ++head) {
      for (size_t gi = 0; gi < g.generators.size(); ++gi) {
        const Eigen::MatrixXd m = g.generators[gi] * g.elements[head];
        std::vector<int> perm(nv);
        for (int i = 0; i < nv; ++i) perm[i] = g.generator_perms[gi][g.element_perms[head][i]];
        if (seen.count(perm)) continue;
        if (g.elements.size() >= g.order)
          throw InvalidInput("symmetry_group: closure exceeds the expected order");
        seen[perm] = static_cast<int>(g.elements.size());
        g.elements.push_back(m);
        g.element_perms.push_back(std::move(perm));
      }
    }
    if (g.elements.size() != g.order)
      throw InvalidInput("symmetry_group: closure does not reach the expected order");
    g.materialized = true;
  }
  return g;
}

ChordOrbitTable chord_orbits(const SymmetryGroup& group) {
  ChordOrbitTable table;
  table.spec = group.spec;
  const int n = static_cast<int>(group.vertices.rows());
  table.vertex_count = n;
  table.labels = Eigen::MatrixXi::Constant(n, n, -1);

  auto pair_id = [n](int i, int j) { return i * n + j; };
  std::vector<char> claimed(n * n, 0);
  struct RawOrbit {
    std::pair<int, int> rep;
    std::vector<std::pair<int, int>> pairs;
  };
  std::vector<RawOrbit> raw;

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (claimed[pair_id(i, j)]) continue;
      RawOrbit orb;
      orb.rep = {i, j};
      std::vector<std::pair<int, int>> queue = {{i, j}};
      claimed[pair_id(i, j)] = 1;
      while (!queue.empty()) {
        const auto [a, b] = queue.back();
        queue.pop_back();
        orb.pairs.push_back({a, b});
        for (const auto& perm : group.generator_perms) {
          int ia = perm[a], ib = perm[b];
          if (ia > ib) std::swap(ia, ib);
          if (!claimed[pair_id(ia, ib)]) {
            claimed[pair_id(ia, ib)] = 1;
            queue.push_back({ia, ib});
          }
        }
      }
      raw.push_back(std::move(orb));
    }

  std::vector<std::pair<double, size_t>> ordering;  // (-cos, raw index)
  std::vector<double> cosines(raw.size());
  for (size_t o = 0; o < raw.size(); ++o) {
    const auto [i, j] = raw[o].rep;
    cosines[o] = group.vertices.row(i).dot(group.vertices.row(j));
  }
  std::vector<size_t> idx(raw.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (std::abs(cosines[a] - cosines[b]) > 1e-12) return cosines[a] > cosines[b];
    return raw[a].rep < raw[b].rep;
  });

  long long total_ordered = 0;
  for (size_t rank = 0; rank < idx.size(); ++rank) {
    const RawOrbit& orb = raw[idx[rank]];
    ChordOrbit out;
    out.representative = orb.rep;
    out.ordered_multiplicity = 2 * static_cast<long long>(orb.pairs.size());
    out.euclid_cos = cosines[idx[rank]];
    const auto [i, j] = orb.rep;
    const Eigen::VectorXd u = group.vertices.row(i), v = group.vertices.row(j);
    out.euclid_angle = 2.0 * std::atan2((u - v).norm(), (u + v).norm());
    for (const auto& [a, b] : orb.pairs) {
      table.labels(a, b) = static_cast<int>(rank);
      table.labels(b, a) = static_cast<int>(rank);
    }
    total_ordered += out.ordered_multiplicity;
    table.orbits.push_back(std::move(out));
  }
  if (total_ordered != static_cast<long long>(n) * (n - 1))
    throw InvalidInput("chord_orbits: multiplicities do not cover all ordered pairs");

  // Invariance under every generator.
  for (const auto& perm : group.generator_perms)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && table.labels(i, j) != table.labels(perm[i], perm[j]))
          throw InvalidInput("chord_orbits: orbit decomposition is not group-invariant");
  return table;
}

std::string tag_name(ConfigTag tag) {
  switch (tag) {
    case ConfigTag::EuclideanEmbed: return "euclidean-embed";
    case ConfigTag::HyperbolicOrbit: return "hyperbolic-orbit";
    case ConfigTag::SphericalCap: return "spherical-cap";
    case ConfigTag::TreeStar: return "tree-star";
    case ConfigTag::ProductTree: return "product-tree";
  }
  return "unknown";
}

ConfigTag tag_from_name(const std::string& name) {
  if (name == "euclidean-embed") return ConfigTag::EuclideanEmbed;
  if (name == "hyperbolic-orbit") return ConfigTag::HyperbolicOrbit;
  if (name == "spherical-cap") return ConfigTag::SphericalCap;
  if (name == "tree-star") return ConfigTag::TreeStar;
  if (name == "product-tree") return ConfigTag::ProductTree;
  throw InvalidInput("unknown configuration tag: " + name);
}

namespace {

Isometry realize_on_target(const EquivariantConfiguration& config, const Eigen::MatrixXd& m,
                           const std::vector<int>& perm) {
  const int order = perm_order(perm);
  switch (config.tag) {
    case ConfigTag::EuclideanEmbed:
      return Isometry::orthogonal(config.space, m, order);
    case ConfigTag::SphericalCap: {
      const int k = static_cast<int>(m.rows());
      Eigen::MatrixXd big = Eigen::MatrixXd::Identity(k + 1, k + 1);
      big.topLeftCorner(k, k) = m;
      return Isometry::sphere_rotation(config.space, big, order);
    }
    case ConfigTag::HyperbolicOrbit: {
      const int k = static_cast<int>(m.rows());
      Eigen::MatrixXd big = Eigen::MatrixXd::Identity(k + 1, k + 1);
      big.bottomRightCorner(k, k) = m;
      return Isometry::lorentz(config.space, big, order);
    }
    case ConfigTag::TreeStar: {
      std::vector<int> tree_perm(perm.size() + 1);
      tree_perm[0] = 0;
      for (size_t i = 0; i < perm.size(); ++i) tree_perm[i + 1] = perm[i] + 1;
      return Isometry::tree_automorphism(config.space, tree_perm, order);
    }
    case ConfigTag::ProductTree: {
      const auto* prod = static_cast<const ProductSpace*>(config.space.get());
      std::vector<int> tree_perm(perm.size() + 1);
      tree_perm[0] = 0;
      for (size_t i = 0; i < perm.size(); ++i) tree_perm[i + 1] = perm[i] + 1;
      std::vector<Isometry> comps;
      comps.push_back(Isometry::orthogonal(prod->factor_spaces()[0], m, order));
      comps.push_back(Isometry::tree_automorphism(prod->factor_spaces()[1], tree_perm, order));
      return Isometry::product(config.space, std::move(comps), order);
    }
  }
  throw InvalidInput("realize_on_target: unknown tag");
}

}  // namespace

EquivariantConfiguration build_equivariant_configuration(const PolytopeSpec& spec, ConfigTag tag,
                                                         const ConfigParams& params,
                                                         std::uint64_t seed) {
  (void)seed;  // constructions are closed-form; the seed is kept for the interface
  EquivariantConfiguration config;
  config.spec = spec;
  config.tag = tag;
  config.params = params;
  config.group = symmetry_group(spec);
  const Eigen::MatrixXd v = config.group.vertices;
  const int n = static_cast<int>(v.rows());
  const int k = static_cast<int>(v.cols());

  switch (tag) {
    case ConfigTag::EuclideanEmbed: {
      auto space = EuclideanSpace::make(k);
      config.space = space;
      for (int i = 0; i < n; ++i)
        config.points.push_back(space->point(params.scale * v.row(i).transpose()));
      break;
    }
    case ConfigTag::SphericalCap: {
      const double R = params.sphere_radius;
      if (!(params.cap_radius > 0.0) || params.cap_radius >= 0.5 * kPi * R)
        throw RadiusGuardError(
            "spherical-cap: cap radius must satisfy the pi/(2 sqrt(kappa)) guard");
      auto space = SphereSpace::make(k, R);
      config.space = space;
      for (int i = 0; i < n; ++i)
        config.points.push_back(space->exp_at_pole(v.row(i).transpose(), params.cap_radius));
      break;
    }
    case ConfigTag::HyperbolicOrbit: {
      auto space = HyperbolicSpace::make(k);
      config.space = space;
      for (int i = 0; i < n; ++i)
        config.points.push_back(space->exp_at_base(v.row(i).transpose(), params.hyperbolic_radius));
      break;
    }
    case ConfigTag::TreeStar: {
      if (!(params.offset > 0.0) || params.offset > params.leg_length)
        throw InvalidInput("tree-star: offset must lie in (0, leg_length]");
      auto space = MetricTree::star(n, params.leg_length);
      config.space = space;
      for (int i = 0; i < n; ++i) config.points.push_back(space->edge_point(i, params.offset));
      break;
    }
    case ConfigTag::ProductTree: {
      auto euclid = EuclideanSpace::make(k);
      auto tree = MetricTree::star(n, std::max(params.leg_length, params.tree_offset));
      auto space = ProductSpace::make({euclid, std::static_pointer_cast<const Space>(tree)});
      config.space = space;
      for (int i = 0; i < n; ++i)
        config.points.push_back(
            space->point({euclid->point(params.euclidean_weight * v.row(i).transpose()),
                          tree->edge_point(i, params.tree_offset)}));
      break;
    }
  }

  for (size_t gi = 0; gi < config.group.generators.size(); ++gi)
    config.realized_generators.push_back(
        realize_on_target(config, config.group.generators[gi], config.group.generator_perms[gi]));
  if (config.group.materialized && config.group.order <= 256) {
    for (size_t e = 0; e < config.group.elements.size(); ++e)
      config.realized_elements.push_back(
          realize_on_target(config, config.group.elements[e], config.group.element_perms[e]));
  }

  for (size_t gi = 0; gi < config.realized_generators.size(); ++gi) {
    const auto& perm = config.group.generator_perms[gi];
    for (int i = 0; i < n; ++i) {
      const double defect = distance(config.realized_generators[gi].apply(config.points[i]),
                                     config.points[perm[i]]);
      config.equivariance_defect = std::max(config.equivariance_defect, defect);
    }
  }
  if (config.equivariance_defect > 1e-8)
    throw InvalidInput("build_equivariant_configuration: realized action is not equivariant");
  return config;
}

CircumcenterResult equivariant_circumcenter(const EquivariantConfiguration& config) {
  CircumcenterResult res;
  auto finish = [&](Point candidate) -> bool {
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& p : config.points) {
      const double d = distance(candidate, p);
      rmin = std::min(rmin, d);
      rmax = std::max(rmax, d);
    }
    if (rmax - rmin > 1e-8 * (1.0 + rmax)) return false;
    res.center = std::move(candidate);
    res.radius = rmax;
    res.method = "fixed-point-projection";
    res.residual = 0.0;
    return true;
  };

  bool have = false;
  switch (config.tag) {
    case ConfigTag::EuclideanEmbed: {
      const int k = config.spec.ambient_dim();
      have = finish(Point(config.space, Eigen::VectorXd(Eigen::VectorXd::Zero(k))));
      break;
    }
    case ConfigTag::SphericalCap: {
      const auto* sph = static_cast<const SphereSpace*>(config.space.get());
      have = finish(sph->basepoint());
      break;
    }
    case ConfigTag::HyperbolicOrbit: {
      const auto* hyp = static_cast<const HyperbolicSpace*>(config.space.get());
      have = finish(hyp->basepoint());
      break;
    }
    case ConfigTag::TreeStar: {
      const auto* tree = static_cast<const MetricTree*>(config.space.get());
      have = finish(tree->vertex_point(0));
      break;
    }
    case ConfigTag::ProductTree: {
      const auto* prod = static_cast<const ProductSpace*>(config.space.get());
      const auto* euclid = static_cast<const EuclideanSpace*>(prod->factor_spaces()[0].get());
      const auto* tree = static_cast<const MetricTree*>(prod->factor_spaces()[1].get());
      have = finish(prod->point({euclid->basepoint(), tree->vertex_point(0)}));
      break;
    }
  }
  if (!have) res = circumcenter(config.space, config.points);

  // Invariance under the realized generators.
  for (const auto& g : config.realized_generators) {
    if (distance(res.center, g.apply(res.center)) > 1e-8 * (1.0 + res.radius))
      throw InvalidInput("equivariant_circumcenter: center is not group-invariant");
  }
  if (config.space->curvature_bound().sign() > 0) {
    const auto* sph = static_cast<const SphereSpace*>(config.space.get());
    res.uniqueness_guard = true;
    if (res.radius >= 0.5 * kPi * sph->radius())
      throw RadiusGuardError("equivariant_circumcenter: radius guard violated");
  }
  return res;
}

PolytopeAngleReport verify_polytope_angles(const EquivariantConfiguration& config,
                                           const VerifyTolerances& tol) {
  PolytopeAngleReport rep;
  rep.spec = config.spec;
  rep.tag = config.tag;
  rep.expected_angle = expected_edge_angle(config.spec);
  rep.lang_schroeder_case = config.spec.family == PolytopeFamily::Tetrahedron;
  if (rep.lang_schroeder_case)
    rep.notes.push_back("regular-simplex family: covered by the general simplex angle theorem");
  if (config.tag == ConfigTag::SphericalCap)
    rep.notes.push_back(
        "positive-curvature radius guard enforced as pi/(2 sqrt(kappa)); a commonly misquoted "
        "form reads pi/(2 kappa)");

  const auto center = equivariant_circumcenter(config);
  rep.center = center.center;
  rep.radius = center.radius;
  rep.center_method = center.method;

  const ChordOrbitTable table = chord_orbits(config.group);
  const double edge_cos = table.orbits[0].euclid_cos;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto& orbit : table.orbits) {
    if (orbit.euclid_cos < edge_cos - 1e-9) break;  // only edge orbits
    const auto [i, j] = orbit.representative;
    const AngleEstimate est = alexandrov_angle(rep.center, config.points[i], config.points[j]);
    if (est.value - rep.expected_angle < min_slack) {
      min_slack = est.value - rep.expected_angle;
      rep.measured = est;
    }
  }
  rep.slack = min_slack;
  rep.pass = rep.slack >= -tol.verify;
  return rep;
}

namespace {

void add_step(GramCertificateReport& rep, std::string description, double lhs, double rhs,
              double tolerance) {
  ChainStep step;
  step.description = std::move(description);
  step.lhs = lhs;
  step.rhs = rhs;
  step.slack = rhs - lhs;
  step.ok = step.slack >= -tolerance;
  rep.chain.push_back(std::move(step));
}

// Indices of an m-face of the hypercube: vertices with all high bits clear.
std::vector<int> hypercube_face(int m) {
  std::vector<int> out(1 << m);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

// Circumcenter of a sub-orbit of the configuration. Exact solver paths for
// the model spaces and trees; the product target has the closed-form center
// (scaled face centroid, hub), validated by equidistance.
Point face_center(const EquivariantConfiguration& config, const std::vector<int>& face) {
  std::vector<Point> pts;
  for (int i : face) pts.push_back(config.points[i]);
  if (config.tag == ConfigTag::ProductTree) {
    const auto* prod = static_cast<const ProductSpace*>(config.space.get());
    const auto* euclid = static_cast<const EuclideanSpace*>(prod->factor_spaces()[0].get());
    const auto* tree = static_cast<const MetricTree*>(prod->factor_spaces()[1].get());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(euclid->dim());
    for (int i : face) mean += config.group.vertices.row(i).transpose();
    mean *= config.params.euclidean_weight / static_cast<double>(face.size());
    Point candidate = prod->point({euclid->point(mean), tree->vertex_point(0)});
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& p : pts) {
      const double d = distance(candidate, p);
      rmin = std::min(rmin, d);
      rmax = std::max(rmax, d);
    }
    if (rmax - rmin <= 1e-9 * (1.0 + rmax)) return candidate;
  }
  return circumcenter(config.space, pts).center;
}

// One order-5 element (with its vertex permutation) from a materialized
// group, restricted by a predicate on the permutation.
template <typename Pred>
std::pair<const Isometry*, const std::vector<int>*> find_element(
    const EquivariantConfiguration& config, Pred pred) {
  for (size_t e = 0; e < config.realized_elements.size(); ++e) {
    const auto& perm = config.group.element_perms[e];
    if (pred(perm)) return {&config.realized_elements[e], &perm};
  }
  return {nullptr, nullptr};
}

std::vector<int> cycle_of(const std::vector<int>& perm, int start) {
  std::vector<int> cyc = {start};
  int j = perm[start];
  while (j != start) {
    cyc.push_back(j);
    j = perm[j];
  }
  return cyc;
}

}  // namespace

GramCertificateReport gram_sum_certificate(const EquivariantConfiguration& config,
                                           const VerifyTolerances& tol) {
  GramCertificateReport rep;
  rep.spec = config.spec;
  rep.tag = config.tag;
  const auto center = equivariant_circumcenter(config);
  const ChordOrbitTable table = chord_orbits(config.group);

  const GramSummary gram = gram_sum(center.center, config.points, &table.labels);
  rep.gram_total = gram.total;
  rep.per_orbit = gram.per_orbit;
  rep.gram_nonpositive = gram.total <= tol.verify;
  for (const auto& agg : gram.per_orbit) {
    rep.orbit_cos.push_back(agg.mean_cos);
    rep.unit_chord_sq.push_back(2.0 - 2.0 * agg.mean_cos);
  }
  rep.measured_edge_angle = safe_acos(std::clamp(rep.orbit_cos[0], -1.0, 1.0));

  const double ctol = tol.verify;
  const bool cat0 = config.space->curvature_bound().kappa <= 0.0;
  if (!cat0)
    rep.notes.push_back(
        "in-space CAT(0) sub-orbit replays skipped on a positively curved target; the chain is "
        "evaluated on tangent-cone chords");
  const double golden = 2.0 * std::cos(kPi / 5.0);
  const auto& a2 = rep.unit_chord_sq;  // squared unit chords per orbit

  add_step(rep, "gram total <= 0", rep.gram_total, 0.0, ctol);

  PolytopeFamily family = config.spec.family;
  int k = config.spec.dim;
  if (family == PolytopeFamily::Cube) {
    family = PolytopeFamily::Hypercube;
    k = 3;
  } else if (family == PolytopeFamily::Octahedron) {
    family = PolytopeFamily::Orthoplex;
    k = 3;
  }

  switch (family) {
    case PolytopeFamily::Tetrahedron: {
      rep.notes.push_back("single chord orbit: the simplex chain gives cos <= -1/(n-1)");
      add_step(rep, "edge cosine <= -1/3", rep.orbit_cos[0], -1.0 / 3.0, ctol);
      rep.chain_bound_a1_sq = 8.0 / 3.0;
      rep.final_angle_bound = std::acos(-1.0 / 3.0);
      break;
    }
    case PolytopeFamily::Orthoplex: {
      add_step(rep, "antipodal cosine >= -1", -1.0, rep.orbit_cos[1], ctol);
      add_step(rep, "edge cosine <= 0", rep.orbit_cos[0], 0.0, ctol);
      rep.chain_bound_a1_sq = 2.0;
      rep.final_angle_bound = kPi / 2.0;
      break;
    }
    case PolytopeFamily::Hypercube: {
      for (int j = 2; j <= k; ++j)
        add_step(rep, "a_" + std::to_string(j) + "^2 <= " + std::to_string(j) + " a_1^2",
                 a2[j - 1], j * a2[0], ctol * j);
      if (cat0) {
        for (int m = 2; m < k; ++m) {
          const std::vector<int> face = hypercube_face(m);
          std::vector<Point> face_pts;
          for (int i : face) face_pts.push_back(config.points[i]);
          const Point cm = face_center(config, face);
          const double alpha_m = std::acos(1.0 - 2.0 / m);
          const double face_angle = alexandrov_angle(cm, face_pts[0], face_pts[1]).value;
          add_step(rep, "face(" + std::to_string(m) + ") edge angle >= arccos(1-2/m)", alpha_m,
                   face_angle, ctol);
          const double lemma_slack =
              chord_diameter_bound_check(face_pts, cm, 0, 1, alpha_m);
          add_step(rep, "face(" + std::to_string(m) + ") chord-diameter bound", 0.0,
                   lemma_slack, ctol);
        }
      }
      rep.chain_bound_a1_sq = 4.0 / k;
      rep.final_angle_bound = std::acos(1.0 - 2.0 / k);
      add_step(rep, "a_1^2 >= 4/k", rep.chain_bound_a1_sq, a2[0], ctol);
      break;
    }
    case PolytopeFamily::Icosahedron: {
      // Pentagon around a vertex: the orbit of a neighbor of vertex 0 under
      // the order-5 stabilizer whose basic step follows edges (the 4 pi/5
      // powers step diagonals instead).
      const int w0 = table.orbits[0].representative.second;
      const auto [g5, perm5] = find_element(config, [&](const std::vector<int>& p) {
        return p[0] == 0 && perm_order(p) == 5 && table.labels(w0, p[w0]) == 0;
      });
      if (!g5) throw InvalidInput("gram_sum_certificate: no order-5 vertex stabilizer found");
      const int w = w0;  // a neighbor of vertex 0
      const std::vector<int> pent = cycle_of(*perm5, w);
      if (pent.size() != 5 || table.labels(pent[0], pent[1]) != 0 ||
          table.labels(pent[0], pent[2]) != 1)
        throw InvalidInput("gram_sum_certificate: stabilizer pentagon labeling failed");
      add_step(rep, "a_2 <= 2 cos(pi/5) a_1", std::sqrt(a2[1]), golden * std::sqrt(a2[0]), ctol);
      if (cat0) {
        const auto orb_rep = verify_chord_inequality(*g5, config.points[w], tol);
        add_step(rep, "pentagon sub-orbit chord inequality (in-space)", 0.0,
                 orb_rep.chord_slack, ctol);
      }
      add_step(rep, "antipodal cosine >= -1", -1.0, rep.orbit_cos[2], ctol);
      rep.chain_bound_a1_sq = 4.0 / (1.0 + 4.0 * std::cos(kPi / 5.0) * std::cos(kPi / 5.0));
      rep.final_angle_bound = std::acos(1.0 / std::sqrt(5.0));
      add_step(rep, "a_1^2 >= 4/(1+4cos^2(pi/5))", rep.chain_bound_a1_sq, a2[0], ctol);
      rep.notes.push_back(
          "corrected chain constant: 4/(1+4cos^2(pi/5)) = 2 - 2/sqrt(5) ~= 1.10557; the "
          "often-quoted value 1/sqrt(5) is a misprint, the angle arccos(1/sqrt(5)) is unaffected");
      break;
    }
    case PolytopeFamily::Dodecahedron: {
      // Order-5 face rotation whose basic step follows edges on the face
      // cycle (not a 4 pi/5 power).
      const int nv = config.spec.vertex_count();
      const auto [g5, perm5] = find_element(config, [&](const std::vector<int>& p) {
        if (perm_order(p) != 5) return false;
        for (int v = 0; v < nv; ++v)
          if (table.labels(v, p[v]) == 0) return true;
        return false;
      });
      if (!g5) throw InvalidInput("gram_sum_certificate: no order-5 element found");
      // Classify the 4 pentagonal cycles: face cycles step along edges
      // (orbit 0), ring cycles along orbit-1 chords.
      int face_start = -1, ring_start = -1;
      std::vector<char> seen(config.spec.vertex_count(), 0);
      for (int v = 0; v < config.spec.vertex_count(); ++v) {
        if (seen[v]) continue;
        for (int u : cycle_of(*perm5, v)) seen[u] = 1;
        const int lab = table.labels(v, (*perm5)[v]);
        if (lab == 0 && face_start < 0) face_start = v;
        if (lab == 1 && ring_start < 0) ring_start = v;
      }
      if (face_start < 0 || ring_start < 0)
        throw InvalidInput("gram_sum_certificate: pentagon cycle classification failed");
      const std::vector<int> face = cycle_of(*perm5, face_start);
      const std::vector<int> ring = cycle_of(*perm5, ring_start);
      if (table.labels(face[0], face[2]) != 1 || table.labels(ring[0], ring[2]) != 4)
        throw InvalidInput("gram_sum_certificate: pentagon diagonal labeling failed");

      add_step(rep, "a_2 <= 2 cos(pi/5) a_1", std::sqrt(a2[1]), golden * std::sqrt(a2[0]), ctol);
      add_step(rep, "a_5 <= 2 cos(pi/5) a_2", std::sqrt(a2[4]), golden * std::sqrt(a2[1]), ctol);
      if (cat0) {
        const auto face_rep = verify_chord_inequality(*g5, config.points[face_start], tol);
        add_step(rep, "face pentagon chord inequality (in-space)", 0.0, face_rep.chord_slack,
                 ctol);
        const auto ring_rep = verify_chord_inequality(*g5, config.points[ring_start], tol);
        add_step(rep, "ring pentagon chord inequality (in-space)", 0.0, ring_rep.chord_slack,
                 ctol);
      }

      // Equilateral quadrilateral with orbit-1 sides and the two distinct
      // orbit-(-1/3) diagonals; located from the labels.
      std::array<int, 4> quad = {-1, -1, -1, -1};
      const int n = config.spec.vertex_count();
      for (int w0 = 0; w0 < n && quad[0] < 0; ++w0)
        for (int w1 = 0; w1 < n && quad[0] < 0; ++w1) {
          if (w1 == w0 || table.labels(w0, w1) != 1) continue;
          for (int w2 = 0; w2 < n && quad[0] < 0; ++w2) {
            if (w2 == w0 || w2 == w1 || table.labels(w1, w2) != 1) continue;
            for (int w3 = 0; w3 < n; ++w3) {
              if (w3 == w0 || w3 == w1 || w3 == w2) continue;
              if (table.labels(w2, w3) != 1 || table.labels(w3, w0) != 1) continue;
              const int d1 = table.labels(w0, w2), d2 = table.labels(w1, w3);
              if ((d1 == 2 && d2 == 3) || (d1 == 3 && d2 == 2)) {
                quad = {w0, w1, w2, w3};
                break;
              }
            }
          }
        }
      if (quad[0] < 0)
        throw InvalidInput("gram_sum_certificate: equilateral quadrilateral not found");
      add_step(rep, "a_3^2 + a_4^2 <= 4 a_2^2", a2[2] + a2[3], 4.0 * a2[1], ctol);
      if (cat0) {
        const double pg = parallelogram_check(config.points[quad[0]], config.points[quad[1]],
                                              config.points[quad[2]], config.points[quad[3]]);
        add_step(rep, "quadrilateral inequality (in-space)", 0.0, pg, ctol);
      }
      add_step(rep, "antipodal cosine >= -1", -1.0, rep.orbit_cos[5], ctol);
      rep.chain_bound_a1_sq = 2.0 - 2.0 * std::sqrt(5.0) / 3.0;
      rep.final_angle_bound = std::acos(std::sqrt(5.0) / 3.0);
      add_step(rep, "a_1^2 >= 2 - 2 sqrt(5)/3", rep.chain_bound_a1_sq, a2[0], ctol);
      rep.notes.push_back(
          "chain read with corrected exponents: the ring-pentagon bound is a_5^2 <= 16 "
          "cos^4(pi/5) a_1^2 and the quadrilateral bound 4 a_2^2 <= 16 cos^2(pi/5) a_1^2");
      break;
    }
    default:
      break;
  }

  add_step(rep, "edge angle >= implied bound", rep.final_angle_bound, rep.measured_edge_angle,
           ctol);
  rep.chain_ok = true;
  for (const auto& step : rep.chain) rep.chain_ok = rep.chain_ok && step.ok;
  rep.pass = rep.gram_nonpositive && rep.chain_ok;
  return rep;
}

Point iterated_average(const std::vector<Isometry>& elements, const Point& p) {
  if (elements.empty()) throw InvalidInput("iterated_average: empty element list");
  Point q = elements[0].apply(p);
  for (size_t kq = 1; kq < elements.size(); ++kq)
    q = geodesic_point(q, elements[kq].apply(p), 1.0 / static_cast<double>(kq + 1));
  return q;
}

}  // namespace catk
