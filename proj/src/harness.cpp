#include "catk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace catk {

namespace {
constexpr double kPi = std::numbers::pi;
using nlohmann::json;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

const json& require_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key))
    throw InvalidInput(std::string(where) + ": missing required field '" + key + "'");
  return j.at(key);
}

Eigen::MatrixXd matrix_from_json(const json& j, int rows, int cols, const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw InvalidInput(std::string(where) + ": matrix must be a row-major array of " +
                       std::to_string(rows * cols) + " numbers");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r * cols + c).get<double>();
  return m;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string equality_name(EqualityClass c) {
  switch (c) {
    case EqualityClass::Equality: return "equality";
    case EqualityClass::Strict: return "strict";
    case EqualityClass::Inconclusive: return "inconclusive";
    case EqualityClass::Vacuous: return "vacuous";
  }
  return "unknown";
}
}  // namespace

std::uint64_t scenario_stream_seed(std::uint64_t batch_seed, const std::string& id) {
  return splitmix64(batch_seed ^ fnv1a(id));
}

// ---------------------------------------------------------------------------
// JSON conversions

SpaceRef space_from_json(const json& j) {
  const std::string kind = require_field(j, "kind", "space").get<std::string>();
  if (kind == "euclidean") return EuclideanSpace::make(require_field(j, "dim", "space").get<int>());
  if (kind == "hyperbolic")
    return HyperbolicSpace::make(require_field(j, "dim", "space").get<int>());
  if (kind == "sphere")
    return SphereSpace::make(require_field(j, "dim", "space").get<int>(),
                             require_field(j, "radius", "space").get<double>());
  if (kind == "tree") {
    std::vector<MetricTree::Edge> edges;
    for (const auto& e : require_field(j, "edges", "space")) {
      if (!e.is_array() || e.size() != 3)
        throw InvalidInput("space: tree edges must be [u, v, length] triples");
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    }
    return MetricTree::make(std::move(edges));
  }
  if (kind == "product") {
    std::vector<SpaceRef> factors;
    for (const auto& f : require_field(j, "factors", "space"))
      factors.push_back(space_from_json(f));
    return ProductSpace::make(std::move(factors));
  }
  if (kind == "cone") return ConeSpace::make(space_from_json(require_field(j, "base", "space")));
  throw InvalidInput("space: unknown kind '" + kind + "'");
}

json space_to_json(const Space& space) {
  json j;
  switch (space.kind()) {
    case Space::Kind::Euclidean:
      j = {{"kind", "euclidean"}, {"dim", static_cast<const EuclideanSpace&>(space).dim()}};
      break;
    case Space::Kind::Hyperbolic:
      j = {{"kind", "hyperbolic"}, {"dim", static_cast<const HyperbolicSpace&>(space).dim()}};
      break;
    case Space::Kind::Sphere: {
      const auto& s = static_cast<const SphereSpace&>(space);
      j = {{"kind", "sphere"}, {"dim", s.dim()}, {"radius", s.radius()}};
      break;
    }
    case Space::Kind::Tree: {
      const auto& t = static_cast<const MetricTree&>(space);
      json edges = json::array();
      for (const auto& e : t.edges()) edges.push_back({e.u, e.v, e.length});
      j = {{"kind", "tree"}, {"edges", std::move(edges)}};
      break;
    }
    case Space::Kind::Product: {
      const auto& p = static_cast<const ProductSpace&>(space);
      json factors = json::array();
      for (const auto& f : p.factor_spaces()) factors.push_back(space_to_json(*f));
      j = {{"kind", "product"}, {"factors", std::move(factors)}};
      break;
    }
    case Space::Kind::Cone:
      j = {{"kind", "cone"},
           {"base", space_to_json(*static_cast<const ConeSpace&>(space).base())}};
      break;
  }
  return j;
}

Point point_from_json(const SpaceRef& space, const json& j) {
  switch (space->kind()) {
    case Space::Kind::Euclidean:
    case Space::Kind::Hyperbolic:
    case Space::Kind::Sphere: {
      if (!j.is_array()) throw InvalidInput("point: expected a coordinate array");
      Eigen::VectorXd v(j.size());
      for (size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
      return Point(space, std::move(v));
    }
    case Space::Kind::Tree: {
      const auto* tree = static_cast<const MetricTree*>(space.get());
      if (j.contains("vertex")) return tree->vertex_point(j.at("vertex").get<int>());
      return tree->edge_point(require_field(j, "edge", "tree point").get<int>(),
                              require_field(j, "offset", "tree point").get<double>());
    }
    case Space::Kind::Product: {
      const auto* prod = static_cast<const ProductSpace*>(space.get());
      const json& factors = require_field(j, "factors", "product point");
      if (static_cast<int>(factors.size()) != prod->factor_count())
        throw InvalidInput("product point: wrong factor count");
      std::vector<Point> comps;
      for (int i = 0; i < prod->factor_count(); ++i)
        comps.push_back(point_from_json(prod->factor_spaces()[i], factors.at(i)));
      return prod->point(std::move(comps));
    }
    case Space::Kind::Cone: {
      const auto* cone = static_cast<const ConeSpace*>(space.get());
      if (j.contains("apex") && j.at("apex").get<bool>()) return cone->apex();
      return cone->point(require_field(j, "radius", "cone point").get<double>(),
                         point_from_json(cone->base(), require_field(j, "base", "cone point")));
    }
  }
  throw InvalidInput("point: unknown space kind");
}

json point_to_json(const Point& p) {
  switch (p.space().kind()) {
    case Space::Kind::Euclidean:
    case Space::Kind::Hyperbolic:
    case Space::Kind::Sphere: {
      json arr = json::array();
      for (int i = 0; i < p.vec().size(); ++i) arr.push_back(p.vec()(i));
      return arr;
    }
    case Space::Kind::Tree:
      return json{{"edge", p.tree().edge}, {"offset", p.tree().offset}};
    case Space::Kind::Product: {
      json arr = json::array();
      for (const auto& c : p.factors()) arr.push_back(point_to_json(c));
      return json{{"factors", std::move(arr)}};
    }
    case Space::Kind::Cone: {
      if (p.cone().radius == 0.0) return json{{"apex", true}};
      return json{{"radius", p.cone().radius}, {"base", point_to_json(*p.cone().base)}};
    }
  }
  throw InvalidInput("point: unknown space kind");
}

Isometry isometry_from_json(const SpaceRef& space, const json& j) {
  const std::string kind = require_field(j, "kind", "isometry").get<std::string>();
  const int order = require_field(j, "order", "isometry").get<int>();
  if (kind == "orthogonal") {
    const auto* e = dynamic_cast<const EuclideanSpace*>(space.get());
    if (!e) throw InvalidInput("isometry: orthogonal maps need a euclidean space");
    return Isometry::orthogonal(space,
                                matrix_from_json(require_field(j, "matrix", "isometry"), e->dim(),
                                                 e->dim(), "isometry"),
                                order);
  }
  if (kind == "lorentz") {
    const auto* h = dynamic_cast<const HyperbolicSpace*>(space.get());
    if (!h) throw InvalidInput("isometry: lorentz maps need a hyperbolic space");
    const int n = h->dim() + 1;
    return Isometry::lorentz(
        space, matrix_from_json(require_field(j, "matrix", "isometry"), n, n, "isometry"), order);
  }
  if (kind == "sphere-rotation") {
    const auto* s = dynamic_cast<const SphereSpace*>(space.get());
    if (!s) throw InvalidInput("isometry: sphere rotations need a sphere space");
    const int n = s->dim() + 1;
    return Isometry::sphere_rotation(
        space, matrix_from_json(require_field(j, "matrix", "isometry"), n, n, "isometry"), order);
  }
  if (kind == "tree-automorphism") {
    std::vector<int> perm;
    for (const auto& v : require_field(j, "permutation", "isometry")) perm.push_back(v.get<int>());
    return Isometry::tree_automorphism(space, std::move(perm), order);
  }
  if (kind == "product") {
    const auto* prod = dynamic_cast<const ProductSpace*>(space.get());
    if (!prod) throw InvalidInput("isometry: product maps need a product space");
    const json& comps = require_field(j, "components", "isometry");
    if (static_cast<int>(comps.size()) != prod->factor_count())
      throw InvalidInput("isometry: wrong component count");
    std::vector<Isometry> components;
    for (int i = 0; i < prod->factor_count(); ++i)
      components.push_back(isometry_from_json(prod->factor_spaces()[i], comps.at(i)));
    return Isometry::product(space, std::move(components), order);
  }
  if (kind == "cone") {
    const auto* cone = dynamic_cast<const ConeSpace*>(space.get());
    if (!cone) throw InvalidInput("isometry: cone maps need a cone space");
    return Isometry::cone_map(
        space, isometry_from_json(cone->base(), require_field(j, "base", "isometry")), order);
  }
  throw InvalidInput("isometry: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Scenario execution

json VerificationReport::to_json(bool include_timing) const {
  json j{{"id", id},
         {"subject", subject},
         {"verdict", verdict},
         {"n_or_family", n_or_family},
         {"measured", measured},
         {"bound", bound},
         {"slack", slack},
         {"baseline", baseline},
         {"details", details},
         {"misprint_notes", misprint_notes},
         {"tool_version", tool_version}};
  if (include_timing) j["timing_ms"] = timing_ms;
  return j;
}

Scenario scenario_from_json(const json& j, const VerifyTolerances& defaults,
                            std::uint64_t batch_seed) {
  Scenario s;
  s.id = require_field(j, "id", "scenario").get<std::string>();
  s.subject = require_field(j, "subject", "scenario").get<std::string>();
  s.config = j;
  s.tolerances = defaults;
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (t.contains("verify")) s.tolerances.verify = t.at("verify").get<double>();
    if (t.contains("kernel")) s.tolerances.kernel = t.at("kernel").get<double>();
  }
  const std::uint64_t local_seed =
      j.contains("seed") ? j.at("seed").get<std::uint64_t>() : batch_seed;
  s.seed = scenario_stream_seed(local_seed, s.id);
  return s;
}

namespace {

ConfigParams params_from_json(const json& j) {
  ConfigParams p;
  if (!j.contains("params")) return p;
  const json& q = j.at("params");
  auto get = [&](const char* key, double& slot) {
    if (q.contains(key)) slot = q.at(key).get<double>();
  };
  get("scale", p.scale);
  get("offset", p.offset);
  get("leg_length", p.leg_length);
  get("cap_radius", p.cap_radius);
  get("sphere_radius", p.sphere_radius);
  get("hyperbolic_radius", p.hyperbolic_radius);
  get("euclidean_weight", p.euclidean_weight);
  get("tree_offset", p.tree_offset);
  return p;
}

PolytopeSpec spec_from_json(const json& j) {
  PolytopeSpec spec;
  spec.family = family_from_name(require_field(j, "family", "scenario").get<std::string>());
  if (j.contains("k")) spec.dim = j.at("k").get<int>();
  if ((spec.family == PolytopeFamily::Hypercube || spec.family == PolytopeFamily::Orthoplex) &&
      !j.contains("k"))
    throw InvalidInput("scenario: hypercube/orthoplex need the dimension field 'k'");
  return spec;
}

void run_isometry_scenario(const Scenario& s, VerificationReport& rep) {
  const SpaceRef space = space_from_json(require_field(s.config, "space", "scenario"));
  const Isometry g = isometry_from_json(space, require_field(s.config, "isometry", "scenario"));
  const Point x = point_from_json(space, require_field(s.config, "point", "scenario"));
  const int n = g.order();
  rep.n_or_family = std::to_string(n);
  rep.details["order"] = n;

  if (n < 3) {
    // The bound is trivial below order 3; report the angle only.
    const auto orb = orbit(g, x);
    auto cf = g.closest_fixed_point(x);
    const Point c = cf ? *cf : circumcenter(space, orb).center;
    const AngleEstimate est = alexandrov_angle(c, orb[0], orb[1]);
    rep.measured = est.value;
    rep.bound = 0.0;
    rep.slack = est.value;
    rep.verdict = "pass";
    rep.details["note"] = "order-2 angle reported; the lower bound is trivial";
    return;
  }

  const OrbitReport main = verify_rotation_bound(g, x, s.tolerances);
  rep.measured = main.vacuous ? 0.0 : main.angle.value;
  rep.bound = main.bound;
  rep.slack = main.slack;
  rep.baseline = main.baseline;
  rep.details["equality_class"] = equality_name(main.equality);
  bool ok = main.pass;
  if (!main.vacuous) {
    rep.details["radius"] = main.radius;
    rep.details["center_method"] = main.center_method;
    rep.details["center_invariance"] = main.center_invariance;
    rep.details["center"] = point_to_json(main.center);
    rep.details["angle_upper_bias"] = main.angle.upper_bias_bound;
    rep.details["baseline_ok"] = main.baseline_ok;
    json ladder = json::array();
    for (const auto& [scale, theta] : main.angle.ladder) ladder.push_back({scale, theta});
    rep.details["ladder"] = std::move(ladder);
  } else {
    rep.details["vacuous"] = true;
  }

  if (!main.vacuous && n >= 4 && space->curvature_bound().kappa <= 0.0) {
    const OrbitReport chord = verify_chord_inequality(g, x, s.tolerances);
    rep.details["chord"] = {{"ratio", chord.chord_ratio},
                            {"bound", chord.chord_bound},
                            {"slack", chord.chord_slack},
                            {"equality_class", equality_name(chord.equality)},
                            {"flat_check_ran", chord.flat_check_ran}};
    if (chord.flat_check_ran) rep.details["chord"]["flat"] = chord.flat_report.flat;
    ok = ok && chord.pass;
  }

  if (!main.vacuous && main.equality == EqualityClass::Equality) {
    const EqualityProbeReport probe = equality_case_probe(g, x, s.tolerances);
    if (probe.applicable) {
      rep.details["equality_probe"] = {{"measured", probe.measured},
                                       {"expected", probe.expected},
                                       {"worst_dev", probe.worst_dev},
                                       {"pass", probe.pass}};
      const TangentFlatReport flat = tangent_flat_check(probe.measured, n, 1e-6);
      rep.details["tangent_flat"] = {{"worst_dev", flat.worst_dev}, {"pass", flat.pass}};
      ok = ok && probe.pass && flat.pass;
    }
  }

  if (!ok)
    rep.verdict = "fail";
  else if (main.equality == EqualityClass::Inconclusive)
    rep.verdict = "inconclusive";
  else
    rep.verdict = "pass";
}

void run_polytope_scenario(const Scenario& s, VerificationReport& rep, bool gram_only) {
  const PolytopeSpec spec = spec_from_json(s.config);
  const ConfigTag tag = tag_from_name(
      s.config.contains("tag") ? s.config.at("tag").get<std::string>() : "euclidean-embed");
  const ConfigParams params = params_from_json(s.config);
  rep.n_or_family = family_name(spec.family);
  if (spec.family == PolytopeFamily::Hypercube || spec.family == PolytopeFamily::Orthoplex)
    rep.n_or_family += "-" + std::to_string(spec.dim);

  std::set<std::string> checks;
  if (s.config.contains("checks"))
    for (const auto& c : s.config.at("checks")) checks.insert(c.get<std::string>());
  else
    checks = {"angles", "gram"};
  if (gram_only) checks = {"gram"};

  const EquivariantConfiguration config =
      build_equivariant_configuration(spec, tag, params, s.seed);
  rep.details["tag"] = tag_name(tag);
  rep.details["equivariance_defect"] = config.equivariance_defect;

  bool ok = true;
  bool have_primary = false;
  if (checks.count("angles")) {
    const PolytopeAngleReport angles = verify_polytope_angles(config, s.tolerances);
    rep.measured = angles.measured.value;
    rep.bound = angles.expected_angle;
    rep.slack = angles.slack;
    have_primary = true;
    rep.details["angles"] = {{"expected", angles.expected_angle},
                             {"measured", angles.measured.value},
                             {"slack", angles.slack},
                             {"radius", angles.radius},
                             {"center_method", angles.center_method},
                             {"lang_schroeder_case", angles.lang_schroeder_case},
                             {"pass", angles.pass}};
    for (const auto& note : angles.notes) rep.misprint_notes.push_back(note);
    ok = ok && angles.pass;
  }
  if (checks.count("gram")) {
    const GramCertificateReport gram = gram_sum_certificate(config, s.tolerances);
    if (!have_primary) {
      rep.measured = gram.gram_total;
      rep.bound = 0.0;
      rep.slack = -gram.gram_total;
    }
    json chain = json::array();
    for (const auto& step : gram.chain)
      chain.push_back({{"step", step.description},
                       {"lhs", step.lhs},
                       {"rhs", step.rhs},
                       {"slack", step.slack},
                       {"ok", step.ok}});
    rep.details["gram"] = {{"total", gram.gram_total},
                           {"nonpositive", gram.gram_nonpositive},
                           {"orbit_cos", gram.orbit_cos},
                           {"unit_chord_sq", gram.unit_chord_sq},
                           {"chain", std::move(chain)},
                           {"chain_bound_a1_sq", gram.chain_bound_a1_sq},
                           {"final_angle_bound", gram.final_angle_bound},
                           {"measured_edge_angle", gram.measured_edge_angle},
                           {"pass", gram.pass}};
    for (const auto& note : gram.notes) rep.misprint_notes.push_back(note);
    ok = ok && gram.pass;
  }
  rep.verdict = ok ? "pass" : "fail";
}

void run_circumcenter_scenario(const Scenario& s, VerificationReport& rep) {
  const SpaceRef space = space_from_json(require_field(s.config, "space", "scenario"));
  std::vector<Point> pts;
  for (const auto& pj : require_field(s.config, "points", "scenario"))
    pts.push_back(point_from_json(space, pj));
  CircumcenterOptions opts;
  opts.tol = s.tolerances.kernel;
  if (s.config.contains("max_iter")) opts.max_iter = s.config.at("max_iter").get<int>();
  const CircumcenterResult res = circumcenter(space, pts, opts);
  rep.n_or_family = std::to_string(pts.size());
  rep.measured = res.radius;
  rep.details = {{"center", point_to_json(res.center)},
                 {"radius", res.radius},
                 {"iterations", res.iterations},
                 {"residual", res.residual},
                 {"method", res.method},
                 {"uniqueness_guard", res.uniqueness_guard}};
  rep.verdict = res.residual <= s.tolerances.verify ? "pass" : "fail";
}

void run_hemisphere_scenario(const Scenario& s, VerificationReport& rep) {
  SphericalCurve curve;
  if (s.config.contains("curve")) {
    for (const auto& vj : s.config.at("curve")) {
      Eigen::VectorXd v(vj.size());
      for (size_t i = 0; i < vj.size(); ++i) v(i) = vj.at(i).get<double>();
      curve.vertices.push_back(ModelPoint{std::move(v)});
    }
  } else if (s.config.contains("random")) {
    const json& r = s.config.at("random");
    std::mt19937_64 rng(s.seed);
    curve = random_short_curve(rng, require_field(r, "vertices", "hemisphere").get<int>(),
                               require_field(r, "max_length", "hemisphere").get<double>());
  } else {
    throw InvalidInput("hemisphere scenario: need 'curve' or 'random'");
  }
  const ModelPoint center = hemisphere_center(curve);
  double worst = 0.0;
  for (const auto& v : curve.vertices)
    worst = std::max(worst, unit_sphere_distance(center.coords, v.coords));
  rep.n_or_family = std::to_string(curve.vertices.size());
  rep.measured = worst;
  rep.bound = kPi / 2;
  rep.slack = kPi / 2 - worst;
  json cj = json::array();
  for (int i = 0; i < center.coords.size(); ++i) cj.push_back(center.coords(i));
  rep.details = {{"center", std::move(cj)},
                 {"curve_length", curve.total_length()},
                 {"max_vertex_distance", worst}};
  rep.verdict = worst < kPi / 2 ? "pass" : "fail";
}

}  // namespace

VerificationReport run_scenario(const Scenario& s) {
  VerificationReport rep;
  rep.id = s.id;
  rep.subject = s.subject;
  rep.details["tolerances"] = {{"verify", s.tolerances.verify}, {"kernel", s.tolerances.kernel}};
  const auto start = std::chrono::steady_clock::now();
  try {
    if (s.subject == "isometry")
      run_isometry_scenario(s, rep);
    else if (s.subject == "polytope")
      run_polytope_scenario(s, rep, false);
    else if (s.subject == "gram-cert")
      run_polytope_scenario(s, rep, true);
    else if (s.subject == "circumcenter")
      run_circumcenter_scenario(s, rep);
    else if (s.subject == "hemisphere")
      run_hemisphere_scenario(s, rep);
    else
      throw InvalidInput("scenario: unknown subject '" + s.subject + "'");
  } catch (const RadiusGuardError& e) {
    rep.verdict = "precondition-failed";
    rep.details["precondition"] = e.what();
  } catch (const MathDomainError& e) {
    rep.verdict = "precondition-failed";
    rep.details["precondition"] = e.what();
  } catch (const ConvergenceError& e) {
    rep.verdict = "error";
    rep.details["error"] = e.what();
  }
  rep.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

BatchResult run_batch(const json& batch_config, int jobs) {
  VerifyTolerances defaults;
  std::uint64_t batch_seed = 0;
  if (batch_config.contains("defaults")) {
    const json& d = batch_config.at("defaults");
    if (d.contains("seed")) batch_seed = d.at("seed").get<std::uint64_t>();
    if (d.contains("tolerances")) {
      const json& t = d.at("tolerances");
      if (t.contains("verify")) defaults.verify = t.at("verify").get<double>();
      if (t.contains("kernel")) defaults.kernel = t.at("kernel").get<double>();
    }
  }
  if (!batch_config.contains("scenarios") || !batch_config.at("scenarios").is_array())
    throw InvalidInput("batch: missing 'scenarios' array");

  std::vector<Scenario> scenarios;
  std::set<std::string> ids;
  for (const auto& sj : batch_config.at("scenarios")) {
    scenarios.push_back(scenario_from_json(sj, defaults, batch_seed));
    if (!ids.insert(scenarios.back().id).second)
      throw InvalidInput("batch: duplicate scenario id '" + scenarios.back().id + "'");
  }

  BatchResult result;
  result.reports.resize(scenarios.size());
  auto run_one = [&](size_t i) {
    try {
      result.reports[i] = run_scenario(scenarios[i]);
    } catch (const std::exception& e) {
      VerificationReport rep;
      rep.id = scenarios[i].id;
      rep.subject = scenarios[i].subject;
      rep.verdict = "error";
      rep.details["error"] = e.what();
      result.reports[i] = std::move(rep);
    }
  };

  if (jobs <= 1 || scenarios.size() <= 1) {
    for (size_t i = 0; i < scenarios.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    const int nw = std::min<int>(jobs, static_cast<int>(scenarios.size()));
    for (int w = 0; w < nw; ++w)
      workers.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1)) run_one(i);
      });
    for (auto& t : workers) t.join();
  }

  std::sort(result.reports.begin(), result.reports.end(),
            [](const VerificationReport& a, const VerificationReport& b) { return a.id < b.id; });
  for (const auto& rep : result.reports) {
    if (rep.verdict == "pass") ++result.summary.pass;
    else if (rep.verdict == "fail") ++result.summary.fail;
    else if (rep.verdict == "inconclusive") ++result.summary.inconclusive;
    else if (rep.verdict == "precondition-failed") ++result.summary.precondition_failed;
    else ++result.summary.error;
  }
  if (result.summary.error > 0)
    result.summary.exit_code = 2;
  else if (result.summary.fail > 0)
    result.summary.exit_code = 1;
  else
    result.summary.exit_code = 0;
  return result;
}

BatchResult run_batch_file(const std::string& path, int jobs) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open batch file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("batch file parse error: ") + e.what());
  }
  return run_batch(j, jobs);
}

json batch_to_json(const BatchResult& result, bool include_timing) {
  json reports = json::array();
  for (const auto& rep : result.reports) reports.push_back(rep.to_json(include_timing));
  return json{{"tool_version", kToolVersion},
              {"summary",
               {{"pass", result.summary.pass},
                {"fail", result.summary.fail},
                {"inconclusive", result.summary.inconclusive},
                {"precondition_failed", result.summary.precondition_failed},
                {"error", result.summary.error},
                {"exit_code", result.summary.exit_code}}},
              {"reports", std::move(reports)}};
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "id,subject,n_or_family,measured,bound,slack,verdict\n";
  for (const auto& r : reports)
    os << r.id << ',' << r.subject << ',' << r.n_or_family << ',' << fmt17(r.measured) << ','
       << fmt17(r.bound) << ',' << fmt17(r.slack) << ',' << r.verdict << '\n';
  return os.str();
}

std::string emit_plot_data(const std::vector<VerificationReport>& reports,
                           const std::string& selector) {
  std::ostringstream os;
  if (selector == "rotation-bound") {
    os << "n,angle,bound,baseline,slack\n";
    for (const auto& r : reports) {
      if (r.subject != "isometry") continue;
      os << r.n_or_family << ',' << fmt17(r.measured) << ',' << fmt17(r.bound) << ','
         << fmt17(r.baseline) << ',' << fmt17(r.slack) << '\n';
    }
    return os.str();
  }
  if (selector == "polytope-edge") {
    os << "family,angle,bound,baseline,slack\n";
    for (const auto& r : reports) {
      if (r.subject != "polytope" && r.subject != "gram-cert") continue;
      os << r.n_or_family << ',' << fmt17(r.measured) << ',' << fmt17(r.bound) << ",,"
         << fmt17(r.slack) << '\n';
    }
    return os.str();
  }
  throw InvalidInput("emit_plot_data: unknown selector '" + selector + "'");
}

std::string chord_orbits_csv(const ChordOrbitTable& table) {
  std::ostringstream os;
  os << "family,orbit,rep_i,rep_j,multiplicity,euclid_cos,euclid_angle\n";
  std::string fam = family_name(table.spec.family);
  if (table.spec.family == PolytopeFamily::Hypercube ||
      table.spec.family == PolytopeFamily::Orthoplex)
    fam += "-" + std::to_string(table.spec.dim);
  for (size_t o = 0; o < table.orbits.size(); ++o) {
    const auto& orbit = table.orbits[o];
    os << fam << ',' << o << ',' << orbit.representative.first << ','
       << orbit.representative.second << ',' << orbit.ordered_multiplicity << ','
       << fmt17(orbit.euclid_cos) << ',' << fmt17(orbit.euclid_angle) << '\n';
  }
  return os.str();
}

SphericalCurve random_short_curve(std::mt19937_64& rng, int n_vertices, double max_length) {
  if (n_vertices < 2) throw InvalidInput("random_short_curve: need at least 2 vertices");
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
        curve.vertices.push_back(ModelPoint{unit_sphere_geodesic(center, v, lambda)});
      }
      if (!degenerate) {
        const double len = curve.total_length();
        if (len < max_length && len > 1e-3) return curve;
      }
      lambda *= 0.85;
    }
  }
}

}  // namespace catk
