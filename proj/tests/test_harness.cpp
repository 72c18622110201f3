#include <doctest.h>

#include "catk/harness.hpp"

#include <cmath>
#include <numbers>

using namespace catk;
using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;

json rotation_matrix_json(double theta) {
  return json::array({std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)});
}

json minimal_isometry_scenario(const std::string& id, int n) {
  return json{{"id", id},
              {"subject", "isometry"},
              {"space", {{"kind", "euclidean"}, {"dim", 2}}},
              {"isometry",
               {{"kind", "orthogonal"}, {"order", n}, {"matrix", rotation_matrix_json(2 * kPi / n)}}},
              {"point", {1.0, 0.0}}};
}

json h2_rotation_scenario(const std::string& id, int n, double rho) {
  const double c = std::cos(2 * kPi / n), s = std::sin(2 * kPi / n);
  return json{{"id", id},
              {"subject", "isometry"},
              {"space", {{"kind", "hyperbolic"}, {"dim", 2}}},
              {"isometry",
               {{"kind", "lorentz"},
                {"order", n},
                {"matrix", {1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c}}}},
              {"point", {std::cosh(rho), std::sinh(rho), 0.0}}};
}
}  // namespace

TEST_CASE("space and point JSON round trips") {
  const std::vector<json> space_configs = {
      {{"kind", "euclidean"}, {"dim", 3}},
      {{"kind", "hyperbolic"}, {"dim", 2}},
      {{"kind", "sphere"}, {"dim", 2}, {"radius", 1.5}},
      {{"kind", "tree"}, {"edges", {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 0.5}}}},
      {{"kind", "product"},
       {"factors",
        {{{"kind", "euclidean"}, {"dim", 2}},
         {{"kind", "tree"}, {"edges", {{0, 1, 1.0}, {0, 2, 1.0}}}}}}},
      {{"kind", "cone"}, {"base", {{"kind", "sphere"}, {"dim", 1}, {"radius", 1.5}}}},
  };
  for (const auto& cfg : space_configs) {
    const SpaceRef space = space_from_json(cfg);
    const SpaceRef again = space_from_json(space_to_json(*space));
    CHECK(space->equals(*again));
  }
  SUBCASE("points per payload kind") {
    auto tree = space_from_json(space_configs[3]);
    const Point tp = point_from_json(tree, json{{"edge", 1}, {"offset", 0.25}});
    CHECK(distance(tp, point_from_json(tree, point_to_json(tp))) == 0.0);
    auto cone = space_from_json(space_configs[5]);
    const Point cp = point_from_json(cone, json{{"radius", 2.0}, {"base", {1.5, 0.0}}});
    CHECK(distance(cp, point_from_json(cone, point_to_json(cp))) == 0.0);
    const Point apex = point_from_json(cone, json{{"apex", true}});
    CHECK(distance(apex, cp) == doctest::Approx(2.0));
  }
  SUBCASE("schema violations throw") {
    CHECK_THROWS_AS(space_from_json(json{{"kind", "nonsense"}}), InvalidInput);
    CHECK_THROWS_AS(space_from_json(json{{"kind", "euclidean"}}), InvalidInput);
  }
}

TEST_CASE("minimal scenario: planar order-5 rotation passes with zero slack") {
  const Scenario s = scenario_from_json(minimal_isometry_scenario("minimal", 5), {}, 0);
  const VerificationReport rep = run_scenario(s);
  CHECK(rep.verdict == "pass");
  CHECK(rep.n_or_family == "5");
  CHECK(std::abs(rep.slack) < 1e-9);
  CHECK(rep.details.at("equality_class") == "equality");
  CHECK(rep.details.at("equality_probe").at("pass").get<bool>());
  CHECK(rep.details.at("tangent_flat").at("pass").get<bool>());
  CHECK(rep.details.at("chord").at("flat").get<bool>());
}

TEST_CASE("determinism: identical scenario gives an identical report body") {
  const Scenario s = scenario_from_json(h2_rotation_scenario("det", 7, 1.1), {}, 42);
  const VerificationReport a = run_scenario(s);
  const VerificationReport b = run_scenario(s);
  CHECK(a.to_json(false).dump() == b.to_json(false).dump());
}

TEST_CASE("guard violations surface as precondition-failed") {
  // Sphere rotation with an equatorial point: orbit radius hits pi/2.
  const double c = std::cos(2 * kPi / 5), s5 = std::sin(2 * kPi / 5);
  const json scenario = json{
      {"id", "guard"},
      {"subject", "isometry"},
      {"space", {{"kind", "sphere"}, {"dim", 2}, {"radius", 1.0}}},
      {"isometry",
       {{"kind", "sphere-rotation"},
        {"order", 5},
        {"matrix", {c, -s5, 0.0, s5, c, 0.0, 0.0, 0.0, 1.0}}}},
      {"point", {1.0, 0.0, 0.0}}};
  const VerificationReport rep = run_scenario(scenario_from_json(scenario, {}, 0));
  CHECK(rep.verdict == "precondition-failed");
}

TEST_CASE("batch execution") {
  SUBCASE("empty batch exits 0") {
    const BatchResult r = run_batch(json{{"scenarios", json::array()}});
    CHECK(r.reports.empty());
    CHECK(r.summary.exit_code == 0);
  }
  SUBCASE("mixed batch with a corrupted scenario completes the rest") {
    json batch = {{"defaults", {{"seed", 7}}},
                  {"scenarios",
                   {minimal_isometry_scenario("a", 5), h2_rotation_scenario("b", 6, 0.8),
                    json{{"id", "broken"}, {"subject", "isometry"}, {"space", {{"kind", "euclidean"}}}}}}};
    const BatchResult r = run_batch(batch);
    REQUIRE(r.reports.size() == 3);
    CHECK(r.summary.pass == 2);
    CHECK(r.summary.error == 1);
    CHECK(r.summary.exit_code == 2);
    CHECK(r.reports[0].id == "a");  // sorted by id
    CHECK(r.reports[2].id == "broken");
  }
  SUBCASE("negative-control tolerance forces a mathematical fail") {
    json strict = minimal_isometry_scenario("strict", 5);
    strict["tolerances"] = {{"verify", -1.0}};  // demands slack >= 1
    const BatchResult r = run_batch(json{{"scenarios", {strict}}});
    CHECK(r.summary.fail == 1);
    CHECK(r.summary.exit_code == 1);
  }
  SUBCASE("duplicate ids are a schema error") {
    json batch = {{"scenarios", {minimal_isometry_scenario("x", 5), minimal_isometry_scenario("x", 6)}}};
    CHECK_THROWS_AS(run_batch(batch), InvalidInput);
  }
  SUBCASE("concurrent execution is schedule-independent") {
    json batch = {{"defaults", {{"seed", 11}}}, {"scenarios", json::array()}};
    for (int n = 3; n <= 10; ++n)
      batch["scenarios"].push_back(minimal_isometry_scenario("n" + std::to_string(n), n));
    const BatchResult seq = run_batch(batch, 1);
    const BatchResult par = run_batch(batch, 4);
    CHECK(batch_to_json(seq, false).dump() == batch_to_json(par, false).dump());
  }
}

TEST_CASE("polytope and gram-cert scenarios") {
  const json scenario = json{{"id", "icosa-tree"},
                             {"subject", "polytope"},
                             {"family", "icosahedron"},
                             {"tag", "tree-star"},
                             {"params", {{"offset", 0.7}}}};
  const VerificationReport rep = run_scenario(scenario_from_json(scenario, {}, 0));
  CHECK(rep.verdict == "pass");
  CHECK(rep.measured == doctest::Approx(kPi));
  CHECK(rep.bound == doctest::Approx(1.1071487177940904));
  CHECK(rep.details.at("gram").at("total").get<double>() < 0.0);

  const json gram_only = json{{"id", "dodeca-gram"},
                              {"subject", "gram-cert"},
                              {"family", "dodecahedron"},
                              {"tag", "euclidean-embed"}};
  const VerificationReport grep = run_scenario(scenario_from_json(gram_only, {}, 0));
  CHECK(grep.verdict == "pass");
  CHECK(std::abs(grep.measured) < 1e-9);
  CHECK(!grep.misprint_notes.empty());
}

TEST_CASE("circumcenter and hemisphere scenarios") {
  const json cc = json{{"id", "cc"},
                       {"subject", "circumcenter"},
                       {"space", {{"kind", "euclidean"}, {"dim", 2}}},
                       {"points", {{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}}}};
  const VerificationReport crep = run_scenario(scenario_from_json(cc, {}, 0));
  CHECK(crep.verdict == "pass");
  CHECK(crep.measured == doctest::Approx(1.0).epsilon(1e-10));

  const json hemi = json{{"id", "hemi"},
                         {"subject", "hemisphere"},
                         {"random", {{"vertices", 9}, {"max_length", 5.9}}}};
  const VerificationReport hrep = run_scenario(scenario_from_json(hemi, {}, 123));
  CHECK(hrep.verdict == "pass");
  CHECK(hrep.measured < kPi / 2);

  SUBCASE("identical seeds reproduce the random curve") {
    const VerificationReport again = run_scenario(scenario_from_json(hemi, {}, 123));
    CHECK(again.to_json(false).dump() == hrep.to_json(false).dump());
  }
}

TEST_CASE("plot data emission") {
  SUBCASE("rotation sweep on the hyperbolic plane: angle equals the bound") {
    json batch = {{"defaults", {{"seed", 3}}}, {"scenarios", json::array()}};
    for (int n = 3; n <= 12; ++n)
      batch["scenarios"].push_back(h2_rotation_scenario(
          "h2-n" + std::string(n < 10 ? "0" : "") + std::to_string(n), n, 1.0));
    const BatchResult r = run_batch(batch);
    CHECK(r.summary.pass == 10);
    const std::string table = emit_plot_data(r.reports, "rotation-bound");
    std::istringstream is(table);
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,angle,bound,baseline,slack");
    int rows = 0;
    while (std::getline(is, line)) {
      ++rows;
      // angle column equals the 2 pi / n bound column for these sweeps
      std::istringstream ls(line);
      std::string n_s, angle_s, bound_s;
      std::getline(ls, n_s, ',');
      std::getline(ls, angle_s, ',');
      std::getline(ls, bound_s, ',');
      CHECK(std::abs(std::stod(angle_s) - std::stod(bound_s)) < 1e-6);
    }
    CHECK(rows == 10);
  }
  SUBCASE("empty report list gives a header-only file") {
    CHECK(emit_plot_data({}, "rotation-bound") == "n,angle,bound,baseline,slack\n");
  }
  SUBCASE("unknown selector is rejected") {
    CHECK_THROWS_AS(emit_plot_data({}, "bogus"), InvalidInput);
  }
  SUBCASE("orthoplex sweep rows carry the pi/2 bound") {
    json batch = {{"scenarios", json::array()}};
    for (int k = 2; k <= 4; ++k)
      batch["scenarios"].push_back(json{{"id", "orth" + std::to_string(k)},
                                        {"subject", "polytope"},
                                        {"family", "orthoplex"},
                                        {"k", k},
                                        {"tag", "euclidean-embed"},
                                        {"checks", {"angles"}}});
    const BatchResult r = run_batch(batch);
    CHECK(r.summary.pass == 3);
    const std::string table = emit_plot_data(r.reports, "polytope-edge");
    std::istringstream is(table);
    std::string line;
    std::getline(is, line);
    int rows = 0;
    while (std::getline(is, line)) {
      ++rows;
      CHECK(line.find(std::to_string(kPi / 2).substr(0, 6)) != std::string::npos);
    }
    CHECK(rows == 3);
  }
}

TEST_CASE("report CSV shape") {
  const Scenario s = scenario_from_json(minimal_isometry_scenario("csv", 5), {}, 0);
  const std::string csv = reports_to_csv({run_scenario(s)});
  CHECK(csv.find("id,subject,n_or_family,measured,bound,slack,verdict") == 0);
  CHECK(csv.find("csv,isometry,5,") != std::string::npos);
  CHECK(csv.find("pass") != std::string::npos);
}

TEST_CASE("chord orbit CSV") {
  const auto table = chord_orbits(symmetry_group({PolytopeFamily::Icosahedron, 3}));
  const std::string csv = chord_orbits_csv(table);
  CHECK(csv.find("icosahedron,0,") != std::string::npos);
  CHECK(csv.find(",60,") != std::string::npos);
  CHECK(csv.find(",12,") != std::string::npos);
}
