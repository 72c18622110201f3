#pragma once
// Scenario ingestion from JSON configs, deterministic batch execution,
// report serialization (JSON and CSV), and plot-table emission.

#include "catk/polytope.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace catk {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// JSON <-> domain objects

SpaceRef space_from_json(const nlohmann::json& j);
nlohmann::json space_to_json(const Space& space);
Point point_from_json(const SpaceRef& space, const nlohmann::json& j);
nlohmann::json point_to_json(const Point& p);
Isometry isometry_from_json(const SpaceRef& space, const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Scenarios and reports

struct Scenario {
  std::string id;
  std::string subject;  // isometry | polytope | circumcenter | hemisphere | gram-cert
  nlohmann::json config;
  VerifyTolerances tolerances;
  std::uint64_t seed = 0;  // already mixed with the scenario id
};

struct VerificationReport {
  std::string id;
  std::string subject;
  std::string verdict;  // pass | fail | inconclusive | precondition-failed | error
  std::string n_or_family;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double baseline = 0.0;
  nlohmann::json details;
  std::vector<std::string> misprint_notes;
  double timing_ms = 0.0;
  std::string tool_version = kToolVersion;

  nlohmann::json to_json(bool include_timing = true) const;
};

// Deterministic per-scenario random stream: mixes the batch seed with the id.
std::uint64_t scenario_stream_seed(std::uint64_t batch_seed, const std::string& id);

// Runs one scenario. Mathematical failures and violated guards become
// verdicts; only malformed configs throw (InvalidInput).
VerificationReport run_scenario(const Scenario& scenario);

struct BatchSummary {
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
  int precondition_failed = 0;
  int error = 0;
  int exit_code = 0;  // 0 all pass; 1 mathematical fail; 2 config/schema error
};

struct BatchResult {
  std::vector<VerificationReport> reports;  // sorted by scenario id
  BatchSummary summary;
};

Scenario scenario_from_json(const nlohmann::json& j, const VerifyTolerances& defaults,
                            std::uint64_t batch_seed);
BatchResult run_batch(const nlohmann::json& batch_config, int jobs = 1);
BatchResult run_batch_file(const std::string& path, int jobs = 1);

nlohmann::json batch_to_json(const BatchResult& result, bool include_timing = true);
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

// Plot-ready table for a report list. Selectors: "rotation-bound" (rows
// n, angle, 2pi/n, 1/n, slack) and "polytope-edge" (rows family, angle,
// bound, -, slack).
std::string emit_plot_data(const std::vector<VerificationReport>& reports,
                           const std::string& selector);

// Chord-orbit table as CSV (family, orbit, representative, multiplicity,
// euclid_cos, euclid_angle).
std::string chord_orbits_csv(const ChordOrbitTable& table);

// Seeded random closed spherical polygon of total length below max_length,
// used by hemisphere scenarios and the acceptance suite.
SphericalCurve random_short_curve(std::mt19937_64& rng, int n_vertices, double max_length);

}  // namespace catk
