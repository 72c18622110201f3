// Command-line front end: single-scenario verification subcommands, batch
// execution with the exit-code contract (0 all pass, 1 mathematical fail,
// 2 config/schema error), and plot-table emission from stored reports.

#include "catk/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using catk::InvalidInput;
using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("JSON parse error in ") + path + ": " + e.what());
  }
  return j;
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw InvalidInput("cannot open output file: " + out_path);
  out << content;
}

struct GlobalOptions {
  std::string config;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

int run_single(const GlobalOptions& opts, const std::string& subject) {
  if (opts.config.empty()) throw InvalidInput("missing --config");
  json cfg = read_json_file(opts.config);
  if (!cfg.contains("id")) cfg["id"] = subject;
  cfg["subject"] = subject;
  if (opts.seed) cfg["seed"] = *opts.seed;
  if (opts.tol) cfg["tolerances"]["verify"] = *opts.tol;

  catk::VerifyTolerances defaults;
  catk::Scenario scenario = catk::scenario_from_json(cfg, defaults, opts.seed.value_or(0));
  const catk::VerificationReport report = catk::run_scenario(scenario);

  if (opts.format == "csv")
    write_output(opts.out, catk::reports_to_csv({report}));
  else
    write_output(opts.out, report.to_json().dump(2));

  if (report.verdict == "error") return 2;
  if (report.verdict == "fail") return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"comparison-geometry verification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  GlobalOptions opts;
  app.add_option("--config", opts.config, "scenario or batch config (JSON)");
  app.add_option("--out", opts.out, "output path (default: stdout)");
  app.add_option("--format", opts.format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "seed for randomized scenarios");
  double tol_value = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_value, "verification tolerance override");

  auto* cmd_isometry = app.add_subcommand("verify-isometry", "rotation/chord bounds for one isometry");
  auto* cmd_polytope = app.add_subcommand("verify-polytope", "edge-angle and Gram checks for a polytope configuration");
  std::string orbits_csv;
  cmd_polytope->add_option("--orbits-csv", orbits_csv, "also write the chord-orbit table (CSV)");
  auto* cmd_circum = app.add_subcommand("circumcenter", "minimax center of a point set");
  auto* cmd_hemisphere = app.add_subcommand("hemisphere", "hemisphere center of a short closed spherical curve");
  auto* cmd_gram = app.add_subcommand("gram-cert", "Gram-sum certificate for a polytope configuration");
  auto* cmd_batch = app.add_subcommand("batch", "run a batch of scenarios");
  int jobs = 1;
  cmd_batch->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* cmd_plot = app.add_subcommand("plot-data", "emit a plot table from stored reports");
  std::string reports_path, selector = "rotation-bound";
  cmd_plot->add_option("--reports", reports_path, "reports JSON written by 'batch'")->required();
  cmd_plot->add_option("--selector", selector, "rotation-bound | polytope-edge");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count()) opts.seed = seed_value;
  if (tol_opt->count()) opts.tol = tol_value;

  try {
    if (cmd_isometry->parsed()) return run_single(opts, "isometry");
    if (cmd_circum->parsed()) return run_single(opts, "circumcenter");
    if (cmd_hemisphere->parsed()) return run_single(opts, "hemisphere");
    if (cmd_gram->parsed()) return run_single(opts, "gram-cert");
    if (cmd_polytope->parsed()) {
      if (!orbits_csv.empty()) {
        json cfg = read_json_file(opts.config);
        catk::PolytopeSpec spec;
        spec.family = catk::family_from_name(cfg.at("family").get<std::string>());
        if (cfg.contains("k")) spec.dim = cfg.at("k").get<int>();
        write_output(orbits_csv, catk::chord_orbits_csv(catk::chord_orbits(catk::symmetry_group(spec))));
      }
      return run_single(opts, "polytope");
    }
    if (cmd_batch->parsed()) {
      if (opts.config.empty()) throw InvalidInput("missing --config");
      json cfg = read_json_file(opts.config);
      if (opts.seed) cfg["defaults"]["seed"] = *opts.seed;
      if (opts.tol) cfg["defaults"]["tolerances"]["verify"] = *opts.tol;
      const catk::BatchResult result = catk::run_batch(cfg, jobs);
      if (opts.format == "csv")
        write_output(opts.out, catk::reports_to_csv(result.reports));
      else
        write_output(opts.out, catk::batch_to_json(result).dump(2));
      std::cerr << "pass=" << result.summary.pass << " fail=" << result.summary.fail
                << " inconclusive=" << result.summary.inconclusive
                << " precondition-failed=" << result.summary.precondition_failed
                << " error=" << result.summary.error << "\n";
      return result.summary.exit_code;
    }
    if (cmd_plot->parsed()) {
      const json stored = read_json_file(reports_path);
      std::vector<catk::VerificationReport> reports;
      for (const auto& rj : stored.at("reports")) {
        catk::VerificationReport r;
        r.id = rj.value("id", "");
        r.subject = rj.value("subject", "");
        r.n_or_family = rj.value("n_or_family", "");
        r.measured = rj.value("measured", 0.0);
        r.bound = rj.value("bound", 0.0);
        r.baseline = rj.value("baseline", 0.0);
        r.slack = rj.value("slack", 0.0);
        reports.push_back(std::move(r));
      }
      write_output(opts.out, catk::emit_plot_data(reports, selector));
      return 0;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
