// clv — scenario runner for the Clifford-form operator verification engine.
//
// Subcommands:
//   run <scenario.json>      evaluate every check, print a JSON report
//   certify <geometry.json>  certify a geometry backend's curvature data
//   list-equations           print the equation-id table
//
// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 schema error,
// 3 precondition failure, 4 numerical singularity.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clv/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"clv: Clifford-form and spinor operator verification engine"};
  app.require_subcommand(1);

  std::string run_file;
  int points = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol_scale = 1.0;

  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("file", run_file, "scenario JSON file")->required();
  run_cmd->add_option("--points", points, "override sample point count");
  run_cmd->add_option("--seed", seed, "override RNG seed")
      ->each([&](const std::string&) { seed_set = true; });
  run_cmd->add_option("--tolerance-scale", tol_scale,
                      "multiply every check tolerance");

  std::string cert_file;
  int cert_points = -1;
  std::uint64_t cert_seed = 0;
  bool cert_seed_set = false;
  auto* cert_cmd = app.add_subcommand("certify", "certify a geometry backend");
  cert_cmd->add_option("file", cert_file, "geometry spec JSON file")->required();
  cert_cmd->add_option("--points", cert_points, "override sample point count");
  cert_cmd->add_option("--seed", cert_seed, "override RNG seed")
      ->each([&](const std::string&) { cert_seed_set = true; });

  auto* list_cmd =
      app.add_subcommand("list-equations", "print the equation-id table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      clv::RunOptions opt;
      if (points > 0) opt.points_override = points;
      if (seed_set) opt.seed_override = seed;
      opt.tolerance_scale = tol_scale;
      clv::RunResult r = clv::run_scenario(clv::load_json_file(run_file), opt);
      std::cout << r.report.dump(2) << "\n";
      return r.exit_code;
    }
    if (cert_cmd->parsed()) {
      clv::RunOptions opt;
      if (cert_points > 0) opt.points_override = cert_points;
      if (cert_seed_set) opt.seed_override = cert_seed;
      clv::RunResult r =
          clv::certify_scenario(clv::load_json_file(cert_file), opt);
      std::cout << r.report.dump(2) << "\n";
      return r.exit_code;
    }
    if (list_cmd->parsed()) {
      for (const auto& row : clv::equation_listing()) {
        std::printf("%-24s %-12s %s\n", row["id"].get<std::string>().c_str(),
                    row["subject"].get<std::string>().c_str(),
                    row["summary"].get<std::string>().c_str());
      }
      return 0;
    }
  } catch (const clv::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
