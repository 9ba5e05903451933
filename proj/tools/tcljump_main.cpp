// tcljump: run a named or file-defined scenario into a directory of CSVs.
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 numerical failure,
// 4 trajectory abort, 5 I/O failure.

#include "tcljump/errors.hpp"
#include "tcljump/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

int fail(const char* category, const std::string& what, int code) {
  std::cerr << "tcljump: " << category << ": " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-convolutionless master equations and their jump unravelings"};
  std::string scenario_name;
  std::string config;
  std::optional<std::size_t> trajectories;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out;
  bool list = false;
  app.add_option("--scenario", scenario_name, "preset name");
  app.add_option("--config", config, "scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--trajectories", trajectories, "ensemble size (0 skips ensembles)");
  app.add_option("--dt", dt, "integration step");
  app.add_option("--t-end", t_end, "final time");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--workers", workers, "worker threads (0: all cores)");
  app.add_option("--out", out, "output directory (default out/<name>)");
  app.add_flag("--list", list, "print the preset names");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (list) {
    for (const std::string& n : tcljump::preset_names()) std::cout << n << '\n';
    return 0;
  }
  if (scenario_name.empty() == config.empty()) {
    return fail("usage", "give exactly one of --scenario and --config", 1);
  }

  try {
    tcljump::Scenario s = config.empty() ? tcljump::preset(scenario_name) : tcljump::load_scenario(config);
    if (trajectories) s.n_traj = *trajectories;
    if (dt) s.dt = *dt;
    if (t_end) s.t_end = *t_end;
    if (seed) s.seed = *seed;
    if (workers) s.workers = *workers;
    if (out.empty()) out = "out/" + s.name;
    const tcljump::RunSummary r = tcljump::run_scenario(s, out);
    for (const std::string& f : r.files) std::cout << out << '/' << f << '\n';
    for (const std::string& n : r.notes) std::cerr << "note: " << n << '\n';
    return 0;
  } catch (const tcljump::DimensionError& e) {
    return fail("invalid input", e.what(), 2);
  } catch (const tcljump::DomainError& e) {
    return fail("invalid input", e.what(), 2);
  } catch (const tcljump::TrajectoryAbort& e) {
    return fail("trajectory abort", e.what(), 4);
  } catch (const tcljump::QuadratureError& e) {
    return fail("numerical failure", e.what(), 3);
  } catch (const tcljump::InstabilityError& e) {
    return fail("numerical failure", e.what(), 3);
  } catch (const tcljump::AmplitudeZeroError& e) {
    return fail("numerical failure", e.what(), 3);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("i/o failure", e.what(), 5);
  } catch (const std::exception& e) {
    return fail("i/o failure", e.what(), 5);
  }
}
