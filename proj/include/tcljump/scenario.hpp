// scenario.hpp: named experiments: model, methods, initial states and
// numerical settings, runnable into a directory of CSV files plus a manifest.

#pragma once

#include "tcljump/hilbert.hpp"
#include "tcljump/models.hpp"
#include "tcljump/rates.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tcljump {

struct InitialState {
  double rho11 = 1.0;
  cplx rho10 = 0.0;  // <1|rho|0>

  COperator density() const;  // throws DomainError unless positive
};

struct Scenario {
  std::string name;
  ModelSpec model{ResonantJC{}};
  std::vector<RateMethod> methods;           // deterministic rates, populations, densities
  std::vector<RateMethod> ensemble_methods;  // doubled-space ensembles
  std::vector<InitialState> initial{InitialState{}};
  double t_end = 10.0;
  double dt = 1e-3;
  double output_dt = 0.1;
  std::size_t n_traj = 100000;  // 0 skips the ensembles
  std::uint64_t seed = 12345;
  unsigned workers = 0;
  std::size_t jump_log = 0;  // trajectories whose jumps are logged

  // Throws DomainError on inconsistent settings.
  void validate() const;
};

std::vector<std::string> preset_names();
// Throws DomainError for an unknown name.
Scenario preset(const std::string& name);

nlohmann::json to_json(const Scenario& s);
// Keys not given keep the values of "preset" (when present) or the defaults.
Scenario scenario_from_json(const nlohmann::json& j);
// Throws std::runtime_error when the file cannot be read or parsed.
Scenario load_scenario(const std::filesystem::path& file);

struct RunSummary {
  std::vector<std::string> files;  // relative to the output directory
  std::vector<std::string> notes;  // non-fatal conditions (truncations, skipped outputs)
};

// Writes the CSV files and manifest.json into outdir (created when missing).
// Divergences and unsupported method/model pairs become notes; I/O failures throw.
RunSummary run_scenario(const Scenario& s, const std::filesystem::path& outdir);

}  // namespace tcljump
