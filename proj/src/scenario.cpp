#include "tcljump/scenario.hpp"

#include "tcljump/csv.hpp"
#include "tcljump/ensemble.hpp"
#include "tcljump/errors.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/oracle.hpp"
#include "tcljump/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tcljump {

using nlohmann::json;

COperator InitialState::density() const {
  if (!(rho11 >= 0.0 && rho11 <= 1.0)) throw DomainError("initial state: rho11 must lie in [0, 1]");
  if (std::norm(rho10) > rho11 * (1.0 - rho11) + 1e-12) {
    throw DomainError("initial state: |rho10|^2 exceeds rho00 * rho11");
  }
  Eigen::MatrixXcd m(2, 2);
  m << 1.0 - rho11, std::conj(rho10), rho10, rho11;
  return COperator(m);
}

void Scenario::validate() const {
  if (name.empty()) throw DomainError("scenario: empty name");
  if (!(t_end > 0.0)) throw DomainError("scenario: t_end must be positive");
  if (!(dt > 0.0)) throw DomainError("scenario: dt must be positive");
  if (!(output_dt >= dt)) throw DomainError("scenario: output_dt must be at least dt");
  if (initial.empty()) throw DomainError("scenario: no initial state");
  const TimeGrid steps = TimeGrid::uniform(t_end, dt);
  steps.stride_to(TimeGrid::uniform(t_end, output_dt));
  for (const InitialState& s : initial) s.density();
  for (RateMethod m : ensemble_methods) {
    if (m == RateMethod::GmeBorn) throw DomainError("scenario: the GME has no ensemble");
  }
  if (n_traj == 1) throw DomainError("scenario: an ensemble needs at least two trajectories");
}

std::vector<std::string> preset_names() {
  return {"fig1_rates", "fig1_population", "fig1_strong", "fig2_initials", "fig3_detuned", "fig4_gap"};
}

Scenario preset(const std::string& name) {
  using M = RateMethod;
  Scenario s;
  s.name = name;
  const std::vector<RateMethod> all{M::Exact, M::TCL2, M::TCL4, M::Markov, M::GmeBorn};
  if (name == "fig1_rates") {
    s.model = ModelSpec(ResonantJC{1.0, 5.0});
    s.methods = all;
    s.n_traj = 0;
  } else if (name == "fig1_population") {
    s.model = ModelSpec(ResonantJC{1.0, 5.0});
    s.methods = all;
    s.ensemble_methods = {M::TCL4};
  } else if (name == "fig1_strong") {
    s.model = ModelSpec(ResonantJC{1.0, 0.2});
    s.methods = all;
    s.ensemble_methods = {M::TCL4};
  } else if (name == "fig2_initials") {
    s.model = ModelSpec(ResonantJC{1.0, 0.2});
    s.methods = {M::Exact};
    s.initial = {InitialState{1.0, 0.0}, InitialState{0.5, 0.0}, InitialState{0.0, 0.0}};
    s.n_traj = 0;
  } else if (name == "fig3_detuned") {
    s.model = ModelSpec(DetunedJC{1.0, 0.3, 2.4});
    s.methods = {M::Exact, M::TCL2, M::TCL4, M::Markov};
    s.ensemble_methods = {M::TCL4};
  } else if (name == "fig4_gap") {
    s.model = ModelSpec(BandGap{1.0, 10.0, 1.0, 1.1, 0.1});
    s.methods = {M::Exact, M::TCL2, M::TCL4, M::Markov};
    s.ensemble_methods = {M::TCL4};
  } else {
    throw DomainError("unknown scenario '" + name + "'");
  }
  return s;
}

namespace {

json methods_json(const std::vector<RateMethod>& ms) {
  json a = json::array();
  for (RateMethod m : ms) a.push_back(to_string(m));
  return a;
}

std::vector<RateMethod> methods_from(const json& a) {
  std::vector<RateMethod> out;
  for (const json& v : a) out.push_back(rate_method_from_string(v.get<std::string>()));
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  os << text;
  os.close();
  if (!os) throw std::runtime_error("write to " + p.string() + " failed");
}

}  // namespace

json to_json(const Scenario& s) {
  json init = json::array();
  for (const InitialState& i : s.initial) {
    init.push_back({{"rho11", i.rho11}, {"rho10_re", i.rho10.real()}, {"rho10_im", i.rho10.imag()}});
  }
  return {{"name", s.name},
          {"model", to_json(s.model)},
          {"methods", methods_json(s.methods)},
          {"ensemble_methods", methods_json(s.ensemble_methods)},
          {"initial", init},
          {"t_end", s.t_end},
          {"dt", s.dt},
          {"output_dt", s.output_dt},
          {"n_traj", s.n_traj},
          {"seed", s.seed},
          {"workers", s.workers},
          {"jump_log", s.jump_log}};
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("scenario: expected a JSON object");
  Scenario s;
  if (j.contains("preset")) s = preset(j.at("preset").get<std::string>());
  try {
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("model")) s.model = model_from_json(j.at("model"));
    if (j.contains("methods")) s.methods = methods_from(j.at("methods"));
    if (j.contains("ensemble_methods")) s.ensemble_methods = methods_from(j.at("ensemble_methods"));
    if (j.contains("initial")) {
      s.initial.clear();
      for (const json& v : j.at("initial")) {
        s.initial.push_back(InitialState{v.value("rho11", 1.0),
                                         cplx(v.value("rho10_re", 0.0), v.value("rho10_im", 0.0))});
      }
    }
    if (j.contains("t_end")) s.t_end = j.at("t_end").get<double>();
    if (j.contains("dt")) s.dt = j.at("dt").get<double>();
    if (j.contains("output_dt")) s.output_dt = j.at("output_dt").get<double>();
    if (j.contains("n_traj")) s.n_traj = j.at("n_traj").get<std::size_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) s.workers = j.at("workers").get<unsigned>();
    if (j.contains("jump_log")) s.jump_log = j.at("jump_log").get<std::size_t>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("scenario: ") + e.what());
  }
  if (s.name.empty()) s.name = "custom";
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DomainError("scenario file " + file.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

RunSummary run_scenario(const Scenario& s, const std::filesystem::path& outdir) {
  s.validate();
  std::filesystem::create_directories(outdir);
  RunSummary sum;
  const std::string unit = s.model.time_unit();
  const TimeGrid out = TimeGrid::uniform(s.t_end, s.output_dt);
  const TimeGrid fine = TimeGrid::uniform(s.t_end, s.dt);
  const bool many = s.initial.size() > 1;
  auto suffix = [&](std::size_t i) { return many ? "_i" + std::to_string(i) : std::string(); };
  auto emit = [&](const std::string& file, const std::string& text) {
    write_file(outdir / file, text);
    sum.files.push_back(file);
  };

  std::vector<double> times(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) times[k] = out[k];

  for (RateMethod m : s.methods) {
    const std::string tag = to_string(m);
    try {
      const RateFunction f(s.model, m, s.t_end);
      const RateCurve c = rate_curve(f, times);
      std::ostringstream os;
      write_rate_csv(os, c, m, s.model);
      emit("rates_" + tag + ".csv", os.str());
      if (c.truncated) {
        sum.notes.push_back(tag + " rate diverges at t=" + format_double(*c.stopped_at));
      }
    } catch (const DomainError& e) {
      sum.notes.push_back(tag + " rate skipped: " + e.what());
    }

    for (std::size_t i = 0; i < s.initial.size(); ++i) {
      const InitialState& init = s.initial[i];
      try {
        const std::vector<double> p = population(s.model, m, init.rho11, out);
        std::ostringstream os;
        write_population_csv(os, out, p, unit);
        emit("population_" + tag + suffix(i) + ".csv", os.str());
      } catch (const DomainError& e) {
        sum.notes.push_back(tag + " population skipped: " + e.what());
      }
      if (m == RateMethod::GmeBorn) continue;
      try {
        const TimeLocalGenerator g = tcl_generator(s.model, m, s.t_end);
        const DensitySeries d = subsample(propagate(g, init.density(), fine), out);
        std::ostringstream os;
        write_density_csv(os, d, unit);
        emit("density_" + tag + suffix(i) + ".csv", os.str());
        if (d.truncated) {
          sum.notes.push_back(tag + " density" + suffix(i) + " stopped at t=" + format_double(*d.stopped_at));
        }
      } catch (const DomainError& e) {
        sum.notes.push_back(tag + " density skipped: " + e.what());
      } catch (const InstabilityError& e) {
        sum.notes.push_back(tag + " density unstable: " + e.what());
      }
    }
  }

  if (s.methods.end() != std::find(s.methods.begin(), s.methods.end(), RateMethod::Exact)) {
    for (std::size_t i = 0; i < s.initial.size(); ++i) {
      try {
        const std::vector<COperator> rho = exact_density(s.model, s.initial[i].rho11, s.initial[i].rho10, out);
        DensitySeries d{out, rho, false, std::nullopt};
        std::ostringstream os;
        write_density_csv(os, d, unit);
        emit("reference" + suffix(i) + ".csv", os.str());
      } catch (const DomainError& e) {
        sum.notes.push_back(std::string("exact reference skipped: ") + e.what());
      }
    }
  }

  if (s.n_traj > 0) {
    for (RateMethod m : s.ensemble_methods) {
      const std::string tag = to_string(m);
      const TimeLocalGenerator g = tcl_generator(s.model, m, s.t_end);
      for (std::size_t i = 0; i < s.initial.size(); ++i) {
        EnsembleConfig cfg;
        cfg.n_traj = s.n_traj;
        cfg.dt = s.dt;
        cfg.t_end = s.t_end;
        cfg.output_dt = s.output_dt;
        cfg.seed = s.seed + i;
        cfg.workers = s.workers;
        cfg.jump_log_limit = s.jump_log;
        try {
          const EnsembleEstimate e = run_ensemble(g, s.initial[i].density(), cfg);
          std::ostringstream os;
          write_ensemble_csv(os, e, unit);
          emit("ensemble_" + tag + suffix(i) + ".csv", os.str());
          if (s.jump_log > 0) {
            std::ostringstream js;
            write_jump_log_csv(js, e.jump_log, unit);
            emit("jumps_" + tag + suffix(i) + ".csv", js.str());
          }
        } catch (const DomainError& e) {
          sum.notes.push_back(tag + " ensemble skipped: " + e.what());
        }
      }
    }
  }

  json manifest = to_json(s);
  manifest["time_unit"] = unit;
  manifest["files"] = sum.files;
  manifest["notes"] = sum.notes;
  manifest["kernels"] = simd::active_kernels().name;
  write_file(outdir / "manifest.json", manifest.dump(2) + "\n");
  return sum;
}

}  // namespace tcljump
