#include "tcljump/models.hpp"

#include "tcljump/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tcljump {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string("ModelSpec: ") + name + " must be a finite positive rate");
  }
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string("ModelSpec: ") + name + " must be finite and >= 0");
  }
}

void validate(const ResonantJC& m) {
  require_positive(m.gamma0, "gamma0");
  require_positive(m.lambda, "lambda");
}

void validate(const DetunedJC& m) {
  require_positive(m.gamma0, "gamma0");
  require_positive(m.lambda, "lambda");
  if (!std::isfinite(m.delta)) throw DomainError("ModelSpec: delta must be finite");
}

void validate(const BandGap& m) {
  require_positive(m.omega0, "omega0");
  require_positive(m.gamma1, "gamma1");
  require_positive(m.gamma2, "gamma2");
  require_nonnegative(m.w1, "w1");
  require_nonnegative(m.w2, "w2");
}

void validate(const CustomTable& m) {
  require_positive(m.step, "step");
  if (m.phi.size() < 2 || m.phi.size() != m.psi.size()) {
    throw DomainError("ModelSpec: custom tables need >= 2 points and equal lengths");
  }
  for (std::size_t k = 0; k < m.phi.size(); ++k) {
    if (!std::isfinite(m.phi[k]) || !std::isfinite(m.psi[k])) {
      throw DomainError("ModelSpec: custom table entries must be finite");
    }
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

ModelSpec::ModelSpec(ModelVariant v) : v_(std::move(v)) {
  std::visit([](const auto& m) { validate(m); }, v_);
}

std::string ModelSpec::kind() const {
  return std::visit(overloaded{
                        [](const ResonantJC&) { return std::string("resonant_jc"); },
                        [](const DetunedJC&) { return std::string("detuned_jc"); },
                        [](const BandGap&) { return std::string("band_gap"); },
                        [](const CustomTable&) { return std::string("custom"); },
                    },
                    v_);
}

std::string ModelSpec::id() const {
  return std::visit(
      overloaded{
          [](const ResonantJC& m) {
            return "resonant_jc(gamma0=" + fmt(m.gamma0) + ";lambda=" + fmt(m.lambda) + ")";
          },
          [](const DetunedJC& m) {
            return "detuned_jc(gamma0=" + fmt(m.gamma0) + ";lambda=" + fmt(m.lambda) +
                   ";delta=" + fmt(m.delta) + ")";
          },
          [](const BandGap& m) {
            return "band_gap(omega0=" + fmt(m.omega0) + ";gamma1=" + fmt(m.gamma1) +
                   ";gamma2=" + fmt(m.gamma2) + ";w1=" + fmt(m.w1) + ";w2=" + fmt(m.w2) + ")";
          },
          [](const CustomTable& m) {
            return "custom(step=" + fmt(m.step) + ";points=" + std::to_string(m.phi.size()) + ")";
          },
      },
      v_);
}

std::string ModelSpec::time_unit() const {
  return std::visit(overloaded{
                        [](const BandGap&) { return std::string("1/Omega0"); },
                        [](const CustomTable&) { return std::string("arbitrary"); },
                        [](const auto&) { return std::string("1/gamma0"); },
                    },
                    v_);
}

double spectral_density(const ModelSpec& m, double w) {
  constexpr double inv_2pi = 0.5 * std::numbers::inv_pi;
  return std::visit(
      overloaded{
          [&](const ResonantJC& r) {
            const double l2 = r.lambda * r.lambda;
            return inv_2pi * r.gamma0 * l2 / (w * w + l2);
          },
          [&](const DetunedJC& d) {
            const double l2 = d.lambda * d.lambda;
            const double x = w + d.delta;
            return inv_2pi * d.gamma0 * l2 / (x * x + l2);
          },
          [&](const BandGap& b) {
            const double h1 = 0.5 * b.gamma1;
            const double h2 = 0.5 * b.gamma2;
            return inv_2pi * b.omega0 * b.omega0 *
                   (b.w1 * b.gamma1 / (w * w + h1 * h1) - b.w2 * b.gamma2 / (w * w + h2 * h2));
          },
          [](const CustomTable&) -> double {
            throw DomainError("spectral_density: custom models carry no J(w)");
          },
      },
      m.variant());
}

Correlation correlation(const ModelSpec& m, double t) {
  if (!(t >= 0.0)) throw DomainError("correlation: t must be >= 0");
  return std::visit(
      overloaded{
          [&](const ResonantJC& r) {
            return Correlation{r.gamma0 * r.lambda * std::exp(-r.lambda * t), 0.0};
          },
          [&](const DetunedJC& d) {
            const double env = d.gamma0 * d.lambda * std::exp(-d.lambda * t);
            return Correlation{env * std::cos(d.delta * t), env * std::sin(d.delta * t)};
          },
          [&](const BandGap& b) {
            const double s = 2.0 * b.omega0 * b.omega0;
            return Correlation{
                s * (b.w1 * std::exp(-0.5 * b.gamma1 * t) - b.w2 * std::exp(-0.5 * b.gamma2 * t)),
                0.0};
          },
          [&](const CustomTable& c) {
            const double x = t / c.step;
            const auto last = c.phi.size() - 1;
            if (x > static_cast<double>(last) * (1.0 + 1e-12)) {
              throw DomainError("correlation: t beyond the custom table");
            }
            auto k = static_cast<std::size_t>(std::floor(x));
            if (k >= last) return Correlation{c.phi[last], c.psi[last]};
            const double f = x - static_cast<double>(k);
            return Correlation{c.phi[k] + f * (c.phi[k + 1] - c.phi[k]),
                               c.psi[k] + f * (c.psi[k + 1] - c.psi[k])};
          },
      },
      m.variant());
}

std::vector<ExponentialTerm> exponential_terms(const ModelSpec& m) {
  using C = std::complex<double>;
  return std::visit(
      overloaded{
          [](const ResonantJC& r) {
            return std::vector<ExponentialTerm>{{C(0.5 * r.gamma0 * r.lambda), C(r.lambda)}};
          },
          [](const DetunedJC& d) {
            return std::vector<ExponentialTerm>{
                {C(0.5 * d.gamma0 * d.lambda), C(d.lambda, -d.delta)}};
          },
          [](const BandGap& b) {
            const double s = b.omega0 * b.omega0;
            return std::vector<ExponentialTerm>{{C(s * b.w1), C(0.5 * b.gamma1)},
                                                {C(-s * b.w2), C(0.5 * b.gamma2)}};
          },
          [](const CustomTable&) -> std::vector<ExponentialTerm> {
            throw DomainError("exponential_terms: custom models have no pole decomposition");
          },
      },
      m.variant());
}

nlohmann::json to_json(const ModelSpec& m) {
  nlohmann::json j;
  j["variant"] = m.kind();
  std::visit(overloaded{
                 [&](const ResonantJC& r) {
                   j["gamma0"] = r.gamma0;
                   j["lambda"] = r.lambda;
                 },
                 [&](const DetunedJC& d) {
                   j["gamma0"] = d.gamma0;
                   j["lambda"] = d.lambda;
                   j["delta"] = d.delta;
                 },
                 [&](const BandGap& b) {
                   j["omega0"] = b.omega0;
                   j["gamma1"] = b.gamma1;
                   j["gamma2"] = b.gamma2;
                   j["w1"] = b.w1;
                   j["w2"] = b.w2;
                 },
                 [&](const CustomTable& c) {
                   j["step"] = c.step;
                   j["phi"] = c.phi;
                   j["psi"] = c.psi;
                 },
             },
             m.variant());
  return j;
}

ModelSpec model_from_json(const nlohmann::json& j) {
  try {
    const std::string v = j.at("variant").get<std::string>();
    if (v == "resonant_jc") {
      return ModelSpec(ResonantJC{j.at("gamma0").get<double>(), j.at("lambda").get<double>()});
    }
    if (v == "detuned_jc") {
      return ModelSpec(DetunedJC{j.at("gamma0").get<double>(), j.at("lambda").get<double>(),
                                 j.at("delta").get<double>()});
    }
    if (v == "band_gap") {
      return ModelSpec(BandGap{j.at("omega0").get<double>(), j.at("gamma1").get<double>(),
                               j.at("gamma2").get<double>(), j.at("w1").get<double>(),
                               j.at("w2").get<double>()});
    }
    if (v == "custom") {
      return ModelSpec(CustomTable{j.at("step").get<double>(),
                                   j.at("phi").get<std::vector<double>>(),
                                   j.at("psi").get<std::vector<double>>()});
    }
    throw DomainError("model_from_json: unknown variant '" + v + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("model_from_json: ") + e.what());
  }
}

}  // namespace tcljump
