// models.hpp: reservoir models: spectral densities and the rotating-frame
// correlation functions Phi(t), Psi(t) with
//
//   Phi(t) + i Psi(t) = 2 \int J(w) exp(i (w_S - w) t) dw.
//
// All parameters are dimensionless: the Jaynes-Cummings models measure time in
// 1/gamma0, the band-gap model in 1/Omega0. Frequencies are offsets from w_S.

#pragma once

#include <json.hpp>

#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tcljump {

struct ResonantJC {
  double gamma0 = 1.0;
  double lambda = 1.0;
};

struct DetunedJC {
  double gamma0 = 1.0;
  double lambda = 1.0;
  double delta = 0.0;  // w_S - w_cavity
};

struct BandGap {
  double omega0 = 1.0;
  double gamma1 = 10.0;
  double gamma2 = 1.0;
  double w1 = 1.1;
  double w2 = 0.1;
};

// Phi, Psi tabulated on t_k = k * step, k = 0..size-1; linear interpolation.
struct CustomTable {
  double step = 0.0;
  std::vector<double> phi;
  std::vector<double> psi;

  double horizon() const { return step * static_cast<double>(phi.size() - 1); }
};

using ModelVariant = std::variant<ResonantJC, DetunedJC, BandGap, CustomTable>;

struct Correlation {
  double phi = 0.0;
  double psi = 0.0;
};

// a * exp(-rate * t); the half-kernel (Phi + i Psi)/2 of every built-in model
// is a finite sum of these.
struct ExponentialTerm {
  std::complex<double> amplitude;
  std::complex<double> rate;
};

class ModelSpec {
 public:
  // Validates parameters; throws DomainError.
  explicit ModelSpec(ModelVariant v);

  const ModelVariant& variant() const noexcept { return v_; }
  bool is_resonant() const noexcept { return std::holds_alternative<ResonantJC>(v_); }
  bool is_custom() const noexcept { return std::holds_alternative<CustomTable>(v_); }

  // "resonant_jc" | "detuned_jc" | "band_gap" | "custom"
  std::string kind() const;
  // Compact parameter string used as the model-id column of CSV exports.
  std::string id() const;
  // "1/gamma0" or "1/Omega0" (custom: "arbitrary")
  std::string time_unit() const;

 private:
  ModelVariant v_;
};

// J(w) at frequency offset w - w_S. Throws DomainError for Custom.
double spectral_density(const ModelSpec& m, double omega_offset);

// (Phi(t), Psi(t)); t >= 0, Custom only inside its grid.
Correlation correlation(const ModelSpec& m, double t);

// Pole decomposition of (Phi + i Psi)/2. Throws DomainError for Custom.
std::vector<ExponentialTerm> exponential_terms(const ModelSpec& m);

nlohmann::json to_json(const ModelSpec& m);
ModelSpec model_from_json(const nlohmann::json& j);

}  // namespace tcljump
