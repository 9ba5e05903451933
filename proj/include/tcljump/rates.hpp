// rates.hpp: decay rate gamma(t) and Lamb shift S(t) of the two-level
// emitter under the exact, TCL2, TCL4, Markov and GME-Born descriptions.
//
// The closed forms cover the Jaynes-Cummings models; band-gap and tabulated
// reservoirs fall back to cumulative trapezoids (second order) and the
// reduced quadrature of quadrature.hpp (fourth order).

#pragma once

#include "tcljump/models.hpp"
#include "tcljump/quadrature.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcljump {

enum class RateMethod { Exact, TCL2, TCL4, Markov, GmeBorn };

std::string to_string(RateMethod m);
// "exact" | "tcl2" | "tcl4" | "markov" | "gme"; throws DomainError otherwise.
RateMethod rate_method_from_string(std::string_view s);

// |c1(t)| at or below this value makes the exact rate undefined.
inline constexpr double kAmplitudeFloor = 1e-12;
// Evaluation time standing in for t -> infinity.
inline constexpr double kDefaultHorizon = 10.0;

RatePair markov_rate(const ModelSpec& m);
RatePair tcl2_rate(const ModelSpec& m, double t);
RatePair tcl4_rate(const ModelSpec& m, double t, const QuadratureOptions& opts = {});
// Throws AmplitudeZeroError where the amplitude vanishes.
RatePair exact_rate(const ModelSpec& m, double t);
// Resonant model only; throws AmplitudeZeroError at zeros of the GME population.
RatePair gme_rate(const ModelSpec& m, double t);

RatePair evaluate_rate(const ModelSpec& m, RateMethod method, double t);
RatePair asymptotic_rate(const ModelSpec& m, RateMethod method,
                         double horizon = kDefaultHorizon);

// First zero of the amplitude governing `method` (exact: c1, GME: the GME
// population) for the resonant model; none when it decays monotonically or
// the method has no such singularity.
std::optional<double> rate_breakdown_time(const ModelSpec& m, RateMethod method);

// Rate of one (model, method) pair, ready for repeated evaluation. Methods
// that need a numerical table build it once over [0, horizon].
class RateFunction {
 public:
  RateFunction(ModelSpec m, RateMethod method, double horizon = kDefaultHorizon);

  const ModelSpec& model() const noexcept { return model_; }
  RateMethod method() const noexcept { return method_; }
  double horizon() const noexcept { return horizon_; }
  std::optional<double> breakdown_time() const noexcept { return breakdown_; }

  RatePair operator()(double t) const;

 private:
  ModelSpec model_;
  RateMethod method_;
  double horizon_;
  std::optional<double> breakdown_;
  std::shared_ptr<const RateTable> table_;
};

struct RateCurve {
  std::vector<double> t;
  std::vector<RatePair> values;
  bool truncated = false;  // stopped at a divergence
  std::optional<double> stopped_at;
};

// Samples the rate on times; stops at the first divergence.
RateCurve rate_curve(const RateFunction& f, const std::vector<double>& times);

}  // namespace tcljump
