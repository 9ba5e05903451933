#include "tcljump/rates.hpp"

#include "tcljump/errors.hpp"
#include "tcljump/oracle.hpp"
#include "pole_form.hpp"

#include <cmath>
#include <numbers>
#include <variant>

namespace tcljump {

namespace {

using cplx = std::complex<double>;
using detail::pole_form;
using detail::PoleForm;

void check_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be >= 0");
}

// A detuned model on resonance is the resonant model.
std::optional<ResonantJC> as_resonant(const ModelSpec& m) {
  if (const auto* r = std::get_if<ResonantJC>(&m.variant())) return *r;
  if (const auto* d = std::get_if<DetunedJC>(&m.variant()); d != nullptr && d->delta == 0.0) {
    return ResonantJC{d->gamma0, d->lambda};
  }
  return std::nullopt;
}

// (1 - e^{-nu t}) / nu without cancellation for small |nu t|.
cplx one_minus_exp_over(cplx nu, double t) {
  const double a = nu.real() * t;
  const double b = nu.imag() * t;
  const double ea = std::exp(-a);
  const double sb = std::sin(0.5 * b);
  // 1 - e^{-a}(cos b - i sin b)
  const cplx num(-std::expm1(-a) + ea * 2.0 * sb * sb, ea * std::sin(b));
  return num / nu;
}

// (sinh x - x) e^{-x}
double sinh_minus_x_damped(double x) {
  if (x < 0.1) {
    const double x2 = x * x;
    const double series = x * x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (1.0 / 5040.0 + x2 / 362880.0)));
    return series * std::exp(-x);
  }
  return -0.5 * std::expm1(-2.0 * x) - x * std::exp(-x);
}

double integrate_linear(const std::vector<double>& f, double h, double t) {
  const std::size_t n = f.size();
  const double x = t / h;
  if (x > static_cast<double>(n - 1) * (1.0 + 1e-12)) {
    throw DomainError("tabulated correlation: t outside the grid");
  }
  std::size_t k = static_cast<std::size_t>(x);
  if (k > n - 2) k = n - 2;
  const double frac = x - static_cast<double>(k);
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) s += 0.5 * h * (f[j] + f[j + 1]);
  return s + h * frac * (f[k] + 0.5 * frac * (f[k + 1] - f[k]));
}

RatePair resonant_tcl4(const ResonantJC& r, double t) {
  const double x = r.lambda * t;
  return {r.gamma0 * (-std::expm1(-x) + r.gamma0 / r.lambda * sinh_minus_x_damped(x)), 0.0};
}

RatePair detuned_tcl4(const DetunedJC& d, double t) {
  const double g0 = d.gamma0;
  const double l = d.lambda;
  const double D = d.delta;
  const double l2 = l * l;
  const double D2 = D * D;
  const double n2 = l2 + D2;
  const double e = std::exp(-l * t);
  const double s1 = std::sin(D * t);
  const double c1 = std::cos(D * t);
  const double h = std::sin(0.5 * D * t);
  const double one_minus_ec = -std::expm1(-l * t) + e * 2.0 * h * h;  // 1 - e cos(Dt)
  const double one_minus_e2c2 = -std::expm1(-2.0 * l * t) + e * e * 2.0 * s1 * s1;  // 1 - e^2 cos(2Dt)
  const double e2s2 = e * e * std::sin(2.0 * D * t);

  const double pre2 = g0 * l / n2;
  const double pre4 = g0 * g0 * l2 / (2.0 * n2 * n2 * n2);

  RatePair out;
  out.gamma = pre2 * (l * one_minus_ec + D * e * s1) +
              pre4 * (l * (l2 - 3.0 * D2) * one_minus_e2c2 - 2.0 * (l2 * l2 - D2 * D2) * t * e * c1 +
                      4.0 * l * D * n2 * t * e * s1 + D * (3.0 * l2 - D2) * e2s2);
  out.shift = pre2 * (D * one_minus_ec - l * e * s1) -
              pre4 * (D * (D2 - 3.0 * l2) * one_minus_e2c2 - 2.0 * (D2 * D2 - l2 * l2) * t * e * s1 +
                      4.0 * l * D * n2 * t * e * c1 - l * (3.0 * D2 - l2) * e2s2);
  return out;
}

CorrelationFn correlation_of(const ModelSpec& m) {
  return [m](double s) { return correlation(m, s); };
}

}  // namespace

std::string to_string(RateMethod m) {
  switch (m) {
    case RateMethod::Exact: return "exact";
    case RateMethod::TCL2: return "tcl2";
    case RateMethod::TCL4: return "tcl4";
    case RateMethod::Markov: return "markov";
    case RateMethod::GmeBorn: return "gme";
  }
  return "unknown";
}

RateMethod rate_method_from_string(std::string_view s) {
  if (s == "exact") return RateMethod::Exact;
  if (s == "tcl2") return RateMethod::TCL2;
  if (s == "tcl4") return RateMethod::TCL4;
  if (s == "markov") return RateMethod::Markov;
  if (s == "gme") return RateMethod::GmeBorn;
  throw DomainError("unknown rate method '" + std::string(s) + "'");
}

RatePair markov_rate(const ModelSpec& m) {
  if (const auto* c = std::get_if<CustomTable>(&m.variant())) {
    if (std::abs(c->phi.back()) > 1e-12 || std::abs(c->psi.back()) > 1e-12) {
      throw DomainError("markov_rate: tabulated correlation has not decayed below 1e-12 at the grid end");
    }
    return {integrate_linear(c->phi, c->step, c->horizon()),
            integrate_linear(c->psi, c->step, c->horizon())};
  }
  if (auto r = as_resonant(m)) return {r->gamma0, 0.0};
  cplx sum = 0.0;
  for (const ExponentialTerm& term : exponential_terms(m)) sum += 2.0 * term.amplitude / term.rate;
  return {sum.real(), sum.imag()};
}

RatePair tcl2_rate(const ModelSpec& m, double t) {
  check_time(t, "tcl2_rate");
  if (const auto* c = std::get_if<CustomTable>(&m.variant())) {
    return {integrate_linear(c->phi, c->step, t), integrate_linear(c->psi, c->step, t)};
  }
  if (auto r = as_resonant(m)) return {r->gamma0 * -std::expm1(-r->lambda * t), 0.0};
  cplx sum = 0.0;
  for (const ExponentialTerm& term : exponential_terms(m)) {
    sum += 2.0 * term.amplitude * one_minus_exp_over(term.rate, t);
  }
  return {sum.real(), sum.imag()};
}

RatePair tcl4_rate(const ModelSpec& m, double t, const QuadratureOptions& opts) {
  check_time(t, "tcl4_rate");
  if (auto r = as_resonant(m)) return resonant_tcl4(*r, t);
  if (const auto* d = std::get_if<DetunedJC>(&m.variant())) return detuned_tcl4(*d, t);
  return tcl4_quadrature(correlation_of(m), t, opts);
}

RatePair exact_rate(const ModelSpec& m, double t) {
  check_time(t, "exact_rate");
  if (auto r = as_resonant(m)) {
    const PoleForm p = pole_form(r->gamma0, r->lambda, 2.0, t);
    if (std::abs(p.amplitude) <= kAmplitudeFloor) {
      throw AmplitudeZeroError("exact_rate: amplitude vanishes, rate diverges", t);
    }
    return {p.rate, 0.0};
  }
  const PseudomodeSystem sys = PseudomodeSystem::from_model(m);
  const Eigen::VectorXcd x = sys.evolve(t);
  if (std::abs(x(0)) <= kAmplitudeFloor) {
    throw AmplitudeZeroError("exact_rate: amplitude vanishes, rate diverges", t);
  }
  const cplx ratio = sys.derivative(x)(0) / x(0);
  return {-2.0 * ratio.real(), -2.0 * ratio.imag()};
}

RatePair gme_rate(const ModelSpec& m, double t) {
  check_time(t, "gme_rate");
  auto r = as_resonant(m);
  if (!r) throw DomainError("gme_rate: the GME-Born solution exists for the resonant model only");
  const PoleForm p = pole_form(r->gamma0, r->lambda, 4.0, t);
  if (std::abs(p.amplitude) <= kAmplitudeFloor) {
    throw AmplitudeZeroError("gme_rate: GME population vanishes, rate diverges", t);
  }
  return {p.rate, 0.0};
}

RatePair evaluate_rate(const ModelSpec& m, RateMethod method, double t) {
  switch (method) {
    case RateMethod::Exact: return exact_rate(m, t);
    case RateMethod::TCL2: return tcl2_rate(m, t);
    case RateMethod::TCL4: return tcl4_rate(m, t);
    case RateMethod::Markov: check_time(t, "markov_rate"); return markov_rate(m);
    case RateMethod::GmeBorn: return gme_rate(m, t);
  }
  throw DomainError("evaluate_rate: unknown method");
}

RatePair asymptotic_rate(const ModelSpec& m, RateMethod method, double horizon) {
  return evaluate_rate(m, method, horizon);
}

std::optional<double> rate_breakdown_time(const ModelSpec& m, RateMethod method) {
  auto r = as_resonant(m);
  if (!r) return std::nullopt;
  if (method == RateMethod::Exact) return detail::first_zero(r->gamma0, r->lambda, 2.0);
  if (method == RateMethod::GmeBorn) return detail::first_zero(r->gamma0, r->lambda, 4.0);
  return std::nullopt;
}

RateFunction::RateFunction(ModelSpec m, RateMethod method, double horizon)
    : model_(std::move(m)), method_(method), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw DomainError("RateFunction: horizon must be > 0");
  }
  if (method_ == RateMethod::GmeBorn && !as_resonant(model_)) {
    throw DomainError("RateFunction: the GME-Born rate exists for the resonant model only");
  }
  if (method_ == RateMethod::Exact && model_.is_custom()) {
    throw DomainError("RateFunction: no exact solution for tabulated correlations");
  }
  breakdown_ = rate_breakdown_time(model_, method_);
  const bool closed_tcl4 = as_resonant(model_) || std::holds_alternative<DetunedJC>(model_.variant());
  if (method_ == RateMethod::TCL4 && !closed_tcl4) {
    table_ = std::make_shared<const RateTable>(
        tcl4_quadrature_table(correlation_of(model_), horizon_));
  }
}

RatePair RateFunction::operator()(double t) const {
  if (table_) {
    check_time(t, "tcl4_rate");
    return table_->at(t);
  }
  return evaluate_rate(model_, method_, t);
}

RateCurve rate_curve(const RateFunction& f, const std::vector<double>& times) {
  RateCurve out;
  const auto stop = f.breakdown_time();
  for (double t : times) {
    if (stop && t >= *stop) {
      out.truncated = true;
      out.stopped_at = *stop;
      break;
    }
    try {
      out.values.push_back(f(t));
      out.t.push_back(t);
    } catch (const AmplitudeZeroError& e) {
      out.truncated = true;
      out.stopped_at = e.time();
      break;
    }
  }
  return out;
}

}  // namespace tcljump
