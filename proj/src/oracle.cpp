#include "tcljump/oracle.hpp"

#include "tcljump/errors.hpp"
#include "pole_form.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace tcljump {

PseudomodeSystem PseudomodeSystem::from_model(const ModelSpec& m) {
  PseudomodeSystem sys;
  for (const ExponentialTerm& term : exponential_terms(m)) {
    sys.weights.push_back(term.amplitude);
    sys.rates.push_back(term.rate);
  }
  return sys;
}

cplx PseudomodeSystem::kernel(double t) const {
  cplx s = 0.0;
  for (std::size_t k = 0; k < modes(); ++k) s += weights[k] * std::exp(-rates[k] * t);
  return s;
}

Eigen::MatrixXcd PseudomodeSystem::generator() const {
  const auto n = static_cast<Eigen::Index>(modes());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    M(0, k + 1) = -weights[static_cast<std::size_t>(k)];
    M(k + 1, 0) = 1.0;
    M(k + 1, k + 1) = -rates[static_cast<std::size_t>(k)];
  }
  return M;
}

Eigen::VectorXcd PseudomodeSystem::derivative(const Eigen::VectorXcd& x) const {
  if (x.size() != static_cast<Eigen::Index>(modes() + 1)) {
    throw DimensionError("PseudomodeSystem: state size mismatch");
  }
  Eigen::VectorXcd dx(x.size());
  cplx s = 0.0;
  for (std::size_t k = 0; k < modes(); ++k) {
    const auto i = static_cast<Eigen::Index>(k + 1);
    s += weights[k] * x(i);
    dx(i) = -rates[k] * x(i) + x(0);
  }
  dx(0) = -s;
  return dx;
}

Eigen::VectorXcd PseudomodeSystem::evolve(double t, cplx c1_0) const {
  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(modes() + 1));
  x0(0) = c1_0;
  if (t == 0.0) return x0;
  const Eigen::MatrixXcd E = (generator() * cplx(t)).exp();
  return E * x0;
}

cplx resonant_amplitude(const ResonantJC& m, double t) {
  return detail::pole_form(m.gamma0, m.lambda, 2.0, t).amplitude;
}

double gme_population(const ResonantJC& m, double t) {
  return detail::pole_form(m.gamma0, m.lambda, 4.0, t).amplitude.real();
}

AmplitudeSeries amplitude_exact(const ModelSpec& m, cplx c1_0, const TimeGrid& grid) {
  if (m.is_custom()) throw DomainError("amplitude_exact: no pole decomposition for tabulated models");
  AmplitudeSeries out{grid, std::vector<cplx>(grid.size())};
  if (const auto* r = std::get_if<ResonantJC>(&m.variant())) {
    for (std::size_t k = 0; k < grid.size(); ++k) out.c1[k] = c1_0 * resonant_amplitude(*r, grid[k]);
    out.c1[0] = c1_0;
    return out;
  }

  const PseudomodeSystem sys = PseudomodeSystem::from_model(m);
  const auto sub = static_cast<std::size_t>(std::ceil(grid.dt / 1e-3 - 1e-9));
  const double h = grid.dt / static_cast<double>(sub);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys.modes() + 1));
  x(0) = c1_0;
  out.c1[0] = c1_0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    for (std::size_t s = 0; s < sub; ++s) {
      const Eigen::VectorXcd k1 = sys.derivative(x);
      const Eigen::VectorXcd k2 = sys.derivative(x + (0.5 * h) * k1);
      const Eigen::VectorXcd k3 = sys.derivative(x + (0.5 * h) * k2);
      const Eigen::VectorXcd k4 = sys.derivative(x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.c1[k] = x(0);
  }
  return out;
}

std::vector<double> population(const ModelSpec& m, RateMethod method, double rho11_0,
                               const TimeGrid& grid) {
  if (!(rho11_0 >= 0.0 && rho11_0 <= 1.0)) throw DomainError("population: rho11(0) must be in [0, 1]");
  std::vector<double> out(grid.size());
  switch (method) {
    case RateMethod::Exact: {
      const AmplitudeSeries a = amplitude_exact(m, 1.0, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = rho11_0 * std::norm(a.c1[k]);
      return out;
    }
    case RateMethod::Markov: {
      const double g = markov_rate(m).gamma;
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = rho11_0 * std::exp(-g * grid[k]);
      return out;
    }
    case RateMethod::GmeBorn: {
      const ResonantJC* r = std::get_if<ResonantJC>(&m.variant());
      ResonantJC on_resonance;
      if (r == nullptr) {
        const auto* d = std::get_if<DetunedJC>(&m.variant());
        if (d == nullptr || d->delta != 0.0) {
          throw DomainError("population: the GME-Born solution exists for the resonant model only");
        }
        on_resonance = {d->gamma0, d->lambda};
        r = &on_resonance;
      }
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = rho11_0 * gme_population(*r, grid[k]);
      return out;
    }
    case RateMethod::TCL2:
    case RateMethod::TCL4: {
      const RateFunction f(m, method, std::max(grid.t_end(), grid.dt));
      std::vector<double> g(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k) g[k] = f(grid[k]).gamma;
      const std::vector<double> integral = cumulative_trapezoid(g, grid.dt);
      for (std::size_t k = 0; k < grid.size(); ++k) out[k] = rho11_0 * std::exp(-integral[k]);
      return out;
    }
  }
  throw DomainError("population: unknown method");
}

std::vector<cplx> coherence(cplx c0, const AmplitudeSeries& series) {
  std::vector<cplx> out(series.c1.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = series.c1[k] * std::conj(c0);
  return out;
}

std::optional<double> zero_crossing_time(const ModelSpec& m) {
  if (!std::holds_alternative<ResonantJC>(m.variant())) {
    throw DomainError("zero_crossing_time: defined for the resonant model only");
  }
  return rate_breakdown_time(m, RateMethod::Exact);
}

std::vector<COperator> exact_density(const ModelSpec& m, double rho11_0, cplx rho10_0,
                                     const TimeGrid& grid) {
  const AmplitudeSeries a = amplitude_exact(m, 1.0, grid);
  std::vector<COperator> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const cplx u = a.c1[k];
    const double p = rho11_0 * std::norm(u);
    const cplx c = rho10_0 * u;
    out.emplace_back(COperator{{1.0 - p, std::conj(c)}, {c, p}});
  }
  return out;
}

}  // namespace tcljump
