// oracle.hpp: exact reference solutions of the single-excitation problem.
//
// The excited amplitude obeys
//
//   dc1/dt = -\int_0^t f(t-s) c1(s) ds,   f = (Phi + i Psi)/2.
//
// For every built-in model f is a finite sum of exponentials w_k e^{-mu_k t},
// so the memory integral is carried by pseudomodes z_k:
//
//   dc1/dt = -sum_k w_k z_k,   dz_k/dt = -mu_k z_k + c1,   z_k(0) = 0.

#pragma once

#include "tcljump/grid.hpp"
#include "tcljump/hilbert.hpp"
#include "tcljump/models.hpp"
#include "tcljump/rates.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace tcljump {

struct PseudomodeSystem {
  std::vector<cplx> weights;  // w_k
  std::vector<cplx> rates;    // mu_k, Re mu_k > 0

  // Throws DomainError for tabulated models.
  static PseudomodeSystem from_model(const ModelSpec& m);

  std::size_t modes() const noexcept { return weights.size(); }
  // sum_k w_k exp(-mu_k t)
  cplx kernel(double t) const;
  // Linear generator M of x = (c1, z_1, ..., z_K).
  Eigen::MatrixXcd generator() const;
  Eigen::VectorXcd derivative(const Eigen::VectorXcd& x) const;
  // exp(M t) (c1_0, 0, ..., 0)
  Eigen::VectorXcd evolve(double t, cplx c1_0 = 1.0) const;
};

// Resonant closed form with c1(0) = 1, continuous through d = 0.
cplx resonant_amplitude(const ResonantJC& m, double t);
// Resonant GME-Born population for rho11(0) = 1 (may go negative).
double gme_population(const ResonantJC& m, double t);

struct AmplitudeSeries {
  TimeGrid grid;
  std::vector<cplx> c1;
};

// Resonant model: closed form. Detuned and band-gap: RK4 on the pseudomode
// system with internal steps no longer than 1e-3.
AmplitudeSeries amplitude_exact(const ModelSpec& m, cplx c1_0, const TimeGrid& grid);

std::vector<double> population(const ModelSpec& m, RateMethod method, double rho11_0,
                               const TimeGrid& grid);

// rho_10(t) = c1(t) conj(c0)
std::vector<cplx> coherence(cplx c0, const AmplitudeSeries& series);

// Resonant model only: first zero of c1 when gamma0 > lambda/2.
std::optional<double> zero_crossing_time(const ModelSpec& m);

// Exact 2x2 density matrices for rho(0) with populations (1 - rho11_0, rho11_0)
// and lower coherence rho10_0 = <1|rho|0>.
std::vector<COperator> exact_density(const ModelSpec& m, double rho11_0, cplx rho10_0,
                                     const TimeGrid& grid);

}  // namespace tcljump
