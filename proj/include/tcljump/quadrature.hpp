// quadrature.hpp: generic fourth-order TCL rates from tabulated correlations.
//
// The fourth-order contributions are triple integrals over the ordered
// simplex 0 <= t3 <= t2 <= t1 <= t of products of Phi and Psi. The innermost
// integrals collapse onto cumulative trapezoid arrays
//
//   C_X(t) = \int_0^t X,   D_X(t) = \int_0^t C_X,
//
// which leaves one convolution (X * D_Y)(t) per grid point. Tabulating the
// rate on n grid points therefore costs O(n^2); a single time costs O(n).
// Grids double until two successive refinements agree to the requested
// relative tolerance.

#pragma once

#include "tcljump/models.hpp"
#include "tcljump/simd/kernels.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tcljump {

struct RatePair {
  double gamma = 0.0;  // decay rate, may be negative
  double shift = 0.0;  // Lamb shift S(t)
};

struct QuadratureOptions {
  std::size_t n_initial = 64;  // grid intervals of the first pass
  std::size_t n_max = 2048;    // refinement cap
  double rel_tol = 1e-3;
};

using CorrelationFn = std::function<Correlation(double)>;

// Cumulative trapezoid on a uniform grid; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

// Fourth-order (gamma, S) at t_k = k*horizon/n for k = 0..n, single pass.
std::vector<RatePair> tcl4_trapezoid_grid(const CorrelationFn& corr, double horizon,
                                          std::size_t n,
                                          const simd::KernelTable& kernels = simd::active_kernels());

// Fourth-order (gamma, S) at the single time t, refined until converged.
// Throws QuadratureError when the cap is reached first.
RatePair tcl4_quadrature(const CorrelationFn& corr, double t, const QuadratureOptions& opts = {});

// Uniformly tabulated (gamma, S) with 4-point Lagrange interpolation.
class RateTable {
 public:
  RateTable(double step, std::vector<RatePair> values);

  double step() const noexcept { return step_; }
  double horizon() const noexcept { return step_ * static_cast<double>(values_.size() - 1); }
  const std::vector<RatePair>& values() const noexcept { return values_; }

  // Throws DomainError outside [0, horizon].
  RatePair at(double t) const;

 private:
  double step_;
  std::vector<RatePair> values_;
};

// Fourth-order table on [0, horizon], refined until the sup-norm difference of
// successive grids (on the coarse points) is below rel_tol * sup|rate|.
RateTable tcl4_quadrature_table(const CorrelationFn& corr, double horizon,
                                const QuadratureOptions& opts = {});

}  // namespace tcljump
