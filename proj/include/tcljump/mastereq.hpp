// mastereq.hpp: time-local master equations
//
//   drho/dt = A(t) rho + rho B(t)^dag + sum_i C_i(t) rho D_i(t)^dag
//
// and their fixed-step RK4 propagation.

#pragma once

#include "tcljump/grid.hpp"
#include "tcljump/hilbert.hpp"
#include "tcljump/models.hpp"
#include "tcljump/rates.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tcljump {

struct Channel {
  COperator C;
  COperator D;
};

struct GeneratorTerms {
  COperator A;
  COperator B;
  std::vector<Channel> channels;
};

class TimeLocalGenerator {
 public:
  using EvalFn = std::function<GeneratorTerms(double)>;

  // eval must return `channels` channels of dim x dim operators at every t.
  TimeLocalGenerator(std::size_t dim, std::size_t channels, EvalFn eval,
                     bool trace_preserving = false,
                     std::optional<double> breakdown_time = std::nullopt);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t channel_count() const noexcept { return channels_; }
  // Set when A + B^dag + sum D^dag C = 0 holds by construction.
  bool trace_preserving() const noexcept { return trace_preserving_; }
  // First time at which the generator ceases to exist, if known.
  std::optional<double> breakdown_time() const noexcept { return breakdown_; }

  // Throws DimensionError when eval breaks the shape contract.
  GeneratorTerms operator()(double t) const;

  // max-entry norm of A + B^dag + sum D^dag C at t.
  double trace_defect(double t) const;

  // d rho/dt at t.
  COperator apply(double t, const COperator& rho) const;

 private:
  std::size_t dim_;
  std::size_t channels_;
  EvalFn eval_;
  bool trace_preserving_;
  std::optional<double> breakdown_;
};

// Two-level TCL generator with the rates of `method`:
//   A = B = -(i S/2 + gamma/2) sigma+ sigma-,
//   C = sign(gamma) sqrt|gamma| sigma-,  D = sqrt|gamma| sigma-,  sign(0) = +1.
// Methods needing a numerical table build it over [0, horizon].
TimeLocalGenerator tcl_generator(const ModelSpec& m, RateMethod method,
                                 double horizon = kDefaultHorizon);

struct LindbladChannel {
  COperator L;
  std::function<double(double)> gamma;
  std::function<double(double)> shift;
};

struct LindbladData {
  COperator H;
  std::vector<LindbladChannel> channels;

  std::size_t dim() const noexcept { return H.dim(); }
};

// A = B = -iH - 1/2 sum (gamma_k + i S_k) L_k^dag L_k,  C_k = D_k = sqrt(gamma_k) L_k.
// Evaluation throws DomainError at a negative rate.
TimeLocalGenerator lindblad_generator(const LindbladData& data);

// Markov two-level Lindblad data with constant gamma_M, S_M of the model.
LindbladData markov_lindblad(const ModelSpec& m);

struct DensitySeries {
  TimeGrid grid;
  std::vector<COperator> rho;  // rho[k] at grid[k]; shorter when truncated
  bool truncated = false;
  std::optional<double> stopped_at;
};

// Classical RK4 with the generator evaluated at t, t + dt/2, t + dt. Stops at
// the last grid point before a generator breakdown and flags the result.
// Throws InstabilityError when an entry exceeds 1e6.
DensitySeries propagate(const TimeLocalGenerator& g, const COperator& rho0, const TimeGrid& grid);

// Samples of `series` on a coarser grid contained in its own.
DensitySeries subsample(const DensitySeries& series, const TimeGrid& coarse);

// Throws DomainError unless rho is Hermitian, unit-trace and PSD to 1e-9.
void check_density(const COperator& rho);

}  // namespace tcljump
