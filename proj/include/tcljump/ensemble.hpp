// ensemble.hpp: parallel trajectory ensembles and density-matrix estimates.
//
// Trajectories run in fixed blocks of kBlockSize consecutive indices. Each
// block accumulates Welford partials in index order; blocks are combined by a
// pairwise tree keyed on the block index. The estimate is therefore the same
// bit for bit for any number of workers.

#pragma once

#include "tcljump/grid.hpp"
#include "tcljump/hilbert.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/simd/kernels.hpp"
#include "tcljump/unravel.hpp"

#include <cstdint>
#include <vector>

namespace tcljump {

inline constexpr std::size_t kBlockSize = 64;

struct EnsembleConfig {
  std::size_t n_traj = 100000;
  double dt = 1e-3;
  double t_end = 10.0;
  double output_dt = 0.1;
  std::uint64_t seed = 0;
  unsigned workers = 0;            // 0: one per hardware thread
  std::size_t jump_log_limit = 0;  // log the jumps of trajectories [0, limit)
  const simd::KernelTable* kernels = nullptr;  // nullptr: simd::active_kernels()
};

struct EnsembleEstimate {
  TimeGrid grid;
  std::vector<COperator> rho_hat;
  // Standard errors per entry: real part for Re rho_ab, imaginary part for Im rho_ab.
  std::vector<COperator> se;
  std::size_t n_traj = 0;
  double mean_jumps = 0.0;
  std::vector<JumpEvent> jump_log;

  // Largest component standard error at output k.
  double max_se(std::size_t k) const;
};

// Doubled-space ensemble: mean of |phi><psi| with theta(0) = (chi, chi).
EnsembleEstimate run_ensemble(const TimeLocalGenerator& g, const COperator& rho0,
                              const EnsembleConfig& cfg);
// Single-space ensemble: mean of |psi><psi| / <psi|psi>.
EnsembleEstimate run_ensemble(const LindbladData& g, const COperator& rho0, const EnsembleConfig& cfg);

struct ErrorReport {
  std::vector<double> max_deviation;     // per output time, over all components
  double sup_deviation = 0.0;
  std::vector<double> rho11_deviation;   // estimate - reference of Re rho_11
  std::vector<double> rho11_z;           // rho11_deviation / SE
  std::vector<double> z_scores;          // deviation / SE; infinite for a nonzero deviation at SE = 0
  double max_abs_z = 0.0;

  // Fraction of z_scores with |z| <= bound.
  double coverage(double bound) const;
};

// Throws DimensionError unless both series share the grid.
ErrorReport estimate_error(const EnsembleEstimate& e, const DensitySeries& reference);

}  // namespace tcljump
