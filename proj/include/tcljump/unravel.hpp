// unravel.hpp: piecewise-deterministic jump trajectories.
//
// Single space (Lindblad data, state psi) and doubled space (time-local
// generator, state theta = (phi, psi)) share one engine: between jumps
//
//   dx/dt = F(t) x + (1/2) sum_i r_i x,   r_i = |J_i x|^2 / |x|^2,
//
// with F = -iH - 1/2 sum (gamma + iS) L^dag L, J = sqrt(gamma) L in the single
// space and F = diag(A, B), J_i = diag(C_i, D_i) in the doubled space. In each
// step of length dt channel i fires with probability r_i dt, evaluated at the
// start of the step; at most one channel fires per step.

#pragma once

#include "tcljump/grid.hpp"
#include "tcljump/hilbert.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/simd/kernels.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace tcljump {

// Independent 64-bit stream per (seed, trajectory index, stream). Stream 0
// drives the jumps, stream 1 the initial-state draw of mixed states.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0);
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

struct TrajectoryConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trajectory_index = 0;
};

// Largest admissible per-step jump probability bound.
inline constexpr double kMaxJumpProbability = 0.05;
// A trajectory whose norm grows beyond this factor is abandoned.
inline constexpr double kNormGrowthLimit = 1e6;

struct JumpEvent {
  std::uint64_t trajectory_index = 0;
  double t = 0.0;  // end of the step in which the jump fired
  int channel = 0;
};

struct LindbladStep {
  CVector psi;
  std::optional<int> jump;
};

struct DoubledStep {
  DoubledState theta;
  std::optional<int> jump;
};

// One step of the single-space unraveling; throws DomainError on a negative rate.
LindbladStep lindblad_step(const CVector& psi, const LindbladData& g, double t, double dt, Rng& rng);
// One step of the doubled-space unraveling.
DoubledStep doubled_step(const DoubledState& theta, const TimeLocalGenerator& g, double t, double dt,
                         Rng& rng);

// Drift and jump operators on the half-step grid tau_j = t0 + j dt/2,
// j = 0..2 steps, packed for the trajectory kernels.
class SampledGenerator {
 public:
  static SampledGenerator doubled(const TimeLocalGenerator& g, double dt, std::size_t steps,
                                  double t0 = 0.0);
  static SampledGenerator lindblad(const LindbladData& g, double dt, std::size_t steps,
                                   double t0 = 0.0);

  const simd::PdpShape& shape() const noexcept { return shape_; }
  bool is_doubled() const noexcept { return shape_.blocks == 2; }
  double dt() const noexcept { return dt_; }
  double t0() const noexcept { return t0_; }
  std::size_t steps() const noexcept { return steps_; }
  // Operators at tau_j.
  const cplx* ops(std::size_t j) const noexcept { return data_.data() + j * shape_.ops_size(); }
  // max_j dt * sum_i |J_i(tau_j)|^2, an upper bound of the jump probability.
  double max_jump_probability() const noexcept { return max_jump_probability_; }
  // Throws DomainError when max_jump_probability exceeds kMaxJumpProbability.
  void require_small_steps() const;

 private:
  SampledGenerator(simd::PdpShape shape, double dt, std::size_t steps, double t0);
  static SampledGenerator sample(const TimeLocalGenerator& g, int blocks, double dt,
                                 std::size_t steps, double t0);
  void set(std::size_t j, int matrix, const COperator& op);

  simd::PdpShape shape_;
  double dt_;
  double t0_;
  std::size_t steps_;
  std::vector<cplx> data_;
  double max_jump_probability_ = 0.0;
};

using TrajectoryState = std::variant<CVector, DoubledState>;

struct TrajectoryRecord {
  TimeGrid output;
  std::vector<TrajectoryState> states;  // at output times
  std::vector<JumpEvent> jumps;
};

// Deterministic in (initial, generator, seed, trajectory_index). The output
// grid must be contained in the step grid of cfg.
TrajectoryRecord simulate_trajectory(const DoubledState& initial, const TimeLocalGenerator& g,
                                     const TrajectoryConfig& cfg, const TimeGrid& output);
TrajectoryRecord simulate_trajectory(const CVector& initial, const LindbladData& g,
                                     const TrajectoryConfig& cfg, const TimeGrid& output);

namespace detail {

// Structure-of-arrays states of a batch of trajectories at an output time:
// component c of lane l is (re[c*lanes + l], im[c*lanes + l]).
struct BatchView {
  const simd::PdpShape& shape;
  std::size_t lanes;
  std::size_t active;
  const double* re;
  const double* im;
};

using BatchObserver = std::function<void(std::size_t output_index, const BatchView& view)>;

// Runs `initial.size()` trajectories with indices first_index, first_index+1, ...
// Initial states are stacked components (dim for single, 2*dim for doubled).
// Calls observe at every output time and appends jumps to `jumps` when given.
// Throws TrajectoryAbort on norm blow-up.
void run_batch(const SampledGenerator& sg, const simd::KernelTable& kernels,
               const std::vector<std::vector<cplx>>& initial, std::uint64_t seed,
               std::uint64_t first_index, std::size_t output_stride, std::size_t outputs,
               const BatchObserver& observe, std::vector<JumpEvent>* jumps,
               std::uint64_t* jump_count);

}  // namespace detail

}  // namespace tcljump
