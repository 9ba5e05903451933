#include "tcljump/unravel.hpp"

#include "tcljump/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tcljump {

Rng::Rng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    stream};
  engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

SampledGenerator::SampledGenerator(simd::PdpShape shape, double dt, std::size_t steps, double t0)
    : shape_(shape), dt_(dt), t0_(t0), steps_(steps) {
  if (shape_.components() > simd::kMaxComponents) {
    throw DimensionError("SampledGenerator: state has more than " +
                         std::to_string(simd::kMaxComponents) + " components");
  }
  if (shape_.channels > simd::kMaxChannels) {
    throw DimensionError("SampledGenerator: more than " + std::to_string(simd::kMaxChannels) +
                         " channels");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw DomainError("SampledGenerator: dt must be > 0");
  if (steps_ > (std::size_t{1} << 32)) throw DomainError("SampledGenerator: too many steps");
  data_.assign((2 * steps_ + 1) * shape_.ops_size(), cplx(0.0));
}

void SampledGenerator::set(std::size_t j, int matrix, const COperator& op) {
  const int n = shape_.dim;
  cplx* dst = data_.data() + j * shape_.ops_size() + static_cast<std::size_t>(matrix * n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      dst[r * n + c] = op(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
  }
}

SampledGenerator SampledGenerator::sample(const TimeLocalGenerator& g, int blocks, double dt,
                                          std::size_t steps, double t0) {
  const simd::PdpShape shape{static_cast<int>(g.dim()), blocks, static_cast<int>(g.channel_count())};
  SampledGenerator sg(shape, dt, steps, t0);
  for (std::size_t j = 0; j <= 2 * steps; ++j) {
    const GeneratorTerms terms = g(t0 + 0.5 * dt * static_cast<double>(j));
    sg.set(j, 0, terms.A);
    if (blocks == 2) sg.set(j, 1, terms.B);
    double bound = 0.0;
    for (int ch = 0; ch < shape.channels; ++ch) {
      const Channel& c = terms.channels[static_cast<std::size_t>(ch)];
      const double nc = c.C.op_norm();
      sg.set(j, blocks + ch * blocks, c.C);
      if (blocks == 2) {
        sg.set(j, blocks + ch * blocks + 1, c.D);
        const double nd = c.D.op_norm();
        bound += std::max(nc * nc, nd * nd);
      } else {
        bound += nc * nc;
      }
    }
    sg.max_jump_probability_ = std::max(sg.max_jump_probability_, bound * dt);
  }
  return sg;
}

SampledGenerator SampledGenerator::doubled(const TimeLocalGenerator& g, double dt,
                                           std::size_t steps, double t0) {
  return sample(g, 2, dt, steps, t0);
}

SampledGenerator SampledGenerator::lindblad(const LindbladData& g, double dt, std::size_t steps,
                                            double t0) {
  return sample(lindblad_generator(g), 1, dt, steps, t0);
}

void SampledGenerator::require_small_steps() const {
  if (max_jump_probability_ > kMaxJumpProbability) {
    throw DomainError("jump probability per step can reach " + std::to_string(max_jump_probability_) +
                      " > " + std::to_string(kMaxJumpProbability) + "; reduce dt");
  }
}

namespace {

// Buffers of one batch of trajectories plus the per-step jump logic.
class Batch {
 public:
  Batch(const SampledGenerator& sg, const simd::KernelTable& kernels, std::size_t active)
      : sg_(sg), kern_(kernels), shape_(sg.shape()), active_(active) {
    const std::size_t w = kernels.lane_width;
    lanes_ = (active + w - 1) / w * w;
    const auto N = static_cast<std::size_t>(shape_.components());
    const auto C = static_cast<std::size_t>(shape_.channels);
    re_.assign(N * lanes_, 0.0);
    im_.assign(N * lanes_, 0.0);
    norm2_.assign(lanes_, 0.0);
    rates_.assign(std::max<std::size_t>(C, 1) * lanes_, 0.0);
    jx_re_.assign(std::max<std::size_t>(C, 1) * N * lanes_, 0.0);
    jx_im_.assign(std::max<std::size_t>(C, 1) * N * lanes_, 0.0);
    limit_.assign(lanes_, 0.0);
  }

  std::size_t lanes() const { return lanes_; }

  void load(std::size_t lane, const std::vector<cplx>& x) {
    const auto N = static_cast<std::size_t>(shape_.components());
    if (x.size() != N) throw DimensionError("trajectory: initial state has the wrong dimension");
    double n2 = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      re_[c * lanes_ + lane] = x[c].real();
      im_[c * lanes_ + lane] = x[c].imag();
      n2 += std::norm(x[c]);
    }
    if (!(n2 > 0.0)) throw DomainError("trajectory: initial state has zero norm");
    limit_[lane] = kNormGrowthLimit * kNormGrowthLimit * n2;
  }

  // Padding lanes replay lane 0 and are never observed.
  void pad() {
    const auto N = static_cast<std::size_t>(shape_.components());
    for (std::size_t lane = active_; lane < lanes_; ++lane) {
      for (std::size_t c = 0; c < N; ++c) {
        re_[c * lanes_ + lane] = re_[c * lanes_];
        im_[c * lanes_ + lane] = im_[c * lanes_];
      }
    }
  }

  // Step j: [t0 + j dt, t0 + (j+1) dt]. rng(lane) returns the lane's stream.
  template <class RngFor, class OnJump>
  void step(std::size_t j, RngFor&& rng, OnJump&& on_jump, std::uint64_t seed,
            std::uint64_t first_index) {
    const double dt = sg_.dt();
    const simd::PdpStart start{norm2_.data(), rates_.data(), jx_re_.data(), jx_im_.data()};
    kern_.pdp_rk4(shape_, sg_.ops(2 * j), sg_.ops(2 * j + 1), sg_.ops(2 * j + 2), dt, lanes_,
                  re_.data(), im_.data(), start);
    const double t_end = sg_.t0() + dt * static_cast<double>(j + 1);
    const auto N = static_cast<std::size_t>(shape_.components());
    const int C = shape_.channels;
    for (std::size_t lane = 0; lane < active_; ++lane) {
      const double n2 = norm2_[lane];
      if (!(n2 <= limit_[lane])) {
        throw TrajectoryAbort("trajectory " + std::to_string(first_index + lane) +
                                  ": norm grew beyond " + std::to_string(kNormGrowthLimit) +
                                  " times its initial value",
                              seed, first_index + lane, t_end - dt);
      }
      Rng& r = rng(lane);
      int fired = -1;
      int n_fired = 0;
      double fired_total = 0.0;
      bool multi[simd::kMaxChannels] = {};
      for (int ch = 0; ch < C; ++ch) {
        const double rate = rates_[static_cast<std::size_t>(ch) * lanes_ + lane];
        if (rate > 0.0 && r.uniform() < rate * dt) {
          multi[ch] = true;
          fired = ch;
          ++n_fired;
          fired_total += rate;
        }
      }
      if (n_fired > 1) {
        double v = r.uniform() * fired_total;
        for (int ch = 0; ch < C; ++ch) {
          if (!multi[ch]) continue;
          fired = ch;
          v -= rates_[static_cast<std::size_t>(ch) * lanes_ + lane];
          if (v < 0.0) break;
        }
      }
      if (fired < 0) continue;
      const double rate = rates_[static_cast<std::size_t>(fired) * lanes_ + lane];
      // |J x|^2 = rate |x|^2: the doubled jump keeps |theta|, the single one normalizes.
      const double scale = sg_.is_doubled() ? 1.0 / std::sqrt(rate) : 1.0 / std::sqrt(rate * n2);
      const std::size_t base = static_cast<std::size_t>(fired) * N;
      for (std::size_t c = 0; c < N; ++c) {
        re_[c * lanes_ + lane] = scale * jx_re_[(base + c) * lanes_ + lane];
        im_[c * lanes_ + lane] = scale * jx_im_[(base + c) * lanes_ + lane];
      }
      on_jump(lane, t_end, fired);
    }
  }

  detail::BatchView view() const {
    return detail::BatchView{shape_, lanes_, active_, re_.data(), im_.data()};
  }

  std::vector<cplx> state(std::size_t lane) const {
    const auto N = static_cast<std::size_t>(shape_.components());
    std::vector<cplx> x(N);
    for (std::size_t c = 0; c < N; ++c) x[c] = cplx(re_[c * lanes_ + lane], im_[c * lanes_ + lane]);
    return x;
  }

 private:
  const SampledGenerator& sg_;
  const simd::KernelTable& kern_;
  simd::PdpShape shape_;
  std::size_t active_;
  std::size_t lanes_ = 0;
  std::vector<double> re_, im_, norm2_, rates_, jx_re_, jx_im_, limit_;
};

std::vector<cplx> stack(const CVector& v) {
  std::vector<cplx> x(v.dim());
  for (std::size_t k = 0; k < v.dim(); ++k) x[k] = v[k];
  return x;
}

std::vector<cplx> stack(const DoubledState& th) {
  if (th.phi.dim() != th.psi.dim()) throw DimensionError("DoubledState: phi and psi dims differ");
  std::vector<cplx> x(2 * th.dim());
  for (std::size_t k = 0; k < th.dim(); ++k) {
    x[k] = th.phi[k];
    x[th.dim() + k] = th.psi[k];
  }
  return x;
}

CVector unstack_single(const std::vector<cplx>& x) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) v(static_cast<Eigen::Index>(k)) = x[k];
  return CVector(v);
}

DoubledState unstack_doubled(const std::vector<cplx>& x) {
  const std::size_t n = x.size() / 2;
  Eigen::VectorXcd a(static_cast<Eigen::Index>(n));
  Eigen::VectorXcd b(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    a(static_cast<Eigen::Index>(k)) = x[k];
    b(static_cast<Eigen::Index>(k)) = x[n + k];
  }
  return DoubledState(CVector(a), CVector(b));
}

std::optional<int> single_step(const SampledGenerator& sg, const std::vector<cplx>& x0, Rng& rng,
                               std::vector<cplx>& out) {
  Batch b(sg, simd::scalar_kernels(), 1);
  b.load(0, x0);
  std::optional<int> jump;
  b.step(0, [&](std::size_t) -> Rng& { return rng; },
         [&](std::size_t, double, int ch) { jump = ch; }, 0, 0);
  out = b.state(0);
  return jump;
}

std::size_t step_count(const TrajectoryConfig& cfg) {
  return TimeGrid::uniform(cfg.t_end, cfg.dt).steps;
}

template <class State, class Unstack>
TrajectoryRecord simulate(const SampledGenerator& sg, const State& initial,
                          const TrajectoryConfig& cfg, const TimeGrid& output, Unstack unstack) {
  const TimeGrid steps{cfg.dt, sg.steps()};
  const std::size_t stride = output.steps == 0 ? 1 : steps.stride_to(output);
  TrajectoryRecord rec{output, {}, {}};
  std::uint64_t count = 0;
  std::vector<JumpEvent> jumps;
  detail::run_batch(
      sg, simd::scalar_kernels(), {stack(initial)}, cfg.seed, cfg.trajectory_index, stride,
      output.size(),
      [&](std::size_t, const detail::BatchView& v) {
        std::vector<cplx> x(static_cast<std::size_t>(v.shape.components()));
        for (std::size_t c = 0; c < x.size(); ++c) x[c] = cplx(v.re[c * v.lanes], v.im[c * v.lanes]);
        rec.states.emplace_back(unstack(x));
      },
      &rec.jumps, &count);
  return rec;
}

}  // namespace

LindbladStep lindblad_step(const CVector& psi, const LindbladData& g, double t, double dt, Rng& rng) {
  if (psi.dim() != g.dim()) throw DimensionError("lindblad_step: state dimension mismatch");
  const SampledGenerator sg = SampledGenerator::lindblad(g, dt, 1, t);
  std::vector<cplx> out;
  const auto jump = single_step(sg, stack(psi), rng, out);
  return {unstack_single(out), jump};
}

DoubledStep doubled_step(const DoubledState& theta, const TimeLocalGenerator& g, double t, double dt,
                         Rng& rng) {
  if (theta.dim() != g.dim()) throw DimensionError("doubled_step: state dimension mismatch");
  const SampledGenerator sg = SampledGenerator::doubled(g, dt, 1, t);
  std::vector<cplx> out;
  const auto jump = single_step(sg, stack(theta), rng, out);
  return {unstack_doubled(out), jump};
}

TrajectoryRecord simulate_trajectory(const DoubledState& initial, const TimeLocalGenerator& g,
                                     const TrajectoryConfig& cfg, const TimeGrid& output) {
  if (initial.dim() != g.dim()) throw DimensionError("simulate_trajectory: state dimension mismatch");
  const SampledGenerator sg = SampledGenerator::doubled(g, cfg.dt, step_count(cfg));
  sg.require_small_steps();
  return simulate(sg, initial, cfg, output, unstack_doubled);
}

TrajectoryRecord simulate_trajectory(const CVector& initial, const LindbladData& g,
                                     const TrajectoryConfig& cfg, const TimeGrid& output) {
  if (initial.dim() != g.dim()) throw DimensionError("simulate_trajectory: state dimension mismatch");
  const SampledGenerator sg = SampledGenerator::lindblad(g, cfg.dt, step_count(cfg));
  sg.require_small_steps();
  return simulate(sg, initial, cfg, output, unstack_single);
}

namespace detail {

void run_batch(const SampledGenerator& sg, const simd::KernelTable& kernels,
               const std::vector<std::vector<cplx>>& initial, std::uint64_t seed,
               std::uint64_t first_index, std::size_t output_stride, std::size_t outputs,
               const BatchObserver& observe, std::vector<JumpEvent>* jumps,
               std::uint64_t* jump_count) {
  if (initial.empty()) return;
  if (output_stride == 0) throw DomainError("run_batch: output stride must be >= 1");
  if (outputs == 0 || (outputs - 1) * output_stride > sg.steps()) {
    throw DomainError("run_batch: output grid extends beyond the simulated interval");
  }
  Batch b(sg, kernels, initial.size());
  for (std::size_t lane = 0; lane < initial.size(); ++lane) b.load(lane, initial[lane]);
  b.pad();
  std::vector<Rng> rngs;
  rngs.reserve(initial.size());
  for (std::size_t lane = 0; lane < initial.size(); ++lane) rngs.emplace_back(seed, first_index + lane);

  observe(0, b.view());
  const std::size_t last = (outputs - 1) * output_stride;
  for (std::size_t j = 0; j < last; ++j) {
    b.step(
        j, [&](std::size_t lane) -> Rng& { return rngs[lane]; },
        [&](std::size_t lane, double t, int ch) {
          if (jump_count != nullptr) ++*jump_count;
          if (jumps != nullptr) jumps->push_back(JumpEvent{first_index + lane, t, ch});
        },
        seed, first_index);
    if ((j + 1) % output_stride == 0) observe((j + 1) / output_stride, b.view());
  }
}

}  // namespace detail

}  // namespace tcljump
