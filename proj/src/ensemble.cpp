#include "tcljump/ensemble.hpp"

#include "tcljump/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace tcljump {

double EnsembleEstimate::max_se(std::size_t k) const {
  const Eigen::MatrixXcd& s = se.at(k).eigen();
  double m = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    m = std::max({m, s(i).real(), s(i).imag()});
  }
  return m;
}

namespace {

struct Partial {
  double count = 0.0;
  std::vector<double> mean;  // [output][component]
  std::vector<double> m2;
  std::uint64_t jumps = 0;
  std::vector<JumpEvent> log;
};

// Pure states skip the draw; mixed states pick an eigenvector by weight.
class InitialSampler {
 public:
  InitialSampler(const COperator& rho0, std::uint64_t seed) : seed_(seed) {
    check_density(rho0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho0.eigen() + rho0.eigen().adjoint()));
    vecs_ = es.eigenvectors();
    const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
    const double total = w.sum();
    cumulative_.resize(static_cast<std::size_t>(w.size()));
    double acc = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      acc += w(k) / total;
      cumulative_[static_cast<std::size_t>(k)] = acc;
    }
    Eigen::Index top = 0;
    w.maxCoeff(&top);
    pure_ = w(top) / total >= 1.0 - 1e-12;
    top_ = top;
  }

  Eigen::VectorXcd draw(std::uint64_t index) const {
    if (pure_) return vecs_.col(top_);
    Rng rng(seed_, index, 1);
    const double u = rng.uniform();
    std::size_t k = 0;
    while (k + 1 < cumulative_.size() && u >= cumulative_[k]) ++k;
    return vecs_.col(static_cast<Eigen::Index>(k));
  }

 private:
  std::uint64_t seed_;
  Eigen::MatrixXcd vecs_;
  std::vector<double> cumulative_;
  bool pure_ = true;
  Eigen::Index top_ = 0;
};

void merge_into(Partial& a, const Partial& b, const simd::KernelTable& kern, std::size_t outputs,
                std::size_t ncomp) {
  for (std::size_t k = 0; k < outputs; ++k) {
    kern.welford_merge(a.mean.data() + k * ncomp, a.m2.data() + k * ncomp, a.count,
                       b.mean.data() + k * ncomp, b.m2.data() + k * ncomp, b.count, ncomp);
  }
  a.count += b.count;
  a.jumps += b.jumps;
  a.log.insert(a.log.end(), b.log.begin(), b.log.end());
}

// Fixed-shape pairwise tree over [lo, hi).
Partial reduce(std::vector<Partial>& parts, std::size_t lo, std::size_t hi,
               const simd::KernelTable& kern, std::size_t outputs, std::size_t ncomp) {
  if (hi - lo == 1) return std::move(parts[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  Partial left = reduce(parts, lo, mid, kern, outputs, ncomp);
  const Partial right = reduce(parts, mid, hi, kern, outputs, ncomp);
  merge_into(left, right, kern, outputs, ncomp);
  return left;
}

EnsembleEstimate run(const SampledGenerator& sg, std::size_t dim, const COperator& rho0,
                     const EnsembleConfig& cfg) {
  if (cfg.n_traj < 2) throw DomainError("run_ensemble: need at least two trajectories");
  if (rho0.dim() != dim) throw DimensionError("run_ensemble: initial state dimension mismatch");
  sg.require_small_steps();
  const TimeGrid steps{cfg.dt, sg.steps()};
  const TimeGrid out = TimeGrid::uniform(cfg.t_end, cfg.output_dt);
  const std::size_t stride = out.steps == 0 ? 1 : steps.stride_to(out);
  const simd::KernelTable& kern = cfg.kernels != nullptr ? *cfg.kernels : simd::active_kernels();
  const bool doubled = sg.is_doubled();
  const InitialSampler sampler(rho0, cfg.seed);

  const std::size_t outputs = out.size();
  const std::size_t ncomp = 2 * dim * dim;
  const std::size_t nblocks = (cfg.n_traj + kBlockSize - 1) / kBlockSize;
  std::vector<Partial> parts(nblocks);

  auto run_block = [&](std::size_t b) {
    const std::uint64_t first = b * kBlockSize;
    const std::size_t n = std::min(kBlockSize, cfg.n_traj - static_cast<std::size_t>(first));
    std::vector<std::vector<cplx>> init(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXcd chi = sampler.draw(first + i);
      init[i].resize(doubled ? 2 * dim : dim);
      for (std::size_t a = 0; a < dim; ++a) {
        init[i][a] = chi(static_cast<Eigen::Index>(a));
        if (doubled) init[i][dim + a] = chi(static_cast<Eigen::Index>(a));
      }
    }
    Partial p;
    p.count = static_cast<double>(n);
    p.mean.assign(outputs * ncomp, 0.0);
    p.m2.assign(outputs * ncomp, 0.0);
    std::vector<double> x(ncomp);
    const bool want_log = first < cfg.jump_log_limit;
    std::vector<JumpEvent> log;
    detail::run_batch(
        sg, kern, init, cfg.seed, first, stride, outputs,
        [&](std::size_t k, const detail::BatchView& v) {
          const std::size_t L = v.lanes;
          const std::size_t off = doubled ? dim : 0;
          for (std::size_t lane = 0; lane < v.active; ++lane) {
            double scale = 1.0;
            if (!doubled) {
              double n2 = 0.0;
              for (std::size_t a = 0; a < dim; ++a) {
                n2 += v.re[a * L + lane] * v.re[a * L + lane] + v.im[a * L + lane] * v.im[a * L + lane];
              }
              scale = 1.0 / n2;
            }
            for (std::size_t a = 0; a < dim; ++a) {
              const cplx pa(v.re[a * L + lane], v.im[a * L + lane]);
              for (std::size_t c = 0; c < dim; ++c) {
                const cplx qc(v.re[(off + c) * L + lane], v.im[(off + c) * L + lane]);
                const cplx e = scale * pa * std::conj(qc);
                x[2 * (a * dim + c)] = e.real();
                x[2 * (a * dim + c) + 1] = e.imag();
              }
            }
            kern.welford_push(p.mean.data() + k * ncomp, p.m2.data() + k * ncomp, x.data(), ncomp,
                              static_cast<double>(lane + 1));
          }
        },
        want_log ? &log : nullptr, &p.jumps);
    if (want_log) {
      for (const JumpEvent& e : log) {
        if (e.trajectory_index < cfg.jump_log_limit) p.log.push_back(e);
      }
      std::stable_sort(p.log.begin(), p.log.end(), [](const JumpEvent& a, const JumpEvent& b) {
        return a.trajectory_index < b.trajectory_index;
      });
    }
    parts[b] = std::move(p);
  };

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::optional<std::size_t> failed_block;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        run_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!failed_block || b < *failed_block) {
          failed_block = b;
          failure = std::current_exception();
        }
        next.store(nblocks);
        return;
      }
    }
  };
  unsigned workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, nblocks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const TrajectoryAbort& e) {
      const std::size_t done = *failed_block * kBlockSize;
      throw TrajectoryAbort(std::string(e.what()) + " (seed " + std::to_string(e.seed()) + ", " +
                                std::to_string(done) + " trajectories completed before its block)",
                            e.seed(), e.index(), e.time());
    }
  }

  const Partial total = reduce(parts, 0, nblocks, kern, outputs, ncomp);
  EnsembleEstimate est;
  est.grid = out;
  est.n_traj = cfg.n_traj;
  est.mean_jumps = static_cast<double>(total.jumps) / static_cast<double>(cfg.n_traj);
  est.jump_log = total.log;
  const double n = static_cast<double>(cfg.n_traj);
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t k = 0; k < outputs; ++k) {
    Eigen::MatrixXcd m(d, d);
    Eigen::MatrixXcd s(d, d);
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t c = 0; c < dim; ++c) {
        const std::size_t i = k * ncomp + 2 * (a * dim + c);
        const auto r = static_cast<Eigen::Index>(a);
        const auto q = static_cast<Eigen::Index>(c);
        m(r, q) = cplx(total.mean[i], total.mean[i + 1]);
        s(r, q) = cplx(std::sqrt(std::max(total.m2[i], 0.0) / (n - 1.0) / n),
                       std::sqrt(std::max(total.m2[i + 1], 0.0) / (n - 1.0) / n));
      }
    }
    est.rho_hat.emplace_back(m);
    est.se.emplace_back(s);
  }
  return est;
}

}  // namespace

EnsembleEstimate run_ensemble(const TimeLocalGenerator& g, const COperator& rho0,
                              const EnsembleConfig& cfg) {
  const TimeGrid steps = TimeGrid::uniform(cfg.t_end, cfg.dt);
  return run(SampledGenerator::doubled(g, cfg.dt, steps.steps), g.dim(), rho0, cfg);
}

EnsembleEstimate run_ensemble(const LindbladData& g, const COperator& rho0, const EnsembleConfig& cfg) {
  const TimeGrid steps = TimeGrid::uniform(cfg.t_end, cfg.dt);
  return run(SampledGenerator::lindblad(g, cfg.dt, steps.steps), g.dim(), rho0, cfg);
}

double ErrorReport::coverage(double bound) const {
  if (z_scores.empty()) return 1.0;
  const auto inside = std::count_if(z_scores.begin(), z_scores.end(),
                                    [bound](double z) { return std::abs(z) <= bound; });
  return static_cast<double>(inside) / static_cast<double>(z_scores.size());
}

ErrorReport estimate_error(const EnsembleEstimate& e, const DensitySeries& reference) {
  if (e.rho_hat.size() != reference.rho.size() ||
      std::abs(e.grid.dt - reference.grid.dt) > 1e-12 * e.grid.dt) {
    throw DimensionError("estimate_error: estimate and reference are on different grids");
  }
  ErrorReport rep;
  for (std::size_t k = 0; k < e.rho_hat.size(); ++k) {
    const Eigen::MatrixXcd& q = e.rho_hat[k].eigen();
    const Eigen::MatrixXcd& r = reference.rho[k].eigen();
    const Eigen::MatrixXcd& s = e.se[k].eigen();
    if (q.rows() != r.rows()) throw DimensionError("estimate_error: dimension mismatch");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double parts[2][2] = {{q(i).real() - r(i).real(), s(i).real()},
                                  {q(i).imag() - r(i).imag(), s(i).imag()}};
      for (const auto& p : parts) {
        worst = std::max(worst, std::abs(p[0]));
        if (p[1] > 0.0) {
          const double z = p[0] / p[1];
          rep.z_scores.push_back(z);
          rep.max_abs_z = std::max(rep.max_abs_z, std::abs(z));
        } else if (std::abs(p[0]) > 1e-12) {
          rep.z_scores.push_back(HUGE_VAL);
          rep.max_abs_z = HUGE_VAL;
        }
      }
    }
    rep.max_deviation.push_back(worst);
    rep.sup_deviation = std::max(rep.sup_deviation, worst);
    if (q.rows() >= 2) {
      const double dev = q(1, 1).real() - r(1, 1).real();
      const double se = s(1, 1).real();
      rep.rho11_deviation.push_back(dev);
      rep.rho11_z.push_back(se > 0.0 ? dev / se : (std::abs(dev) <= 1e-12 ? 0.0 : HUGE_VAL));
    }
  }
  return rep;
}

}  // namespace tcljump
