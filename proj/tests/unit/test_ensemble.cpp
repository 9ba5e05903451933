#include "tcljump/ensemble.hpp"
#include "tcljump/errors.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace tcljump;

namespace {

const COperator kExcited{{0.0, 0.0}, {0.0, 1.0}};

bool identical(const EnsembleEstimate& a, const EnsembleEstimate& b) {
  if (a.rho_hat.size() != b.rho_hat.size()) return false;
  for (std::size_t k = 0; k < a.rho_hat.size(); ++k) {
    if (!(a.rho_hat[k].eigen().array() == b.rho_hat[k].eigen().array()).all()) return false;
    if (!(a.se[k].eigen().array() == b.se[k].eigen().array()).all()) return false;
  }
  return a.mean_jumps == b.mean_jumps;
}

EnsembleConfig small(std::size_t n, double t_end) {
  EnsembleConfig c;
  c.n_traj = n;
  c.t_end = t_end;
  c.output_dt = 0.5;
  c.seed = 2024;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("estimates do not depend on worker count or kernel variant") {
  const TimeLocalGenerator g = tcl_generator(ModelSpec(DetunedJC{1.0, 0.3, 2.4}), RateMethod::TCL4, 3.0);
  EnsembleConfig c = small(1000, 3.0);
  const EnsembleEstimate one = run_ensemble(g, kExcited, c);
  c.workers = 3;
  CHECK(identical(one, run_ensemble(g, kExcited, c)));
  for (const simd::KernelTable* k : simd::available_kernels()) {
    c.kernels = k;
    CHECK(identical(one, run_ensemble(g, kExcited, c)));
  }
  CHECK(one.n_traj == 1000);
}

TEST_CASE("doubled ensemble of a Lindblad generator tracks the master equation") {
  const ModelSpec m(ResonantJC{1.0, 5.0});
  const COperator rho0{{0.5, 0.5}, {0.5, 0.5}};
  const TimeLocalGenerator g = tcl_generator(m, RateMethod::TCL2, 4.0);
  const EnsembleConfig c = small(4000, 4.0);
  const EnsembleEstimate e = run_ensemble(g, rho0, c);
  const DensitySeries d = subsample(propagate(g, rho0, TimeGrid::uniform(4.0, 1e-3)), e.grid);
  const ErrorReport r = estimate_error(e, d);
  CHECK(r.max_abs_z < 5.0);
  CHECK(r.coverage(4.0) == 1.0);
  CHECK(std::abs(r.rho11_deviation.front()) < 1e-15);
}

TEST_CASE("a Markov ensemble resolves its model error against the exact solution") {
  const ModelSpec m(ResonantJC{1.0, 5.0});
  EnsembleConfig c = small(4000, 10.0);
  const EnsembleEstimate e = run_ensemble(markov_lindblad(m), kExcited, c);
  const auto exact = exact_density(m, 1.0, 0.0, e.grid);
  double worst_dev = 0.0, worst_z = 0.0;
  for (std::size_t k = 1; k < e.grid.size(); ++k) {
    const double dev = e.rho_hat[k](1, 1).real() - exact[k](1, 1).real();
    worst_dev = std::max(worst_dev, std::abs(dev));
    worst_z = std::max(worst_z, std::abs(dev) / e.se[k](1, 1).real());
  }
  // sup_t |exp(-t) - |c1(t)|^2| = 0.1229 for these parameters
  CHECK(worst_dev == doctest::Approx(0.1229).epsilon(0.1));
  CHECK(worst_z > 4.0);
}

TEST_CASE("mixed initial states are sampled from their eigendecomposition") {
  const LindbladData d = markov_lindblad(ModelSpec(ResonantJC{1.0, 5.0}));
  const COperator rho0{{0.7, 0.0}, {0.0, 0.3}};
  const EnsembleEstimate e = run_ensemble(d, rho0, small(6400, 1.0));
  const double se = std::sqrt(0.3 * 0.7 / 6400.0);
  CHECK(std::abs(e.rho_hat[0](1, 1).real() - 0.3) < 4.0 * se);
  CHECK(e.se[0](1, 1).real() == doctest::Approx(se).epsilon(0.05));
  CHECK(std::abs(e.rho_hat[2](1, 1).real() - 0.3 * std::exp(-1.0)) < 4.0 * e.se[2](1, 1).real());
}

TEST_CASE("jump logs cover the requested trajectories in index order") {
  const TimeLocalGenerator g = tcl_generator(ModelSpec(ResonantJC{1.0, 5.0}), RateMethod::Markov, 2.0);
  EnsembleConfig c = small(200, 2.0);
  c.jump_log_limit = 70;
  c.workers = 2;
  const EnsembleEstimate e = run_ensemble(g, kExcited, c);
  REQUIRE_FALSE(e.jump_log.empty());
  for (std::size_t k = 0; k < e.jump_log.size(); ++k) {
    CHECK(e.jump_log[k].trajectory_index < 70);
    if (k > 0) CHECK(e.jump_log[k - 1].trajectory_index <= e.jump_log[k].trajectory_index);
  }
  // Every trajectory starting excited jumps at most once under sigma_minus.
  CHECK(e.jump_log.size() <= 70);
  CHECK(e.mean_jumps > 0.5);
  CHECK(e.mean_jumps <= 1.0);
}

TEST_CASE("ensemble argument checks") {
  const TimeLocalGenerator g = tcl_generator(ModelSpec(ResonantJC{1.0, 5.0}), RateMethod::Markov, 1.0);
  CHECK_THROWS_AS(run_ensemble(g, kExcited, small(1, 1.0)), DomainError);
  CHECK_THROWS_AS(run_ensemble(g, COperator::identity(3), small(10, 1.0)), DimensionError);
  EnsembleConfig big = small(10, 1.0);
  big.dt = 0.1;
  CHECK_THROWS_AS(run_ensemble(g, kExcited, big), DomainError);
  const EnsembleEstimate e = run_ensemble(g, kExcited, small(10, 1.0));
  const DensitySeries wrong = propagate(g, kExcited, TimeGrid::uniform(1.0, 0.25));
  CHECK_THROWS_AS(estimate_error(e, wrong), DimensionError);
}

TEST_CASE("aborts report the trajectory and the completed count") {
  const TimeLocalGenerator g(2, 1, [](double) {
    const COperator A = cplx(5.0) * COperator::identity(2);
    return GeneratorTerms{A, A, {Channel{COperator::zero(2), COperator::zero(2)}}};
  });
  try {
    run_ensemble(g, kExcited, small(130, 5.0));
    FAIL("expected TrajectoryAbort");
  } catch (const TrajectoryAbort& e) {
    CHECK(e.index() == 0);
    CHECK(std::string(e.what()).find("seed 2024") != std::string::npos);
  }
}
