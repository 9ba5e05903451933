#include "tcljump/errors.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/unravel.hpp"

#include <doctest.h>

#include <cmath>

using namespace tcljump;

namespace {

TimeLocalGenerator constant_rate(double gamma) {
  const COperator P = excited_projector();
  const COperator sm = sigma_minus();
  return TimeLocalGenerator(2, 1, [=](double) {
    const double root = std::sqrt(std::abs(gamma));
    const COperator A = cplx(-0.5 * gamma) * P;
    return GeneratorTerms{A, A, {Channel{cplx(gamma < 0.0 ? -root : root) * sm, cplx(root) * sm}}};
  });
}

}  // namespace

TEST_CASE("random streams") {
  Rng a(42, 7), b(42, 7), c(42, 8), d(42, 7, 1);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differ_c |= x != c.uniform();
    differ_d |= x != d.uniform();
  }
  CHECK(differ_c);
  CHECK(differ_d);
}

TEST_CASE("jump frequency per step equals rate times dt") {
  const TimeLocalGenerator g = constant_rate(1.0);
  const DoubledState th(CVector::basis(2, 1), CVector::basis(2, 1));
  const int n = 20000;
  int jumps = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(3, static_cast<std::uint64_t>(i));
    if (doubled_step(th, g, 0.0, 0.3, rng).jump) ++jumps;
  }
  const double p = 0.3, sd = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(jumps / double(n) - p) < 4.0 * sd);
}

TEST_CASE("doubled jumps carry the sign of the rate") {
  const DoubledState th(CVector::basis(2, 1), CVector::basis(2, 1));
  for (double gamma : {2.0, -2.0}) {
    const TimeLocalGenerator g = constant_rate(gamma);
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng(9, i);
      const DoubledStep s = doubled_step(th, g, 0.0, 0.4, rng);
      if (!s.jump) continue;
      const COperator r = s.theta.density();
      CHECK(r(0, 0).real() == doctest::Approx(gamma > 0.0 ? 1.0 : -1.0));
      CHECK(s.theta.norm2() == doctest::Approx(2.0));
      break;
    }
  }
}

TEST_CASE("single-space jumps normalize") {
  LindbladData d{COperator::zero(2), {LindbladChannel{sigma_minus(), [](double) { return 3.0; }, {}}}};
  const CVector psi{std::sqrt(0.5), std::sqrt(0.5)};
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(1, i);
    const LindbladStep s = lindblad_step(psi, d, 0.0, 0.1, rng);
    if (!s.jump) {
      CHECK(s.psi.norm2() < 1.0);
      continue;
    }
    CHECK(s.psi.norm2() == doctest::Approx(1.0));
    CHECK(std::abs(s.psi[1]) == 0.0);
  }
}

TEST_CASE("drift without jumps is the nonlinear deterministic flow") {
  // F = -1/2 g P, r = g |c1|^2 / |x|^2; with no jump the ratio c1/c0 decays as exp(-g t/2).
  const TimeLocalGenerator g = constant_rate(0.2);
  const DoubledState th(CVector{0.6, 0.8}, CVector{0.6, 0.8});
  Rng rng(0, 0);
  const DoubledStep s = doubled_step(th, g, 0.0, 0.01, rng);
  if (!s.jump) {
    const double ratio = std::abs(s.theta.phi[1] / s.theta.phi[0]);
    CHECK(ratio == doctest::Approx(0.8 / 0.6 * std::exp(-0.001)).epsilon(1e-12));
  }
}

TEST_CASE("trajectories are reproducible and jumps land on step ends") {
  const TimeLocalGenerator g = constant_rate(1.0);
  const DoubledState th(CVector::basis(2, 1), CVector::basis(2, 1));
  const TrajectoryConfig cfg{1e-3, 5.0, 77, 12};
  const TimeGrid out = TimeGrid::uniform(5.0, 0.5);
  const TrajectoryRecord a = simulate_trajectory(th, g, cfg, out);
  const TrajectoryRecord b = simulate_trajectory(th, g, cfg, out);
  REQUIRE(a.states.size() == out.size());
  REQUIRE(a.jumps.size() == b.jumps.size());
  for (std::size_t k = 0; k < a.jumps.size(); ++k) {
    CHECK(a.jumps[k].t == b.jumps[k].t);
    CHECK(a.jumps[k].trajectory_index == 12);
    const double steps = a.jumps[k].t / 1e-3;
    CHECK(std::abs(steps - std::round(steps)) < 1e-6);
    CHECK(steps >= 1.0);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& x = std::get<DoubledState>(a.states[k]);
    const auto& y = std::get<DoubledState>(b.states[k]);
    CHECK(max_abs_diff(x.density(), y.density()) == 0.0);
  }
}

TEST_CASE("oversized steps are rejected before running") {
  const TimeLocalGenerator g = constant_rate(100.0);
  const DoubledState th(CVector::basis(2, 1), CVector::basis(2, 1));
  CHECK_THROWS_AS(simulate_trajectory(th, g, TrajectoryConfig{1e-3, 1.0, 0, 0}, TimeGrid::uniform(1.0, 0.1)),
                  DomainError);
  const DoubledState wrong(CVector::basis(3, 0), CVector::basis(3, 0));
  CHECK_THROWS_AS(simulate_trajectory(wrong, g, TrajectoryConfig{1e-4, 1.0, 0, 0}, TimeGrid::uniform(1.0, 0.1)),
                  DimensionError);
}

TEST_CASE("sampled generators respect the kernel limits") {
  const std::size_t n = simd::kMaxComponents / 2 + 1;
  const TimeLocalGenerator g(n, 0, [n](double) { return GeneratorTerms{COperator::zero(n), COperator::zero(n), {}}; });
  CHECK_THROWS_AS(SampledGenerator::doubled(g, 0.1, 1), DimensionError);
}

TEST_CASE("norm blow-up aborts the trajectory") {
  const TimeLocalGenerator g(2, 1, [](double) {
    const COperator A = cplx(5.0) * COperator::identity(2);
    return GeneratorTerms{A, A, {Channel{COperator::zero(2), COperator::zero(2)}}};
  });
  const DoubledState th(CVector::basis(2, 1), CVector::basis(2, 1));
  try {
    simulate_trajectory(th, g, TrajectoryConfig{1e-3, 5.0, 4, 2}, TimeGrid::uniform(5.0, 0.5));
    FAIL("expected TrajectoryAbort");
  } catch (const TrajectoryAbort& e) {
    CHECK(e.seed() == 4);
    CHECK(e.index() == 2);
    CHECK(e.time() == doctest::Approx(std::log(1e6) / 5.0).epsilon(0.01));
  }
}
