#include "oracles.hpp"

#include "tcljump/errors.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/oracle.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace tcljump;

namespace {

COperator pure(double p) {
  const double a = std::sqrt(1.0 - p), b = std::sqrt(p);
  return COperator{{a * a, a * b}, {a * b, b * b}};
}

double series_error(const DensitySeries& s, const std::vector<COperator>& exact, std::size_t stride) {
  double e = 0.0;
  for (std::size_t k = 0; k < s.rho.size(); ++k) e = std::max(e, max_abs_diff(s.rho[k], exact[k * stride]));
  return e;
}

}  // namespace

TEST_CASE("tcl generators are trace preserving") {
  for (const ModelSpec& m : {ModelSpec(ResonantJC{1.0, 5.0}), ModelSpec(DetunedJC{1.0, 0.3, 2.4}),
                             ModelSpec(BandGap{})}) {
    for (RateMethod meth : {RateMethod::TCL2, RateMethod::TCL4, RateMethod::Markov, RateMethod::Exact}) {
      const TimeLocalGenerator g = tcl_generator(m, meth, 10.0);
      for (double t : {0.0, 0.7, 3.0, 9.9}) CHECK(g.trace_defect(t) < 1e-14);
    }
  }
  CHECK_THROWS_AS(tcl_generator(ModelSpec(ResonantJC{}), RateMethod::GmeBorn, 10.0), DomainError);
}

TEST_CASE("negative rates flip the sign of C only") {
  const TimeLocalGenerator g = tcl_generator(ModelSpec(DetunedJC{1.0, 0.3, 2.4}), RateMethod::TCL4, 10.0);
  const GeneratorTerms t = g(1.87);
  CHECK(t.channels[0].C(0, 1).real() < 0.0);
  CHECK(t.channels[0].D(0, 1).real() > 0.0);
  CHECK(max_abs_diff(t.A, t.B) == 0.0);
}

TEST_CASE("exact generator reproduces the exact solution") {
  const TimeGrid fine = TimeGrid::uniform(10.0, 1e-3);
  const TimeGrid out = TimeGrid::uniform(10.0, 0.1);
  for (const ModelSpec& m : {ModelSpec(ResonantJC{1.0, 5.0}), ModelSpec(DetunedJC{1.0, 0.3, 2.4}),
                             ModelSpec(BandGap{})}) {
    const COperator rho0 = pure(0.6);
    const DensitySeries s = subsample(propagate(tcl_generator(m, RateMethod::Exact, 10.0), rho0, fine), out);
    const auto exact = exact_density(m, 0.6, cplx(std::sqrt(0.24)), out);
    CHECK_FALSE(s.truncated);
    CHECK(series_error(s, exact, 1) < 1e-8);
  }
}

TEST_CASE("propagation stops before the breakdown time") {
  const ModelSpec m(ResonantJC{1.0, 0.2});
  const TimeGrid fine = TimeGrid::uniform(10.0, 1e-3);
  const DensitySeries s = propagate(tcl_generator(m, RateMethod::Exact, 10.0), pure(1.0), fine);
  REQUIRE(s.truncated);
  CHECK(*s.stopped_at == doctest::Approx(6.30849).epsilon(1e-5));
  CHECK(fine[s.rho.size() - 1] < *s.stopped_at);
  CHECK(fine[s.rho.size()] >= *s.stopped_at);
}

TEST_CASE("initial states sharing the excited population coincide at t0") {
  const ModelSpec m(ResonantJC{1.0, 0.2});
  const TimeGrid g = TimeGrid::uniform(10.0, 1e-3);
  const double t0 = *zero_crossing_time(m);
  const std::size_t k = static_cast<std::size_t>(std::floor(t0 / g.dt));
  std::vector<COperator> at;
  for (double p : {1.0, 0.5, 0.0}) {
    const COperator d{{1.0 - p, 0.0}, {0.0, p}};
    at.push_back(propagate(tcl_generator(m, RateMethod::Exact, 10.0), d, g).rho[k]);
  }
  CHECK(max_abs_diff(at[0], at[1]) < 1e-5);
  CHECK(max_abs_diff(at[0], at[2]) < 1e-5);
}

TEST_CASE("RK4 convergence order") {
  const ModelSpec m(ResonantJC{1.0, 5.0});
  const TimeLocalGenerator g = tcl_generator(m, RateMethod::Exact, 10.0);
  const TimeGrid out = TimeGrid::uniform(4.0, 0.2);
  const auto exact = exact_density(m, 0.6, cplx(std::sqrt(0.24)), out);
  double errs[2];
  int i = 0;
  for (double dt : {0.1, 0.05}) {
    const TimeGrid grid = TimeGrid::uniform(4.0, dt);
    errs[i++] = series_error(subsample(propagate(g, pure(0.6), grid), out), exact, 1);
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("Lindblad data and the Markov generator agree") {
  const ModelSpec m(DetunedJC{1.0, 0.3, 2.4});
  const TimeLocalGenerator a = tcl_generator(m, RateMethod::Markov, 10.0);
  const TimeLocalGenerator b = lindblad_generator(markov_lindblad(m));
  const COperator rho = pure(0.3);
  CHECK(max_abs_diff(a.apply(2.0, rho), b.apply(2.0, rho)) < 1e-15);
  LindbladData bad{COperator::zero(2), {LindbladChannel{sigma_minus(), [](double) { return -1.0; }, {}}}};
  CHECK_THROWS_AS(lindblad_generator(bad)(0.0), DomainError);
}

TEST_CASE("density checks") {
  CHECK_NOTHROW(check_density(pure(0.5)));
  CHECK_THROWS_AS(check_density(COperator{{0.5, 0.0}, {0.0, 0.6}}), DomainError);
  CHECK_THROWS_AS(check_density(COperator{{0.5, 1.0}, {0.0, 0.5}}), DomainError);
  CHECK_THROWS_AS(check_density(COperator{{1.5, 0.0}, {0.0, -0.5}}), DomainError);
}

TEST_CASE("generator shape validation") {
  const TimeLocalGenerator g(2, 1, [](double) {
    return GeneratorTerms{COperator::zero(3), COperator::zero(2), {Channel{COperator::zero(2), COperator::zero(2)}}};
  });
  CHECK_THROWS_AS(g(0.0), DimensionError);
  const TimeLocalGenerator h = tcl_generator(ModelSpec(ResonantJC{}), RateMethod::TCL4, 1.0);
  CHECK_THROWS_AS(propagate(h, COperator::identity(3), TimeGrid::uniform(1.0, 0.1)), DimensionError);
}
