#include "oracles.hpp"

#include "tcljump/errors.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace tcljump;

TEST_CASE("pseudomode propagation equals the resonant closed form") {
  for (double l : {5.0, 0.2}) {
    const ResonantJC r{1.0, l};
    const PseudomodeSystem sys = PseudomodeSystem::from_model(ModelSpec(r));
    REQUIRE(sys.modes() == 1);
    for (double t : {0.0, 0.4, 2.0, 6.0, 10.0}) {
      CHECK(std::abs(sys.evolve(t)(0) - ref::amplitude_resonant(1.0, l, t)) < 1e-12);
      CHECK(std::abs(resonant_amplitude(r, t) - ref::amplitude_resonant(1.0, l, t)) < 1e-12);
    }
  }
}

TEST_CASE("amplitudes satisfy the memory equation") {
  const TimeGrid g = TimeGrid::uniform(6.0, 1e-3);
  for (const ModelSpec& m : {ModelSpec(ResonantJC{1.0, 0.2}), ModelSpec(DetunedJC{1.0, 0.3, 2.4}),
                             ModelSpec(BandGap{})}) {
    const AmplitudeSeries a = amplitude_exact(m, 1.0, g);
    REQUIRE(a.c1.size() == g.size());
    const double res = ref::memory_residual(a.c1, g.dt, [&](double t) {
      const Correlation c = correlation(m, t);
      return 0.5 * cplx(c.phi, c.psi);
    });
    CHECK(res < 1e-4);
  }
}

TEST_CASE("populations") {
  const ModelSpec m(ResonantJC{1.0, 5.0});
  const TimeGrid g = TimeGrid::uniform(10.0, 0.01);
  const auto ex = population(m, RateMethod::Exact, 1.0, g);
  const auto mk = population(m, RateMethod::Markov, 0.5, g);
  const auto gm = population(m, RateMethod::GmeBorn, 1.0, g);
  const auto t4 = population(m, RateMethod::TCL4, 1.0, g);
  for (std::size_t k = 0; k < g.size(); k += 97) {
    const double t = g[k];
    CHECK(ex[k] == doctest::Approx(std::norm(ref::amplitude_resonant(1.0, 5.0, t))).epsilon(1e-12));
    CHECK(mk[k] == doctest::Approx(0.5 * std::exp(-t)).epsilon(1e-12));
    CHECK(gm[k] == doctest::Approx(ref::gme_population_resonant(1.0, 5.0, t)).epsilon(1e-12));
    CHECK(std::abs(t4[k] - ex[k]) < 0.01);
  }
  CHECK_THROWS_AS(population(m, RateMethod::Exact, 1.5, g), DomainError);
  CHECK_THROWS_AS(population(ModelSpec(BandGap{}), RateMethod::GmeBorn, 1.0, g), DomainError);
}

TEST_CASE("zero crossing") {
  const auto t0 = zero_crossing_time(ModelSpec(ResonantJC{1.0, 0.2}));
  REQUIRE(t0.has_value());
  CHECK(*t0 == doctest::Approx(6.30849).epsilon(1e-5));
  CHECK_FALSE(zero_crossing_time(ModelSpec(ResonantJC{1.0, 5.0})).has_value());
  CHECK_THROWS_AS(zero_crossing_time(ModelSpec(BandGap{})), DomainError);
}

TEST_CASE("exact density matrices are states") {
  const TimeGrid g = TimeGrid::uniform(10.0, 0.1);
  const double p = 0.3;
  const cplx c10(std::sqrt(p * (1.0 - p)), 0.0);
  for (const ModelSpec& m : {ModelSpec(ResonantJC{1.0, 0.2}), ModelSpec(DetunedJC{1.0, 0.3, 2.4}),
                             ModelSpec(BandGap{})}) {
    const auto rho = exact_density(m, p, c10, g);
    const AmplitudeSeries a = amplitude_exact(m, 1.0, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK_NOTHROW(check_density(rho[k]));
      CHECK(rho[k](1, 1).real() == doctest::Approx(p * std::norm(a.c1[k])));
    }
  }
}
