#include "oracles.hpp"

#include "tcljump/errors.hpp"
#include "tcljump/rates.hpp"

#include <doctest.h>

#include <cmath>

using namespace tcljump;

TEST_CASE("method names round trip") {
  for (RateMethod m : {RateMethod::Exact, RateMethod::TCL2, RateMethod::TCL4, RateMethod::Markov,
                       RateMethod::GmeBorn}) {
    CHECK(rate_method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(rate_method_from_string("tcl6"), DomainError);
}

TEST_CASE("resonant closed forms") {
  const ModelSpec m(ResonantJC{1.0, 5.0});
  for (double t : {0.05, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(tcl2_rate(m, t).gamma == doctest::Approx(ref::tcl2_resonant(1.0, 5.0, t)).epsilon(1e-13));
    CHECK(tcl4_rate(m, t).gamma == doctest::Approx(ref::tcl4_resonant(1.0, 5.0, t)).epsilon(1e-13));
    CHECK(exact_rate(m, t).gamma == doctest::Approx(ref::exact_rate_resonant(1.0, 5.0, t)).epsilon(1e-12));
    CHECK(gme_rate(m, t).gamma == doctest::Approx(ref::gme_rate_resonant(1.0, 5.0, t)).epsilon(1e-12));
  }
  CHECK(tcl4_rate(m, 0.0).gamma == 0.0);
  CHECK(markov_rate(m).gamma == 1.0);
}

TEST_CASE("rates are Taylor coefficients of the exact rate in gamma0") {
  // gamma(g0) = g0 a1 + g0^2 a2 + O(g0^3); TCL4 carries a1 + g0 a2.
  const double l = 5.0, t = 1.3;
  const double g = 1e-3;
  const double ex = ref::exact_rate_resonant(g, l, t);
  CHECK(std::abs(tcl4_rate(ModelSpec(ResonantJC{g, l}), t).gamma - ex) < 1e-8);
  CHECK(std::abs(tcl2_rate(ModelSpec(ResonantJC{g, l}), t).gamma - ex) < 1e-5);
}

TEST_CASE("strong-coupling exact rate through the critical point") {
  // l = 2 g0 makes d = 0; the limit is continuous.
  const double below = exact_rate(ModelSpec(ResonantJC{1.0, 2.0 - 1e-9}), 1.0).gamma;
  const double at = exact_rate(ModelSpec(ResonantJC{1.0, 2.0}), 1.0).gamma;
  const double above = exact_rate(ModelSpec(ResonantJC{1.0, 2.0 + 1e-9}), 1.0).gamma;
  CHECK(at == doctest::Approx(below).epsilon(1e-7));
  CHECK(at == doctest::Approx(above).epsilon(1e-7));
  CHECK(at == doctest::Approx(ref::exact_rate_resonant(1.0, 2.0 + 1e-7, 1.0)).epsilon(1e-6));
}

TEST_CASE("detuned closed forms") {
  const ModelSpec m(DetunedJC{1.0, 0.3, 2.4});
  for (double t : {0.1, 0.9, 1.87, 4.0, 10.0}) {
    const ref::Rates r = ref::tcl4_detuned(1.0, 0.3, 2.4, t);
    const RatePair p = tcl4_rate(m, t);
    CHECK(std::abs(p.gamma - r.gamma) < 1e-13);
    CHECK(std::abs(p.shift - r.shift) < 1e-13);
  }
  CHECK(markov_rate(m).gamma == doctest::Approx(1.0 / 65.0).epsilon(1e-14));
  // The Markov limit equals tcl2 at long times.
  CHECK(tcl2_rate(m, 200.0).gamma == doctest::Approx(markov_rate(m).gamma).epsilon(1e-12));
  CHECK(tcl2_rate(m, 200.0).shift == doctest::Approx(markov_rate(m).shift).epsilon(1e-12));
}

TEST_CASE("detuned TCL4 rate turns negative") {
  const ModelSpec m(DetunedJC{1.0, 0.3, 2.4});
  double lo = 1.0, at = 0.0;
  for (int k = 0; k <= 10000; ++k) {
    const double t = 1e-3 * k;
    const double g = tcl4_rate(m, t).gamma;
    if (g < lo) lo = g, at = t;
  }
  CHECK(lo == doctest::Approx(-0.0605).epsilon(5e-3));
  CHECK(at == doctest::Approx(1.87).epsilon(0.02));
}

TEST_CASE("zero detuning reduces to the resonant model") {
  const ModelSpec d(DetunedJC{1.0, 5.0, 0.0});
  const ModelSpec r(ResonantJC{1.0, 5.0});
  for (double t : {0.2, 2.0}) {
    CHECK(tcl4_rate(d, t).gamma == doctest::Approx(tcl4_rate(r, t).gamma));
    CHECK(exact_rate(d, t).gamma == doctest::Approx(exact_rate(r, t).gamma));
    CHECK(tcl4_rate(d, t).shift == 0.0);
  }
}

TEST_CASE("non-resonant exact rate by pseudomodes matches the resonant closed form") {
  // A band gap with w2 = 0 is a single Lorentzian.
  const ModelSpec bg(BandGap{1.0, 4.0, 1.0, 0.25, 0.0});
  // Phi = 2 * 0.25 e^{-2t} = g0 l e^{-l t} with l = 2, g0 = 0.25.
  for (double t : {0.3, 1.0, 5.0}) {
    CHECK(exact_rate(bg, t).gamma == doctest::Approx(ref::exact_rate_resonant(0.25, 2.0, t)).epsilon(1e-10));
  }
}

TEST_CASE("band-gap rates by quadrature") {
  const ModelSpec m(BandGap{});
  const RateFunction f(m, RateMethod::TCL4, 10.0);
  const auto corr = [&](double t) {
    const Correlation c = correlation(m, t);
    return std::make_pair(c.phi, c.psi);
  };
  for (double t : {0.5, 2.0, 8.0}) {
    const ref::Rates r = ref::brute_tcl4_extrapolated(corr, t, 160);
    CHECK(f(t).gamma == doctest::Approx(r.gamma).epsilon(2e-3));
  }
  CHECK(f(10.0).gamma > 0.0);
  CHECK(tcl2_rate(m, 0.0).gamma == 0.0);
}

TEST_CASE("breakdown times and rate curves") {
  const ModelSpec strong(ResonantJC{1.0, 0.2});
  const auto t0 = rate_breakdown_time(strong, RateMethod::Exact);
  REQUIRE(t0.has_value());
  CHECK(*t0 == doctest::Approx(ref::first_zero_resonant(1.0, 0.2)).epsilon(1e-9));
  CHECK_FALSE(rate_breakdown_time(ModelSpec(ResonantJC{1.0, 5.0}), RateMethod::Exact).has_value());
  CHECK_FALSE(rate_breakdown_time(strong, RateMethod::TCL4).has_value());
  CHECK_THROWS_AS(exact_rate(strong, *t0), AmplitudeZeroError);

  const RateFunction f(strong, RateMethod::Exact, 10.0);
  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(0.1 * k);
  const RateCurve c = rate_curve(f, times);
  CHECK(c.truncated);
  CHECK(c.t.back() < *t0);
  CHECK(c.t.size() == 64);
}

TEST_CASE("invalid arguments") {
  const ModelSpec m(ResonantJC{1.0, 5.0});
  CHECK_THROWS_AS(tcl2_rate(m, -1.0), DomainError);
  CHECK_THROWS_AS(gme_rate(ModelSpec(BandGap{}), 1.0), DomainError);
  CHECK_THROWS_AS(RateFunction(ModelSpec(BandGap{}), RateMethod::GmeBorn, 10.0), DomainError);
  CHECK_THROWS_AS(RateFunction(m, RateMethod::TCL4, 0.0), DomainError);
  CHECK_THROWS_AS(RateFunction(ModelSpec(CustomTable{0.1, {1.0, 0.0}, {0.0, 0.0}}), RateMethod::Exact),
                  DomainError);
}

TEST_CASE("tabulated correlations") {
  const ModelSpec res(ResonantJC{1.0, 5.0});
  CustomTable tab{1e-3, {}, {}};
  for (int k = 0; k <= 10000; ++k) {
    const Correlation c = correlation(res, 1e-3 * k);
    tab.phi.push_back(c.phi);
    tab.psi.push_back(c.psi);
  }
  const ModelSpec m(tab);
  CHECK(tcl2_rate(m, 2.0).gamma == doctest::Approx(ref::tcl2_resonant(1.0, 5.0, 2.0)).epsilon(1e-5));
  CHECK(markov_rate(m).gamma == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(tcl2_rate(m, 11.0), DomainError);
}
