#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ref {

double tcl2_resonant(double g0, double l, double t) { return g0 * (1.0 - std::exp(-l * t)); }

double tcl4_resonant(double g0, double l, double t) {
  return g0 * (1.0 - std::exp(-l * t) + g0 / l * (std::sinh(l * t) - l * t) * std::exp(-l * t));
}

namespace {

double pole_rate(double g0, double l, double k, double t) {
  const cplx d = std::sqrt(cplx(l * l - k * g0 * l));
  const cplx x = 0.5 * d * t;
  return (cplx(2.0 * g0 * l) * std::sinh(x) / (d * std::cosh(x) + l * std::sinh(x))).real();
}

cplx pole_amplitude(double g0, double l, double k, double t) {
  const cplx d = std::sqrt(cplx(l * l - k * g0 * l));
  const cplx x = 0.5 * d * t;
  return std::exp(-0.5 * l * t) * (std::cosh(x) + l / d * std::sinh(x));
}

}  // namespace

double exact_rate_resonant(double g0, double l, double t) { return pole_rate(g0, l, 2.0, t); }
double gme_rate_resonant(double g0, double l, double t) { return pole_rate(g0, l, 4.0, t); }
cplx amplitude_resonant(double g0, double l, double t) { return pole_amplitude(g0, l, 2.0, t); }
double gme_population_resonant(double g0, double l, double t) {
  return pole_amplitude(g0, l, 4.0, t).real();
}

double first_zero_resonant(double g0, double l) {
  const double h = 1e-3;
  double a = 0.0;
  while (amplitude_resonant(g0, l, a + h).real() > 0.0) {
    a += h;
    if (a > 1e4) throw std::runtime_error("first_zero_resonant: no zero");
  }
  double b = a + h;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (amplitude_resonant(g0, l, m).real() > 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

Rates tcl4_detuned(double g0, double l, double D, double t) {
  const double e = std::exp(-l * t);
  const double q = l * l + D * D;
  const double c = std::cos(D * t), s = std::sin(D * t);
  const double c2 = std::cos(2.0 * D * t), s2 = std::sin(2.0 * D * t);
  const double dl = D / l, ld = l / D;
  Rates r;
  r.gamma = g0 * l * l / q * (1.0 - e * (c - dl * s)) +
            g0 * g0 * std::pow(l, 5) * e / (2.0 * q * q * q) *
                ((1.0 - 3.0 * dl * dl) * (1.0 / e - e * c2) - 2.0 * (1.0 - std::pow(dl, 4)) * l * t * c +
                 4.0 * (1.0 + dl * dl) * D * t * s + dl * (3.0 - dl * dl) * e * s2);
  r.shift = g0 * l * D / q * (1.0 - e * (c + ld * s)) -
            g0 * g0 * l * l * D * D * D * e / (2.0 * q * q * q) *
                ((1.0 - 3.0 * ld * ld) * (1.0 / e - e * c2) - 2.0 * (1.0 - std::pow(ld, 4)) * D * t * s +
                 4.0 * (1.0 + ld * ld) * l * t * c - ld * (3.0 - ld * ld) * e * s2);
  return r;
}

double markov_detuned(double g0, double l, double D) { return g0 * l * l / (l * l + D * D); }

Rates brute_tcl4(const CorrFn& corr, double t, int n) {
  const double h = t / n;
  std::vector<double> P(n + 1), S(n + 1);
  for (int k = 0; k <= n; ++k) std::tie(P[k], S[k]) = corr(k * h);
  // Trapezoid weight of node j on [0, upper] with `upper` intervals.
  auto w = [h](int j, int upper) { return upper == 0 ? 0.0 : (j == 0 || j == upper ? 0.5 * h : h); };
  double g3 = 0.0, s3 = 0.0, g1 = 0.0, s1 = 0.0;
  for (int i1 = 0; i1 <= n; ++i1) {
    g1 += w(i1, n) * P[n - i1];
    s1 += w(i1, n) * S[n - i1];
    double gi = 0.0, si = 0.0;
    for (int i2 = 0; i2 <= i1; ++i2) {
      double gj = 0.0, sj = 0.0;
      for (int i3 = 0; i3 <= i2; ++i3) {
        const double wt = w(i3, i2);
        if (wt == 0.0) continue;
        gj += wt * (P[n - i2] * P[i1 - i3] - S[n - i2] * S[i1 - i3] + P[n - i3] * P[i1 - i2] -
                    S[n - i3] * S[i1 - i2]);
        sj += wt * (S[n - i2] * P[i1 - i3] + P[n - i2] * S[i1 - i3] + S[n - i3] * P[i1 - i2] +
                    P[n - i3] * S[i1 - i2]);
      }
      gi += w(i2, i1) * gj;
      si += w(i2, i1) * sj;
    }
    g3 += w(i1, n) * gi;
    s3 += w(i1, n) * si;
  }
  return Rates{g1 + 0.5 * g3, s1 + 0.5 * s3};
}

Rates brute_tcl4_extrapolated(const CorrFn& corr, double t, int n) {
  const Rates a = brute_tcl4(corr, t, n);
  const Rates b = brute_tcl4(corr, t, 2 * n);
  return Rates{(4.0 * b.gamma - a.gamma) / 3.0, (4.0 * b.shift - a.shift) / 3.0};
}

cplx fourier_correlation(const std::function<double(double)>& J, double t, double L, double h) {
  const long n = 2 * static_cast<long>(std::ceil(L / h));
  const double step = 2.0 * L / static_cast<double>(n);
  cplx sum = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double w = -L + step * static_cast<double>(k);
    const double c = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += c * J(w) * std::exp(cplx(0.0, -w * t));
  }
  return 2.0 * sum * step / 3.0;
}

double memory_residual(const std::vector<cplx>& c1, double h, const std::function<cplx(double)>& f) {
  const std::size_t n = c1.size();
  std::vector<cplx> fk(n);
  for (std::size_t k = 0; k < n; ++k) fk[k] = f(h * static_cast<double>(k));
  double worst = 0.0, scale = 0.0;
  for (std::size_t m = 2; m + 2 < n; ++m) {
    const cplx d = (-c1[m + 2] + 8.0 * c1[m + 1] - 8.0 * c1[m - 1] + c1[m - 2]) / (12.0 * h);
    cplx mem = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
      const double wt = (j == 0 || j == m) ? 0.5 : 1.0;
      mem += wt * fk[m - j] * c1[j];
    }
    mem *= h;
    worst = std::max(worst, std::abs(d + mem));
    scale = std::max(scale, std::abs(d));
  }
  return worst / scale;
}

}  // namespace ref
