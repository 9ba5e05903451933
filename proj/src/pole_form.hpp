// Closed forms shared by the resonant exact and GME-Born solutions.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

namespace tcljump::detail {

using cplx = std::complex<double>;

inline cplx sinhc(cplx x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

// Rate 2 g0 l sinh(x)/(d cosh(x) + l sinh(x)), x = d t/2, d^2 = l^2 - k g0 l,
// together with the amplitude e^{-lt/2}(cosh x + (l/d) sinh x) whose zeros
// make it diverge. k = 2: exact; k = 4: GME-Born.
struct PoleForm {
  double rate;
  cplx amplitude;
};

inline PoleForm pole_form(double g0, double l, double k, double t) {
  const cplx d = std::sqrt(cplx(l * l - k * g0 * l, 0.0));
  const cplx x = 0.5 * d * t;
  const double half = 0.5 * l * t;
  if (std::abs(x.real()) > 20.0) {
    // cosh x ~ sinh x ~ e^x/2: divide through before anything overflows.
    const cplx th = std::tanh(x) / x;
    const cplx rate = 2.0 * g0 * l * 0.5 * t * th / (1.0 + half * th);
    const cplx amp = 0.5 * ((1.0 + l / d) * std::exp(x - half) + (1.0 - l / d) * std::exp(-x - half));
    return {rate.real(), amp};
  }
  const cplx s = sinhc(x);
  const cplx den = std::cosh(x) + half * s;
  const cplx rate = 2.0 * g0 * l * 0.5 * t * s / den;
  return {rate.real(), std::exp(-half) * den};
}

inline std::optional<double> first_zero(double g0, double l, double k) {
  const double disc = k * g0 * l - l * l;
  if (!(disc > 0.0)) return std::nullopt;
  const double dh = std::sqrt(disc);
  return 2.0 / dh * (std::numbers::pi - std::atan(dh / l));
}

}  // namespace tcljump::detail
