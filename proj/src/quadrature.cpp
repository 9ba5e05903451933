#include "tcljump/quadrature.hpp"

#include "tcljump/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tcljump {

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
  return out;
}

namespace {

std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

// Sampled correlations and their running integrals on one grid.
struct Tables {
  std::size_t n;
  double h;
  std::vector<double> phi, psi;          // X
  std::vector<double> phi_rev, psi_rev;  // X[n-k]
  std::vector<double> c_phi, c_psi;      // C_X
  std::vector<double> d_phi, d_psi;      // D_X
  // running integrals of X*D_Y (A-type tails) and C_X*C_Y (B-type)
  std::vector<double> q_phi_dphi, q_psi_dpsi, q_psi_dphi, q_phi_dpsi;
  std::vector<double> r_phi_phi, r_psi_psi, r_phi_psi;

  Tables(const CorrelationFn& corr, double horizon, std::size_t n_) : n(n_), h(horizon / n_) {
    phi.resize(n + 1);
    psi.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = (k == n) ? horizon : h * static_cast<double>(k);
      const Correlation c = corr(t);
      phi[k] = c.phi;
      psi[k] = c.psi;
    }
    phi_rev.assign(phi.rbegin(), phi.rend());
    psi_rev.assign(psi.rbegin(), psi.rend());
    c_phi = cumulative_trapezoid(phi, h);
    c_psi = cumulative_trapezoid(psi, h);
    d_phi = cumulative_trapezoid(c_phi, h);
    d_psi = cumulative_trapezoid(c_psi, h);
    q_phi_dphi = cumulative_trapezoid(product(phi, d_phi), h);
    q_psi_dpsi = cumulative_trapezoid(product(psi, d_psi), h);
    q_psi_dphi = cumulative_trapezoid(product(psi, d_phi), h);
    q_phi_dpsi = cumulative_trapezoid(product(phi, d_psi), h);
    r_phi_phi = cumulative_trapezoid(product(c_phi, c_phi), h);
    r_psi_psi = cumulative_trapezoid(product(c_psi, c_psi), h);
    r_phi_psi = cumulative_trapezoid(product(c_phi, c_psi), h);
  }

  // Trapezoid of sum_j X[m-j] D_Y[j]; D_Y[0] = 0 drops one endpoint.
  double conv(const simd::KernelTable& kern, const std::vector<double>& x_rev,
              const std::vector<double>& x, const std::vector<double>& dy, std::size_t m) const {
    if (m == 0) return 0.0;
    const double s = kern.dot(x_rev.data() + (n - m), dy.data(), m + 1);
    return h * (s - 0.5 * x[0] * dy[m]);
  }

  RatePair at(const simd::KernelTable& kern, std::size_t m) const {
    // A(X,Y) = \int X(t-t2) Y(t1-t3),  B(X,Y) = \int X(t-t3) Y(t1-t2)
    const double a_phi_phi =
        d_phi[m] * c_phi[m] - conv(kern, phi_rev, phi, d_phi, m) - q_phi_dphi[m];
    const double a_psi_psi =
        d_psi[m] * c_psi[m] - conv(kern, psi_rev, psi, d_psi, m) - q_psi_dpsi[m];
    const double a_psi_phi =
        d_phi[m] * c_psi[m] - conv(kern, psi_rev, psi, d_phi, m) - q_psi_dphi[m];
    const double a_phi_psi =
        d_psi[m] * c_phi[m] - conv(kern, phi_rev, phi, d_psi, m) - q_phi_dpsi[m];
    const double b_phi_phi = c_phi[m] * d_phi[m] - r_phi_phi[m];
    const double b_psi_psi = c_psi[m] * d_psi[m] - r_psi_psi[m];
    const double b_psi_phi = c_psi[m] * d_phi[m] - r_phi_psi[m];
    const double b_phi_psi = c_phi[m] * d_psi[m] - r_phi_psi[m];

    RatePair out;
    out.gamma = c_phi[m] + 0.5 * ((a_phi_phi - a_psi_psi) + (b_phi_phi - b_psi_psi));
    out.shift = c_psi[m] + 0.5 * ((a_psi_phi + a_phi_psi) + (b_psi_phi + b_phi_psi));
    return out;
  }
};

void check_horizon(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("tcl4 quadrature: t must be >= 0");
}

}  // namespace

std::vector<RatePair> tcl4_trapezoid_grid(const CorrelationFn& corr, double horizon,
                                          std::size_t n, const simd::KernelTable& kernels) {
  check_horizon(horizon);
  if (n < 1) throw DomainError("tcl4_trapezoid_grid: need at least one interval");
  if (horizon == 0.0) return std::vector<RatePair>(n + 1);
  const Tables tab(corr, horizon, n);
  std::vector<RatePair> out(n + 1);
  for (std::size_t m = 0; m <= n; ++m) out[m] = tab.at(kernels, m);
  return out;
}

RatePair tcl4_quadrature(const CorrelationFn& corr, double t, const QuadratureOptions& opts) {
  check_horizon(t);
  if (t == 0.0) return {};
  const auto& kern = simd::active_kernels();
  std::size_t n = std::max<std::size_t>(opts.n_initial, 2);
  RatePair prev = Tables(corr, t, n).at(kern, n);
  while (2 * n <= opts.n_max) {
    n *= 2;
    const RatePair cur = Tables(corr, t, n).at(kern, n);
    const double diff = std::max(std::abs(cur.gamma - prev.gamma), std::abs(cur.shift - prev.shift));
    const double scale = std::max(std::abs(cur.gamma), std::abs(cur.shift));
    if (diff <= opts.rel_tol * scale) return cur;
    prev = cur;
  }
  throw QuadratureError("tcl4_quadrature: no convergence at t=" + std::to_string(t) +
                        " with " + std::to_string(n) + " intervals");
}

RateTable::RateTable(double step, std::vector<RatePair> values)
    : step_(step), values_(std::move(values)) {
  if (!(step_ > 0.0) || values_.size() < 2) {
    throw DomainError("RateTable: need a positive step and at least two points");
  }
}

RatePair RateTable::at(double t) const {
  const double x = t / step_;
  const double last = static_cast<double>(values_.size() - 1);
  if (!(x >= -1e-12) || x > last * (1.0 + 1e-12) + 1e-12) {
    throw DomainError("RateTable: t=" + std::to_string(t) + " outside [0, " +
                      std::to_string(horizon()) + "]");
  }
  const std::size_t n = values_.size();
  if (n < 4) {
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, x)), n - 2);
    const double f = x - static_cast<double>(k);
    return {values_[k].gamma + f * (values_[k + 1].gamma - values_[k].gamma),
            values_[k].shift + f * (values_[k + 1].shift - values_[k].shift)};
  }
  // Stencil k0..k0+3 around x, clamped inside the table.
  auto k = static_cast<std::ptrdiff_t>(std::floor(x));
  std::ptrdiff_t k0 = std::clamp<std::ptrdiff_t>(k - 1, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double u = x - static_cast<double>(k0);
  double w[4];
  for (int i = 0; i < 4; ++i) {
    double li = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) li *= (u - j) / static_cast<double>(i - j);
    }
    w[i] = li;
  }
  RatePair out;
  for (int i = 0; i < 4; ++i) {
    out.gamma += w[i] * values_[static_cast<std::size_t>(k0 + i)].gamma;
    out.shift += w[i] * values_[static_cast<std::size_t>(k0 + i)].shift;
  }
  return out;
}

RateTable tcl4_quadrature_table(const CorrelationFn& corr, double horizon,
                                const QuadratureOptions& opts) {
  check_horizon(horizon);
  if (horizon == 0.0) throw DomainError("tcl4_quadrature_table: horizon must be > 0");
  std::size_t n = std::max<std::size_t>(opts.n_initial, 4);
  std::vector<RatePair> prev = tcl4_trapezoid_grid(corr, horizon, n);
  while (2 * n <= opts.n_max) {
    std::vector<RatePair> cur = tcl4_trapezoid_grid(corr, horizon, 2 * n);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      diff = std::max({diff, std::abs(cur[2 * k].gamma - prev[k].gamma),
                       std::abs(cur[2 * k].shift - prev[k].shift)});
    }
    for (const RatePair& r : cur) scale = std::max({scale, std::abs(r.gamma), std::abs(r.shift)});
    n *= 2;
    if (diff <= opts.rel_tol * scale) return RateTable(horizon / static_cast<double>(n), std::move(cur));
    prev = std::move(cur);
  }
  throw QuadratureError("tcl4_quadrature_table: no convergence on [0, " + std::to_string(horizon) +
                        "] with " + std::to_string(n) + " intervals");
}

}  // namespace tcljump
