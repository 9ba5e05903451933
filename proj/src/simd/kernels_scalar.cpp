#include "tcljump/simd/kernels.hpp"

namespace tcljump::simd {

namespace {

using cplx = std::complex<double>;

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s = s + a[k] * b[k];
  return s;
}

void welford_push_scalar(double* mean, double* m2, const double* x, std::size_t n,
                         double count) {
  for (std::size_t k = 0; k < n; ++k) {
    const double d = x[k] - mean[k];
    mean[k] = mean[k] + d / count;
    m2[k] = m2[k] + d * (x[k] - mean[k]);
  }
}

void welford_merge_scalar(double* mean_a, double* m2_a, double count_a, const double* mean_b,
                          const double* m2_b, double count_b, std::size_t n) {
  const double total = count_a + count_b;
  const double wb = count_b / total;
  const double wab = (count_a * count_b) / total;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = mean_b[k] - mean_a[k];
    mean_a[k] = mean_a[k] + d * wb;
    m2_a[k] = (m2_a[k] + m2_b[k]) + (d * d) * wab;
  }
}

// Drift f(x) for one lane. Writes |x|^2, the channel rates and J_ch x.
void eval_lane(const PdpShape& sh, const cplx* ops, const double* xr, const double* xi,
               double* fr, double* fi, double& norm2, double* rates, double* jxr,
               double* jxi) {
  const int n = sh.dim;
  const int N = sh.components();
  const int nn = n * n;

  double n2 = 0.0;
  for (int c = 0; c < N; ++c) n2 = n2 + (xr[c] * xr[c] + xi[c] * xi[c]);
  norm2 = n2;

  double s = 0.0;
  for (int ch = 0; ch < sh.channels; ++ch) {
    double jn = 0.0;
    for (int b = 0; b < sh.blocks; ++b) {
      const cplx* m = ops + static_cast<std::size_t>(sh.blocks + ch * sh.blocks + b) * nn;
      for (int a = 0; a < n; ++a) {
        double sr = 0.0;
        double si = 0.0;
        for (int col = 0; col < n; ++col) {
          const double mr = m[a * n + col].real();
          const double mi = m[a * n + col].imag();
          const double vr = xr[b * n + col];
          const double vi = xi[b * n + col];
          sr = sr + (mr * vr - mi * vi);
          si = si + (mr * vi + mi * vr);
        }
        jxr[ch * N + b * n + a] = sr;
        jxi[ch * N + b * n + a] = si;
        jn = jn + (sr * sr + si * si);
      }
    }
    const double r = jn / n2;
    rates[ch] = r;
    s = s + r;
  }
  s = 0.5 * s;

  for (int b = 0; b < sh.blocks; ++b) {
    const cplx* m = ops + static_cast<std::size_t>(b) * nn;
    for (int a = 0; a < n; ++a) {
      double sr = 0.0;
      double si = 0.0;
      for (int col = 0; col < n; ++col) {
        const double mr = m[a * n + col].real();
        const double mi = m[a * n + col].imag();
        const double vr = xr[b * n + col];
        const double vi = xi[b * n + col];
        sr = sr + (mr * vr - mi * vi);
        si = si + (mr * vi + mi * vr);
      }
      const int c = b * n + a;
      fr[c] = sr + s * xr[c];
      fi[c] = si + s * xi[c];
    }
  }
}

void pdp_rk4_scalar(const PdpShape& sh, const cplx* ops0, const cplx* opsh, const cplx* ops1,
                    double dt, std::size_t lanes, double* re, double* im,
                    const PdpStart& start) {
  const int N = sh.components();
  const double h2 = 0.5 * dt;
  const double h6 = dt / 6.0;

  double xr[kMaxComponents], xi[kMaxComponents], yr[kMaxComponents], yi[kMaxComponents];
  double k1r[kMaxComponents], k1i[kMaxComponents], k2r[kMaxComponents], k2i[kMaxComponents];
  double k3r[kMaxComponents], k3i[kMaxComponents], k4r[kMaxComponents], k4i[kMaxComponents];
  double rates[kMaxChannels];
  double jxr[kMaxChannels * kMaxComponents], jxi[kMaxChannels * kMaxComponents];
  double scratch_r[kMaxChannels * kMaxComponents], scratch_i[kMaxChannels * kMaxComponents];
  double scratch_rates[kMaxChannels];

  for (std::size_t lane = 0; lane < lanes; ++lane) {
    for (int c = 0; c < N; ++c) {
      xr[c] = re[c * lanes + lane];
      xi[c] = im[c * lanes + lane];
    }
    double n2 = 0.0;
    double dummy = 0.0;
    eval_lane(sh, ops0, xr, xi, k1r, k1i, n2, rates, jxr, jxi);
    for (int c = 0; c < N; ++c) {
      yr[c] = xr[c] + h2 * k1r[c];
      yi[c] = xi[c] + h2 * k1i[c];
    }
    eval_lane(sh, opsh, yr, yi, k2r, k2i, dummy, scratch_rates, scratch_r, scratch_i);
    for (int c = 0; c < N; ++c) {
      yr[c] = xr[c] + h2 * k2r[c];
      yi[c] = xi[c] + h2 * k2i[c];
    }
    eval_lane(sh, opsh, yr, yi, k3r, k3i, dummy, scratch_rates, scratch_r, scratch_i);
    for (int c = 0; c < N; ++c) {
      yr[c] = xr[c] + dt * k3r[c];
      yi[c] = xi[c] + dt * k3i[c];
    }
    eval_lane(sh, ops1, yr, yi, k4r, k4i, dummy, scratch_rates, scratch_r, scratch_i);
    for (int c = 0; c < N; ++c) {
      re[c * lanes + lane] = xr[c] + h6 * (((k1r[c] + 2.0 * k2r[c]) + 2.0 * k3r[c]) + k4r[c]);
      im[c * lanes + lane] = xi[c] + h6 * (((k1i[c] + 2.0 * k2i[c]) + 2.0 * k3i[c]) + k4i[c]);
    }

    start.norm2[lane] = n2;
    for (int ch = 0; ch < sh.channels; ++ch) {
      start.rates[ch * lanes + lane] = rates[ch];
      for (int c = 0; c < N; ++c) {
        start.jx_re[(ch * N + c) * lanes + lane] = jxr[ch * N + c];
        start.jx_im[(ch * N + c) * lanes + lane] = jxi[ch * N + c];
      }
    }
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar,         "scalar",
                                 1,                   &dot_scalar,
                                 &welford_push_scalar, &welford_merge_scalar,
                                 &pdp_rk4_scalar};
  return table;
}

}  // namespace tcljump::simd
