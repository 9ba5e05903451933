// NEON (aarch64) variants, two double lanes. vfmaq is deliberately not used;
// see kernels_avx2.cpp for the bit-identity contract.

#include "tcljump/simd/kernels.hpp"

#include <arm_neon.h>

namespace tcljump::simd {

namespace {

using cplx = std::complex<double>;

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + k), vld1q_f64(b + k)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; k < n; ++k) s = s + a[k] * b[k];
  return s;
}

void welford_push_neon(double* mean, double* m2, const double* x, std::size_t n, double count) {
  const float64x2_t vc = vdupq_n_f64(count);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t vx = vld1q_f64(x + k);
    float64x2_t vm = vld1q_f64(mean + k);
    const float64x2_t d = vsubq_f64(vx, vm);
    vm = vaddq_f64(vm, vdivq_f64(d, vc));
    vst1q_f64(mean + k, vm);
    vst1q_f64(m2 + k, vaddq_f64(vld1q_f64(m2 + k), vmulq_f64(d, vsubq_f64(vx, vm))));
  }
  for (; k < n; ++k) {
    const double d = x[k] - mean[k];
    mean[k] = mean[k] + d / count;
    m2[k] = m2[k] + d * (x[k] - mean[k]);
  }
}

void welford_merge_neon(double* mean_a, double* m2_a, double count_a, const double* mean_b,
                        const double* m2_b, double count_b, std::size_t n) {
  const double total = count_a + count_b;
  const double wb = count_b / total;
  const double wab = (count_a * count_b) / total;
  const float64x2_t vwb = vdupq_n_f64(wb);
  const float64x2_t vwab = vdupq_n_f64(wab);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t ma = vld1q_f64(mean_a + k);
    const float64x2_t d = vsubq_f64(vld1q_f64(mean_b + k), ma);
    vst1q_f64(mean_a + k, vaddq_f64(ma, vmulq_f64(d, vwb)));
    const float64x2_t s = vaddq_f64(vld1q_f64(m2_a + k), vld1q_f64(m2_b + k));
    vst1q_f64(m2_a + k, vaddq_f64(s, vmulq_f64(vmulq_f64(d, d), vwab)));
  }
  for (; k < n; ++k) {
    const double d = mean_b[k] - mean_a[k];
    mean_a[k] = mean_a[k] + d * wb;
    m2_a[k] = (m2_a[k] + m2_b[k]) + (d * d) * wab;
  }
}

template <bool kStore>
inline void eval2(const PdpShape& sh, const cplx* ops, const float64x2_t* xr,
                  const float64x2_t* xi, float64x2_t* fr, float64x2_t* fi, float64x2_t& norm2,
                  float64x2_t* rates, float64x2_t* jxr, float64x2_t* jxi) {
  const int n = sh.dim;
  const int N = sh.components();
  const int nn = n * n;

  float64x2_t n2 = vdupq_n_f64(0.0);
  for (int c = 0; c < N; ++c) {
    n2 = vaddq_f64(n2, vaddq_f64(vmulq_f64(xr[c], xr[c]), vmulq_f64(xi[c], xi[c])));
  }
  norm2 = n2;

  float64x2_t s = vdupq_n_f64(0.0);
  for (int ch = 0; ch < sh.channels; ++ch) {
    float64x2_t jn = vdupq_n_f64(0.0);
    for (int b = 0; b < sh.blocks; ++b) {
      const cplx* m = ops + static_cast<std::size_t>(sh.blocks + ch * sh.blocks + b) * nn;
      for (int a = 0; a < n; ++a) {
        float64x2_t sr = vdupq_n_f64(0.0);
        float64x2_t si = vdupq_n_f64(0.0);
        for (int col = 0; col < n; ++col) {
          const float64x2_t mr = vdupq_n_f64(m[a * n + col].real());
          const float64x2_t mi = vdupq_n_f64(m[a * n + col].imag());
          const float64x2_t vr = xr[b * n + col];
          const float64x2_t vi = xi[b * n + col];
          sr = vaddq_f64(sr, vsubq_f64(vmulq_f64(mr, vr), vmulq_f64(mi, vi)));
          si = vaddq_f64(si, vaddq_f64(vmulq_f64(mr, vi), vmulq_f64(mi, vr)));
        }
        if constexpr (kStore) {
          jxr[ch * N + b * n + a] = sr;
          jxi[ch * N + b * n + a] = si;
        }
        jn = vaddq_f64(jn, vaddq_f64(vmulq_f64(sr, sr), vmulq_f64(si, si)));
      }
    }
    const float64x2_t r = vdivq_f64(jn, n2);
    if constexpr (kStore) rates[ch] = r;
    s = vaddq_f64(s, r);
  }
  s = vmulq_f64(vdupq_n_f64(0.5), s);

  for (int b = 0; b < sh.blocks; ++b) {
    const cplx* m = ops + static_cast<std::size_t>(b) * nn;
    for (int a = 0; a < n; ++a) {
      float64x2_t sr = vdupq_n_f64(0.0);
      float64x2_t si = vdupq_n_f64(0.0);
      for (int col = 0; col < n; ++col) {
        const float64x2_t mr = vdupq_n_f64(m[a * n + col].real());
        const float64x2_t mi = vdupq_n_f64(m[a * n + col].imag());
        const float64x2_t vr = xr[b * n + col];
        const float64x2_t vi = xi[b * n + col];
        sr = vaddq_f64(sr, vsubq_f64(vmulq_f64(mr, vr), vmulq_f64(mi, vi)));
        si = vaddq_f64(si, vaddq_f64(vmulq_f64(mr, vi), vmulq_f64(mi, vr)));
      }
      const int c = b * n + a;
      fr[c] = vaddq_f64(sr, vmulq_f64(s, xr[c]));
      fi[c] = vaddq_f64(si, vmulq_f64(s, xi[c]));
    }
  }
}

void pdp_rk4_neon(const PdpShape& sh, const cplx* ops0, const cplx* opsh, const cplx* ops1,
                  double dt, std::size_t lanes, double* re, double* im, const PdpStart& start) {
  const int N = sh.components();
  const float64x2_t h2 = vdupq_n_f64(0.5 * dt);
  const float64x2_t vdt = vdupq_n_f64(dt);
  const float64x2_t h6 = vdupq_n_f64(dt / 6.0);
  const float64x2_t two = vdupq_n_f64(2.0);

  float64x2_t xr[kMaxComponents], xi[kMaxComponents], yr[kMaxComponents], yi[kMaxComponents];
  float64x2_t k1r[kMaxComponents], k1i[kMaxComponents], k2r[kMaxComponents], k2i[kMaxComponents];
  float64x2_t k3r[kMaxComponents], k3i[kMaxComponents], k4r[kMaxComponents], k4i[kMaxComponents];
  float64x2_t rates[kMaxChannels];
  float64x2_t jxr[kMaxChannels * kMaxComponents], jxi[kMaxChannels * kMaxComponents];
  float64x2_t n2, dummy;

  for (std::size_t lane = 0; lane + 2 <= lanes; lane += 2) {
    for (int c = 0; c < N; ++c) {
      xr[c] = vld1q_f64(re + c * lanes + lane);
      xi[c] = vld1q_f64(im + c * lanes + lane);
    }
    eval2<true>(sh, ops0, xr, xi, k1r, k1i, n2, rates, jxr, jxi);
    for (int c = 0; c < N; ++c) {
      yr[c] = vaddq_f64(xr[c], vmulq_f64(h2, k1r[c]));
      yi[c] = vaddq_f64(xi[c], vmulq_f64(h2, k1i[c]));
    }
    eval2<false>(sh, opsh, yr, yi, k2r, k2i, dummy, nullptr, nullptr, nullptr);
    for (int c = 0; c < N; ++c) {
      yr[c] = vaddq_f64(xr[c], vmulq_f64(h2, k2r[c]));
      yi[c] = vaddq_f64(xi[c], vmulq_f64(h2, k2i[c]));
    }
    eval2<false>(sh, opsh, yr, yi, k3r, k3i, dummy, nullptr, nullptr, nullptr);
    for (int c = 0; c < N; ++c) {
      yr[c] = vaddq_f64(xr[c], vmulq_f64(vdt, k3r[c]));
      yi[c] = vaddq_f64(xi[c], vmulq_f64(vdt, k3i[c]));
    }
    eval2<false>(sh, ops1, yr, yi, k4r, k4i, dummy, nullptr, nullptr, nullptr);
    for (int c = 0; c < N; ++c) {
      const float64x2_t sr =
          vaddq_f64(vaddq_f64(vaddq_f64(k1r[c], vmulq_f64(two, k2r[c])), vmulq_f64(two, k3r[c])), k4r[c]);
      const float64x2_t si =
          vaddq_f64(vaddq_f64(vaddq_f64(k1i[c], vmulq_f64(two, k2i[c])), vmulq_f64(two, k3i[c])), k4i[c]);
      vst1q_f64(re + c * lanes + lane, vaddq_f64(xr[c], vmulq_f64(h6, sr)));
      vst1q_f64(im + c * lanes + lane, vaddq_f64(xi[c], vmulq_f64(h6, si)));
    }

    vst1q_f64(start.norm2 + lane, n2);
    for (int ch = 0; ch < sh.channels; ++ch) {
      vst1q_f64(start.rates + ch * lanes + lane, rates[ch]);
      for (int c = 0; c < N; ++c) {
        vst1q_f64(start.jx_re + (ch * N + c) * lanes + lane, jxr[ch * N + c]);
        vst1q_f64(start.jx_im + (ch * N + c) * lanes + lane, jxi[ch * N + c]);
      }
    }
  }
}

}  // namespace

namespace detail {

const KernelTable* neon_table() {
  static const KernelTable table{Isa::Neon,          "neon",
                                 2,                  &dot_neon,
                                 &welford_push_neon, &welford_merge_neon,
                                 &pdp_rk4_neon};
  return &table;
}

}  // namespace detail

}  // namespace tcljump::simd
