// AVX2 variants. Compiled with -mavx2 only (no FMA): every arithmetic step
// mirrors kernels_scalar.cpp so the trajectory and accumulation kernels stay
// bit-identical to the reference.

#include "tcljump/simd/kernels.hpp"

#include <immintrin.h>

namespace tcljump::simd {

namespace {

using cplx = std::complex<double>;

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4)));
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; k < n; ++k) s = s + a[k] * b[k];
  return s;
}

void welford_push_avx2(double* mean, double* m2, const double* x, std::size_t n, double count) {
  const __m256d vc = _mm256_set1_pd(count);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vx = _mm256_loadu_pd(x + k);
    __m256d vm = _mm256_loadu_pd(mean + k);
    const __m256d d = _mm256_sub_pd(vx, vm);
    vm = _mm256_add_pd(vm, _mm256_div_pd(d, vc));
    _mm256_storeu_pd(mean + k, vm);
    const __m256d v2 = _mm256_loadu_pd(m2 + k);
    _mm256_storeu_pd(m2 + k, _mm256_add_pd(v2, _mm256_mul_pd(d, _mm256_sub_pd(vx, vm))));
  }
  for (; k < n; ++k) {
    const double d = x[k] - mean[k];
    mean[k] = mean[k] + d / count;
    m2[k] = m2[k] + d * (x[k] - mean[k]);
  }
}

void welford_merge_avx2(double* mean_a, double* m2_a, double count_a, const double* mean_b,
                        const double* m2_b, double count_b, std::size_t n) {
  const double total = count_a + count_b;
  const double wb = count_b / total;
  const double wab = (count_a * count_b) / total;
  const __m256d vwb = _mm256_set1_pd(wb);
  const __m256d vwab = _mm256_set1_pd(wab);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d ma = _mm256_loadu_pd(mean_a + k);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(mean_b + k), ma);
    _mm256_storeu_pd(mean_a + k, _mm256_add_pd(ma, _mm256_mul_pd(d, vwb)));
    const __m256d s = _mm256_add_pd(_mm256_loadu_pd(m2_a + k), _mm256_loadu_pd(m2_b + k));
    _mm256_storeu_pd(m2_a + k, _mm256_add_pd(s, _mm256_mul_pd(_mm256_mul_pd(d, d), vwab)));
  }
  for (; k < n; ++k) {
    const double d = mean_b[k] - mean_a[k];
    mean_a[k] = mean_a[k] + d * wb;
    m2_a[k] = (m2_a[k] + m2_b[k]) + (d * d) * wab;
  }
}

template <bool kStore>
inline void eval4(const PdpShape& sh, const cplx* ops, const __m256d* xr, const __m256d* xi,
                  __m256d* fr, __m256d* fi, __m256d& norm2, __m256d* rates, __m256d* jxr,
                  __m256d* jxi) {
  const int n = sh.dim;
  const int N = sh.components();
  const int nn = n * n;

  __m256d n2 = _mm256_setzero_pd();
  for (int c = 0; c < N; ++c) {
    n2 = _mm256_add_pd(n2, _mm256_add_pd(_mm256_mul_pd(xr[c], xr[c]), _mm256_mul_pd(xi[c], xi[c])));
  }
  norm2 = n2;

  __m256d s = _mm256_setzero_pd();
  for (int ch = 0; ch < sh.channels; ++ch) {
    __m256d jn = _mm256_setzero_pd();
    for (int b = 0; b < sh.blocks; ++b) {
      const cplx* m = ops + static_cast<std::size_t>(sh.blocks + ch * sh.blocks + b) * nn;
      for (int a = 0; a < n; ++a) {
        __m256d sr = _mm256_setzero_pd();
        __m256d si = _mm256_setzero_pd();
        for (int col = 0; col < n; ++col) {
          const __m256d mr = _mm256_set1_pd(m[a * n + col].real());
          const __m256d mi = _mm256_set1_pd(m[a * n + col].imag());
          const __m256d vr = xr[b * n + col];
          const __m256d vi = xi[b * n + col];
          sr = _mm256_add_pd(sr, _mm256_sub_pd(_mm256_mul_pd(mr, vr), _mm256_mul_pd(mi, vi)));
          si = _mm256_add_pd(si, _mm256_add_pd(_mm256_mul_pd(mr, vi), _mm256_mul_pd(mi, vr)));
        }
        if constexpr (kStore) {
          jxr[ch * N + b * n + a] = sr;
          jxi[ch * N + b * n + a] = si;
        }
        jn = _mm256_add_pd(jn, _mm256_add_pd(_mm256_mul_pd(sr, sr), _mm256_mul_pd(si, si)));
      }
    }
    const __m256d r = _mm256_div_pd(jn, n2);
    if constexpr (kStore) rates[ch] = r;
    s = _mm256_add_pd(s, r);
  }
  s = _mm256_mul_pd(_mm256_set1_pd(0.5), s);

  for (int b = 0; b < sh.blocks; ++b) {
    const cplx* m = ops + static_cast<std::size_t>(b) * nn;
    for (int a = 0; a < n; ++a) {
      __m256d sr = _mm256_setzero_pd();
      __m256d si = _mm256_setzero_pd();
      for (int col = 0; col < n; ++col) {
        const __m256d mr = _mm256_set1_pd(m[a * n + col].real());
        const __m256d mi = _mm256_set1_pd(m[a * n + col].imag());
        const __m256d vr = xr[b * n + col];
        const __m256d vi = xi[b * n + col];
        sr = _mm256_add_pd(sr, _mm256_sub_pd(_mm256_mul_pd(mr, vr), _mm256_mul_pd(mi, vi)));
        si = _mm256_add_pd(si, _mm256_add_pd(_mm256_mul_pd(mr, vi), _mm256_mul_pd(mi, vr)));
      }
      const int c = b * n + a;
      fr[c] = _mm256_add_pd(sr, _mm256_mul_pd(s, xr[c]));
      fi[c] = _mm256_add_pd(si, _mm256_mul_pd(s, xi[c]));
    }
  }
}

void pdp_rk4_avx2(const PdpShape& sh, const cplx* ops0, const cplx* opsh, const cplx* ops1,
                  double dt, std::size_t lanes, double* re, double* im, const PdpStart& start) {
  const int N = sh.components();
  const __m256d h2 = _mm256_set1_pd(0.5 * dt);
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d h6 = _mm256_set1_pd(dt / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);

  __m256d xr[kMaxComponents], xi[kMaxComponents], yr[kMaxComponents], yi[kMaxComponents];
  __m256d k1r[kMaxComponents], k1i[kMaxComponents], k2r[kMaxComponents], k2i[kMaxComponents];
  __m256d k3r[kMaxComponents], k3i[kMaxComponents], k4r[kMaxComponents], k4i[kMaxComponents];
  __m256d rates[kMaxChannels];
  __m256d jxr[kMaxChannels * kMaxComponents], jxi[kMaxChannels * kMaxComponents];
  __m256d n2, dummy;

  for (std::size_t lane = 0; lane + 4 <= lanes; lane += 4) {
    for (int c = 0; c < N; ++c) {
      xr[c] = _mm256_loadu_pd(re + c * lanes + lane);
      xi[c] = _mm256_loadu_pd(im + c * lanes + lane);
    }
    eval4<true>(sh, ops0, xr, xi, k1r, k1i, n2, rates, jxr, jxi);
    for (int c = 0; c < N; ++c) {
      yr[c] = _mm256_add_pd(xr[c], _mm256_mul_pd(h2, k1r[c]));
      yi[c] = _mm256_add_pd(xi[c], _mm256_mul_pd(h2, k1i[c]));
    }
    eval4<false>(sh, opsh, yr, yi, k2r, k2i, dummy, nullptr, nullptr, nullptr);
    for (int c = 0; c < N; ++c) {
      yr[c] = _mm256_add_pd(xr[c], _mm256_mul_pd(h2, k2r[c]));
      yi[c] = _mm256_add_pd(xi[c], _mm256_mul_pd(h2, k2i[c]));
    }
    eval4<false>(sh, opsh, yr, yi, k3r, k3i, dummy, nullptr, nullptr, nullptr);
    for (int c = 0; c < N; ++c) {
      yr[c] = _mm256_add_pd(xr[c], _mm256_mul_pd(vdt, k3r[c]));
      yi[c] = _mm256_add_pd(xi[c], _mm256_mul_pd(vdt, k3i[c]));
    }
    eval4<false>(sh, ops1, yr, yi, k4r, k4i, dummy, nullptr, nullptr, nullptr);
    for (int c = 0; c < N; ++c) {
      const __m256d sr = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(k1r[c], _mm256_mul_pd(two, k2r[c])), _mm256_mul_pd(two, k3r[c])),
          k4r[c]);
      const __m256d si = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(k1i[c], _mm256_mul_pd(two, k2i[c])), _mm256_mul_pd(two, k3i[c])),
          k4i[c]);
      _mm256_storeu_pd(re + c * lanes + lane, _mm256_add_pd(xr[c], _mm256_mul_pd(h6, sr)));
      _mm256_storeu_pd(im + c * lanes + lane, _mm256_add_pd(xi[c], _mm256_mul_pd(h6, si)));
    }

    _mm256_storeu_pd(start.norm2 + lane, n2);
    for (int ch = 0; ch < sh.channels; ++ch) {
      _mm256_storeu_pd(start.rates + ch * lanes + lane, rates[ch]);
      for (int c = 0; c < N; ++c) {
        _mm256_storeu_pd(start.jx_re + (ch * N + c) * lanes + lane, jxr[ch * N + c]);
        _mm256_storeu_pd(start.jx_im + (ch * N + c) * lanes + lane, jxi[ch * N + c]);
      }
    }
  }
}

}  // namespace

namespace detail {

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::Avx2,          "avx2",
                                 4,                  &dot_avx2,
                                 &welford_push_avx2, &welford_merge_avx2,
                                 &pdp_rk4_avx2};
  return &table;
}

}  // namespace detail

}  // namespace tcljump::simd
