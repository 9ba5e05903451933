// kernels.hpp: data-parallel inner loops with a scalar reference and vector
// variants (AVX2 on x86-64, NEON on aarch64) selected at runtime.
//
// Contract between variants:
//   * welford_push, welford_merge and pdp_rk4 are bit-identical to the scalar
//     reference: same operations in the same order, no multiply-add fusion.
//     Ensemble results therefore do not depend on the instruction set.
//   * dot reassociates the sum and agrees with the scalar reference only to
//     rounding.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tcljump::simd {

inline constexpr int kMaxComponents = 64;
inline constexpr int kMaxChannels = 16;

// Layout of the piecewise-deterministic drift problem.
//
// The state x has components() = blocks * dim complex entries: one block for
// the single-space unraveling, two (phi, psi) for the doubled space. Operator
// data for one time point is a contiguous array of dim*dim row-major complex
// matrices: F_0..F_{blocks-1}, then J_{ch,b} at index blocks + ch*blocks + b.
struct PdpShape {
  int dim = 2;
  int blocks = 2;
  int channels = 1;

  int components() const noexcept { return dim * blocks; }
  int matrices() const noexcept { return blocks * (1 + channels); }
  std::size_t ops_size() const noexcept {
    return static_cast<std::size_t>(matrices()) * static_cast<std::size_t>(dim * dim);
  }
};

// Per-lane quantities of the drift evaluation at the start of a step, used for
// the jump decision. Arrays are lane-strided:
//   norm2[lane], rates[ch*lanes + lane], jx_re/jx_im[(ch*N + c)*lanes + lane].
struct PdpStart {
  double* norm2;
  double* rates;
  double* jx_re;
  double* jx_im;
};

// One classical RK4 step of
//   dx/dt = F(t) x + (1/2) sum_ch |J_ch(t) x|^2 / |x|^2 * x
// for `lanes` independent states stored structure-of-arrays:
//   re[c*lanes + lane], im[c*lanes + lane].
// ops0/ops_half/ops1 are the operators at t, t+dt/2, t+dt.
using PdpRk4Fn = void (*)(const PdpShape& shape, const std::complex<double>* ops0,
                          const std::complex<double>* ops_half,
                          const std::complex<double>* ops1, double dt, std::size_t lanes,
                          double* re, double* im, const PdpStart& start);

using DotFn = double (*)(const double* a, const double* b, std::size_t n);

// mean += (x - mean)/count; m2 += (x - mean_old)*(x - mean_new), elementwise.
// `count` is the sample count including x.
using WelfordPushFn = void (*)(double* mean, double* m2, const double* x, std::size_t n,
                               double count);

// Chan's pairwise combination of two (count, mean, m2) partials into a.
using WelfordMergeFn = void (*)(double* mean_a, double* m2_a, double count_a,
                                const double* mean_b, const double* m2_b, double count_b,
                                std::size_t n);

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  const char* name;
  std::size_t lane_width;  // pdp_rk4 requires lanes % lane_width == 0
  DotFn dot;
  WelfordPushFn welford_push;
  WelfordMergeFn welford_merge;
  PdpRk4Fn pdp_rk4;
};

const KernelTable& scalar_kernels();
// Variants compiled in and supported by this CPU, scalar first.
std::vector<const KernelTable*> available_kernels();
// Best available variant; the environment variable TCLJUMP_SIMD=scalar forces
// the reference path.
const KernelTable& active_kernels();

namespace detail {
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace tcljump::simd
