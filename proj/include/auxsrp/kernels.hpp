#pragma once

// Inner-loop arithmetic shared by the spectral, SRP and simulation code.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant. The active table is chosen once at startup from the CPU features;
// AUXSRP_KERNELS=scalar|avx2 overrides the choice. Variants agree to within
// rounding, not bit-for-bit, so results are reproducible for a fixed table.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace auxsrp::kernels {

using cplx = std::complex<double>;

// Taps of the fractional-delay interpolator used by the image-source model,
// centred on the arrival: offsets -kSincHalfTaps .. +kSincHalfTaps.
inline constexpr int kSincHalfTaps = 40;
inline constexpr int kSincTaps = 2 * kSincHalfTaps + 1;
// Hann window half-width in samples; exceeds kSincHalfTaps so the outermost
// taps keep a nonzero weight.
inline constexpr double kSincWindowHalfWidth = kSincHalfTaps + 1;

struct KernelTable {
  const char* name;

  // out[k] = a[k] * conj(b[k])
  void (*cross_product)(cplx* out, const cplx* a, const cplx* b, std::size_t n);

  // out[k] = lambda * prev[k] + (1 - lambda) * a[k] * conj(b[k])
  void (*recursive_cross_update)(cplx* out, const cplx* prev, const cplx* a, const cplx* b,
                                 double lambda, std::size_t n);

  // out[k] = in[k] / |in[k]| where |in[k]| > threshold, else 0.
  void (*phat_normalize)(cplx* out, const cplx* in, double threshold, std::size_t n);

  // sum_k Re{a[k] * b[k]}
  double (*real_dot)(const cplx* a, const cplx* b, std::size_t n);

  // out[k] += in[k] * start * step^k
  void (*accumulate_rotated)(cplx* out, const cplx* in, cplx start, cplx step, std::size_t n);

  // Adds a Hann-windowed sinc centred at offset `frac` in (0, 1) to
  // out[0 .. kSincTaps), where out[kSincHalfTaps] is the integer part of the
  // delay. Integer delays are handled by the caller.
  void (*add_fractional_impulse)(double* out, double amplitude, double frac);
};

const KernelTable& scalar_table();

// Null when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_table();

// The table used by the library.
const KernelTable& active();

// Every table usable on this machine, scalar first.
std::span<const KernelTable* const> available();

// Looks up a usable table by name ("scalar", "avx2"); null if unavailable.
const KernelTable* find(std::string_view name);

}  // namespace auxsrp::kernels
