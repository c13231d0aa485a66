// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here runs unless dispatch confirmed CPU support.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "auxsrp/kernels.hpp"
#include "sinc_tables.hpp"

namespace auxsrp::kernels {
namespace {

// Two interleaved complex values per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// a * conj(b)
inline __m256d mul_conj(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  // even lanes: ar*br + ai*bi, odd lanes: ai*br - ar*bi. Unfused so that
  // a * conj(a) has an exactly zero imaginary part.
  const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(a_swap, b_im));
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), neg);
}

// a * b
inline __m256d mul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  // even lanes: ar*br - ai*bi, odd lanes: ai*br + ar*bi
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

void cross_product(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) store2(out + k, mul_conj(load2(a + k), load2(b + k)));
  for (; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    out[k] = {ar * br + ai * bi, ai * br - ar * bi};
  }
}

void recursive_cross_update(cplx* out, const cplx* prev, const cplx* a, const cplx* b,
                            double lambda, std::size_t n) {
  const double g = 1.0 - lambda;
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vg = _mm256_set1_pd(g);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d inst = mul_conj(load2(a + k), load2(b + k));
    store2(out + k, _mm256_fmadd_pd(vl, load2(prev + k), _mm256_mul_pd(vg, inst)));
  }
  for (; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    out[k] = {lambda * prev[k].real() + g * (ar * br + ai * bi),
              lambda * prev[k].imag() + g * (ai * br - ar * bi)};
  }
}

void phat_normalize(cplx* out, const cplx* in, double threshold, std::size_t n) {
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d z = load2(in + k);
    const __m256d sq = _mm256_mul_pd(z, z);
    const __m256d mag = _mm256_sqrt_pd(_mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5)));
    const __m256d keep = _mm256_cmp_pd(mag, thr, _CMP_GT_OQ);
    store2(out + k, _mm256_and_pd(keep, _mm256_div_pd(z, mag)));
  }
  for (; k < n; ++k) {
    const double re = in[k].real(), im = in[k].imag();
    const double mag = std::sqrt(re * re + im * im);
    out[k] = mag > threshold ? cplx{re / mag, im / mag} : cplx{0.0, 0.0};
  }
}

double real_dot(const cplx* a, const cplx* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(load2(a + k), load2(b + k), acc0);
    acc1 = _mm256_fmadd_pd(load2(a + k + 2), load2(b + k + 2), acc1);
  }
  for (; k + 2 <= n; k += 2) acc0 = _mm256_fmadd_pd(load2(a + k), load2(b + k), acc0);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[2]) - (lanes[1] + lanes[3]);
  for (; k < n; ++k) acc += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
  return acc;
}

void accumulate_rotated(cplx* out, const cplx* in, cplx start, cplx step, std::size_t n) {
  if (n == 0) return;
  const cplx second = start * step;
  __m256d rot = _mm256_setr_pd(start.real(), start.imag(), second.real(), second.imag());
  const cplx step2 = step * step;
  const __m256d vstep2 = _mm256_setr_pd(step2.real(), step2.imag(), step2.real(), step2.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    store2(out + k, _mm256_add_pd(load2(out + k), mul(load2(in + k), rot)));
    rot = mul(rot, vstep2);
  }
  if (k < n) {
    alignas(32) double r[4];
    _mm256_store_pd(r, rot);
    const double xr = in[k].real(), xi = in[k].imag();
    out[k] += cplx{xr * r[0] - xi * r[1], xr * r[1] + xi * r[0]};
  }
}

void add_fractional_impulse(double* out, double amplitude, double frac) {
  const auto& tab = detail::sinc_tables();
  const double scale = amplitude * std::sin(std::numbers::pi * frac) / std::numbers::pi;
  const double cf = 0.5 * std::cos(std::numbers::pi * frac / kSincWindowHalfWidth);
  const double sf = 0.5 * std::sin(std::numbers::pi * frac / kSincWindowHalfWidth);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vcf = _mm256_set1_pd(cf);
  const __m256d vsf = _mm256_set1_pd(sf);
  const __m256d vhalf = _mm256_set1_pd(0.5);
  const __m256d vfrac = _mm256_set1_pd(frac);
  int i = 0;
  for (; i + 4 <= kSincTaps; i += 4) {
    __m256d window = _mm256_fmadd_pd(_mm256_loadu_pd(&tab.cos_t[i]), vcf, vhalf);
    window = _mm256_fmadd_pd(_mm256_loadu_pd(&tab.sin_t[i]), vsf, window);
    const __m256d num = _mm256_mul_pd(_mm256_mul_pd(vscale, _mm256_loadu_pd(&tab.sign[i])), window);
    const __m256d den = _mm256_sub_pd(_mm256_loadu_pd(&tab.offset[i]), vfrac);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), _mm256_div_pd(num, den)));
  }
  for (; i < kSincTaps; ++i) {
    const double window = 0.5 + tab.cos_t[i] * cf + tab.sin_t[i] * sf;
    out[i] += scale * tab.sign[i] * window / (tab.offset[i] - frac);
  }
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{
      "avx2",    &cross_product,      &recursive_cross_update, &phat_normalize,
      &real_dot, &accumulate_rotated, &add_fractional_impulse,
  };
  return table;
}

}  // namespace auxsrp::kernels
