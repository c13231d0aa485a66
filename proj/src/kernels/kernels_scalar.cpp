#include <cmath>
#include <numbers>

#include "auxsrp/kernels.hpp"
#include "sinc_tables.hpp"

namespace auxsrp::kernels {
namespace {

// Complex arithmetic is spelled out: std::complex operator* carries NaN
// recovery branches that keep the loops from vectorizing.

void cross_product(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    out[k] = {ar * br + ai * bi, ai * br - ar * bi};
  }
}

void recursive_cross_update(cplx* out, const cplx* prev, const cplx* a, const cplx* b,
                            double lambda, std::size_t n) {
  const double g = 1.0 - lambda;
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = a[k].real(), ai = a[k].imag();
    const double br = b[k].real(), bi = b[k].imag();
    out[k] = {lambda * prev[k].real() + g * (ar * br + ai * bi),
              lambda * prev[k].imag() + g * (ai * br - ar * bi)};
  }
}

void phat_normalize(cplx* out, const cplx* in, double threshold, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = in[k].real(), im = in[k].imag();
    const double mag = std::sqrt(re * re + im * im);
    out[k] = mag > threshold ? cplx{re / mag, im / mag} : cplx{0.0, 0.0};
  }
}

double real_dot(const cplx* a, const cplx* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
  }
  return acc;
}

void accumulate_rotated(cplx* out, const cplx* in, cplx start, cplx step, std::size_t n) {
  double rr = start.real(), ri = start.imag();
  const double sr = step.real(), si = step.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = in[k].real(), xi = in[k].imag();
    out[k] += cplx{xr * rr - xi * ri, xr * ri + xi * rr};
    const double nr = rr * sr - ri * si;
    ri = rr * si + ri * sr;
    rr = nr;
  }
}

void add_fractional_impulse(double* out, double amplitude, double frac) {
  const auto& tab = detail::sinc_tables();
  const double scale = amplitude * std::sin(std::numbers::pi * frac) / std::numbers::pi;
  const double cf = 0.5 * std::cos(std::numbers::pi * frac / kSincWindowHalfWidth);
  const double sf = 0.5 * std::sin(std::numbers::pi * frac / kSincWindowHalfWidth);
  for (int i = 0; i < kSincTaps; ++i) {
    const double window = 0.5 + tab.cos_t[i] * cf + tab.sin_t[i] * sf;
    out[i] += scale * tab.sign[i] * window / (tab.offset[i] - frac);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",           &cross_product,      &recursive_cross_update, &phat_normalize,
      &real_dot,          &accumulate_rotated, &add_fractional_impulse,
  };
  return table;
}

}  // namespace auxsrp::kernels
