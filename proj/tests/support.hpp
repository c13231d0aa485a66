#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "auxsrp/core.hpp"
#include "auxsrp/error.hpp"
#include "auxsrp/fft.hpp"
#include "auxsrp/rng.hpp"
#include "auxsrp/spectral.hpp"

namespace auxsrp::test {

constexpr double kPi = std::numbers::pi;

template <typename Fn>
void expect_error(ErrorKind kind, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected Error(" << to_string(kind) << ")";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 99);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

// Delays a signal by `delay` samples (any real value) with an exact
// frequency-domain phase ramp on a circularly padded buffer.
inline std::vector<double> fractional_delay(const std::vector<double>& x, double delay) {
  const std::size_t n = next_pow2(2 * x.size());
  const RealFft& fft = real_fft(n);
  std::vector<double> buf(n, 0.0);
  std::copy(x.begin(), x.end(), buf.begin());
  std::vector<std::complex<double>> spec(fft.num_bins());
  fft.forward(buf, spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    spec[k] *= std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * delay / static_cast<double>(n));
  }
  // Keep the Nyquist bin real so the inverse stays exact.
  spec.back() = {spec.back().real(), 0.0};
  std::vector<double> out(n);
  fft.inverse(spec, out);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = out[i] / static_cast<double>(n);
  return y;
}

// Far-field plane wave from azimuth theta: channel m is the source delayed by
// tau_m = -v^T m / c relative to the origin (plus a common offset).
inline Multichannel plane_wave(const std::vector<double>& s, const std::vector<Position>& mics,
                               double theta_rad, double fs, double c = 343.0) {
  const Vec3 v{std::cos(theta_rad), std::sin(theta_rad), 0.0};
  Multichannel out;
  for (const auto& m : mics) out.push_back(fractional_delay(s, 20.0 - v.dot(m) / c * fs));
  return out;
}

}  // namespace auxsrp::test
