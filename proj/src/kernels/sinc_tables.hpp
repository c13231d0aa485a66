#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "auxsrp/kernels.hpp"

namespace auxsrp::kernels::detail {

// Per-tap constants for the windowed-sinc interpolator. For tap offset t and
// fractional delay f,
//   sinc(t - f)   = sign[t] * sin(pi f) / (pi (t - f))
//   window(t - f) = 0.5 (1 + cos_t[t] cos(pi f / W) + sin_t[t] sin(pi f / W))
// with sign[t] = -(-1)^t and W the window half-width.
struct SincTables {
  std::array<double, kSincTaps> offset{};
  std::array<double, kSincTaps> sign{};
  std::array<double, kSincTaps> cos_t{};
  std::array<double, kSincTaps> sin_t{};

  SincTables() {
    for (int i = 0; i < kSincTaps; ++i) {
      const int t = i - kSincHalfTaps;
      offset[i] = t;
      sign[i] = (t % 2 == 0) ? -1.0 : 1.0;
      cos_t[i] = std::cos(std::numbers::pi * t / kSincWindowHalfWidth);
      sin_t[i] = std::sin(std::numbers::pi * t / kSincWindowHalfWidth);
    }
  }
};

inline const SincTables& sinc_tables() {
  static const SincTables tables;
  return tables;
}

}  // namespace auxsrp::kernels::detail
