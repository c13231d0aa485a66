#include "auxsrp/spectral.hpp"

#include <cmath>

#include "auxsrp/kernels.hpp"
#include "support.hpp"

using namespace auxsrp;
using auxsrp::test::expect_error;
using auxsrp::test::kPi;

TEST(Stft, FrameCountAndBins) {
  StftConfig cfg;
  const Multichannel x{std::vector<double>(512 + 256 * 9 + 100, 0.0)};
  const auto s = stft(x, cfg);
  EXPECT_EQ(s.num_frames(), 10u);
  EXPECT_EQ(s.num_bins(), 257u);
  EXPECT_DOUBLE_EQ(s.bin_frequency(1), 2 * kPi * 16000 / 512);
  EXPECT_DOUBLE_EQ(s.bin_frequency(256), 2 * kPi * 8000);
  for (std::size_t l = 0; l < s.num_frames(); ++l) {
    for (std::size_t k = 0; k < s.num_bins(); ++k) EXPECT_EQ(s.at(0, l, k), cplx{});
  }
}

TEST(Stft, Errors) {
  expect_error(ErrorKind::kInvalidInput, [] { stft({std::vector<double>(511)}, StftConfig{}); });
  expect_error(ErrorKind::kInvalidInput, [] { stft({}, StftConfig{}); });
  StftConfig odd;
  odd.frame_length = 511;
  expect_error(ErrorKind::kConfig, [&] { odd.validate(); });
  StftConfig hop;
  hop.hop = 0;
  expect_error(ErrorKind::kConfig, [&] { hop.validate(); });
}

TEST(Stft, CosineConcentratesAtItsBin) {
  StftConfig cfg;
  const std::size_t k0 = 40;
  std::vector<double> x(2048);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * kPi * k0 * n / 512.0 + 0.3);
  const auto s = stft({x}, cfg);
  // The sqrt-Hann (sine) window leaks 1 / (4 m^2 - 1) of the peak into the
  // bin m away from an on-grid tone.
  for (std::size_t l = 0; l < s.num_frames(); ++l) {
    const double peak = std::abs(s.at(0, l, k0));
    cplx direct{};
    const auto w = make_window(WindowKind::kSqrtHann, 512);
    for (std::size_t n = 0; n < 512; ++n) {
      direct += w[n] * x[l * 256 + n] * std::polar(1.0, -2 * kPi * k0 * n / 512.0);
    }
    EXPECT_NEAR(std::abs(s.at(0, l, k0) - direct), 0.0, 1e-9);
    for (std::size_t k = 0; k < s.num_bins(); ++k) {
      const double m = std::abs(static_cast<double>(k) - static_cast<double>(k0));
      if (m >= 1) EXPECT_LE(std::abs(s.at(0, l, k)) / peak, 1.0 / (4 * m * m - 1) + 2e-3) << k;
    }
  }
}

TEST(Stft, ImpulseAtFrameStartGivesWindowSample) {
  StftConfig cfg;
  cfg.window = WindowKind::kHann;
  std::vector<double> x(512, 0.0);
  x[3] = 1.0;
  const auto w = make_window(WindowKind::kHann, 512);
  const auto s = stft({x}, cfg);
  for (std::size_t k = 0; k < s.num_bins(); ++k) EXPECT_NEAR(std::abs(s.at(0, 0, k)), w[3], 1e-15);
  // Periodic sqrt-Hann squares to a periodic Hann and sums to a constant at 50% overlap.
  const auto r = make_window(WindowKind::kSqrtHann, 512);
  for (std::size_t n = 0; n < 256; ++n) EXPECT_NEAR(r[n] * r[n] + r[n + 256] * r[n + 256], 1.0, 1e-14);
}

namespace {

Spectrogram random_spec(std::size_t channels, std::size_t frames, std::uint64_t seed) {
  Spectrogram s(channels, frames, StftConfig{});
  CounterRng rng(seed);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t l = 0; l < frames; ++l) {
      for (auto& z : s.frame(c, l)) z = {rng.normal(), rng.normal()};
    }
  }
  return s;
}

}  // namespace

TEST(RecursivePsd, MatchesLoopOracleAndHermitian) {
  const auto s = random_spec(3, 12, 1);
  const auto cs = recursive_cross_psd(s, {{1, 0}, {0, 1}, {2, 2}}, 0.9);
  for (std::size_t k = 0; k < s.num_bins(); ++k) {
    cplx ref = s.at(1, 0, k) * std::conj(s.at(0, 0, k));
    for (std::size_t l = 0; l < s.num_frames(); ++l) {
      if (l > 0) ref = 0.9 * ref + 0.1 * s.at(1, l, k) * std::conj(s.at(0, l, k));
      EXPECT_LE(std::abs(cs.at(0, l, k) - ref), 1e-12);
      EXPECT_LE(std::abs(cs.at(0, l, k) - std::conj(cs.at(1, l, k))), 1e-12);
      EXPECT_EQ(cs.at(2, l, k).imag(), 0.0);
      EXPECT_GE(cs.at(2, l, k).real(), 0.0);
    }
  }
  EXPECT_DOUBLE_EQ(cs.bin_spacing(), 2 * kPi * 16000 / 512);
}

TEST(RecursivePsd, FixedPointAndNoSmoothing) {
  Spectrogram s(2, 6, StftConfig{});
  for (std::size_t l = 0; l < 6; ++l) {
    for (auto& z : s.frame(0, l)) z = {1.0, 2.0};
    for (auto& z : s.frame(1, l)) z = {0.5, -1.0};
  }
  const cplx c = cplx{1.0, 2.0} * std::conj(cplx{0.5, -1.0});
  const auto cs = recursive_cross_psd(s, {{0, 1}}, 0.98);
  for (std::size_t l = 0; l < 6; ++l) EXPECT_LE(std::abs(cs.at(0, l, 7) - c), 1e-13);

  const auto r = random_spec(2, 5, 2);
  const auto raw = recursive_cross_psd(r, {{1, 0}}, 0.0);
  for (std::size_t l = 0; l < 5; ++l) {
    EXPECT_LE(std::abs(raw.at(0, l, 3) - r.at(1, l, 3) * std::conj(r.at(0, l, 3))), 1e-14);
  }
}

TEST(RecursivePsd, StepResponse) {
  Spectrogram s(2, 60, StftConfig{});
  for (std::size_t l = 1; l < 60; ++l) {
    for (auto& z : s.frame(0, l)) z = 1.0;
    for (auto& z : s.frame(1, l)) z = 1.0;
  }
  const auto cs = recursive_cross_psd(s, {{0, 1}}, 0.98);
  for (std::size_t l = 0; l < 60; ++l) {
    EXPECT_NEAR(cs.at(0, l, 10).real(), 1.0 - std::pow(0.98, static_cast<double>(l)), 1e-12);
  }
}

TEST(RecursivePsd, SmoothingTimeConstant) {
  // 1/e decay of 0.98 per 16 ms hop: about 0.8 s.
  const double hop_s = 256.0 / 16000.0;
  EXPECT_NEAR(std::pow(0.98, 50), 0.364, 1e-3);
  const double frames = -1.0 / std::log(0.98);
  EXPECT_GE(frames * hop_s, 0.75);
  EXPECT_LE(frames * hop_s, 0.85);
}

TEST(RecursivePsd, Errors) {
  const auto s = random_spec(2, 3, 3);
  expect_error(ErrorKind::kConfig, [&] { recursive_cross_psd(s, {{0, 1}}, 1.0); });
  expect_error(ErrorKind::kConfig, [&] { recursive_cross_psd(s, {{0, 1}}, -0.1); });
  expect_error(ErrorKind::kIndex, [&] { recursive_cross_psd(s, {{0, 2}}, 0.5); });
}

TEST(Phat, Examples) {
  CrossSpectrumSet cs({{1, 0}}, 1, 4, 0.0);
  cs.frame(0, 0)[0] = {3, 4};
  cs.frame(0, 0)[1] = 0.0;
  cs.frame(0, 0)[2] = {1e-14, 0.0};  // below 1e-12 of the frame maximum 5
  cs.frame(0, 0)[3] = {-2, 0};
  const auto p = phat_weight(cs);
  EXPECT_TRUE(p.phat_weighted());
  EXPECT_NEAR(std::abs(p.at(0, 0, 0) - cplx{0.6, 0.8}), 0.0, 1e-15);
  EXPECT_EQ(p.at(0, 0, 1), cplx{});
  EXPECT_EQ(p.at(0, 0, 2), cplx{});
  EXPECT_NEAR(std::abs(p.at(0, 0, 3) - cplx{-1, 0}), 0.0, 1e-15);
  expect_error(ErrorKind::kConfig, [&] { phat_weight(cs, -1.0); });
}

TEST(Phat, UnitModulusAndIdempotent) {
  const auto s = random_spec(2, 4, 4);
  const auto p = phat_weight(recursive_cross_psd(s, {{1, 0}}, 0.5));
  const auto pp = phat_weight(p);
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t k = 0; k < p.num_bins(); ++k) {
      EXPECT_NEAR(std::abs(p.at(0, l, k)), 1.0, 1e-12);
      EXPECT_LE(std::abs(pp.at(0, l, k) - p.at(0, l, k)), 1e-15);
    }
  }
}

TEST(Phat, AllZeroFrameStaysZero) {
  CrossSpectrumSet cs({{1, 0}}, 2, 8, 0.0);
  const auto p = phat_weight(cs);
  for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(p.at(0, 1, k), cplx{});
}
