#include "auxsrp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "auxsrp/error.hpp"
#include "auxsrp/fft.hpp"
#include "auxsrp/kernels.hpp"

namespace auxsrp {

void StftConfig::validate() const {
  if (!(sample_rate > 0.0)) fail(ErrorKind::kConfig, "sample_rate must be positive");
  if (frame_length < 2 || frame_length % 2 != 0) {
    fail(ErrorKind::kConfig, "frame_length must be even and at least 2");
  }
  if (hop == 0 || hop > frame_length) fail(ErrorKind::kConfig, "hop must be in [1, frame_length]");
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::kRectangular) return w;
  for (std::size_t i = 0; i < n; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n));
    w[i] = kind == WindowKind::kHann ? hann : std::sqrt(hann);
  }
  return w;
}

Spectrogram::Spectrogram(std::size_t channels, std::size_t frames, const StftConfig& cfg)
    : channels_(channels),
      frames_(frames),
      bins_(cfg.num_bins()),
      sample_rate_(cfg.sample_rate),
      frame_length_(cfg.frame_length),
      data_(channels * frames * bins_) {}

std::span<cplx> Spectrogram::frame(std::size_t channel, std::size_t l) {
  return {data_.data() + (channel * frames_ + l) * bins_, bins_};
}

std::span<const cplx> Spectrogram::frame(std::size_t channel, std::size_t l) const {
  return {data_.data() + (channel * frames_ + l) * bins_, bins_};
}

double Spectrogram::bin_frequency(std::size_t k) const {
  return 2.0 * std::numbers::pi * sample_rate_ * static_cast<double>(k) /
         static_cast<double>(frame_length_);
}

std::vector<double> Spectrogram::bin_frequencies() const {
  std::vector<double> w(bins_);
  for (std::size_t k = 0; k < bins_; ++k) w[k] = bin_frequency(k);
  return w;
}

Spectrogram stft(const Multichannel& signal, const StftConfig& cfg) {
  cfg.validate();
  if (signal.empty()) fail(ErrorKind::kInvalidInput, "stft: no channels");
  const std::size_t n = signal.front().size();
  for (const auto& ch : signal) {
    if (ch.size() != n) fail(ErrorKind::kInvalidInput, "stft: channels differ in length");
  }
  if (n < cfg.frame_length) {
    fail(ErrorKind::kInvalidInput, "stft: signal of " + std::to_string(n) +
                                       " samples is shorter than one frame");
  }
  const std::size_t frames = (n - cfg.frame_length) / cfg.hop + 1;
  Spectrogram spec(signal.size(), frames, cfg);
  const auto window = make_window(cfg.window, cfg.frame_length);
  const RealFft& fft = real_fft(cfg.frame_length);
  std::vector<double> buf(cfg.frame_length);
  for (std::size_t c = 0; c < signal.size(); ++c) {
    for (std::size_t l = 0; l < frames; ++l) {
      const double* x = signal[c].data() + l * cfg.hop;
      for (std::size_t i = 0; i < cfg.frame_length; ++i) buf[i] = x[i] * window[i];
      fft.forward(buf, spec.frame(c, l));
    }
  }
  return spec;
}

CrossSpectrumSet::CrossSpectrumSet(std::vector<ChannelPair> pairs, std::size_t frames,
                                   std::size_t bins, double lambda)
    : pairs_(std::move(pairs)),
      frames_(frames),
      bins_(bins),
      lambda_(lambda),
      data_(pairs_.size() * frames * bins) {}

std::span<cplx> CrossSpectrumSet::frame(std::size_t pair, std::size_t l) {
  return {data_.data() + (pair * frames_ + l) * bins_, bins_};
}

std::span<const cplx> CrossSpectrumSet::frame(std::size_t pair, std::size_t l) const {
  return {data_.data() + (pair * frames_ + l) * bins_, bins_};
}

std::optional<std::size_t> CrossSpectrumSet::find(std::size_t i, std::size_t j) const {
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    if (pairs_[p].i == i && pairs_[p].j == j) return p;
  }
  return std::nullopt;
}

CrossSpectrumSet recursive_cross_psd(const Spectrogram& spec, std::vector<ChannelPair> pairs,
                                     double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    fail(ErrorKind::kConfig, "smoothing factor must lie in [0, 1)");
  }
  for (const auto& p : pairs) {
    if (p.i >= spec.num_channels() || p.j >= spec.num_channels()) {
      fail(ErrorKind::kIndex, "channel pair (" + std::to_string(p.i) + ", " +
                                  std::to_string(p.j) + ") out of range");
    }
  }
  const auto& kt = kernels::active();
  const std::size_t frames = spec.num_frames();
  const std::size_t bins = spec.num_bins();
  CrossSpectrumSet cs(std::move(pairs), frames, bins, lambda);
  cs.set_bin_spacing(spec.bin_frequency(1));
  for (std::size_t p = 0; p < cs.num_pairs(); ++p) {
    const auto [i, j] = cs.pairs()[p];
    kt.cross_product(cs.frame(p, 0).data(), spec.frame(i, 0).data(), spec.frame(j, 0).data(),
                     bins);
    for (std::size_t l = 1; l < frames; ++l) {
      kt.recursive_cross_update(cs.frame(p, l).data(), cs.frame(p, l - 1).data(),
                                spec.frame(i, l).data(), spec.frame(j, l).data(), lambda, bins);
    }
  }
  return cs;
}

CrossSpectrumSet phat_weight(const CrossSpectrumSet& cs, double floor_eps) {
  if (!(floor_eps >= 0.0)) fail(ErrorKind::kConfig, "PHAT floor must be nonnegative");
  const auto& kt = kernels::active();
  CrossSpectrumSet out = cs;
  for (std::size_t p = 0; p < cs.num_pairs(); ++p) {
    for (std::size_t l = 0; l < cs.num_frames(); ++l) {
      const auto in = cs.frame(p, l);
      double peak = 0.0;
      for (const auto& z : in) peak = std::max(peak, std::abs(z));
      kt.phat_normalize(out.frame(p, l).data(), in.data(), floor_eps * peak, in.size());
    }
  }
  out.set_phat_weighted(true);
  return out;
}

}  // namespace auxsrp
