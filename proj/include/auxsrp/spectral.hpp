#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "auxsrp/core.hpp"

namespace auxsrp {

using cplx = std::complex<double>;
using Multichannel = std::vector<std::vector<double>>;

enum class WindowKind { kSqrtHann, kHann, kRectangular };

struct StftConfig {
  double sample_rate = 16000.0;
  std::size_t frame_length = 512;
  std::size_t hop = 256;
  WindowKind window = WindowKind::kSqrtHann;

  std::size_t num_bins() const { return frame_length / 2 + 1; }
  // Throws Error(kConfig) on an unusable configuration.
  void validate() const;
};

// Periodic windows of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

// One-sided STFT, data laid out [channel][frame][bin].
class Spectrogram {
 public:
  Spectrogram(std::size_t channels, std::size_t frames, const StftConfig& cfg);

  std::size_t num_channels() const { return channels_; }
  std::size_t num_frames() const { return frames_; }
  std::size_t num_bins() const { return bins_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t frame_length() const { return frame_length_; }

  std::span<cplx> frame(std::size_t channel, std::size_t l);
  std::span<const cplx> frame(std::size_t channel, std::size_t l) const;
  const cplx& at(std::size_t channel, std::size_t l, std::size_t k) const {
    return data_[(channel * frames_ + l) * bins_ + k];
  }

  // omega_k = 2 pi fs k / N in rad/s.
  double bin_frequency(std::size_t k) const;
  std::vector<double> bin_frequencies() const;

 private:
  std::size_t channels_, frames_, bins_;
  double sample_rate_;
  std::size_t frame_length_;
  std::vector<cplx> data_;
};

// Frames start at l * hop; a trailing partial frame is dropped.
Spectrogram stft(const Multichannel& signal, const StftConfig& cfg);

// Per-pair cross-power spectra, [pair][frame][bin]. A set with a single frame
// holds time-collapsed spectra.
class CrossSpectrumSet {
 public:
  CrossSpectrumSet() = default;
  CrossSpectrumSet(std::vector<ChannelPair> pairs, std::size_t frames, std::size_t bins,
                   double lambda);

  const std::vector<ChannelPair>& pairs() const { return pairs_; }
  std::size_t num_pairs() const { return pairs_.size(); }
  std::size_t num_frames() const { return frames_; }
  std::size_t num_bins() const { return bins_; }
  double lambda() const { return lambda_; }
  // Spacing of the bin grid in rad/s; bin k sits at k * bin_spacing().
  double bin_spacing() const { return bin_spacing_; }
  void set_bin_spacing(double w) { bin_spacing_ = w; }
  bool phat_weighted() const { return phat_weighted_; }
  void set_phat_weighted(bool v) { phat_weighted_ = v; }

  std::span<cplx> frame(std::size_t pair, std::size_t l);
  std::span<const cplx> frame(std::size_t pair, std::size_t l) const;
  const cplx& at(std::size_t pair, std::size_t l, std::size_t k) const {
    return data_[(pair * frames_ + l) * bins_ + k];
  }

  // Index of the stored pair (i, j), if present.
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const;

 private:
  std::vector<ChannelPair> pairs_;
  std::size_t frames_ = 0, bins_ = 0;
  double lambda_ = 0.0;
  double bin_spacing_ = 0.0;
  bool phat_weighted_ = false;
  std::vector<cplx> data_;
};

// psi[k, l] = lambda psi[k, l-1] + (1 - lambda) Y_i[k, l] Y_j^*[k, l], with
// psi[k, 0] = Y_i[k, 0] Y_j^*[k, 0]. All frames are retained.
CrossSpectrumSet recursive_cross_psd(const Spectrogram& spec, std::vector<ChannelPair> pairs,
                                     double lambda);

inline constexpr double kDefaultPhatFloor = 1e-12;

// Phase transform: each (pair, frame) is normalized to unit modulus; bins whose
// magnitude is at most floor_eps times the largest magnitude in that frame
// are set to zero.
CrossSpectrumSet phat_weight(const CrossSpectrumSet& cs, double floor_eps = kDefaultPhatFloor);

}  // namespace auxsrp
