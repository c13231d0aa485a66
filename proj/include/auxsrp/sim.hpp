#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auxsrp/core.hpp"
#include "auxsrp/spectral.hpp"

namespace auxsrp {

struct RoomSpec {
  Vec3 dimensions{6.0, 6.0, 2.4};
  // Pressure reflection coefficient shared by all six walls.
  double reflection = 0.0;
  // Cap on the total number of wall reflections per image; none when empty.
  std::optional<int> max_image_order;
  // RIR length; automatic (1.5x the Sabine T60) when empty.
  std::optional<double> rir_seconds;
  // Upper bound on the automatic length.
  double max_rir_seconds = 2.0;

  void validate() const;
  bool contains(const Position& p) const;
  double volume() const;
  double surface() const;
  // Eyring reverberation time for the current reflection coefficient.
  double eyring_t60(const AcousticConstants& c = {}) const;
  // Sabine reverberation time with absorption 1 - reflection^2.
  double sabine_t60(const AcousticConstants& c = {}) const;
};

struct Rir {
  std::vector<double> samples;
  double sample_rate = 0.0;
  std::size_t direct_index = 0;
};

// Image-source RIR for a shoebox room with frequency-independent walls. Each
// image contributes reflection^order / (4 pi d) at delay d / c through an
// 81-tap Hann-windowed sinc interpolator.
Rir ism_rir(const RoomSpec& room, const Position& source, const Position& mic,
            double sample_rate, const AcousticConstants& c = {});

inline constexpr double kDefaultDirectWindowMs = 1.0;

// Splits at +-direct_window_ms around the direct arrival; the two parts sum
// to the input exactly. Windows running past either end are clamped.
std::pair<std::vector<double>, std::vector<double>> split_rir(
    const Rir& rir, double direct_window_ms = kDefaultDirectWindowMs);

// 10 log10(E_direct / E_reverb) of a RIR.
double rir_drr_db(const Rir& rir, double direct_window_ms = kDefaultDirectWindowMs);

// Reverberation time from Schroeder backward integration, extrapolating a
// least-squares fit of the -5 .. -25 dB part of the decay curve. Empty if the
// curve never reaches -25 dB.
std::optional<double> schroeder_t60(std::span<const double> rir, double sample_rate);

double energy(std::span<const double> x);

struct CalibrationResult {
  RoomSpec room;
  double achieved_drr_db = 0.0;
  int iterations = 0;
};

// Bisection on the reflection coefficient in [0, 0.99] until the mean DRR
// over `mics` is within tolerance_db of the target. Targets above the
// anechoic DRR return a reflection coefficient of 0. Throws
// Error(kCalibration) with the bracketing values otherwise.
CalibrationResult calibrate_reflection(const RoomSpec& room_template,
                                       const std::vector<Position>& mics, const Position& source,
                                       double target_drr_db, double sample_rate,
                                       double direct_window_ms = kDefaultDirectWindowMs,
                                       const AcousticConstants& c = {},
                                       double tolerance_db = 0.02);

// Spherically isotropic noise: independent white Gaussian plane waves from
// directions drawn uniformly on the sphere, each delayed at every position by
// its projection onto the direction of propagation. Synthesized in the
// frequency domain; channels have unit variance in expectation.
//
// `shape`, when non-empty, is a magnitude response sampled uniformly on
// [0, fs/2] (linearly interpolated) applied to every plane wave, which leaves
// the inter-channel coherence unchanged. It is normalized to unit mean power.
Multichannel isotropic_noise(std::size_t num_samples, double sample_rate,
                             const std::vector<Position>& positions, std::size_t num_plane_waves,
                             std::uint64_t seed, const AcousticConstants& c = {},
                             std::span<const double> shape = {});

// Square root of the Welch power spectrum (Hann, 50% overlap) on
// frame_length / 2 + 1 bins spanning [0, fs/2].
std::vector<double> long_term_magnitude(std::span<const double> signal,
                                        std::size_t frame_length = 512);

enum class NoiseSpectrum {
  kWhite,
  // Long-term spectrum of the source signal, like multi-talker babble.
  kSourceShaped,
};

const char* to_string(NoiseSpectrum s);

enum class SourceKind { kSyntheticSpeech, kWavFile };

struct SourceSignal {
  std::vector<double> samples;
  double sample_rate = 0.0;
  SourceKind kind = SourceKind::kSyntheticSpeech;
  std::uint64_t seed = 0;
  std::string origin;

  double duration() const { return samples.size() / sample_rate; }
};

// Speech-like test signal: pink noise through 3-5 formant resonators re-drawn
// every 150 ms, a 4 Hz syllabic envelope, and about 30% of syllable slots
// silent. Peak-normalized to 0.5.
SourceSignal synth_speech(double duration_s, double sample_rate, std::uint64_t seed);

// Mono WAV (first channel) as a source; rejects a sample-rate mismatch.
SourceSignal load_source_wav(const std::filesystem::path& path, double sample_rate,
                             std::optional<double> duration_s = std::nullopt);

struct SceneConfig {
  RoomSpec room;
  double sample_rate = 16000.0;
  Position source;
  // Channels 0 .. N-1; DRR/RSNR targets are met on average over these.
  std::vector<Position> array_mics;
  // Further channels (auxiliary microphones) rendered identically.
  std::vector<Position> extra_mics;
  // When set, reverberant stems get one common gain so the mean array DRR
  // equals the target.
  std::optional<double> target_drr_db;
  // When set, isotropic noise is added and scaled to this mean array RSNR.
  std::optional<double> target_rsnr_db;
  std::size_t num_plane_waves = 1024;
  NoiseSpectrum noise_spectrum = NoiseSpectrum::kSourceShaped;
  std::uint64_t noise_seed = 0;
  double direct_window_ms = kDefaultDirectWindowMs;
  AcousticConstants constants{};

  std::vector<Position> all_mics() const;
};

struct ScenarioRender {
  Multichannel direct;
  Multichannel reverberant;
  Multichannel noise;
  Multichannel mixed;
  std::size_t num_array_mics = 0;
  std::vector<Position> positions;
  Position source;
  DoaVector source_doa;  // seen from the array centroid
  double dc = 0.0;
  double drr_db = 0.0;   // mean over array mics, from the stems
  double rsnr_db = 0.0;  // mean over array mics; +inf without noise
  double sur_db = 0.0;   // broadband source-to-undesired ratio at the source
  double reverb_gain = 1.0;
  double noise_gain = 0.0;
};

// Renders direct, reverberant and noise stems and their sum. `rirs`, when
// non-empty, supplies one RIR per channel in all_mics() order.
ScenarioRender render_scenario(const SceneConfig& cfg, std::span<const double> source_signal,
                               std::span<const Rir> rirs = {});

// Mean over the first num_array_mics channels of 10 log10(E_a / E_b).
double mean_ratio_db(const Multichannel& a, const Multichannel& b, std::size_t num_array_mics);

// Regular M-gon array (a segment for M = 2, a triangle for M = 3) with
// neighbouring microphones `side` apart in the x-y plane, rotated by
// orientation_rad about its centroid.
std::vector<Position> compact_array(const Position& centroid, std::size_t num_mics, double side,
                                    double orientation_rad);

}  // namespace auxsrp
