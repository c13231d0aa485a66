#pragma once

#include <filesystem>
#include <vector>

namespace auxsrp {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavData {
  double sample_rate = 0.0;
  // channels[c][n], samples scaled to [-1, 1) for PCM input.
  std::vector<std::vector<double>> channels;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_samples() const { return channels.empty() ? 0 : channels.front().size(); }
};

// Reads RIFF/WAVE with 16-bit PCM or 32-bit float samples (plain or
// WAVE_FORMAT_EXTENSIBLE). Throws Error(kIo) on malformed or unsupported data.
WavData read_wav(const std::filesystem::path& path);

// Writes interleaved samples; PCM output is clipped to the representable range.
void write_wav(const std::filesystem::path& path, const std::vector<std::vector<double>>& channels,
               double sample_rate, SampleFormat format = SampleFormat::kFloat32);

}  // namespace auxsrp
