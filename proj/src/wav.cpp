#include "auxsrp/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "auxsrp/error.hpp"

namespace auxsrp {
namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::string& buf, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  buf.append(bytes, sizeof(T));
}

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorKind::kIo, path.string() + ": " + what);
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0) {
    io_fail(path, "not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const std::size_t size = read_le<std::uint32_t>(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size() && id != "data") io_fail(path, "truncated chunk " + id);
    if (id == "fmt ") {
      if (size < 16) io_fail(path, "short fmt chunk");
      format = read_le<std::uint16_t>(bytes.data() + body);
      channels = read_le<std::uint16_t>(bytes.data() + body + 2);
      rate = read_le<std::uint32_t>(bytes.data() + body + 4);
      bits = read_le<std::uint16_t>(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        if (size < 26) io_fail(path, "short extensible fmt chunk");
        format = read_le<std::uint16_t>(bytes.data() + body + 24);
      }
    } else if (id == "data") {
      data = bytes.data() + body;
      data_size = std::min(size, bytes.size() - body);
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0) io_fail(path, "missing fmt chunk");
  if (!data) io_fail(path, "missing data chunk");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    io_fail(path, "unsupported sample format " + std::to_string(format) + "/" +
                      std::to_string(bits) + " bit");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);

  WavData out;
  out.sample_rate = rate;
  out.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const char* p = data + (n * channels + c) * width;
      out.channels[c][n] = pcm16 ? read_le<std::int16_t>(p) / 32768.0 : read_le<float>(p);
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const std::vector<std::vector<double>>& channels,
               double sample_rate, SampleFormat format) {
  if (channels.empty()) fail(ErrorKind::kInvalidInput, "write_wav: no channels");
  const std::size_t frames = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != frames) fail(ErrorKind::kInvalidInput, "write_wav: ragged channels");
  }
  const bool pcm = format == SampleFormat::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t nch = static_cast<std::uint16_t>(channels.size());
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(sample_rate));
  const std::uint16_t block = nch * bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(frames * block);

  std::string buf;
  buf.reserve(44 + data_size);
  buf += "RIFF";
  put_le<std::uint32_t>(buf, 36 + data_size);
  buf += "WAVEfmt ";
  put_le<std::uint32_t>(buf, 16);
  put_le<std::uint16_t>(buf, pcm ? kFormatPcm : kFormatFloat);
  put_le<std::uint16_t>(buf, nch);
  put_le<std::uint32_t>(buf, rate);
  put_le<std::uint32_t>(buf, rate * block);
  put_le<std::uint16_t>(buf, block);
  put_le<std::uint16_t>(buf, bits);
  buf += "data";
  put_le<std::uint32_t>(buf, data_size);
  for (std::size_t n = 0; n < frames; ++n) {
    for (const auto& ch : channels) {
      if (pcm) {
        const double s = std::clamp(std::round(ch[n] * 32768.0), -32768.0, 32767.0);
        put_le<std::int16_t>(buf, static_cast<std::int16_t>(s));
      } else {
        put_le<float>(buf, static_cast<float>(ch[n]));
      }
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) io_fail(path, "write failed");
}

}  // namespace auxsrp
