#include "auxsrp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "auxsrp/error.hpp"
#include "auxsrp/fft.hpp"
#include "auxsrp/kernels.hpp"
#include "auxsrp/rng.hpp"
#include "auxsrp/wav.hpp"

namespace auxsrp {
namespace {

constexpr double kPi = std::numbers::pi;

double db(double ratio) { return 10.0 * std::log10(ratio); }

// Image coordinates along one axis: (1 - 2q) s + 2 n L, with q in {0, 1},
// relative to the receiver, and the number of wall reflections |n - q| + |n|.
struct AxisImages {
  std::vector<double> offset;
  std::vector<int> reflections;
};

AxisImages axis_images(double s, double r, double length, int n_max) {
  AxisImages a;
  for (int n = -n_max; n <= n_max; ++n) {
    for (int q = 0; q <= 1; ++q) {
      a.offset.push_back((1 - 2 * q) * s + 2.0 * n * length - r);
      a.reflections.push_back(std::abs(n - q) + std::abs(n));
    }
  }
  return a;
}

}  // namespace

void RoomSpec::validate() const {
  if (!(dimensions.x > 0.0 && dimensions.y > 0.0 && dimensions.z > 0.0)) {
    fail(ErrorKind::kConfig, "room dimensions must be positive");
  }
  if (!(reflection >= 0.0 && reflection < 1.0)) {
    fail(ErrorKind::kConfig, "reflection coefficient must lie in [0, 1)");
  }
  if (max_image_order && *max_image_order < 0) fail(ErrorKind::kConfig, "negative image order");
  if (rir_seconds && !(*rir_seconds > 0.0)) fail(ErrorKind::kConfig, "RIR length must be positive");
  if (!(max_rir_seconds > 0.0)) fail(ErrorKind::kConfig, "maximum RIR length must be positive");
}

bool RoomSpec::contains(const Position& p) const {
  return p.x > 0.0 && p.x < dimensions.x && p.y > 0.0 && p.y < dimensions.y && p.z > 0.0 &&
         p.z < dimensions.z;
}

double RoomSpec::volume() const { return dimensions.x * dimensions.y * dimensions.z; }

double RoomSpec::surface() const {
  const auto& d = dimensions;
  return 2.0 * (d.x * d.y + d.x * d.z + d.y * d.z);
}

double RoomSpec::eyring_t60(const AcousticConstants& c) const {
  if (reflection <= 0.0) return 0.0;
  const double absorption = 1.0 - reflection * reflection;
  return 24.0 * std::log(10.0) * volume() /
         (c.speed_of_sound * surface() * -std::log(1.0 - absorption));
}

double RoomSpec::sabine_t60(const AcousticConstants& c) const {
  if (reflection <= 0.0) return 0.0;
  return 24.0 * std::log(10.0) * volume() /
         (c.speed_of_sound * surface() * (1.0 - reflection * reflection));
}

Rir ism_rir(const RoomSpec& room, const Position& source, const Position& mic,
            double sample_rate, const AcousticConstants& c) {
  room.validate();
  if (!(sample_rate > 0.0)) fail(ErrorKind::kConfig, "sample rate must be positive");
  if (!room.contains(source)) fail(ErrorKind::kInvalidInput, "source lies outside the room");
  if (!room.contains(mic)) fail(ErrorKind::kInvalidInput, "microphone lies outside the room");
  const double d_direct = distance(source, mic);
  if (!(d_direct > 0.0)) fail(ErrorKind::kDegenerateGeometry, "source coincides with microphone");

  const double samples_per_meter = sample_rate / c.speed_of_sound;
  const auto direct_index = static_cast<std::size_t>(std::llround(d_direct * samples_per_meter));
  const double seconds = room.rir_seconds.value_or(
      std::min(1.5 * room.sabine_t60(c), room.max_rir_seconds));
  const std::size_t length = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(seconds * sample_rate)),
      direct_index + kernels::kSincHalfTaps + 1);

  // Arrivals later than this cannot reach the first `length` samples.
  const double max_path = (static_cast<double>(length) + kernels::kSincHalfTaps) / samples_per_meter;
  const auto& dim = room.dimensions;
  auto n_for = [&](double l) { return static_cast<int>(std::ceil(max_path / (2.0 * l))) + 1; };
  const auto ax = axis_images(source.x, mic.x, dim.x, n_for(dim.x));
  const auto ay = axis_images(source.y, mic.y, dim.y, n_for(dim.y));
  const auto az = axis_images(source.z, mic.z, dim.z, n_for(dim.z));

  auto most = [](const AxisImages& a) { return *std::max_element(a.reflections.begin(), a.reflections.end()); };
  const int max_refl = most(ax) + most(ay) + most(az);
  std::vector<double> beta_pow(static_cast<std::size_t>(max_refl) + 1);
  beta_pow[0] = 1.0;
  for (std::size_t k = 1; k < beta_pow.size(); ++k) beta_pow[k] = beta_pow[k - 1] * room.reflection;

  // Padded so every tap of an accepted image lands inside the buffer.
  const std::size_t pad = kernels::kSincHalfTaps;
  std::vector<double> buf(length + 3 * (pad + 1), 0.0);
  const auto& kt = kernels::active();
  const double max_path2 = max_path * max_path;
  constexpr double kIntegerTolerance = 1e-9;

  for (std::size_t ix = 0; ix < ax.offset.size(); ++ix) {
    const double dx2 = ax.offset[ix] * ax.offset[ix];
    if (dx2 > max_path2) continue;
    for (std::size_t iy = 0; iy < ay.offset.size(); ++iy) {
      const double dxy2 = dx2 + ay.offset[iy] * ay.offset[iy];
      if (dxy2 > max_path2) continue;
      const int rxy = ax.reflections[ix] + ay.reflections[iy];
      for (std::size_t iz = 0; iz < az.offset.size(); ++iz) {
        const double d2 = dxy2 + az.offset[iz] * az.offset[iz];
        if (d2 > max_path2) continue;
        const int refl = rxy + az.reflections[iz];
        if (room.max_image_order && refl > *room.max_image_order) continue;
        const double gain = beta_pow[static_cast<std::size_t>(refl)];
        if (gain == 0.0) continue;
        const double d = std::sqrt(d2);
        const double amplitude = gain / (AcousticConstants::kPointSourceAttenuation * d);
        const double delay = d * samples_per_meter;
        double whole = std::floor(delay);
        double frac = delay - whole;
        if (frac > 1.0 - kIntegerTolerance) {
          whole += 1.0;
          frac = 0.0;
        }
        const auto n0 = static_cast<std::size_t>(whole);
        if (n0 >= length + pad) continue;
        if (frac < kIntegerTolerance) {
          buf[n0 + pad] += amplitude;
        } else {
          kt.add_fractional_impulse(buf.data() + n0, amplitude, frac);
        }
      }
    }
  }

  Rir rir;
  rir.sample_rate = sample_rate;
  rir.direct_index = direct_index;
  rir.samples.assign(buf.begin() + static_cast<std::ptrdiff_t>(pad),
                     buf.begin() + static_cast<std::ptrdiff_t>(pad + length));
  return rir;
}

std::pair<std::vector<double>, std::vector<double>> split_rir(const Rir& rir,
                                                              double direct_window_ms) {
  if (rir.direct_index >= rir.samples.size()) {
    fail(ErrorKind::kInvalidInput, "direct-path index outside the RIR");
  }
  if (!(direct_window_ms >= 0.0)) fail(ErrorKind::kConfig, "direct window must be nonnegative");
  const auto w = static_cast<std::size_t>(std::llround(direct_window_ms * rir.sample_rate / 1000.0));
  const std::size_t lo = rir.direct_index > w ? rir.direct_index - w : 0;
  const std::size_t hi = std::min(rir.samples.size() - 1, rir.direct_index + w);
  std::vector<double> direct(rir.samples.size(), 0.0);
  std::vector<double> reverb = rir.samples;
  for (std::size_t n = lo; n <= hi; ++n) {
    direct[n] = rir.samples[n];
    reverb[n] = 0.0;
  }
  return {std::move(direct), std::move(reverb)};
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double rir_drr_db(const Rir& rir, double direct_window_ms) {
  const auto [direct, reverb] = split_rir(rir, direct_window_ms);
  return db(energy(direct) / energy(reverb));
}

std::optional<double> schroeder_t60(std::span<const double> rir, double sample_rate) {
  std::vector<double> edc(rir.size());
  double acc = 0.0;
  for (std::size_t n = rir.size(); n-- > 0;) {
    acc += rir[n] * rir[n];
    edc[n] = acc;
  }
  if (!(acc > 0.0)) return std::nullopt;
  // Least-squares line through the decay curve between -5 and -25 dB.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  bool reached = false;
  for (std::size_t n = 0; n < edc.size(); ++n) {
    const double level = db(edc[n] / acc);
    if (level < -25.0) {
      reached = true;
      break;
    }
    if (level <= -5.0) {
      const double t = static_cast<double>(n) / sample_rate;
      sx += t;
      sy += level;
      sxx += t * t;
      sxy += t * level;
      ++count;
    }
  }
  if (!reached || count < 2) return std::nullopt;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  if (!(slope < 0.0)) return std::nullopt;
  return -60.0 / slope;
}

CalibrationResult calibrate_reflection(const RoomSpec& room_template,
                                       const std::vector<Position>& mics, const Position& source,
                                       double target_drr_db, double sample_rate,
                                       double direct_window_ms, const AcousticConstants& c,
                                       double tolerance_db) {
  if (mics.empty()) fail(ErrorKind::kConfig, "calibration needs at least one microphone");
  if (!std::isfinite(target_drr_db)) fail(ErrorKind::kConfig, "DRR target must be finite");
  RoomSpec room = room_template;
  auto mean_drr = [&](double beta) {
    room.reflection = beta;
    double sum = 0.0;
    for (const auto& m : mics) sum += rir_drr_db(ism_rir(room, source, m, sample_rate, c), direct_window_ms);
    return sum / static_cast<double>(mics.size());
  };

  CalibrationResult result;
  const double anechoic = mean_drr(0.0);
  result.iterations = 1;
  if (target_drr_db >= anechoic - tolerance_db) {
    room.reflection = 0.0;
    result.room = room;
    result.achieved_drr_db = anechoic;
    return result;
  }

  // DRR falls as the reflection coefficient grows, so an unreachable target
  // shows up at the upper end of the bracket. That end is expensive (long
  // RIRs), so it is only evaluated once the bisection climbs towards it.
  constexpr double kMaxReflection = 0.99;
  constexpr double kCheckAbove = 0.95;
  double lo = 0.0, hi = kMaxReflection;
  double drr_lo = anechoic;
  std::optional<double> drr_hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid > kCheckAbove && !drr_hi) {
      drr_hi = mean_drr(kMaxReflection);
      ++result.iterations;
      if (*drr_hi > target_drr_db + tolerance_db) {
        std::ostringstream msg;
        msg << "cannot reach mean DRR " << target_drr_db << " dB: reflection in [0, "
            << kMaxReflection << "] gives " << anechoic << " .. " << *drr_hi << " dB";
        fail(ErrorKind::kCalibration, msg.str());
      }
    }
    const double drr = mean_drr(mid);
    ++result.iterations;
    if (std::abs(drr - target_drr_db) <= tolerance_db) {
      room.reflection = mid;
      result.room = room;
      result.achieved_drr_db = drr;
      return result;
    }
    if (drr > target_drr_db) {
      lo = mid;
      drr_lo = drr;
    } else {
      hi = mid;
      drr_hi = drr;
    }
    if (hi - lo < 1e-9) break;
  }
  std::ostringstream msg;
  msg << "cannot reach mean DRR " << target_drr_db << " dB: reflection in [" << lo << ", " << hi
      << "] gives " << drr_lo << " .. " << drr_hi.value_or(drr_lo) << " dB";
  fail(ErrorKind::kCalibration, msg.str());
}

Multichannel isotropic_noise(std::size_t num_samples, double sample_rate,
                             const std::vector<Position>& positions, std::size_t num_plane_waves,
                             std::uint64_t seed, const AcousticConstants& c,
                             std::span<const double> shape) {
  if (num_plane_waves < 64) fail(ErrorKind::kConfig, "isotropic noise needs at least 64 plane waves");
  if (positions.empty()) fail(ErrorKind::kInvalidInput, "isotropic noise needs a position");
  if (num_samples == 0) return Multichannel(positions.size());

  const std::size_t n = next_pow2(std::max<std::size_t>(num_samples, 2));
  const RealFft& fft = real_fft(n);
  const std::size_t bins = fft.num_bins();
  const double bin_spacing = 2.0 * kPi * sample_rate / static_cast<double>(n);
  std::vector<std::vector<cplx>> spectra(positions.size(), std::vector<cplx>(bins));
  std::vector<cplx> wave(bins);
  CounterRng rng(seed);
  constexpr std::size_t kBlock = 512;
  const auto& kt = kernels::active();

  for (std::size_t p = 0; p < num_plane_waves; ++p) {
    const double z = 2.0 * rng.uniform() - 1.0;
    const double phi = 2.0 * kPi * rng.uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 dir{rho * std::cos(phi), rho * std::sin(phi), z};
    // White Gaussian spectrum with unit expected power per bin.
    wave[0] = {rng.normal(), 0.0};
    for (std::size_t k = 1; k + 1 < bins; ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      wave[k] = {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }
    wave[bins - 1] = {rng.normal(), 0.0};

    for (std::size_t m = 0; m < positions.size(); ++m) {
      // A wave travelling along -dir reaches positions further along dir first.
      const double delay = -dir.dot(positions[m]) / c.speed_of_sound;
      const double dphi = -bin_spacing * delay;
      const cplx step = std::polar(1.0, dphi);
      for (std::size_t k0 = 0; k0 < bins; k0 += kBlock) {
        const std::size_t len = std::min(kBlock, bins - k0);
        kt.accumulate_rotated(spectra[m].data() + k0, wave.data() + k0,
                              std::polar(1.0, dphi * static_cast<double>(k0)), step, len);
      }
    }
  }

  std::vector<double> gain;
  if (!shape.empty()) {
    gain.resize(bins);
    double power = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double pos = static_cast<double>(k) * static_cast<double>(shape.size() - 1) /
                         static_cast<double>(bins - 1);
      const auto i = std::min(static_cast<std::size_t>(pos), shape.size() - 1);
      const double t = pos - static_cast<double>(i);
      gain[k] = i + 1 < shape.size() ? (1.0 - t) * shape[i] + t * shape[i + 1] : shape[i];
      power += gain[k] * gain[k];
    }
    if (!(power > 0.0)) fail(ErrorKind::kInvalidInput, "noise shaping response is zero");
    const double norm = std::sqrt(static_cast<double>(bins) / power);
    for (double& g : gain) g *= norm;
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(num_plane_waves) * static_cast<double>(n));
  Multichannel out(positions.size());
  std::vector<double> time(n);
  for (std::size_t m = 0; m < positions.size(); ++m) {
    if (!gain.empty()) {
      for (std::size_t k = 0; k < bins; ++k) spectra[m][k] *= gain[k];
    }
    fft.inverse(spectra[m], time);
    out[m].resize(num_samples);
    for (std::size_t i = 0; i < num_samples; ++i) out[m][i] = time[i] * scale;
  }
  return out;
}

std::vector<double> long_term_magnitude(std::span<const double> signal,
                                        std::size_t frame_length) {
  if (frame_length < 2 || frame_length % 2 != 0) {
    fail(ErrorKind::kConfig, "frame length must be even and at least 2");
  }
  const std::size_t hop = frame_length / 2;
  const std::size_t bins = frame_length / 2 + 1;
  const auto window = make_window(WindowKind::kHann, frame_length);
  const RealFft& fft = real_fft(frame_length);
  std::vector<double> frame(frame_length);
  std::vector<cplx> spec(bins);
  std::vector<double> psd(bins, 0.0);
  std::size_t frames = 0;
  for (std::size_t start = 0; start + frame_length <= signal.size(); start += hop) {
    for (std::size_t i = 0; i < frame_length; ++i) frame[i] = signal[start + i] * window[i];
    fft.forward(frame, spec);
    for (std::size_t k = 0; k < bins; ++k) psd[k] += std::norm(spec[k]);
    ++frames;
  }
  if (frames == 0) fail(ErrorKind::kInvalidInput, "signal is shorter than one analysis frame");
  for (double& p : psd) p = std::sqrt(p / static_cast<double>(frames));
  return psd;
}

const char* to_string(NoiseSpectrum s) {
  switch (s) {
    case NoiseSpectrum::kWhite: return "white";
    case NoiseSpectrum::kSourceShaped: return "source-shaped";
  }
  return "?";
}

namespace {

// Two-pole resonator normalized to unit gain at its centre frequency.
struct Resonator {
  double b0 = 0, a1 = 0, a2 = 0;
  double y1 = 0, y2 = 0, x2 = 0, x1 = 0;

  void tune(double freq, double bandwidth, double fs) {
    const double r = std::exp(-kPi * bandwidth / fs);
    const double theta = 2.0 * kPi * freq / fs;
    a1 = -2.0 * r * std::cos(theta);
    a2 = r * r;
    b0 = (1.0 - r * r) / 2.0;
  }

  // Band-pass form: b0 (x[n] - x[n-2]).
  double process(double x) {
    const double y = b0 * (x - x2) - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

SourceSignal synth_speech(double duration_s, double sample_rate, std::uint64_t seed) {
  if (!(duration_s > 0.0)) fail(ErrorKind::kConfig, "signal duration must be positive");
  if (!(sample_rate > 0.0)) fail(ErrorKind::kConfig, "sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  CounterRng rng(seed, 1);

  // Formant ranges (Hz) and relative levels; higher formants are weaker.
  struct Band { double lo, hi, gain_db; };
  constexpr Band kFormants[] = {
      {300, 900, 0.0}, {900, 2200, -6.0}, {2200, 3000, -12.0}, {3000, 3800, -16.0}, {3800, 4800, -20.0}};
  const auto segment = static_cast<std::size_t>(std::llround(0.150 * sample_rate));
  const auto slot = static_cast<std::size_t>(std::llround(0.250 * sample_rate));

  // Syllable slots, 30% of them silent.
  const std::size_t num_slots = (n + slot - 1) / slot;
  std::vector<std::size_t> order(num_slots);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = num_slots; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform() * i)]);
  }
  std::vector<bool> silent(num_slots, false);
  const auto num_silent = static_cast<std::size_t>(std::llround(0.3 * num_slots));
  for (std::size_t i = 0; i < num_silent; ++i) silent[order[i]] = true;

  Resonator res[5];
  double gains[5] = {};
  int active = 0;
  // Kellet pink-noise filter state.
  double b[7] = {};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % segment == 0) {
      active = 3 + static_cast<int>(rng.uniform() * 3.0);
      for (int f = 0; f < active; ++f) {
        const auto& band = kFormants[f];
        const double freq = band.lo + (band.hi - band.lo) * rng.uniform();
        const double bw = 80.0 + 120.0 * rng.uniform();
        res[f].tune(std::min(freq, 0.45 * sample_rate), bw, sample_rate);
        gains[f] = std::pow(10.0, band.gain_db / 20.0);
      }
    }
    const double white = rng.normal();
    b[0] = 0.99886 * b[0] + white * 0.0555179;
    b[1] = 0.99332 * b[1] + white * 0.0750759;
    b[2] = 0.96900 * b[2] + white * 0.1538520;
    b[3] = 0.86650 * b[3] + white * 0.3104856;
    b[4] = 0.55000 * b[4] + white * 0.5329522;
    b[5] = -0.7616 * b[5] - white * 0.0168980;
    const double pink = b[0] + b[1] + b[2] + b[3] + b[4] + b[5] + b[6] + white * 0.5362;
    b[6] = white * 0.115926;

    double y = 0.0;
    for (int f = 0; f < 5; ++f) {
      const double v = res[f].process(pink);
      if (f < active) y += gains[f] * v;
    }
    const std::size_t s = i / slot;
    const double phase = static_cast<double>(i % slot) / static_cast<double>(slot);
    const double envelope = silent[s] ? 0.0 : std::pow(std::sin(kPi * phase), 2.0);
    out[i] = y * envelope;
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : out) v *= 0.5 / peak;
  }
  SourceSignal sig;
  sig.samples = std::move(out);
  sig.sample_rate = sample_rate;
  sig.kind = SourceKind::kSyntheticSpeech;
  sig.seed = seed;
  sig.origin = "synthetic";
  return sig;
}

SourceSignal load_source_wav(const std::filesystem::path& path, double sample_rate,
                             std::optional<double> duration_s) {
  auto wav = read_wav(path);
  if (std::abs(wav.sample_rate - sample_rate) > 1e-6) {
    fail(ErrorKind::kConfig, path.string() + ": sample rate " + std::to_string(wav.sample_rate) +
                                 " differs from " + std::to_string(sample_rate));
  }
  SourceSignal sig;
  sig.samples = std::move(wav.channels.front());
  if (duration_s) {
    sig.samples.resize(static_cast<std::size_t>(std::llround(*duration_s * sample_rate)), 0.0);
  }
  sig.sample_rate = sample_rate;
  sig.kind = SourceKind::kWavFile;
  sig.origin = path.string();
  return sig;
}

std::vector<Position> SceneConfig::all_mics() const {
  std::vector<Position> all = array_mics;
  all.insert(all.end(), extra_mics.begin(), extra_mics.end());
  return all;
}

double mean_ratio_db(const Multichannel& a, const Multichannel& b, std::size_t num_array_mics) {
  double sum = 0.0;
  for (std::size_t m = 0; m < num_array_mics; ++m) sum += db(energy(a[m]) / energy(b[m]));
  return sum / static_cast<double>(num_array_mics);
}

ScenarioRender render_scenario(const SceneConfig& cfg, std::span<const double> source_signal,
                               std::span<const Rir> rirs) {
  if (cfg.array_mics.empty()) fail(ErrorKind::kConfig, "scene has no array microphones");
  if (energy(source_signal) <= 0.0) fail(ErrorKind::kInvalidInput, "source signal is silent");
  const auto mics = cfg.all_mics();
  if (!rirs.empty() && rirs.size() != mics.size()) {
    fail(ErrorKind::kInvalidInput, "one RIR per channel is required");
  }

  std::vector<Rir> own;
  if (rirs.empty()) {
    for (const auto& m : mics) own.push_back(ism_rir(cfg.room, cfg.source, m, cfg.sample_rate, cfg.constants));
    rirs = own;
  }

  const std::size_t len = source_signal.size();
  std::size_t max_filter = 1;
  for (const auto& r : rirs) max_filter = std::max(max_filter, r.samples.size());
  const FftConvolver conv(source_signal, max_filter, len);

  ScenarioRender out;
  out.num_array_mics = cfg.array_mics.size();
  out.positions = mics;
  out.source = cfg.source;
  Position centroid{};
  for (const auto& m : cfg.array_mics) centroid = centroid + m;
  centroid = (1.0 / static_cast<double>(cfg.array_mics.size())) * centroid;
  out.source_doa = DoaVector::towards(centroid, cfg.source);
  out.dc = distance(centroid, cfg.source);

  for (const auto& r : rirs) {
    const auto [h_direct, h_reverb] = split_rir(r, cfg.direct_window_ms);
    out.direct.push_back(conv.apply(h_direct));
    out.reverberant.push_back(conv.apply(h_reverb));
  }
  const std::size_t na = out.num_array_mics;

  if (cfg.target_drr_db) {
    const double now = mean_ratio_db(out.direct, out.reverberant, na);
    out.reverb_gain = std::pow(10.0, (now - *cfg.target_drr_db) / 20.0);
    for (auto& ch : out.reverberant) {
      for (double& v : ch) v *= out.reverb_gain;
    }
  }
  out.drr_db = mean_ratio_db(out.direct, out.reverberant, na);

  if (cfg.target_rsnr_db) {
    std::vector<double> shape;
    if (cfg.noise_spectrum == NoiseSpectrum::kSourceShaped) shape = long_term_magnitude(source_signal);
    out.noise = isotropic_noise(len, cfg.sample_rate, mics, cfg.num_plane_waves, cfg.noise_seed,
                                cfg.constants, shape);
    const double now = mean_ratio_db(out.reverberant, out.noise, na);
    out.noise_gain = std::pow(10.0, (now - *cfg.target_rsnr_db) / 20.0);
    for (auto& ch : out.noise) {
      for (double& v : ch) v *= out.noise_gain;
    }
    out.rsnr_db = mean_ratio_db(out.reverberant, out.noise, na);
  } else {
    out.noise.assign(mics.size(), std::vector<double>(len, 0.0));
    out.rsnr_db = std::numeric_limits<double>::infinity();
  }

  out.mixed.resize(mics.size());
  for (std::size_t m = 0; m < mics.size(); ++m) {
    out.mixed[m].resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      out.mixed[m][i] = out.direct[m][i] + out.reverberant[m][i] + out.noise[m][i];
    }
  }

  // SUR = phi_S / phi_U with phi_S = (xi d)^2 E_direct at each array mic.
  double sur = 0.0;
  for (std::size_t m = 0; m < na; ++m) {
    const double xi_d = AcousticConstants::kPointSourceAttenuation * distance(cfg.source, mics[m]);
    const double undesired = energy(out.reverberant[m]) + energy(out.noise[m]);
    sur += db(xi_d * xi_d * energy(out.direct[m]) / undesired);
  }
  out.sur_db = sur / static_cast<double>(na);
  return out;
}

std::vector<Position> compact_array(const Position& centroid, std::size_t num_mics, double side,
                                    double orientation_rad) {
  if (num_mics < 2) fail(ErrorKind::kConfig, "array needs at least two microphones");
  if (!(side > 0.0)) fail(ErrorKind::kConfig, "array side must be positive");
  const double radius = side / (2.0 * std::sin(kPi / static_cast<double>(num_mics)));
  std::vector<Position> mics;
  for (std::size_t m = 0; m < num_mics; ++m) {
    const double a = orientation_rad + 2.0 * kPi * static_cast<double>(m) / static_cast<double>(num_mics);
    mics.push_back(centroid + Position{radius * std::cos(a), radius * std::sin(a), 0.0});
  }
  return mics;
}

}  // namespace auxsrp
