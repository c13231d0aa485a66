#include "auxsrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

#include "auxsrp/error.hpp"

namespace auxsrp {
namespace {

constexpr double kXi = AcousticConstants::kPointSourceAttenuation;

std::vector<double> lattice(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) fail(ErrorKind::kConfig, "invalid grid range");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  return v;
}

// Frequency grid with |D_ij| precomputed; the auxiliary term is evaluated
// per position without geometry checks.
struct Sampler {
  std::vector<double> omegas;
  std::vector<double> conventional;
  double sur = 1.0;

  explicit Sampler(const DistortionConfig& cfg) : omegas(cfg.frequencies()), sur(cfg.sur_linear()) {
    const double scale = (kXi * cfg.dc) * (kXi * cfg.dc) / sur;
    conventional.reserve(omegas.size());
    for (double w : omegas) {
      conventional.push_back(std::abs(scale * isotropic_coherence(w, cfg.d12, cfg.constants)));
    }
  }

  double proportion(const Position& aux, double orientation_rad, const DistortionConfig& cfg) const {
    const auto g = aux_link_geometry(model_scene(aux, orientation_rad, cfg), cfg);
    const double nu = cfg.constants.speed_of_sound;
    const double a = kXi * kXi * cfg.dc * g.d_a / sur;
    std::size_t count = 0;
    for (std::size_t n = 0; n < omegas.size(); ++n) {
      const double w = omegas[n];
      const double s_ai = sinc(w * g.d_ai / nu);
      const double s_aj = sinc(w * g.d_aj / nu);
      const double p1 = -w * g.tau_aj;
      const double p2 = -w * g.tau_ia;
      const double re = a * (s_ai * std::cos(p1) + s_aj * std::cos(p2)) + a * a * s_ai * s_aj;
      const double im = a * (s_ai * std::sin(p1) + s_aj * std::sin(p2));
      if (conventional[n] > std::hypot(re, im)) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(omegas.size());
  }

  double average(const Position& aux, const DistortionConfig& cfg) const {
    double sum = 0.0;
    for (const double deg : cfg.orientations_deg) {
      sum += proportion(aux, deg * std::numbers::pi / 180.0, cfg);
    }
    return sum / static_cast<double>(cfg.orientations_deg.size());
  }
};

}  // namespace

const char* to_string(TdoaModel m) {
  return m == TdoaModel::kFarField ? "far-field" : "exact-path";
}

double DistortionConfig::sur_linear() const { return std::pow(10.0, sur_db / 10.0); }

std::vector<double> DistortionConfig::frequencies() const {
  std::vector<double> w(num_freqs);
  for (std::size_t n = 0; n < num_freqs; ++n) {
    w[n] = omega0 * static_cast<double>(n) / static_cast<double>(num_freqs - 1);
  }
  return w;
}

void DistortionConfig::validate() const {
  if (!(sur_linear() > 0.0) || !std::isfinite(sur_db)) fail(ErrorKind::kConfig, "SUR must be finite");
  if (!(d12 > 0.0)) fail(ErrorKind::kConfig, "d12 must be positive");
  if (!(dc > 0.0)) fail(ErrorKind::kConfig, "dc must be positive");
  if (!(omega0 > 0.0)) fail(ErrorKind::kConfig, "omega0 must be positive");
  if (num_freqs < 2) fail(ErrorKind::kConfig, "num_freqs must be at least 2");
  if (orientations_deg.empty()) fail(ErrorKind::kConfig, "at least one orientation is required");
  if (!(constants.speed_of_sound > 0.0)) fail(ErrorKind::kConfig, "speed of sound must be positive");
}

std::vector<double> DistortionConfig::default_orientations() {
  std::vector<double> o;
  for (int deg = 0; deg < 180; deg += 10) o.push_back(deg);
  return o;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double isotropic_coherence(double omega, double d, const AcousticConstants& c) {
  if (d < 0.0) fail(ErrorKind::kInvalidInput, "distance must be nonnegative");
  return sinc(omega * d / c.speed_of_sound);
}

ModelScene model_scene(const Position& aux, double orientation_rad, const DistortionConfig& cfg) {
  const Vec3 half{0.5 * cfg.d12 * std::cos(orientation_rad), 0.5 * cfg.d12 * std::sin(orientation_rad),
                  0.0};
  return {Position{-cfg.dc, 0.0, 0.0}, half, -1.0 * half, aux};
}

AuxLinkGeometry aux_link_geometry(const ModelScene& s, const DistortionConfig& cfg) {
  const double nu = cfg.constants.speed_of_sound;
  AuxLinkGeometry g;
  g.d_a = distance(s.source, s.aux);
  g.d_ai = distance(s.aux, s.mic_i);
  g.d_aj = distance(s.aux, s.mic_j);
  if (cfg.tdoa_model == TdoaModel::kFarField) {
    // Direction of the source seen from the array centroid (the origin).
    const Vec3 v = (1.0 / s.source.norm()) * s.source;
    g.tau_ia = -v.dot(s.mic_i - s.aux) / nu;
    g.tau_aj = -v.dot(s.aux - s.mic_j) / nu;
  } else {
    const double d_i = distance(s.source, s.mic_i);
    const double d_j = distance(s.source, s.mic_j);
    g.tau_ia = (d_i - g.d_a) / nu;
    g.tau_aj = (g.d_a - d_j) / nu;
  }
  return g;
}

std::complex<double> distortion_conventional(double omega, const DistortionConfig& cfg) {
  const double scale = (kXi * cfg.dc) * (kXi * cfg.dc) / cfg.sur_linear();
  return {scale * isotropic_coherence(omega, cfg.d12, cfg.constants), 0.0};
}

std::complex<double> distortion_auxiliary(double omega, const AuxLinkGeometry& g,
                                          const DistortionConfig& cfg) {
  const double nu = cfg.constants.speed_of_sound;
  const double a = kXi * kXi * cfg.dc * g.d_a / cfg.sur_linear();
  const double s_ai = sinc(omega * g.d_ai / nu);
  const double s_aj = sinc(omega * g.d_aj / nu);
  const auto cross = s_ai * std::polar(1.0, -omega * g.tau_aj) +
                     s_aj * std::polar(1.0, -omega * g.tau_ia);
  return a * cross + a * a * s_ai * s_aj;
}

double proportion_p(const Position& aux, double orientation_rad, const DistortionConfig& cfg) {
  cfg.validate();
  const auto scene = model_scene(aux, orientation_rad, cfg);
  if (distance(aux, scene.mic_i) == 0.0 || distance(aux, scene.mic_j) == 0.0) {
    fail(ErrorKind::kDegenerateGeometry, "auxiliary microphone coincides with an array microphone");
  }
  return Sampler(cfg).proportion(aux, orientation_rad, cfg);
}

double p_avg(const Position& aux, const DistortionConfig& cfg) {
  cfg.validate();
  return Sampler(cfg).average(aux, cfg);
}

std::vector<double> GridSpec::xs() const { return lattice(x_min, x_max, step); }
std::vector<double> GridSpec::ys() const { return lattice(y_min, y_max, step); }

PMap p_avg_sweep(const GridSpec& grid, const DistortionConfig& cfg, unsigned threads) {
  cfg.validate();
  PMap map;
  map.xs = grid.xs();
  map.ys = grid.ys();
  map.p_avg.assign(map.xs.size() * map.ys.size(), 0.0);
  const Sampler sampler(cfg);
  const std::size_t cells = map.p_avg.size();
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t c = begin; c < cells; c += stride) {
      const Position aux{map.xs[c % map.xs.size()], map.ys[c / map.xs.size()], 0.0};
      map.p_avg[c] = sampler.average(aux, cfg);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return map;
}

std::optional<double> crossing_distance(const DistortionConfig& cfg, double level, double step,
                                        double max_distance) {
  cfg.validate();
  if (!(step > 0.0) || !(max_distance > 0.0)) fail(ErrorKind::kConfig, "invalid ray sampling");
  const Sampler sampler(cfg);
  double prev_r = 0.0;
  double prev_p = sampler.average(Position{0.0, 0.0, 0.0}, cfg);
  if (prev_p >= level) return 0.0;
  const auto n = static_cast<std::size_t>(std::floor(max_distance / step + 1e-9));
  for (std::size_t s = 1; s <= n; ++s) {
    const double r = step * static_cast<double>(s);
    const double p = sampler.average(Position{r, 0.0, 0.0}, cfg);
    if (p >= level) return prev_r + (level - prev_p) / (p - prev_p) * (r - prev_r);
    prev_r = r;
    prev_p = p;
  }
  return std::nullopt;
}

void write_pmap_csv(const std::filesystem::path& path, const PMap& map) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, path.string() + ": cannot open for writing");
  out << "x,y,p_avg\n" << std::fixed;
  for (std::size_t iy = 0; iy < map.ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < map.xs.size(); ++ix) {
      out << std::setprecision(4) << map.xs[ix] << ',' << map.ys[iy] << ','
          << std::setprecision(8) << map.at(ix, iy) << '\n';
    }
  }
  if (!out) fail(ErrorKind::kIo, path.string() + ": write failed");
}

void write_pmap_metadata(const std::filesystem::path& path, const PMap& map,
                         const GridSpec& grid, const DistortionConfig& cfg) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, path.string() + ": cannot open for writing");
  out << std::setprecision(10);
  out << "sur_db = " << cfg.sur_db << '\n'
      << "d12_m = " << cfg.d12 << '\n'
      << "dc_m = " << cfg.dc << '\n'
      << "band_hz = " << cfg.omega0 / (2.0 * std::numbers::pi) << '\n'
      << "num_freqs = " << cfg.num_freqs << '\n'
      << "speed_of_sound = " << cfg.constants.speed_of_sound << '\n'
      << "tdoa_model = " << to_string(cfg.tdoa_model) << '\n'
      << "orientations_deg =";
  for (double o : cfg.orientations_deg) out << ' ' << o;
  out << '\n'
      << "grid_x = " << grid.x_min << ' ' << grid.x_max << '\n'
      << "grid_y = " << grid.y_min << ' ' << grid.y_max << '\n'
      << "grid_step_m = " << grid.step << '\n'
      << "cells = " << map.p_avg.size() << '\n'
      << "contour_levels =";
  for (double c : map.contour_levels) out << ' ' << c;
  out << '\n'
      << "frame = array centroid at origin, source at (-dc, 0, 0)\n";
  if (!out) fail(ErrorKind::kIo, path.string() + ": write failed");
}

}  // namespace auxsrp
