// Acceptance checks AC1..AC8. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "auxsrp/harness.hpp"
#include "auxsrp/kernels.hpp"
#include "auxsrp/model.hpp"
#include "auxsrp/rng.hpp"
#include "auxsrp/sim.hpp"
#include "auxsrp/spectral.hpp"
#include "auxsrp/srp.hpp"

namespace fs = std::filesystem;
using namespace auxsrp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFs = 16000.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ------------------------------------------------------------------------ AC1

Outcome ac1() {
  DistortionConfig cfg;  // 5 cm, 2 m, 1025 samples on 0-8 kHz, 18 orientations
  cfg.sur_db = 10.0;
  const auto c10 = crossing_distance(cfg);
  cfg.sur_db = 0.0;
  const auto c0 = crossing_distance(cfg);
  const bool pass = c10 && c0 && *c10 >= 0.10 && *c10 <= 0.30 && *c0 >= 0.60 && *c0 <= 0.90;
  return {pass, format("crossing SUR 10 dB = %.4f m [0.10, 0.30], SUR 0 dB = %.4f m [0.60, 0.90]",
                       c10.value_or(NAN), c0.value_or(NAN))};
}

// ------------------------------------------------------------------------ AC2

Outcome ac2() {
  CounterRng rng(2024, 2);
  StftConfig stft_cfg;
  int passed = 0;
  double worst_diff = 0, worst_err = 0;
  for (int g = 0; g < 50; ++g) {
    const std::size_t m = 3 + static_cast<std::size_t>(rng.uniform() * 4);  // 3..6 mics
    std::vector<Position> pos;
    for (std::size_t i = 0; i < m; ++i) pos.push_back({0.1 * rng.uniform() - 0.05, 0.1 * rng.uniform() - 0.05, 0.0});
    const double r = 0.5 + 1.5 * rng.uniform(), phi = 2 * kPi * rng.uniform();
    pos.push_back({r * std::cos(phi), r * std::sin(phi), rng.uniform() - 0.5});
    const double theta = 2 * kPi * rng.uniform();
    const DoaVector v = DoaVector::from_azimuth(theta);

    // X_m(l, k) = S(l, k) exp(-j w_k tau_m) with a random source spectrum.
    const std::size_t frames = 20;
    Spectrogram spec(m + 1, frames, stft_cfg);
    for (std::size_t l = 0; l < frames; ++l) {
      std::vector<cplx> s(spec.num_bins());
      for (auto& z : s) z = {rng.normal(), rng.normal()};
      for (std::size_t c = 0; c <= m; ++c) {
        const double tau = -v.vector().dot(pos[c]) / 343.0;
        auto f = spec.frame(c, l);
        for (std::size_t k = 0; k < f.size(); ++k) f[k] = s[k] * std::polar(1.0, -spec.bin_frequency(k) * tau);
      }
    }
    const auto conv = conventional_from_stft(spec, m);
    const auto aux = auxiliary_from_stft(spec, m, m);
    double diff = 0;
    for (std::size_t i = 0; i < conv.values.size(); ++i) diff = std::max(diff, std::abs(conv.values[i] - aux.values[i]));
    const ArrayGeometry geom(std::vector<Position>(pos.begin(), pos.begin() + m));
    const double e_conv = doa_error(estimate_doa(srp_function(conv, geom, 1.0)), v);
    const double e_aux = doa_error(estimate_doa(srp_function(aux, geom, 1.0)), v);
    worst_diff = std::max(worst_diff, diff);
    worst_err = std::max({worst_err, e_conv, e_aux});
    if (diff <= 1e-12 && e_conv <= 1.0 && e_aux <= 1.0) ++passed;
  }
  return {passed == 50, format("%d/50 geometries, max |conv - aux| = %.2e, max DOA error = %.3f deg",
                               passed, worst_diff, worst_err)};
}

// ------------------------------------------------------------------------ AC3

Outcome ac3() {
  CounterRng rng(3, 3);
  constexpr double kXi = AcousticConstants::kPointSourceAttenuation;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    DistortionConfig cfg;
    cfg.sur_db = -20 + 40 * rng.uniform();
    cfg.dc = 0.5 + 4 * rng.uniform();
    cfg.d12 = 0.01 + 0.2 * rng.uniform();
    cfg.tdoa_model = rng.uniform() < 0.5 ? TdoaModel::kFarField : TdoaModel::kExactPath;
    const Position aux{6 * rng.uniform() - 3, 6 * rng.uniform() - 3, 2 * rng.uniform() - 1};
    const auto g = aux_link_geometry(model_scene(aux, kPi * rng.uniform(), cfg), cfg);
    const double w = cfg.omega0 * rng.uniform();
    const double nu = cfg.constants.speed_of_sound;
    const double a = kXi * kXi * cfg.dc * g.d_a / cfg.sur_linear();
    const cplx link_ia = std::polar(1.0, -w * g.tau_ia) + a * sinc(w * g.d_ai / nu);
    const cplx link_aj = std::polar(1.0, -w * g.tau_aj) + a * sinc(w * g.d_aj / nu);
    const cplx product = (link_ia / std::abs(link_ia)) * (link_aj / std::abs(link_aj));
    const cplx combined = std::polar(1.0, -w * (g.tau_ia + g.tau_aj)) + distortion_auxiliary(w, g, cfg);
    worst = std::max(worst, std::abs(product - combined / std::abs(combined)));
  }
  return {worst <= 1e-10, format("max deviation over 1000 draws = %.2e (limit 1e-10)", worst)};
}

// ------------------------------------------------------------------------ AC4

Outcome ac4() {
  const double d = 0.05;
  const auto x = isotropic_noise(static_cast<std::size_t>(30 * kFs), kFs, {{0, 0, 0}, {d, 0, 0}}, 2048, 4);
  const auto spec = stft(x, StftConfig{});
  std::vector<cplx> s12(spec.num_bins());
  std::vector<double> s11(spec.num_bins()), s22(spec.num_bins());
  for (std::size_t l = 0; l < spec.num_frames(); ++l) {
    const auto a = spec.frame(0, l);
    const auto b = spec.frame(1, l);
    for (std::size_t k = 0; k < s12.size(); ++k) {
      s12[k] += a[k] * std::conj(b[k]);
      s11[k] += std::norm(a[k]);
      s22[k] += std::norm(b[k]);
    }
  }
  double mae = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; spec.bin_frequency(k) <= 2 * kPi * 4000.0 + 1e-9; ++k, ++n) {
    const double gamma = s12[k].real() / std::sqrt(s11[k] * s22[k]);
    mae += std::abs(gamma - sinc(spec.bin_frequency(k) * d / 343.0));
  }
  mae /= static_cast<double>(n);
  return {mae < 0.05, format("coherence MAE over %zu bins (0-4 kHz, d = 5 cm, 30 s, 2048 waves) = %.4f", n, mae)};
}

// ------------------------------------------------------------------------ AC5

// Band-limited reconstruction of h around sample `idx`; returns the peak.
double reconstructed_peak(const std::vector<double>& h, long idx) {
  double best = 0;
  for (double t = idx - 1.0; t <= idx + 1.0; t += 1e-3) {
    double y = 0;
    for (long n = std::max(0L, idx - 80); n < std::min<long>(h.size(), idx + 81); ++n) {
      y += h[n] * sinc(kPi * (t - static_cast<double>(n)));
    }
    best = std::max(best, std::abs(y));
  }
  return best;
}

Outcome ac5() {
  CounterRng rng(5, 5);
  RoomSpec anechoic;
  double worst_idx = 0, worst_amp = 0;
  for (int t = 0; t < 20; ++t) {
    const Position s{0.5 + 5 * rng.uniform(), 0.5 + 5 * rng.uniform(), 0.3 + 1.8 * rng.uniform()};
    const Position m{0.5 + 5 * rng.uniform(), 0.5 + 5 * rng.uniform(), 0.3 + 1.8 * rng.uniform()};
    const double d = distance(s, m);
    const Rir rir = ism_rir(anechoic, s, m, kFs);
    const auto peak = std::max_element(rir.samples.begin(), rir.samples.end(),
                                       [](double a, double b) { return std::abs(a) < std::abs(b); });
    const long idx = peak - rir.samples.begin();
    worst_idx = std::max(worst_idx, std::abs(static_cast<double>(idx - std::lround(kFs * d / 343.0))));
    worst_amp = std::max(worst_amp, std::abs(reconstructed_peak(rir.samples, idx) * 4 * kPi * d - 1.0));
  }

  const Position source{2.0, 3.0, 1.75};
  const auto mics = compact_array({4.0, 3.0, 1.75}, 3, 0.05, 0.0);
  const auto c1 = calibrate_reflection(RoomSpec{}, mics, source, -1.4, kFs);
  const auto c2 = calibrate_reflection(RoomSpec{}, mics, source, -7.2, kFs);
  const double t1 = c1.room.sabine_t60(), t2 = c2.room.sabine_t60();
  const bool pass = worst_idx <= 1 && worst_amp <= 0.05 && t1 >= 0.13 && t1 <= 0.23 && t2 >= 0.27 && t2 <= 0.37;
  return {pass, format("anechoic: max index offset %.0f, max amplitude error %.2f%%; "
                       "T60 cond1 = %.3f s (beta %.4f, Eyring %.3f), cond2 = %.3f s (beta %.4f, Eyring %.3f)",
                       worst_idx, 100 * worst_amp, t1, c1.room.reflection, c1.room.eyring_t60(), t2,
                       c2.room.reflection, c2.room.eyring_t60())};
}

// ------------------------------------------------------------------------ AC6

harness::CampaignConfig desk_campaign(double level_db) {
  harness::CampaignConfig cfg;
  cfg.drr_db = level_db;
  cfg.rsnr_db = level_db;
  cfg.aux_positions = harness::aux_grid({0.75, 1.75, 2.75, 5.25}, {0.75, 2.25, 3.75, 5.25}, 1.75,
                                        cfg.centroid, cfg.room, 1.0, 0.5);
  cfg.seed = 1;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  return cfg;
}

Outcome ac6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg2 = desk_campaign(-7.2);
  const auto r2 = harness::run_campaign(cfg2);
  const auto r1 = harness::run_campaign(desk_campaign(-1.4));
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60;
  bool geometry_ok = cfg2.aux_positions.size() == 16 && cfg2.num_scenarios() == 12;
  for (const auto& p : cfg2.aux_positions) {
    geometry_ok = geometry_ok && std::hypot(p.x - cfg2.centroid.x, p.y - cfg2.centroid.y) >= 1.0;
  }
  std::size_t reduced = 0;
  for (bool b : r2.reduced) reduced += b ? 1 : 0;
  const bool pass = geometry_ok && r2.fraction_reduced() >= 0.8 &&
                    r2.baseline_mean_error > r1.baseline_mean_error && minutes < 15;
  return {pass, format("cond2: %zu/16 aux positions beat baseline (%.1f%%), baseline %.2f deg vs cond1 %.2f deg; "
                       "%.1f min for both campaigns",
                       reduced, 100 * r2.fraction_reduced(), r2.baseline_mean_error, r1.baseline_mean_error, minutes)};
}

// ------------------------------------------------------------------------ AC7

Outcome ac7() {
  CounterRng rng(7, 7);
  const Position centroid{3.0, 3.0, 1.5};
  const Position aux{5.4, 0.7, 1.1};
  const auto signal = synth_speech(2.0, kFs, 77);
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const double theta = 360.0 * rng.uniform();
    SceneConfig scene;
    scene.source = centroid + Position{2.0 * std::cos(theta * kPi / 180), 2.0 * std::sin(theta * kPi / 180), 0.0};
    scene.array_mics = compact_array(centroid, 3, 0.05, 2 * kPi * rng.uniform());
    scene.extra_mics = {aux};
    const auto render = render_scenario(scene, signal.samples);
    const auto spec = stft(render.mixed, StftConfig{});
    const ArrayGeometry geom(scene.array_mics);
    const auto truth = DoaVector::from_degrees(theta);
    const double e_conv = doa_error(estimate_doa(srp_function(conventional_from_stft(spec, 3), geom, 1.0)), truth);
    const double e_aux = doa_error(estimate_doa(srp_function(auxiliary_from_stft(spec, 3, 3), geom, 1.0)), truth);
    worst = std::max({worst, e_conv, e_aux});
  }
  return {worst <= 1.0, format("max error over 10 azimuths, both modes = %.3f deg", worst)};
}

// ------------------------------------------------------------------------ AC8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome ac8() {
  const fs::path root = fs::temp_directory_path() / "auxsrp_acceptance_ac8";
  fs::remove_all(root);
  auto run = [&](const fs::path& dir) {
    harness::ModelSweepConfig sweep;
    sweep.grid = {-1.0, 1.0, -1.0, 1.0, 0.25};
    harness::run_model_sweep(sweep, dir / "sweep");
    auto camp = desk_campaign(-7.2);
    camp.orientations_deg = {0, 60};
    camp.aux_positions.resize(3);
    camp.signal_seconds = 1.0;
    camp.num_plane_waves = 256;
    harness::run_campaign_to_dir(camp, dir / "campaign", false);
  };
  run(root / "a");
  run(root / "b");
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const auto other = root / "b" / fs::relative(e.path(), root / "a");
    if (fs::exists(other) && slurp(e.path()) == slurp(other)) ++same;
  }
  fs::remove_all(root);
  return {files > 0 && same == files, format("%zu/%zu CSV files byte-identical across two runs", same, files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
  };
  std::printf("kernels: %s\n", kernels::active().name);
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
