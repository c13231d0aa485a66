#include "auxsrp/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "auxsrp/error.hpp"
#include "auxsrp/kernels.hpp"
#include "auxsrp/rng.hpp"
#include "auxsrp/wav.hpp"

namespace auxsrp::harness {
namespace fs = std::filesystem;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string fmt_pos(const Position& p) {
  return fmt(p.x, 4) + " " + fmt(p.y, 4) + " " + fmt(p.z, 4);
}

std::string fmt_opt(const std::optional<double>& v, int precision = 6) {
  return v ? fmt(*v, precision) : std::string("none");
}

std::string join(const std::vector<double>& v, int precision = 4) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i], precision);
  }
  return out;
}

std::string sur_tag(double sur_db) {
  std::ostringstream s;
  s << "pmap_sur_" << std::showpos << std::fixed << std::setprecision(1) << sur_db << "dB.csv";
  return s.str();
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorKind::kIo, "failed writing " + path.string());
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorKind::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
  }
}

DirectoryLock::DirectoryLock(fs::path path) : path_(std::move(path)) {
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    fail(ErrorKind::kIo, path_.string() + " exists or cannot be created; another run may own " +
                             path_.parent_path().string());
  }
  std::fclose(f);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// ---------------------------------------------------------------- model sweep

void ModelSweepConfig::validate() const {
  if (sur_db.empty()) fail(ErrorKind::kConfig, "model sweep needs at least one SUR value");
  for (double s : sur_db) {
    if (!std::isfinite(s)) fail(ErrorKind::kConfig, "SUR values must be finite");
  }
  model.validate();
  if (!(grid.step > 0.0) || grid.x_max < grid.x_min || grid.y_max < grid.y_min) {
    fail(ErrorKind::kConfig, "invalid sweep grid");
  }
  if (!(crossing_step > 0.0) || !(crossing_max > 0.0)) {
    fail(ErrorKind::kConfig, "crossing search step and range must be positive");
  }
  if (threads == 0) fail(ErrorKind::kConfig, "threads must be at least 1");
}

std::vector<ModelSweepEntry> run_model_sweep(const ModelSweepConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  ensure_directory(out_dir);
  std::vector<ModelSweepEntry> entries;
  std::ostringstream crossings;
  crossings << "sur_db,level,crossing_m\n";
  for (double sur : cfg.sur_db) {
    DistortionConfig model = cfg.model;
    model.sur_db = sur;
    ModelSweepEntry e;
    e.sur_db = sur;
    e.map = p_avg_sweep(cfg.grid, model, cfg.threads);
    e.crossing_m = crossing_distance(model, cfg.crossing_level, cfg.crossing_step, cfg.crossing_max);
    e.csv = out_dir / sur_tag(sur);
    write_pmap_csv(e.csv, e.map);
    fs::path meta = e.csv;
    meta.replace_extension(".meta.txt");
    write_pmap_metadata(meta, e.map, cfg.grid, model);
    crossings << fmt(sur, 2) << ',' << fmt(cfg.crossing_level, 3) << ','
              << (e.crossing_m ? fmt(*e.crossing_m, 6) : std::string("")) << '\n';
    entries.push_back(std::move(e));
  }
  write_text(out_dir / "crossings.csv", crossings.str());
  return entries;
}

// ------------------------------------------------------------------- campaign

void CampaignConfig::validate() const {
  room.validate();
  stft.validate();
  if (num_mics < 2) fail(ErrorKind::kConfig, "array needs at least two microphones");
  if (!(array_side > 0.0)) fail(ErrorKind::kConfig, "array side must be positive");
  if (orientations_deg.empty()) fail(ErrorKind::kConfig, "no array orientations given");
  if (signals_per_orientation < 1) fail(ErrorKind::kConfig, "signals per orientation must be >= 1");
  if (!room.contains(source)) fail(ErrorKind::kConfig, "source lies outside the room");
  for (double o : orientations_deg) {
    for (const auto& m : compact_array(centroid, num_mics, array_side, o * kDeg)) {
      if (!room.contains(m)) fail(ErrorKind::kConfig, "array microphone lies outside the room");
    }
  }
  for (const auto& a : aux_positions) {
    if (!room.contains(a)) fail(ErrorKind::kConfig, "auxiliary position lies outside the room");
  }
  if (drr_db && !std::isfinite(*drr_db)) fail(ErrorKind::kConfig, "DRR target must be finite");
  if (rsnr_db && !std::isfinite(*rsnr_db)) fail(ErrorKind::kConfig, "RSNR target must be finite");
  if (num_plane_waves < 64) fail(ErrorKind::kConfig, "at least 64 plane waves are required");
  if (!source_wav && !(signal_seconds >= 1.0)) {
    fail(ErrorKind::kConfig, "source signals must last at least 1 s");
  }
  if (!(srp.lambda >= 0.0 && srp.lambda < 1.0)) fail(ErrorKind::kConfig, "lambda must lie in [0, 1)");
  if (!(grid_resolution_deg > 0.0 && grid_resolution_deg <= 90.0)) {
    fail(ErrorKind::kConfig, "grid resolution must lie in (0, 90] degrees");
  }
  if (!(constants.speed_of_sound > 0.0)) fail(ErrorKind::kConfig, "speed of sound must be positive");
  if (threads == 0) fail(ErrorKind::kConfig, "threads must be at least 1");
}

std::vector<Position> aux_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                               double z, const Position& centroid, const RoomSpec& room,
                               double min_centroid_m, double min_wall_m) {
  std::vector<Position> out;
  const auto& d = room.dimensions;
  for (double y : ys) {
    for (double x : xs) {
      const Position p{x, y, z};
      if (std::hypot(x - centroid.x, y - centroid.y) < min_centroid_m) continue;
      const double wall = std::min({x, d.x - x, y, d.y - y, z, d.z - z});
      if (wall < min_wall_m) continue;
      out.push_back(p);
    }
  }
  return out;
}

double CampaignResult::fraction_reduced() const {
  if (reduced.empty()) return 0.0;
  std::size_t n = 0;
  for (bool r : reduced) n += r ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(reduced.size());
}

namespace {

struct Pose {
  std::vector<Position> mics;
  std::vector<Rir> rirs;
  std::optional<SteeringTable> steering;
};

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg, const std::optional<fs::path>& stems_dir) {
  cfg.validate();
  const double fs_hz = cfg.stft.sample_rate;
  const auto& c = cfg.constants;

  CampaignResult result;
  RoomSpec room = cfg.room;
  {
    const auto reference = compact_array(cfg.centroid, cfg.num_mics, cfg.array_side,
                                         cfg.orientations_deg.front() * kDeg);
    if (cfg.drr_db) {
      const auto cal = calibrate_reflection(room, reference, cfg.source, *cfg.drr_db, fs_hz,
                                            cfg.direct_window_ms, c);
      room = cal.room;
      result.calibrated_drr_db = cal.achieved_drr_db;
      result.calibration_iterations = cal.iterations;
    } else {
      double sum = 0.0;
      for (const auto& m : reference) {
        sum += rir_drr_db(ism_rir(room, cfg.source, m, fs_hz, c), cfg.direct_window_ms);
      }
      result.calibrated_drr_db = sum / static_cast<double>(reference.size());
    }
    result.reflection = room.reflection;
    result.t60_sabine = room.sabine_t60(c);
    result.t60_eyring = room.eyring_t60(c);
    if (room.reflection > 0.0) {
      const auto rir = ism_rir(room, cfg.source, reference.front(), fs_hz, c);
      result.t60_schroeder = schroeder_t60(rir.samples, fs_hz);
    }
  }

  // Auxiliary RIRs do not depend on the array pose.
  std::vector<Rir> aux_rirs(cfg.aux_positions.size());
  parallel_for(aux_rirs.size(), cfg.threads, [&](std::size_t a) {
    aux_rirs[a] = ism_rir(room, cfg.source, cfg.aux_positions[a], fs_hz, c);
  });

  const std::size_t num_bins = cfg.stft.num_bins();
  const double bin_spacing = 2.0 * std::numbers::pi * fs_hz / static_cast<double>(cfg.stft.frame_length);
  const auto azimuths = azimuth_grid(cfg.grid_resolution_deg);
  std::vector<Pose> poses(cfg.orientations_deg.size());
  parallel_for(poses.size(), cfg.threads, [&](std::size_t o) {
    Pose& p = poses[o];
    p.mics = compact_array(cfg.centroid, cfg.num_mics, cfg.array_side, cfg.orientations_deg[o] * kDeg);
    for (const auto& m : p.mics) p.rirs.push_back(ism_rir(room, cfg.source, m, fs_hz, c));
    p.rirs.insert(p.rirs.end(), aux_rirs.begin(), aux_rirs.end());
    p.steering.emplace(ArrayGeometry(p.mics), azimuths, default_band(num_bins), bin_spacing, c);
  });

  std::optional<SourceSignal> wav_source;
  if (cfg.source_wav) {
    wav_source = load_source_wav(*cfg.source_wav, fs_hz,
                                 cfg.signal_seconds > 0 ? std::optional(cfg.signal_seconds) : std::nullopt);
  }

  const std::size_t n_aux = cfg.aux_positions.size();
  result.scenarios.resize(cfg.num_scenarios());
  parallel_for(result.scenarios.size(), cfg.threads, [&](std::size_t s) {
    const std::size_t o = s / cfg.signals_per_orientation;
    ScenarioResult& r = result.scenarios[s];
    r.index = s;
    r.orientation_deg = cfg.orientations_deg[o];
    r.signal_index = s % cfg.signals_per_orientation;
    r.signal_seed = derive_seed(cfg.seed, {1, s});
    r.noise_seed = derive_seed(cfg.seed, {2, s});

    const SourceSignal signal =
        wav_source ? *wav_source : synth_speech(cfg.signal_seconds, fs_hz, r.signal_seed);

    SceneConfig scene;
    scene.room = room;
    scene.sample_rate = fs_hz;
    scene.source = cfg.source;
    scene.array_mics = poses[o].mics;
    scene.extra_mics = cfg.aux_positions;
    scene.target_drr_db = cfg.drr_db;
    scene.target_rsnr_db = cfg.rsnr_db;
    scene.num_plane_waves = cfg.num_plane_waves;
    scene.noise_spectrum = cfg.noise_spectrum;
    scene.noise_seed = r.noise_seed;
    scene.direct_window_ms = cfg.direct_window_ms;
    scene.constants = c;
    const ScenarioRender render = render_scenario(scene, signal.samples, poses[o].rirs);
    r.drr_db = render.drr_db;
    r.rsnr_db = render.rsnr_db;
    r.sur_db = render.sur_db;
    r.true_deg = render.source_doa.degrees();

    const Spectrogram spec = stft(render.mixed, cfg.stft);
    const SteeringTable& steering = *poses[o].steering;
    const auto base = srp_function(conventional_from_stft(spec, cfg.num_mics, cfg.srp), steering);
    const DoaVector base_doa = estimate_doa(base);
    r.baseline_deg = base_doa.degrees();
    r.baseline_error = doa_error(base_doa, render.source_doa);
    r.aux_deg.resize(n_aux);
    r.aux_error.resize(n_aux);
    for (std::size_t a = 0; a < n_aux; ++a) {
      const auto grid =
          srp_function(auxiliary_from_stft(spec, cfg.num_mics, cfg.num_mics + a, cfg.srp), steering);
      const DoaVector doa = estimate_doa(grid);
      r.aux_deg[a] = doa.degrees();
      r.aux_error[a] = doa_error(doa, render.source_doa);
    }

    if (stems_dir) {
      const std::string stem = "scenario_" + std::to_string(s);
      write_wav(*stems_dir / (stem + "_mixed.wav"), render.mixed, fs_hz);
      write_wav(*stems_dir / (stem + "_direct.wav"), render.direct, fs_hz);
      write_wav(*stems_dir / (stem + "_reverberant.wav"), render.reverberant, fs_hz);
      write_wav(*stems_dir / (stem + "_noise.wav"), render.noise, fs_hz);
    }
  });

  double base_sum = 0.0;
  result.aux_mean_error.assign(n_aux, 0.0);
  for (const auto& r : result.scenarios) {
    base_sum += r.baseline_error;
    for (std::size_t a = 0; a < n_aux; ++a) result.aux_mean_error[a] += r.aux_error[a];
  }
  const double n = static_cast<double>(result.scenarios.size());
  result.baseline_mean_error = base_sum / n;
  result.reduced.resize(n_aux);
  for (std::size_t a = 0; a < n_aux; ++a) {
    result.aux_mean_error[a] /= n;
    result.reduced[a] = result.aux_mean_error[a] < result.baseline_mean_error;
  }
  return result;
}

void write_campaign_csvs(const fs::path& out_dir, const CampaignConfig& cfg,
                         const CampaignResult& result) {
  constexpr int kP = 12;
  std::ostringstream sc;
  sc << "scenario,orientation_deg,signal,signal_seed,noise_seed,drr_db,rsnr_db,sur_db,mode,"
        "aux_index,aux_x,aux_y,aux_z,true_deg,estimate_deg,error_deg\n";
  for (const auto& r : result.scenarios) {
    auto prefix = [&](const char* mode) {
      sc << r.index << ',' << fmt(r.orientation_deg, 3) << ',' << r.signal_index << ','
         << r.signal_seed << ',' << r.noise_seed << ',' << fmt(r.drr_db, 6) << ','
         << (std::isfinite(r.rsnr_db) ? fmt(r.rsnr_db, 6) : std::string("inf")) << ','
         << fmt(r.sur_db, 6) << ',' << mode << ',';
    };
    prefix("conventional");
    sc << ",,,," << fmt(r.true_deg, kP) << ',' << fmt(r.baseline_deg, kP) << ','
       << fmt(r.baseline_error, kP) << '\n';
    for (std::size_t a = 0; a < r.aux_error.size(); ++a) {
      const auto& p = cfg.aux_positions[a];
      prefix("auxiliary");
      sc << a << ',' << fmt(p.x, 4) << ',' << fmt(p.y, 4) << ',' << fmt(p.z, 4) << ','
         << fmt(r.true_deg, kP) << ',' << fmt(r.aux_deg[a], kP) << ',' << fmt(r.aux_error[a], kP)
         << '\n';
    }
  }
  write_text(out_dir / "campaign_scenarios.csv", sc.str());

  std::ostringstream map;
  map << "x,y,value\n";
  std::ostringstream summary;
  summary << "aux_index,x,y,z,distance_to_centroid_m,mean_error_deg,baseline_mean_error_deg,"
             "reduced_error\n";
  for (std::size_t a = 0; a < cfg.aux_positions.size(); ++a) {
    const auto& p = cfg.aux_positions[a];
    map << fmt(p.x, 4) << ',' << fmt(p.y, 4) << ',' << fmt(result.aux_mean_error[a], kP) << '\n';
    summary << a << ',' << fmt(p.x, 4) << ',' << fmt(p.y, 4) << ',' << fmt(p.z, 4) << ','
            << fmt(distance(p, cfg.centroid), 4) << ',' << fmt(result.aux_mean_error[a], kP) << ','
            << fmt(result.baseline_mean_error, kP) << ','
            << (result.reduced[a] ? "true" : "false") << '\n';
  }
  write_text(out_dir / "campaign_map.csv", map.str());
  write_text(out_dir / "campaign_aux_summary.csv", summary.str());
}

namespace {

std::string campaign_metadata(const CampaignConfig& cfg, const CampaignResult& r) {
  std::ostringstream m;
  m << "command = campaign\n"
    << "seed = " << cfg.seed << '\n'
    << "room_dimensions_m = " << fmt_pos(cfg.room.dimensions) << '\n'
    << "source_m = " << fmt_pos(cfg.source) << '\n'
    << "array_centroid_m = " << fmt_pos(cfg.centroid) << '\n'
    << "array_mics = " << cfg.num_mics << '\n'
    << "array_side_m = " << fmt(cfg.array_side, 4) << '\n'
    << "orientations_deg = " << join(cfg.orientations_deg, 2) << '\n'
    << "signals_per_orientation = " << cfg.signals_per_orientation << '\n'
    << "scenarios = " << cfg.num_scenarios() << '\n'
    << "aux_positions = " << cfg.aux_positions.size() << '\n'
    << "source_signal = "
    << (cfg.source_wav ? cfg.source_wav->string() : std::string("synthetic-speech")) << '\n'
    << "signal_seconds = " << fmt(cfg.signal_seconds, 3) << '\n'
    << "target_drr_db = " << fmt_opt(cfg.drr_db, 3) << '\n'
    << "target_rsnr_db = " << fmt_opt(cfg.rsnr_db, 3) << '\n'
    << "direct_window_ms = " << fmt(cfg.direct_window_ms, 3) << '\n'
    << "plane_waves = " << cfg.num_plane_waves << '\n'
    << "noise_spectrum = " << to_string(cfg.noise_spectrum) << '\n'
    << "sample_rate_hz = " << fmt(cfg.stft.sample_rate, 1) << '\n'
    << "frame_length = " << cfg.stft.frame_length << '\n'
    << "hop = " << cfg.stft.hop << '\n'
    << "lambda = " << fmt(cfg.srp.lambda, 6) << '\n'
    << "phat_floor = " << cfg.srp.phat_floor << '\n'
    << "grid_resolution_deg = " << fmt(cfg.grid_resolution_deg, 4) << '\n'
    << "speed_of_sound_m_s = " << fmt(cfg.constants.speed_of_sound, 3) << '\n'
    << "reflection_coefficient = " << fmt(r.reflection, 9) << '\n'
    << "calibrated_mean_drr_db = " << fmt(r.calibrated_drr_db, 4) << '\n'
    << "calibration_iterations = " << r.calibration_iterations << '\n'
    << "t60_sabine_s = " << fmt(r.t60_sabine, 4) << '\n'
    << "t60_eyring_s = " << fmt(r.t60_eyring, 4) << '\n'
    << "t60_schroeder_s = " << fmt_opt(r.t60_schroeder, 4) << '\n';
  double drr = 0, rsnr = 0, sur = 0;
  for (const auto& s : r.scenarios) {
    drr += s.drr_db;
    rsnr += s.rsnr_db;
    sur += s.sur_db;
  }
  const double n = static_cast<double>(r.scenarios.size());
  m << "achieved_mean_drr_db = " << fmt(drr / n, 4) << '\n'
    << "achieved_mean_rsnr_db = " << (std::isfinite(rsnr) ? fmt(rsnr / n, 4) : "inf") << '\n'
    << "achieved_mean_sur_db = " << fmt(sur / n, 4) << '\n'
    << "baseline_mean_error_deg = " << fmt(r.baseline_mean_error, 6) << '\n'
    << "aux_positions_reduced_fraction = " << fmt(r.fraction_reduced(), 4) << '\n'
    << "kernels = " << kernels::active().name << '\n';
  return m.str();
}

}  // namespace

CampaignResult run_campaign_to_dir(const CampaignConfig& cfg, const fs::path& out_dir,
                                   bool dump_stems) {
  cfg.validate();
  ensure_directory(out_dir);
  DirectoryLock lock(out_dir / ".campaign.lock");
  std::optional<fs::path> stems;
  if (dump_stems) {
    stems = out_dir / "stems";
    ensure_directory(*stems);
  }
  CampaignResult result = run_campaign(cfg, stems);
  write_campaign_csvs(out_dir, cfg, result);
  write_text(out_dir / "run_metadata.txt", campaign_metadata(cfg, result));
  return result;
}

// --------------------------------------------------------------------- locate

void LocateConfig::validate() const {
  stft.validate();
  if (mics.size() < 2) fail(ErrorKind::kConfig, "locate needs at least two array microphones");
  if (!(grid_resolution_deg > 0.0 && grid_resolution_deg <= 90.0)) {
    fail(ErrorKind::kConfig, "grid resolution must lie in (0, 90] degrees");
  }
  if (!(srp.lambda >= 0.0 && srp.lambda < 1.0)) fail(ErrorKind::kConfig, "lambda must lie in [0, 1)");
}

LocateReport locate(const LocateConfig& cfg) {
  cfg.validate();
  const ArrayGeometry geometry(cfg.mics);
  WavData wav = read_wav(cfg.wav);
  const std::size_t m = cfg.mics.size();
  const std::size_t expected = cfg.mode == SrpMode::kAuxiliary ? m + 1 : m;
  if (wav.num_channels() != expected) {
    fail(ErrorKind::kConfig, cfg.wav.string() + " has " + std::to_string(wav.num_channels()) +
                                 " channels; " + std::to_string(expected) + " expected for " +
                                 to_string(cfg.mode) + " mode with " + std::to_string(m) +
                                 " array microphones");
  }
  if (std::abs(wav.sample_rate - cfg.stft.sample_rate) > 1e-6) {
    fail(ErrorKind::kConfig, cfg.wav.string() + ": sample rate " + fmt(wav.sample_rate, 0) +
                                 " Hz does not match the configured " +
                                 fmt(cfg.stft.sample_rate, 0) + " Hz");
  }
  const Spectrogram spec = stft(wav.channels, cfg.stft);
  LocateReport report;
  report.num_frames = spec.num_frames();
  report.spectra = cfg.mode == SrpMode::kAuxiliary ? auxiliary_from_stft(spec, m, m, cfg.srp)
                                                   : conventional_from_stft(spec, m, cfg.srp);
  report.grid = srp_function(report.spectra, geometry, cfg.grid_resolution_deg, std::nullopt,
                             cfg.constants);
  const DoaVector doa = estimate_doa(report.grid);
  report.estimate_deg = doa.degrees();
  if (cfg.truth_deg) report.error_deg = doa_error(doa, DoaVector::from_degrees(*cfg.truth_deg));
  return report;
}

std::string format_report(const LocateConfig& cfg, const LocateReport& r) {
  std::ostringstream s;
  s << "file = " << cfg.wav.string() << '\n'
    << "mode = " << to_string(cfg.mode) << '\n'
    << "array_mics = " << cfg.mics.size() << '\n'
    << "frames = " << r.num_frames << '\n'
    << "grid_resolution_deg = " << fmt(cfg.grid_resolution_deg, 4) << '\n'
    << "estimate_deg = " << fmt(r.estimate_deg, 4) << '\n';
  if (r.error_deg) s << "error_deg = " << fmt(*r.error_deg, 4) << '\n';
  s << "peak_value = " << fmt(r.grid.values[r.grid.argmax_index], 6) << '\n';
  const BinRange band = default_band(r.spectra.num_bins);
  for (std::size_t p = 0; p < r.spectra.pairs.size(); ++p) {
    const auto spectrum = r.spectra.pair(p);
    double mag = 0.0;
    cplx sum{};
    for (std::size_t k = band.first; k <= band.last; ++k) {
      mag += std::abs(spectrum[k]);
      sum += spectrum[k];
    }
    const auto n = static_cast<double>(band.size());
    s << "pair " << r.spectra.pairs[p].i << "-" << r.spectra.pairs[p].j
      << ": mean_magnitude = " << fmt(mag / n, 6) << ", coherent_magnitude = "
      << fmt(std::abs(sum) / n, 6) << '\n';
  }
  return s.str();
}

void write_srp_csv(const fs::path& path, const SrpGrid& grid) {
  std::ostringstream s;
  s << "azimuth_deg,srp\n";
  for (std::size_t i = 0; i < grid.azimuths.size(); ++i) {
    s << fmt(grid.azimuths[i] / kDeg, 4) << ',' << fmt(grid.values[i], 10) << '\n';
  }
  write_text(path, s.str());
}

// ------------------------------------------------------------------------ rir

void RirConfig::validate() const {
  room.validate();
  if (!(sample_rate > 0.0)) fail(ErrorKind::kConfig, "sample rate must be positive");
  if (!room.contains(source)) fail(ErrorKind::kConfig, "source lies outside the room");
  if (!room.contains(mic)) fail(ErrorKind::kConfig, "microphone lies outside the room");
  if (source == mic) fail(ErrorKind::kConfig, "source and microphone coincide");
  if (drr_db && !std::isfinite(*drr_db)) fail(ErrorKind::kConfig, "DRR target must be finite");
}

RirDump run_rir(const RirConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  ensure_directory(out_dir);
  RoomSpec room = cfg.room;
  if (cfg.drr_db) {
    room = calibrate_reflection(room, {cfg.mic}, cfg.source, *cfg.drr_db, cfg.sample_rate,
                                cfg.direct_window_ms, cfg.constants)
               .room;
  }
  RirDump d;
  d.rir = ism_rir(room, cfg.source, cfg.mic, cfg.sample_rate, cfg.constants);
  d.reflection = room.reflection;
  d.drr_db = rir_drr_db(d.rir, cfg.direct_window_ms);
  d.t60_sabine = room.sabine_t60(cfg.constants);
  d.t60_eyring = room.eyring_t60(cfg.constants);
  if (room.reflection > 0.0) d.t60_schroeder = schroeder_t60(d.rir.samples, cfg.sample_rate);

  write_wav(out_dir / "rir.wav", {d.rir.samples}, cfg.sample_rate, SampleFormat::kFloat32);
  std::ostringstream s;
  s << "sample_rate_hz = " << fmt(cfg.sample_rate, 1) << '\n'
    << "samples = " << d.rir.samples.size() << '\n'
    << "room_dimensions_m = " << fmt_pos(room.dimensions) << '\n'
    << "source_m = " << fmt_pos(cfg.source) << '\n'
    << "mic_m = " << fmt_pos(cfg.mic) << '\n'
    << "reflection_coefficient = " << fmt(d.reflection, 9) << '\n'
    << "target_drr_db = " << fmt_opt(cfg.drr_db, 3) << '\n'
    << "drr_db = " << fmt(d.drr_db, 4) << '\n'
    << "direct_window_ms = " << fmt(cfg.direct_window_ms, 3) << '\n'
    << "direct_index = " << d.rir.direct_index << '\n'
    << "t60_sabine_s = " << fmt(d.t60_sabine, 4) << '\n'
    << "t60_eyring_s = " << fmt(d.t60_eyring, 4) << '\n'
    << "t60_schroeder_s = " << fmt_opt(d.t60_schroeder, 4) << '\n'
    << "speed_of_sound_m_s = " << fmt(cfg.constants.speed_of_sound, 3) << '\n';
  write_text(out_dir / "rir.txt", s.str());
  return d;
}

}  // namespace auxsrp::harness
