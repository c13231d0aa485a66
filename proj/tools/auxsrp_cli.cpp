// Command-line front end: model-sweep, campaign, locate, rir.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "auxsrp/error.hpp"
#include "auxsrp/harness.hpp"
#include "auxsrp/kernels.hpp"

namespace fs = std::filesystem;
using namespace auxsrp;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCalibration = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCalibration: return kExitCalibration;
    case ErrorKind::kIo: return kExitIo;
    default: return kExitConfig;
  }
}

Position to_position(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) fail(ErrorKind::kConfig, std::string(what) + " needs three coordinates");
  return {v[0], v[1], v[2]};
}

// Config keys outside any [section] belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return items;
    for (auto& item : items) {
      if (item.parents.empty()) item.parents = {subs.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

struct Common {
  fs::path out_dir = "out";
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
}

struct RoomOpts {
  std::vector<double> dims{6.0, 6.0, 2.4};
  std::optional<double> reflection;
  std::optional<int> max_order;
  double speed_of_sound = 343.0;
};

void add_room(CLI::App* sub, RoomOpts& r) {
  sub->add_option("--room", r.dims, "Room dimensions x y z (m)")->expected(3)->capture_default_str();
  sub->add_option("--reflection", r.reflection,
                  "Wall reflection coefficient; skips DRR calibration");
  sub->add_option("--max-image-order", r.max_order, "Cap on reflections per image");
  sub->add_option("--speed-of-sound", r.speed_of_sound, "m/s")->capture_default_str();
}

RoomSpec make_room(const RoomOpts& r) {
  RoomSpec room;
  room.dimensions = to_position(r.dims, "--room");
  room.reflection = r.reflection.value_or(0.0);
  room.max_image_order = r.max_order;
  return room;
}

const std::map<std::string, TdoaModel> kTdoaModels{{"far-field", TdoaModel::kFarField},
                                                   {"exact-path", TdoaModel::kExactPath}};
const std::map<std::string, SrpMode> kModes{{"conventional", SrpMode::kConventional},
                                            {"auxiliary", SrpMode::kAuxiliary}};
const std::map<std::string, NoiseSpectrum> kNoiseSpectra{
    {"white", NoiseSpectrum::kWhite}, {"source-shaped", NoiseSpectrum::kSourceShaped}};

struct StftOpts {
  double sample_rate = 16000.0;
  std::size_t frame_length = 512;
  std::size_t hop = 256;
  double lambda = 0.98;
  double grid_res_deg = 1.0;
};

void add_stft(CLI::App* sub, StftOpts& s) {
  sub->add_option("--sample-rate", s.sample_rate, "Hz")->capture_default_str();
  sub->add_option("--frame-length", s.frame_length, "STFT frame length")->capture_default_str();
  sub->add_option("--hop", s.hop, "STFT hop")->capture_default_str();
  sub->add_option("--lambda", s.lambda, "Recursive averaging factor")->capture_default_str();
  sub->add_option("--grid-resolution-deg", s.grid_res_deg, "Azimuth grid step")
      ->capture_default_str();
}

StftConfig make_stft(const StftOpts& s) {
  StftConfig c;
  c.sample_rate = s.sample_rate;
  c.frame_length = s.frame_length;
  c.hop = s.hop;
  return c;
}

std::string describe_sweep(const harness::ModelSweepConfig& cfg, const Common& common,
                           const std::vector<harness::ModelSweepEntry>& entries) {
  std::ostringstream m;
  m << "command = model-sweep\nseed = " << common.seed << "\n";
  for (const auto& e : entries) {
    m << "sur_" << e.sur_db << "_db_csv = " << e.csv.filename().string() << "\n";
    m << "sur_" << e.sur_db << "_db_crossing_m = ";
    if (e.crossing_m) m << *e.crossing_m; else m << "none";
    m << "\n";
  }
  m << "d12_m = " << cfg.model.d12 << "\ndc_m = " << cfg.model.dc
    << "\nmax_frequency_hz = " << cfg.model.omega0 / (2.0 * std::numbers::pi)
    << "\nnum_frequencies = " << cfg.model.num_freqs
    << "\norientations = " << cfg.model.orientations_deg.size()
    << "\ntdoa_model = " << to_string(cfg.model.tdoa_model)
    << "\nspeed_of_sound_m_s = " << cfg.model.constants.speed_of_sound << "\n";
  return m.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auxiliary-microphone SRP-PHAT experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  // model-sweep
  Common sweep_common;
  harness::ModelSweepConfig sweep;
  double sweep_fmax = 8000.0;
  double orient_step = 10.0;
  std::size_t orient_count = 18;
  double speed = 343.0;
  std::string tdoa = "far-field";
  auto* sweep_cmd = app.add_subcommand("model-sweep", "Analytic P_avg maps over auxiliary positions");
  add_common(sweep_cmd, sweep_common);
  sweep_cmd->add_option("--sur-db", sweep.sur_db, "SUR values (dB)")->capture_default_str();
  sweep_cmd->add_option("--d12", sweep.model.d12, "Pair spacing (m)")->capture_default_str();
  sweep_cmd->add_option("--dc", sweep.model.dc, "Source distance (m)")->capture_default_str();
  sweep_cmd->add_option("--max-frequency-hz", sweep_fmax, "Upper frequency")->capture_default_str();
  sweep_cmd->add_option("--num-frequencies", sweep.model.num_freqs)->capture_default_str();
  sweep_cmd->add_option("--orientation-step-deg", orient_step)->capture_default_str();
  sweep_cmd->add_option("--num-orientations", orient_count)->capture_default_str();
  sweep_cmd->add_option("--x-min", sweep.grid.x_min)->capture_default_str();
  sweep_cmd->add_option("--x-max", sweep.grid.x_max)->capture_default_str();
  sweep_cmd->add_option("--y-min", sweep.grid.y_min)->capture_default_str();
  sweep_cmd->add_option("--y-max", sweep.grid.y_max)->capture_default_str();
  sweep_cmd->add_option("--grid-step", sweep.grid.step)->capture_default_str();
  sweep_cmd->add_option("--level", sweep.crossing_level, "Crossing level")->capture_default_str();
  sweep_cmd->add_option("--tdoa-model", tdoa)->check(CLI::IsMember({"far-field", "exact-path"}))
      ->capture_default_str();
  sweep_cmd->add_option("--speed-of-sound", speed, "m/s")->capture_default_str();

  // campaign
  Common camp_common;
  harness::CampaignConfig camp;
  RoomOpts camp_room;
  StftOpts camp_stft;
  std::vector<double> camp_source{2.0, 3.0, 1.75};
  std::vector<double> camp_centroid{4.0, 3.0, 1.75};
  std::vector<double> aux_x{0.75, 1.75, 2.75, 5.25};
  std::vector<double> aux_y{0.75, 2.25, 3.75, 5.25};
  double aux_z = 1.75;
  double aux_min_centroid = 1.0;
  double aux_min_wall = 0.5;
  double drr_db = -7.2;
  double rsnr_db = -7.2;
  bool noiseless = false;
  bool dump_stems = false;
  std::string noise_spectrum = "source-shaped";
  std::string source_wav;
  auto* camp_cmd = app.add_subcommand("campaign", "Simulated localization campaign");
  add_common(camp_cmd, camp_common);
  add_room(camp_cmd, camp_room);
  add_stft(camp_cmd, camp_stft);
  camp_cmd->add_option("--source", camp_source, "Source position (m)")->expected(3)
      ->capture_default_str();
  camp_cmd->add_option("--centroid", camp_centroid, "Array centroid (m)")->expected(3)
      ->capture_default_str();
  camp_cmd->add_option("--num-mics", camp.num_mics)->capture_default_str();
  camp_cmd->add_option("--array-side", camp.array_side, "Inter-microphone distance (m)")
      ->capture_default_str();
  camp_cmd->add_option("--orientations-deg", camp.orientations_deg)->capture_default_str();
  camp_cmd->add_option("--signals-per-orientation", camp.signals_per_orientation)
      ->capture_default_str();
  camp_cmd->add_option("--aux-x", aux_x, "Auxiliary grid x values (m)")->capture_default_str();
  camp_cmd->add_option("--aux-y", aux_y, "Auxiliary grid y values (m)")->capture_default_str();
  camp_cmd->add_option("--aux-z", aux_z)->capture_default_str();
  camp_cmd->add_option("--aux-min-centroid-distance", aux_min_centroid)->capture_default_str();
  camp_cmd->add_option("--aux-min-wall-distance", aux_min_wall)->capture_default_str();
  camp_cmd->add_option("--drr-db", drr_db, "Target mean array DRR")->capture_default_str();
  camp_cmd->add_option("--rsnr-db", rsnr_db, "Target mean array RSNR")->capture_default_str();
  camp_cmd->add_flag("--noiseless", noiseless, "Add no noise");
  camp_cmd->add_option("--noise-spectrum", noise_spectrum)
      ->check(CLI::IsMember({"white", "source-shaped"}))->capture_default_str();
  camp_cmd->add_option("--plane-waves", camp.num_plane_waves)->capture_default_str();
  camp_cmd->add_option("--signal-seconds", camp.signal_seconds)->capture_default_str();
  camp_cmd->add_option("--source-wav", source_wav, "Use this WAV instead of synthetic speech");
  camp_cmd->add_option("--direct-window-ms", camp.direct_window_ms)->capture_default_str();
  camp_cmd->add_flag("--dump-stems", dump_stems, "Write per-scenario WAV stems");

  // locate
  Common loc_common;
  loc_common.out_dir.clear();
  harness::LocateConfig loc;
  StftOpts loc_stft;
  std::string loc_wav;
  std::vector<double> loc_mics;
  std::vector<double> loc_centroid{0.0, 0.0, 0.0};
  std::size_t loc_num_mics = 3;
  double loc_side = 0.05;
  double loc_orient = 0.0;
  std::string loc_mode = "conventional";
  std::optional<double> truth;
  auto* loc_cmd = app.add_subcommand("locate", "Estimate the DOA in a multichannel WAV");
  add_common(loc_cmd, loc_common);
  add_stft(loc_cmd, loc_stft);
  loc_cmd->add_option("--wav", loc_wav, "Input WAV; the auxiliary channel comes last")->required();
  loc_cmd->add_option("--mics", loc_mics, "Array positions x1 y1 z1 x2 y2 z2 ...");
  loc_cmd->add_option("--centroid", loc_centroid, "Compact array centroid")->expected(3)
      ->capture_default_str();
  loc_cmd->add_option("--num-mics", loc_num_mics)->capture_default_str();
  loc_cmd->add_option("--array-side", loc_side)->capture_default_str();
  loc_cmd->add_option("--orientation-deg", loc_orient)->capture_default_str();
  loc_cmd->add_option("--mode", loc_mode)->check(CLI::IsMember({"conventional", "auxiliary"}))
      ->capture_default_str();
  loc_cmd->add_option("--truth-deg", truth, "True azimuth for the error report");
  double loc_speed = 343.0;
  loc_cmd->add_option("--speed-of-sound", loc_speed)->capture_default_str();

  // rir
  Common rir_common;
  harness::RirConfig rir;
  RoomOpts rir_room;
  std::vector<double> rir_source{2.0, 3.0, 1.75};
  std::vector<double> rir_mic{4.0, 3.0, 1.75};
  std::optional<double> rir_drr;
  auto* rir_cmd = app.add_subcommand("rir", "Write one (optionally calibrated) room impulse response");
  add_common(rir_cmd, rir_common);
  add_room(rir_cmd, rir_room);
  rir_cmd->add_option("--source", rir_source)->expected(3)->capture_default_str();
  rir_cmd->add_option("--mic", rir_mic)->expected(3)->capture_default_str();
  rir_cmd->add_option("--drr-db", rir_drr, "Calibrate the reflection coefficient to this DRR");
  rir_cmd->add_option("--sample-rate", rir.sample_rate)->capture_default_str();
  rir_cmd->add_option("--direct-window-ms", rir.direct_window_ms)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    if (*sweep_cmd) {
      sweep.threads = sweep_common.threads;
      sweep.model.omega0 = 2.0 * std::numbers::pi * sweep_fmax;
      sweep.model.orientations_deg.clear();
      for (std::size_t i = 0; i < orient_count; ++i) {
        sweep.model.orientations_deg.push_back(orient_step * static_cast<double>(i));
      }
      sweep.model.tdoa_model = kTdoaModels.at(tdoa);
      sweep.model.constants.speed_of_sound = speed;
      const auto entries = harness::run_model_sweep(sweep, sweep_common.out_dir);
      harness::write_text(sweep_common.out_dir / "run_metadata.txt",
                          describe_sweep(sweep, sweep_common, entries));
      for (const auto& e : entries) {
        std::cout << "SUR " << e.sur_db << " dB: " << e.csv.string() << ", 0.5 crossing ";
        if (e.crossing_m) std::cout << *e.crossing_m << " m\n"; else std::cout << "none\n";
      }
    } else if (*camp_cmd) {
      camp.room = make_room(camp_room);
      camp.constants.speed_of_sound = camp_room.speed_of_sound;
      camp.source = to_position(camp_source, "--source");
      camp.centroid = to_position(camp_centroid, "--centroid");
      camp.aux_positions = harness::aux_grid(aux_x, aux_y, aux_z, camp.centroid, camp.room,
                                             aux_min_centroid, aux_min_wall);
      camp.drr_db = camp_room.reflection ? std::nullopt : std::optional(drr_db);
      camp.rsnr_db = noiseless ? std::nullopt : std::optional(rsnr_db);
      camp.noise_spectrum = kNoiseSpectra.at(noise_spectrum);
      if (!source_wav.empty()) camp.source_wav = source_wav;
      camp.stft = make_stft(camp_stft);
      camp.srp.lambda = camp_stft.lambda;
      camp.grid_resolution_deg = camp_stft.grid_res_deg;
      camp.seed = camp_common.seed;
      camp.threads = camp_common.threads;
      const auto r = harness::run_campaign_to_dir(camp, camp_common.out_dir, dump_stems);
      std::cout << "reflection " << r.reflection << ", T60 (Sabine) " << r.t60_sabine
                << " s, baseline mean error " << r.baseline_mean_error << " deg, "
                << r.aux_mean_error.size() << " aux positions, fraction reduced "
                << r.fraction_reduced() << "\n";
    } else if (*loc_cmd) {
      loc.wav = loc_wav;
      if (!loc_mics.empty()) {
        if (loc_mics.size() % 3 != 0) fail(ErrorKind::kConfig, "--mics needs x y z triples");
        for (std::size_t i = 0; i < loc_mics.size(); i += 3) {
          loc.mics.push_back({loc_mics[i], loc_mics[i + 1], loc_mics[i + 2]});
        }
      } else {
        loc.mics = compact_array(to_position(loc_centroid, "--centroid"), loc_num_mics, loc_side,
                                 loc_orient * std::numbers::pi / 180.0);
      }
      loc.mode = kModes.at(loc_mode);
      loc.truth_deg = truth;
      loc.stft = make_stft(loc_stft);
      loc.srp.lambda = loc_stft.lambda;
      loc.grid_resolution_deg = loc_stft.grid_res_deg;
      loc.constants.speed_of_sound = loc_speed;
      const auto report = harness::locate(loc);
      const std::string text = harness::format_report(loc, report);
      std::cout << text;
      if (!loc_common.out_dir.empty()) {
        harness::ensure_directory(loc_common.out_dir);
        harness::write_text(loc_common.out_dir / "locate_report.txt", text);
        harness::write_srp_csv(loc_common.out_dir / "srp_grid.csv", report.grid);
      }
    } else if (*rir_cmd) {
      rir.room = make_room(rir_room);
      rir.constants.speed_of_sound = rir_room.speed_of_sound;
      rir.source = to_position(rir_source, "--source");
      rir.mic = to_position(rir_mic, "--mic");
      rir.drr_db = rir_room.reflection ? std::nullopt : rir_drr;
      const auto d = harness::run_rir(rir, rir_common.out_dir);
      std::cout << "reflection " << d.reflection << ", DRR " << d.drr_db << " dB, "
                << d.rir.samples.size() << " samples -> " << (rir_common.out_dir / "rir.wav").string()
                << "\n";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "done in " << secs << " s (kernels: " << kernels::active().name << ")\n";
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
