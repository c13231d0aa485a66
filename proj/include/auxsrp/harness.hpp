#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "auxsrp/core.hpp"
#include "auxsrp/model.hpp"
#include "auxsrp/sim.hpp"
#include "auxsrp/spectral.hpp"
#include "auxsrp/srp.hpp"

namespace auxsrp::harness {

// Runs fn(0) .. fn(count - 1) on up to `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn);

// ---------------------------------------------------------------- model sweep

struct ModelSweepConfig {
  std::vector<double> sur_db{10.0, 0.0};
  DistortionConfig model;  // sur_db is overwritten per sweep
  GridSpec grid;
  double crossing_level = 0.5;
  double crossing_step = 0.01;
  double crossing_max = 3.0;
  unsigned threads = 1;

  void validate() const;
};

struct ModelSweepEntry {
  double sur_db = 0.0;
  PMap map;
  std::optional<double> crossing_m;
  std::filesystem::path csv;
};

// One PMap CSV plus metadata per SUR, and crossings.csv.
std::vector<ModelSweepEntry> run_model_sweep(const ModelSweepConfig& cfg,
                                             const std::filesystem::path& out_dir);

// ------------------------------------------------------------------- campaign

struct CampaignConfig {
  RoomSpec room;  // room.reflection is used as-is when drr_db is empty
  Position source{2.0, 3.0, 1.75};
  Position centroid{4.0, 3.0, 1.75};
  std::size_t num_mics = 3;
  double array_side = 0.05;
  std::vector<double> orientations_deg{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110};
  std::size_t signals_per_orientation = 1;
  std::vector<Position> aux_positions;

  std::optional<double> drr_db = -7.2;
  std::optional<double> rsnr_db = -7.2;
  double direct_window_ms = kDefaultDirectWindowMs;
  std::size_t num_plane_waves = 1024;
  NoiseSpectrum noise_spectrum = NoiseSpectrum::kSourceShaped;

  double signal_seconds = 3.0;
  std::optional<std::filesystem::path> source_wav;

  StftConfig stft;
  SrpOptions srp;
  double grid_resolution_deg = 1.0;
  AcousticConstants constants;

  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
  std::size_t num_scenarios() const { return orientations_deg.size() * signals_per_orientation; }
};

// Grid of auxiliary positions at height z, keeping only points at least
// min_centroid_m from `centroid` (in the x-y plane) and min_wall_m from every
// wall of `room`.
std::vector<Position> aux_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                               double z, const Position& centroid, const RoomSpec& room,
                               double min_centroid_m, double min_wall_m);

struct ScenarioResult {
  std::size_t index = 0;
  double orientation_deg = 0.0;
  std::size_t signal_index = 0;
  std::uint64_t signal_seed = 0;
  std::uint64_t noise_seed = 0;
  double drr_db = 0.0;
  double rsnr_db = 0.0;
  double sur_db = 0.0;
  double true_deg = 0.0;
  double baseline_deg = 0.0;
  double baseline_error = 0.0;
  std::vector<double> aux_deg;    // per aux position
  std::vector<double> aux_error;  // per aux position
};

struct CampaignResult {
  double reflection = 0.0;
  double calibrated_drr_db = 0.0;
  int calibration_iterations = 0;
  double t60_sabine = 0.0;
  double t60_eyring = 0.0;
  std::optional<double> t60_schroeder;
  std::vector<ScenarioResult> scenarios;
  double baseline_mean_error = 0.0;
  std::vector<double> aux_mean_error;
  // Aux position lowered the mean error below the baseline.
  std::vector<bool> reduced;

  double fraction_reduced() const;
};

// Renders every (orientation, signal) scenario once, estimates the
// conventional DOA once per scenario and the auxiliary DOA for every aux
// position. When stems_dir is set, per-scenario stems are written there.
CampaignResult run_campaign(const CampaignConfig& cfg,
                            const std::optional<std::filesystem::path>& stems_dir = std::nullopt);

// campaign_scenarios.csv, campaign_map.csv, campaign_aux_summary.csv and
// run_metadata.txt. Claims out_dir with a lock file for the duration.
CampaignResult run_campaign_to_dir(const CampaignConfig& cfg, const std::filesystem::path& out_dir,
                                   bool dump_stems);

void write_campaign_csvs(const std::filesystem::path& out_dir, const CampaignConfig& cfg,
                         const CampaignResult& result);

// Creates `path` exclusively; removes it on destruction.
class DirectoryLock {
 public:
  explicit DirectoryLock(std::filesystem::path path);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

// --------------------------------------------------------------------- locate

struct LocateConfig {
  std::filesystem::path wav;
  std::vector<Position> mics;
  SrpMode mode = SrpMode::kConventional;
  std::optional<double> truth_deg;
  StftConfig stft;
  SrpOptions srp;
  double grid_resolution_deg = 1.0;
  AcousticConstants constants;

  void validate() const;
};

struct LocateReport {
  double estimate_deg = 0.0;
  std::optional<double> error_deg;
  SrpGrid grid;
  SrpSpectra spectra;
  std::size_t num_frames = 0;
};

LocateReport locate(const LocateConfig& cfg);
std::string format_report(const LocateConfig& cfg, const LocateReport& report);
void write_srp_csv(const std::filesystem::path& path, const SrpGrid& grid);

// ------------------------------------------------------------------------ rir

struct RirConfig {
  RoomSpec room;
  Position source{2.0, 3.0, 1.75};
  Position mic{4.0, 3.0, 1.75};
  // Calibrates the reflection coefficient at `mic` when set.
  std::optional<double> drr_db;
  double sample_rate = 16000.0;
  double direct_window_ms = kDefaultDirectWindowMs;
  AcousticConstants constants;

  void validate() const;
};

struct RirDump {
  Rir rir;
  double reflection = 0.0;
  double drr_db = 0.0;
  double t60_sabine = 0.0;
  double t60_eyring = 0.0;
  std::optional<double> t60_schroeder;
};

// rir.wav (float32) and rir.txt.
RirDump run_rir(const RirConfig& cfg, const std::filesystem::path& out_dir);

// Writes text, mapping failures to Error(kIo) with the path.
void write_text(const std::filesystem::path& path, const std::string& text);
void ensure_directory(const std::filesystem::path& dir);

}  // namespace auxsrp::harness

#include "auxsrp/detail/parallel.hpp"
