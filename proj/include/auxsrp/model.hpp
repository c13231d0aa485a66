#pragma once

// Distortion of PHAT spectra by a spherically isotropic undesired field, with
// and without routing through an auxiliary microphone.
//
// Model frame: the array centroid sits at the origin and the source at
// (-dc, 0, 0), so the source DOA is 180 degrees. A two-microphone array with
// orientation alpha has m_i = (d12/2) [cos alpha, sin alpha, 0] and m_j = -m_i.
// Auxiliary positions are given in the same frame.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <numbers>
#include <optional>
#include <vector>

#include "auxsrp/core.hpp"

namespace auxsrp {

enum class TdoaModel {
  kFarField,   // tau_xy = -v_s^T (m_x - m_y) / c
  kExactPath,  // tau_xy = (|s - m_x| - |s - m_y|) / c
};

const char* to_string(TdoaModel m);

struct DistortionConfig {
  double sur_db = 10.0;
  double d12 = 0.05;
  double dc = 2.0;
  double omega0 = 2.0 * std::numbers::pi * 8000.0;
  std::size_t num_freqs = 1025;
  std::vector<double> orientations_deg = default_orientations();
  AcousticConstants constants{};
  TdoaModel tdoa_model = TdoaModel::kFarField;

  double sur_linear() const;
  // Uniform samples on [0, omega0], endpoints included.
  std::vector<double> frequencies() const;
  void validate() const;

  // 0, 10, ..., 170 degrees.
  static std::vector<double> default_orientations();
};

// sin(x) / x with sinc(0) = 1.
double sinc(double x);

// Spatial coherence of a spherically isotropic field, sinc(omega d / c).
double isotropic_coherence(double omega, double d, const AcousticConstants& c = {});

struct ModelScene {
  Position source;
  Position mic_i;
  Position mic_j;
  Position aux;
};

ModelScene model_scene(const Position& aux, double orientation_rad, const DistortionConfig& cfg);

// Distances and TDOAs entering the auxiliary distortion.
struct AuxLinkGeometry {
  double d_a = 0.0;   // source to auxiliary
  double d_ai = 0.0;  // auxiliary to mic i
  double d_aj = 0.0;  // auxiliary to mic j
  double tau_ia = 0.0;
  double tau_aj = 0.0;
};

AuxLinkGeometry aux_link_geometry(const ModelScene& scene, const DistortionConfig& cfg);

// D_ij(omega) = (xi dc)^2 / SUR * sinc(omega d12 / c)
std::complex<double> distortion_conventional(double omega, const DistortionConfig& cfg);

// D^A_ij(omega) = a [sinc(w d_Ai/c) e^{-j w tau_Aj} + sinc(w d_Aj/c) e^{-j w tau_iA}]
//               + a^2 sinc(w d_Ai/c) sinc(w d_Aj/c),   a = xi^2 dc d_A / SUR
std::complex<double> distortion_auxiliary(double omega, const AuxLinkGeometry& g,
                                          const DistortionConfig& cfg);

// Fraction of the frequency samples where |D_ij| > |D^A_ij| (strictly).
// Throws Error(kDegenerateGeometry) when the auxiliary microphone coincides
// with one of the pair's microphones.
double proportion_p(const Position& aux, double orientation_rad, const DistortionConfig& cfg);

// Mean of proportion_p over cfg.orientations_deg.
double p_avg(const Position& aux, const DistortionConfig& cfg);

struct GridSpec {
  double x_min = -2.0, x_max = 2.0;
  double y_min = -2.0, y_max = 2.0;
  double step = 0.1;

  std::vector<double> xs() const;
  std::vector<double> ys() const;
};

struct PMap {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> p_avg;  // row-major [iy][ix]
  std::vector<double> contour_levels{0.5, 0.9};

  double at(std::size_t ix, std::size_t iy) const { return p_avg[iy * xs.size() + ix]; }
};

// Cells that put the auxiliary microphone on top of an array microphone for
// some orientation are evaluated with the closed form rather than rejected;
// the distortion is finite there.
PMap p_avg_sweep(const GridSpec& grid, const DistortionConfig& cfg, unsigned threads = 1);

// Distance along the ray from the centroid directly away from the source where
// P_avg first rises through `level`, linearly interpolated between samples
// spaced `step` apart. Empty if no crossing occurs before `max_distance`.
std::optional<double> crossing_distance(const DistortionConfig& cfg, double level = 0.5,
                                        double step = 0.01, double max_distance = 3.0);

// CSV with header "x,y,p_avg", one row per cell.
void write_pmap_csv(const std::filesystem::path& path, const PMap& map);
void write_pmap_metadata(const std::filesystem::path& path, const PMap& map,
                         const GridSpec& grid, const DistortionConfig& cfg);

}  // namespace auxsrp
