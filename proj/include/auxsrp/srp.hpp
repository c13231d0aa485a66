#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "auxsrp/core.hpp"
#include "auxsrp/spectral.hpp"

namespace auxsrp {

enum class SrpMode { kConventional, kAuxiliary };

const char* to_string(SrpMode mode);

// Time-averaged PHAT spectra for every array pair (i > j), [pair][bin].
struct SrpSpectra {
  SrpMode mode = SrpMode::kConventional;
  std::vector<ChannelPair> pairs;
  std::size_t num_bins = 0;
  double bin_spacing = 0.0;  // rad/s
  std::vector<cplx> values;

  std::span<const cplx> pair(std::size_t p) const {
    return {values.data() + p * num_bins, num_bins};
  }
  std::span<cplx> pair(std::size_t p) { return {values.data() + p * num_bins, num_bins}; }
};

// Frame mean of PHAT-weighted array cross-spectra. The mean is not
// re-normalized. Pairs may be stored as (i, j) or (j, i).
SrpSpectra conventional_spectra(const CrossSpectrumSet& phat, std::size_t num_mics);

// Spectra between array microphones routed through the auxiliary channel:
// per frame psi_iA * conj(psi_jA) for every array pair i > j, then the frame
// mean. `phat` must hold the PHAT-weighted pairs (i, A) or (A, i).
SrpSpectra auxiliary_spectra(const CrossSpectrumSet& phat, std::size_t num_mics,
                             std::size_t aux_channel);

// Inclusive bin range entering the SRP sum.
struct BinRange {
  std::size_t first = 1;
  std::size_t last = 0;
  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
};

// Bins 1 .. num_bins - 1: DC is excluded, Nyquist included.
BinRange default_band(std::size_t num_bins);

// Azimuths k * 360 / n degrees, k = 0 .. n-1, in radians.
std::vector<double> azimuth_grid(double resolution_deg);

// exp(j omega_k tau_ij(theta)) for every (azimuth, pair, bin in band). Depends
// only on the geometry and grids, so campaigns build it once per array pose.
class SteeringTable {
 public:
  SteeringTable(const ArrayGeometry& geometry, std::vector<double> azimuths, BinRange band,
                double bin_spacing, const AcousticConstants& c = {});

  const std::vector<double>& azimuths() const { return azimuths_; }
  const std::vector<ChannelPair>& pairs() const { return pairs_; }
  const BinRange& band() const { return band_; }
  double bin_spacing() const { return bin_spacing_; }
  std::span<const cplx> row(std::size_t azimuth, std::size_t pair) const {
    return {table_.data() + (azimuth * pairs_.size() + pair) * band_.size(), band_.size()};
  }

 private:
  std::vector<double> azimuths_;
  std::vector<ChannelPair> pairs_;
  BinRange band_;
  double bin_spacing_;
  std::vector<cplx> table_;
};

struct SrpGrid {
  std::vector<double> azimuths;  // rad
  std::vector<double> values;
  std::size_t argmax_index = 0;
};

// phi(theta) = sum_pairs sum_{k in band} 2 Re{psi_ij[k] exp(j omega_k tau_ij(theta))}
SrpGrid srp_function(const SrpSpectra& spectra, const SteeringTable& steering);
SrpGrid srp_function(const SrpSpectra& spectra, const ArrayGeometry& geometry,
                     double resolution_deg, std::optional<BinRange> band = std::nullopt,
                     const AcousticConstants& c = {});

// Grid maximizer; ties resolve to the smallest azimuth.
DoaVector estimate_doa(const SrpGrid& grid);

struct SrpOptions {
  double lambda = 0.98;
  double phat_floor = kDefaultPhatFloor;
};

// STFT -> recursive cross-PSD -> PHAT -> frame mean, over array channels
// 0 .. num_mics-1.
SrpSpectra conventional_from_stft(const Spectrogram& spec, std::size_t num_mics,
                                  const SrpOptions& opt = {});
SrpSpectra auxiliary_from_stft(const Spectrogram& spec, std::size_t num_mics,
                               std::size_t aux_channel, const SrpOptions& opt = {});

}  // namespace auxsrp
