#include "auxsrp/srp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "auxsrp/error.hpp"
#include "auxsrp/kernels.hpp"

namespace auxsrp {
namespace {

// Frame l of the stored pair (i, j), conjugating when only (j, i) is present.
class PairView {
 public:
  PairView(const CrossSpectrumSet& cs, std::size_t i, std::size_t j) : cs_(cs) {
    if (auto p = cs.find(i, j)) {
      index_ = *p;
    } else if (auto q = cs.find(j, i)) {
      index_ = *q;
      conjugate_ = true;
    } else {
      fail(ErrorKind::kInvalidInput, "cross-spectrum set lacks pair (" + std::to_string(i) +
                                         ", " + std::to_string(j) + ")");
    }
  }

  void copy_frame(std::size_t l, std::vector<cplx>& out) const {
    const auto f = cs_.frame(index_, l);
    out.assign(f.begin(), f.end());
    if (conjugate_) {
      for (auto& z : out) z = std::conj(z);
    }
  }

 private:
  const CrossSpectrumSet& cs_;
  std::size_t index_ = 0;
  bool conjugate_ = false;
};

void require_phat(const CrossSpectrumSet& cs) {
  if (!cs.phat_weighted()) fail(ErrorKind::kInvalidInput, "SRP spectra need PHAT-weighted input");
  if (cs.num_frames() == 0) fail(ErrorKind::kInvalidInput, "SRP spectra need at least one frame");
}

SrpSpectra make_spectra(SrpMode mode, std::size_t num_mics, const CrossSpectrumSet& cs) {
  if (num_mics < 2) fail(ErrorKind::kInvalidInput, "need at least two array microphones");
  SrpSpectra out;
  out.mode = mode;
  out.pairs = array_pairs(num_mics);
  out.num_bins = cs.num_bins();
  out.bin_spacing = cs.bin_spacing();
  out.values.assign(out.pairs.size() * out.num_bins, cplx{});
  return out;
}

void divide_by_frames(SrpSpectra& s, std::size_t frames) {
  const double inv = 1.0 / static_cast<double>(frames);
  for (auto& z : s.values) z *= inv;
}

}  // namespace

const char* to_string(SrpMode mode) {
  return mode == SrpMode::kConventional ? "conventional" : "auxiliary";
}

SrpSpectra conventional_spectra(const CrossSpectrumSet& phat, std::size_t num_mics) {
  require_phat(phat);
  SrpSpectra out = make_spectra(SrpMode::kConventional, num_mics, phat);
  std::vector<cplx> buf;
  for (std::size_t p = 0; p < out.pairs.size(); ++p) {
    const PairView view(phat, out.pairs[p].i, out.pairs[p].j);
    auto acc = out.pair(p);
    for (std::size_t l = 0; l < phat.num_frames(); ++l) {
      view.copy_frame(l, buf);
      for (std::size_t k = 0; k < buf.size(); ++k) acc[k] += buf[k];
    }
  }
  divide_by_frames(out, phat.num_frames());
  return out;
}

SrpSpectra auxiliary_spectra(const CrossSpectrumSet& phat, std::size_t num_mics,
                             std::size_t aux_channel) {
  require_phat(phat);
  if (aux_channel < num_mics) {
    fail(ErrorKind::kInvalidInput, "auxiliary channel index overlaps the array channels");
  }
  bool has_aux = false;
  for (const auto& pr : phat.pairs()) has_aux = has_aux || pr.i == aux_channel || pr.j == aux_channel;
  if (!has_aux) fail(ErrorKind::kInvalidInput, "no auxiliary channel in the cross-spectrum set");

  SrpSpectra out = make_spectra(SrpMode::kAuxiliary, num_mics, phat);
  const auto& kt = kernels::active();
  std::vector<PairView> to_aux;
  for (std::size_t m = 0; m < num_mics; ++m) to_aux.emplace_back(phat, m, aux_channel);

  const std::size_t bins = phat.num_bins();
  std::vector<std::vector<cplx>> frame_aux(num_mics);
  std::vector<cplx> product(bins);
  for (std::size_t l = 0; l < phat.num_frames(); ++l) {
    for (std::size_t m = 0; m < num_mics; ++m) to_aux[m].copy_frame(l, frame_aux[m]);
    for (std::size_t p = 0; p < out.pairs.size(); ++p) {
      const auto [i, j] = out.pairs[p];
      // psi_iA * psi_Aj with psi_Aj = conj(psi_jA)
      kt.cross_product(product.data(), frame_aux[i].data(), frame_aux[j].data(), bins);
      auto acc = out.pair(p);
      for (std::size_t k = 0; k < bins; ++k) acc[k] += product[k];
    }
  }
  divide_by_frames(out, phat.num_frames());
  return out;
}

BinRange default_band(std::size_t num_bins) {
  if (num_bins < 2) fail(ErrorKind::kInvalidInput, "need at least two bins");
  return {1, num_bins - 1};
}

std::vector<double> azimuth_grid(double resolution_deg) {
  if (!(resolution_deg > 0.0) || resolution_deg > 360.0) {
    fail(ErrorKind::kConfig, "azimuth resolution must lie in (0, 360] degrees");
  }
  const auto n = static_cast<std::size_t>(std::llround(360.0 / resolution_deg));
  std::vector<double> az(std::max<std::size_t>(n, 1));
  for (std::size_t k = 0; k < az.size(); ++k) {
    az[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(az.size());
  }
  return az;
}

SteeringTable::SteeringTable(const ArrayGeometry& geometry, std::vector<double> azimuths,
                             BinRange band, double bin_spacing, const AcousticConstants& c)
    : azimuths_(std::move(azimuths)),
      pairs_(geometry.pairs()),
      band_(band),
      bin_spacing_(bin_spacing) {
  if (band_.size() == 0) fail(ErrorKind::kInvalidInput, "empty frequency band");
  if (azimuths_.empty()) fail(ErrorKind::kInvalidInput, "empty azimuth grid");
  table_.resize(azimuths_.size() * pairs_.size() * band_.size());
  auto* out = table_.data();
  for (const double theta : azimuths_) {
    const auto v = DoaVector::from_azimuth(theta);
    for (const auto& pr : pairs_) {
      const double tau = tdoa(geometry, pr.i, pr.j, v, c);
      for (std::size_t k = band_.first; k <= band_.last; ++k) {
        *out++ = std::polar(1.0, static_cast<double>(k) * bin_spacing_ * tau);
      }
    }
  }
}

SrpGrid srp_function(const SrpSpectra& spectra, const SteeringTable& steering) {
  const auto& band = steering.band();
  if (band.size() == 0) fail(ErrorKind::kInvalidInput, "empty frequency band");
  if (band.last >= spectra.num_bins) {
    fail(ErrorKind::kInvalidInput, "band exceeds the spectrum's bins");
  }
  if (spectra.pairs != steering.pairs()) {
    fail(ErrorKind::kInvalidInput, "spectra and steering table cover different pairs");
  }
  const auto& kt = kernels::active();
  SrpGrid grid;
  grid.azimuths = steering.azimuths();
  grid.values.resize(grid.azimuths.size());
  for (std::size_t a = 0; a < grid.azimuths.size(); ++a) {
    double phi = 0.0;
    for (std::size_t p = 0; p < spectra.pairs.size(); ++p) {
      const cplx* psi = spectra.pair(p).data() + band.first;
      phi += 2.0 * kt.real_dot(psi, steering.row(a, p).data(), band.size());
    }
    grid.values[a] = phi;
    if (phi > grid.values[grid.argmax_index]) grid.argmax_index = a;
  }
  return grid;
}

SrpGrid srp_function(const SrpSpectra& spectra, const ArrayGeometry& geometry,
                     double resolution_deg, std::optional<BinRange> band,
                     const AcousticConstants& c) {
  const SteeringTable table(geometry, azimuth_grid(resolution_deg),
                            band.value_or(default_band(spectra.num_bins)), spectra.bin_spacing, c);
  return srp_function(spectra, table);
}

DoaVector estimate_doa(const SrpGrid& grid) {
  if (grid.values.empty()) fail(ErrorKind::kInvalidInput, "empty SRP grid");
  std::size_t best = 0;
  for (std::size_t a = 1; a < grid.values.size(); ++a) {
    if (grid.values[a] > grid.values[best]) best = a;
  }
  return DoaVector::from_azimuth(grid.azimuths[best]);
}

SrpSpectra conventional_from_stft(const Spectrogram& spec, std::size_t num_mics,
                                  const SrpOptions& opt) {
  const auto cs = recursive_cross_psd(spec, array_pairs(num_mics), opt.lambda);
  return conventional_spectra(phat_weight(cs, opt.phat_floor), num_mics);
}

SrpSpectra auxiliary_from_stft(const Spectrogram& spec, std::size_t num_mics,
                               std::size_t aux_channel, const SrpOptions& opt) {
  std::vector<ChannelPair> pairs;
  for (std::size_t m = 0; m < num_mics; ++m) pairs.push_back({m, aux_channel});
  const auto cs = recursive_cross_psd(spec, std::move(pairs), opt.lambda);
  return auxiliary_spectra(phat_weight(cs, opt.phat_floor), num_mics, aux_channel);
}

}  // namespace auxsrp
