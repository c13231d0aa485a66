#include "auxsrp/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auxsrp/error.hpp"

namespace auxsrp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIndex: return "index error";
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kDegenerateGeometry: return "degenerate geometry";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kCalibration: return "calibration error";
    case ErrorKind::kIo: return "I/O error";
  }
  return "error";
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

bool Vec3::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double distance(const Position& a, const Position& b) { return (a - b).norm(); }

std::vector<ChannelPair> array_pairs(std::size_t num_mics) {
  std::vector<ChannelPair> pairs;
  for (std::size_t i = 1; i < num_mics; ++i) {
    for (std::size_t j = 0; j < i; ++j) pairs.push_back({i, j});
  }
  return pairs;
}

ArrayGeometry::ArrayGeometry(std::vector<Position> mics, std::optional<Position> aux)
    : mics_(std::move(mics)), aux_(aux) {
  if (mics_.size() < 2) {
    fail(ErrorKind::kInvalidInput, "array needs at least two microphones");
  }
  for (const auto& m : mics_) {
    if (!m.finite()) fail(ErrorKind::kInvalidInput, "non-finite microphone position");
    centroid_ = centroid_ + m;
  }
  centroid_ = (1.0 / static_cast<double>(mics_.size())) * centroid_;
  for (std::size_t i = 1; i < mics_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(mics_[i], mics_[j]) <= 0.0) {
        fail(ErrorKind::kDegenerateGeometry,
             "microphones " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  if (aux_) {
    if (!aux_->finite()) fail(ErrorKind::kInvalidInput, "non-finite auxiliary position");
    for (const auto& m : mics_) {
      if (distance(*aux_, m) <= 0.0) {
        fail(ErrorKind::kDegenerateGeometry, "auxiliary microphone coincides with an array microphone");
      }
    }
  }
}

const Position& ArrayGeometry::mic(std::size_t i) const {
  if (i >= mics_.size()) {
    fail(ErrorKind::kIndex, "microphone index " + std::to_string(i) + " out of range");
  }
  return mics_[i];
}

double ArrayGeometry::pair_distance(std::size_t i, std::size_t j) const {
  return distance(mic(i), mic(j));
}

double wrap_angle(double rad) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(rad, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

DoaVector::DoaVector(double azimuth_rad)
    : azimuth_(wrap_angle(azimuth_rad)),
      v_{std::cos(azimuth_rad), std::sin(azimuth_rad), 0.0} {}

DoaVector DoaVector::from_azimuth(double azimuth_rad) { return DoaVector(azimuth_rad); }

DoaVector DoaVector::from_degrees(double azimuth_deg) {
  return DoaVector(azimuth_deg * std::numbers::pi / 180.0);
}

DoaVector DoaVector::towards(const Position& origin, const Position& target) {
  const Vec3 d = target - origin;
  if (d.x == 0.0 && d.y == 0.0) {
    fail(ErrorKind::kDegenerateGeometry, "direction undefined: points coincide in the x-y plane");
  }
  return DoaVector(std::atan2(d.y, d.x));
}

double DoaVector::degrees() const { return azimuth_ * 180.0 / std::numbers::pi; }

double tdoa(const Position& mi, const Position& mj, const DoaVector& v,
            const AcousticConstants& c) {
  return -v.vector().dot(mi - mj) / c.speed_of_sound;
}

double tdoa(const ArrayGeometry& geometry, std::size_t i, std::size_t j, const DoaVector& v,
            const AcousticConstants& c) {
  if (i == j) fail(ErrorKind::kIndex, "tdoa needs two distinct microphones");
  return tdoa(geometry.mic(i), geometry.mic(j), v, c);
}

std::complex<double> direct_path_transfer(const Position& source, const Position& mic,
                                          double omega, const AcousticConstants& c) {
  const double d = distance(source, mic);
  if (!(d > 0.0)) fail(ErrorKind::kDegenerateGeometry, "source coincides with microphone");
  return std::polar(1.0 / (AcousticConstants::kPointSourceAttenuation * d),
                    -omega * d / c.speed_of_sound);
}

double doa_error(const Vec3& v_hat, const Vec3& v_true) {
  const double n1 = v_hat.norm();
  const double n2 = v_true.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) fail(ErrorKind::kInvalidInput, "zero DOA vector");
  const double cosine = std::clamp(v_hat.dot(v_true) / (n1 * n2), -1.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

double doa_error(const DoaVector& v_hat, const DoaVector& v_true) {
  return doa_error(v_hat.vector(), v_true.vector());
}

}  // namespace auxsrp
