#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace auxsrp {

struct AcousticConstants {
  // Not given by the method description; 343 m/s corresponds to air at 20 C.
  double speed_of_sound = 343.0;

  // Spherical spreading factor of a point source, 1 / (4 pi d).
  static constexpr double kPointSourceAttenuation = 4.0 * std::numbers::pi;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  bool finite() const;
};

using Position = Vec3;

double distance(const Position& a, const Position& b);

// Ordered channel pair (i, j); its cross term is Y_i Y_j^*.
struct ChannelPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const ChannelPair&, const ChannelPair&) = default;
};

// All pairs (i, j) with i > j over `num_mics` microphones, ordered by i then j.
std::vector<ChannelPair> array_pairs(std::size_t num_mics);

class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<Position> mics,
                         std::optional<Position> aux = std::nullopt);

  std::size_t num_mics() const { return mics_.size(); }
  const Position& mic(std::size_t i) const;
  const std::vector<Position>& mics() const { return mics_; }
  const Position& centroid() const { return centroid_; }
  const std::optional<Position>& aux() const { return aux_; }

  double pair_distance(std::size_t i, std::size_t j) const;
  std::vector<ChannelPair> pairs() const { return array_pairs(mics_.size()); }

 private:
  std::vector<Position> mics_;
  std::optional<Position> aux_;
  Position centroid_;
};

// Planar direction of arrival, v = [cos(theta), sin(theta), 0].
class DoaVector {
 public:
  DoaVector() = default;
  static DoaVector from_azimuth(double azimuth_rad);
  static DoaVector from_degrees(double azimuth_deg);
  // Direction of `target` seen from `origin`, projected onto the x-y plane.
  static DoaVector towards(const Position& origin, const Position& target);

  double azimuth() const { return azimuth_; }
  double degrees() const;
  const Vec3& vector() const { return v_; }

 private:
  explicit DoaVector(double azimuth_rad);
  double azimuth_ = 0.0;
  Vec3 v_{1.0, 0.0, 0.0};
};

// Wraps an angle into [0, 2 pi).
double wrap_angle(double rad);

// Far-field TDOA between microphones i and j, tau_ij = -v^T (m_i - m_j) / c.
double tdoa(const ArrayGeometry& geometry, std::size_t i, std::size_t j,
            const DoaVector& v, const AcousticConstants& c = {});
double tdoa(const Position& mi, const Position& mj, const DoaVector& v,
            const AcousticConstants& c = {});

// Free-field point-source transfer 1/(xi d) exp(-j omega d / c).
std::complex<double> direct_path_transfer(const Position& source, const Position& mic,
                                          double omega, const AcousticConstants& c = {});

// Angle between the estimated and true DOA vectors, in degrees.
double doa_error(const Vec3& v_hat, const Vec3& v_true);
double doa_error(const DoaVector& v_hat, const DoaVector& v_true);

}  // namespace auxsrp
