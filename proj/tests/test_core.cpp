#include "auxsrp/core.hpp"

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace auxsrp;
using auxsrp::test::expect_error;
using auxsrp::test::kPi;

namespace {

ArrayGeometry endfire_pair() { return ArrayGeometry({{0.025, 0, 0}, {-0.025, 0, 0}}); }

}  // namespace

TEST(Tdoa, BroadsideIsZero) {
  EXPECT_NEAR(tdoa(endfire_pair(), 0, 1, DoaVector::from_degrees(90)), 0.0, 1e-18);
}

TEST(Tdoa, Endfire) {
  EXPECT_NEAR(tdoa(endfire_pair(), 0, 1, DoaVector::from_degrees(0)), -0.05 / 343.0, 1e-15);
  EXPECT_NEAR(tdoa(endfire_pair(), 0, 1, DoaVector::from_degrees(0)), -1.4577e-4, 1e-8);
}

TEST(Tdoa, SixtyDegrees) {
  EXPECT_NEAR(tdoa(endfire_pair(), 0, 1, DoaVector::from_degrees(60)), -7.289e-5, 1e-8);
}

TEST(Tdoa, AntisymmetricAndBounded) {
  CounterRng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<Position> mics;
    for (int m = 0; m < 4; ++m) mics.push_back({rng.uniform(), rng.uniform(), rng.uniform() * 0.1});
    const ArrayGeometry g(mics);
    const auto v = DoaVector::from_azimuth(2 * kPi * rng.uniform());
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (i == j) continue;
        EXPECT_EQ(tdoa(g, i, j, v), -tdoa(g, j, i, v));
        EXPECT_LE(std::abs(tdoa(g, i, j, v)), g.pair_distance(i, j) / 343.0 + 1e-15);
      }
    }
  }
}

TEST(Tdoa, Errors) {
  const auto g = endfire_pair();
  expect_error(ErrorKind::kIndex, [&] { tdoa(g, 0, 2, DoaVector{}); });
  expect_error(ErrorKind::kIndex, [&] { tdoa(g, 1, 1, DoaVector{}); });
}

TEST(ArrayGeometry, CentroidAndValidation) {
  const ArrayGeometry g({{1, 2, 3}, {3, 2, 1}, {2, 5, 2}});
  EXPECT_DOUBLE_EQ(g.centroid().x, 2.0);
  EXPECT_DOUBLE_EQ(g.centroid().y, 3.0);
  EXPECT_DOUBLE_EQ(g.centroid().z, 2.0);
  EXPECT_EQ(g.pairs().size(), 3u);
  expect_error(ErrorKind::kInvalidInput, [] { ArrayGeometry({{0, 0, 0}}); });
  expect_error(ErrorKind::kDegenerateGeometry, [] { ArrayGeometry({{0, 0, 0}, {0, 0, 0}}); });
  expect_error(ErrorKind::kDegenerateGeometry,
               [] { ArrayGeometry({{0, 0, 0}, {1, 0, 0}}, Position{1, 0, 0}); });
  expect_error(ErrorKind::kInvalidInput,
               [] { ArrayGeometry({{0, 0, 0}, {std::nan(""), 0, 0}}); });
  expect_error(ErrorKind::kIndex, [&] { g.mic(3); });
}

TEST(ArrayPairs, OrderedByIThenJ) {
  const auto p = array_pairs(3);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0], (ChannelPair{1, 0}));
  EXPECT_EQ(p[1], (ChannelPair{2, 0}));
  EXPECT_EQ(p[2], (ChannelPair{2, 1}));
}

TEST(DoaVector, WrapsAndIsUnit) {
  const auto v = DoaVector::from_degrees(-90);
  EXPECT_NEAR(v.degrees(), 270.0, 1e-12);
  EXPECT_NEAR(v.vector().norm(), 1.0, 1e-15);
  EXPECT_NEAR(DoaVector::from_degrees(720).degrees(), 0.0, 1e-9);
  EXPECT_NEAR(DoaVector::towards({4, 3, 1}, {2, 3, 2}).degrees(), 180.0, 1e-12);
}

TEST(DirectPath, Examples) {
  const auto g0 = direct_path_transfer({0, 0, 0}, {1, 0, 0}, 0.0);
  EXPECT_NEAR(g0.real(), 1.0 / (4 * kPi), 1e-15);
  EXPECT_NEAR(g0.imag(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(direct_path_transfer({0, 0, 0}, {0, 2, 0}, 1234.5)), 1.0 / (8 * kPi), 1e-15);
  const auto g = direct_path_transfer({0, 0, 0}, {0.343, 0, 0}, 2 * kPi * 1000);
  EXPECT_NEAR(std::arg(g), 0.0, 1e-9);
  expect_error(ErrorKind::kDegenerateGeometry, [] { direct_path_transfer({1, 1, 1}, {1, 1, 1}, 1.0); });
}

TEST(DirectPath, FarFieldPhaseRelation) {
  // Equal distances: X_j = X_i exp(-j w tau_ij) holds with the exact delays.
  const Position s{0, 3, 0};
  const Position mi{-0.4, 0, 0};
  const Position mj{0.4, 0, 0};
  const double w = 2 * kPi * 700;
  const auto xi = direct_path_transfer(s, mi, w);
  const auto xj = direct_path_transfer(s, mj, w);
  const double tau = (distance(s, mi) - distance(s, mj)) / 343.0;
  EXPECT_NEAR(std::abs(xi - xj * std::polar(1.0, -w * tau)), 0.0, 1e-15);
}

TEST(DoaError, Examples) {
  const auto a = DoaVector::from_degrees(30);
  EXPECT_NEAR(doa_error(a, a), 0.0, 1e-6);
  EXPECT_NEAR(doa_error(a, DoaVector::from_degrees(210)), 180.0, 1e-6);
  EXPECT_NEAR(doa_error(a, DoaVector::from_degrees(120)), 90.0, 1e-9);
  expect_error(ErrorKind::kInvalidInput, [] { doa_error(Vec3{}, Vec3{1, 0, 0}); });
}

TEST(DoaError, SymmetricAndScaleInvariant) {
  CounterRng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Vec3 a{rng.normal(), rng.normal(), rng.normal()};
    const Vec3 b{rng.normal(), rng.normal(), rng.normal()};
    EXPECT_DOUBLE_EQ(doa_error(a, b), doa_error(b, a));
    EXPECT_NEAR(doa_error(3.7 * a, 0.2 * b), doa_error(a, b), 1e-9);
    const double e = doa_error(a, b);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 180.0);
  }
}
