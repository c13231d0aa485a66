#include "auxsrp/kernels.hpp"

#include <cmath>
#include <vector>

#include "support.hpp"

using namespace auxsrp;
using kernels::cplx;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {rng.normal(), rng.normal()};
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Odd lengths exercise the scalar tails of the vector loops.
const std::size_t kLengths[] = {0, 1, 2, 3, 7, 64, 257, 1001};

class KernelVariant : public ::testing::TestWithParam<const kernels::KernelTable*> {};

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  ASSERT_FALSE(kernels::available().empty());
  EXPECT_STREQ(kernels::available().front()->name, "scalar");
  EXPECT_EQ(kernels::find("scalar"), &kernels::scalar_table());
  EXPECT_EQ(kernels::find("nope"), nullptr);
}

TEST_P(KernelVariant, CrossProductsMatchReference) {
  const auto& k = *GetParam();
  for (std::size_t n : kLengths) {
    const auto a = random_complex(n, 1), b = random_complex(n, 2), prev = random_complex(n, 3);
    std::vector<cplx> out(n), ref(n);
    k.cross_product(out.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) ref[i] = a[i] * std::conj(b[i]);
    EXPECT_LE(max_abs_diff(out, ref), 1e-12) << n;
    k.recursive_cross_update(out.data(), prev.data(), a.data(), b.data(), 0.98, n);
    for (std::size_t i = 0; i < n; ++i) ref[i] = 0.98 * prev[i] + 0.02 * a[i] * std::conj(b[i]);
    EXPECT_LE(max_abs_diff(out, ref), 1e-12) << n;
  }
}

TEST_P(KernelVariant, PhatNormalizeMatchesReference) {
  const auto& k = *GetParam();
  for (std::size_t n : kLengths) {
    auto in = random_complex(n, 4);
    if (n > 2) in[1] = 0.0;
    if (n > 3) in[2] = {1e-20, 0};
    std::vector<cplx> out(n);
    k.phat_normalize(out.data(), in.data(), 1e-12, n);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx ref = std::abs(in[i]) > 1e-12 ? in[i] / std::abs(in[i]) : cplx{};
      EXPECT_LE(std::abs(out[i] - ref), 1e-14);
    }
  }
}

TEST_P(KernelVariant, RealDotMatchesReference) {
  const auto& k = *GetParam();
  for (std::size_t n : kLengths) {
    const auto a = random_complex(n, 5), b = random_complex(n, 6);
    long double ref = 0;
    for (std::size_t i = 0; i < n; ++i) ref += (a[i] * b[i]).real();
    EXPECT_NEAR(k.real_dot(a.data(), b.data(), n), static_cast<double>(ref), 1e-11 * (1.0 + n));
  }
}

TEST_P(KernelVariant, AccumulateRotatedMatchesReference) {
  const auto& k = *GetParam();
  for (std::size_t n : kLengths) {
    const auto in = random_complex(n, 7);
    auto out = random_complex(n, 8);
    auto ref = out;
    const cplx start = std::polar(1.0, 0.3), step = std::polar(1.0, -0.0123);
    k.accumulate_rotated(out.data(), in.data(), start, step, n);
    for (std::size_t i = 0; i < n; ++i) ref[i] += in[i] * start * std::polar(1.0, -0.0123 * i);
    EXPECT_LE(max_abs_diff(out, ref), 1e-11) << n;
  }
}

TEST_P(KernelVariant, FractionalImpulseIsWindowedSinc) {
  const auto& k = *GetParam();
  for (double f : {0.001, 0.25, 0.5, 0.9}) {
    std::vector<double> out(kernels::kSincTaps, 0.0);
    k.add_fractional_impulse(out.data(), 2.0, f);
    for (int i = 0; i < kernels::kSincTaps; ++i) {
      const double t = i - kernels::kSincHalfTaps - f;
      const double sinc = std::sin(test::kPi * t) / (test::kPi * t);
      const double win = 0.5 * (1 + std::cos(test::kPi * t / kernels::kSincWindowHalfWidth));
      EXPECT_NEAR(out[i], 2.0 * sinc * win, 1e-12) << f << " " << i;
    }
  }
}

TEST(Kernels, VariantsAgree) {
  // Every available variant against the scalar reference, relative 1e-12.
  const auto& ref = kernels::scalar_table();
  const auto a = random_complex(1001, 11), b = random_complex(1001, 12);
  for (const auto* k : kernels::available()) {
    std::vector<cplx> x(1001), y(1001);
    ref.cross_product(x.data(), a.data(), b.data(), 1001);
    k->cross_product(y.data(), a.data(), b.data(), 1001);
    EXPECT_LE(max_abs_diff(x, y), 1e-12) << k->name;
    ref.phat_normalize(x.data(), a.data(), 0.0, 1001);
    k->phat_normalize(y.data(), a.data(), 0.0, 1001);
    EXPECT_LE(max_abs_diff(x, y), 1e-12) << k->name;
    const double r = ref.real_dot(a.data(), b.data(), 1001);
    EXPECT_NEAR(k->real_dot(a.data(), b.data(), 1001), r, 1e-12 * std::abs(r) + 1e-11) << k->name;
  }
}

INSTANTIATE_TEST_SUITE_P(Available, KernelVariant, ::testing::ValuesIn(std::vector<const kernels::KernelTable*>(
                                                       kernels::available().begin(),
                                                       kernels::available().end())),
                         [](const auto& info) { return std::string(info.param->name); });
