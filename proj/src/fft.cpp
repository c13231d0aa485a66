#include "auxsrp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "auxsrp/error.hpp"

namespace auxsrp {
namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) fail(ErrorKind::kInvalidInput, "FFT length must be at least 2");
  std::lock_guard lock(planner_mutex());
  std::vector<double> real(n);
  auto* spec = fftw_alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real.data(), spec, flags);
  inverse_plan_ = fftw_plan_dft_c2r_1d(len, spec, real.data(), flags | FFTW_DESTROY_INPUT);
  fftw_free(spec);
  if (!forward_plan_ || !inverse_plan_) fail(ErrorKind::kInvalidInput, "FFTW planning failed");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != num_bins()) {
    fail(ErrorKind::kInvalidInput, "RealFft::forward size mismatch");
  }
  // r2c leaves its input intact; the cast only satisfies the C signature.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != num_bins() || out.size() != n_) {
    fail(ErrorKind::kInvalidInput, "RealFft::inverse size mismatch");
  }
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

const RealFft& real_fft(std::size_t n) {
  static std::mutex m;
  static std::map<std::size_t, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

FftConvolver::FftConvolver(std::span<const double> signal, std::size_t max_filter_length,
                           std::size_t output_length)
    : output_length_(output_length), max_filter_length_(max_filter_length) {
  const std::size_t n = next_pow2(std::max<std::size_t>(
      2, std::min(signal.size() + max_filter_length, output_length + max_filter_length)));
  fft_ = &real_fft(n);
  // Input beyond output_length cannot reach the kept outputs.
  std::vector<double> padded(n, 0.0);
  std::copy_n(signal.begin(), std::min(signal.size(), output_length), padded.begin());
  signal_spectrum_.resize(fft_->num_bins());
  fft_->forward(padded, signal_spectrum_);
}

std::vector<double> FftConvolver::apply(std::span<const double> filter) const {
  if (filter.size() > max_filter_length_) {
    fail(ErrorKind::kInvalidInput, "filter longer than the convolver was sized for");
  }
  const std::size_t n = fft_->size();
  std::vector<double> padded(n, 0.0);
  std::copy(filter.begin(), filter.end(), padded.begin());
  std::vector<std::complex<double>> spec(fft_->num_bins());
  fft_->forward(padded, spec);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= signal_spectrum_[k];
  fft_->inverse(spec, padded);
  std::vector<double> out(output_length_, 0.0);
  const double scale = 1.0 / static_cast<double>(n);
  const std::size_t m = std::min(output_length_, n);
  for (std::size_t i = 0; i < m; ++i) out[i] = padded[i] * scale;
  return out;
}

std::vector<double> convolve(std::span<const double> signal, std::span<const double> filter,
                             std::size_t output_length) {
  return FftConvolver(signal, filter.size(), output_length).apply(filter);
}

}  // namespace auxsrp
