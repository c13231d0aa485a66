#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace auxsrp {

// Real-input FFT of a fixed length backed by FFTW. Plans are created with
// FFTW_ESTIMATE so the chosen algorithm, and hence the output bits, do not
// depend on timing. execute() is safe to call concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t num_bins() const { return n_ / 2 + 1; }

  // out.size() == num_bins()
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  // Unnormalized inverse; the caller divides by size().
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

// Process-wide plan cache.
const RealFft& real_fft(std::size_t n);

std::size_t next_pow2(std::size_t n);

// Linear convolution of `signal` with several filters, reusing the signal
// spectrum. Outputs are truncated to `output_length` samples.
class FftConvolver {
 public:
  FftConvolver(std::span<const double> signal, std::size_t max_filter_length,
               std::size_t output_length);

  std::vector<double> apply(std::span<const double> filter) const;

 private:
  const RealFft* fft_;
  std::size_t output_length_;
  std::size_t max_filter_length_;
  std::vector<std::complex<double>> signal_spectrum_;
};

std::vector<double> convolve(std::span<const double> signal, std::span<const double> filter,
                             std::size_t output_length);

}  // namespace auxsrp
