#pragma once

#include <cstdint>
#include <initializer_list>

namespace auxsrp {

// Counter-based generator: the i-th draw is splitmix64(key + (i + 1) * gamma).
// Fixed integer arithmetic only, so every platform produces the same stream.
// Normal deviates use the Marsaglia polar method implemented here rather than
// std::normal_distribution, whose algorithm is implementation-defined.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic child seed, e.g. derive_seed(master, {scenario, 3}).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace auxsrp
