#pragma once

#include <cstdint>

#include "securebf/types.hpp"

namespace securebf {

/// Counter-based generator: the i-th output of stream `key` is
/// splitmix64(key * K + i * G), where splitmix64 is Vigna's finalizer
/// (xor-shift 30/27/31 with multipliers 0xbf58476d1ce4e5b9 and
/// 0x94d049bb133111eb), K = 0xd1342543de82ef95 and G = 0x9e3779b97f4a7c15.
/// Outputs depend only on (key, counter), so streams are portable and can be
/// split across threads without coordination.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1], never zero (safe for log).
  double uniform_open();
  /// Standard normal via Box-Muller (both outputs used, cached).
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  /// Stream for (master seed, index) pairs such as Monte-Carlo realizations.
  static std::uint64_t derive_key(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace securebf
