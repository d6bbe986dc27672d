#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace imitodyn {

/// 64-bit Mersenne Twister with hand-rolled variate conversions. The engine's
/// output sequence is fixed by the C++ standard and the conversions below use
/// only integer arithmetic and IEEE doubles, so draws are identical across
/// platforms and standard libraries (std::*_distribution are not).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }
  /// Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1p-53; }
  /// Exponential with the given rate, by inverse CDF.
  double exponential(double rate);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Per-run seed for run `index` of an ensemble seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Uniform sample from the open simplex (flat Dirichlet).
std::vector<double> uniform_simplex(Rng& rng, std::size_t m);

/// Fisher-Yates with Rng::below.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

} // namespace imitodyn
