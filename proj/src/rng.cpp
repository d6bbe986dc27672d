#include "imitodyn/rng.hpp"

#include <cmath>

#include "imitodyn/error.hpp"

namespace imitodyn {

double Rng::exponential(double rate) { return -std::log(uniform_pos()) / rate; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below needs a positive bound");
  // Reject the low residue class so every value is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(mix64(base) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

std::vector<double> uniform_simplex(Rng& rng, std::size_t m) {
  std::vector<double> x(m);
  double sum = 0.0;
  for (auto& v : x) {
    v = rng.exponential(1.0);
    sum += v;
  }
  for (auto& v : x) v /= sum;
  return x;
}

} // namespace imitodyn
