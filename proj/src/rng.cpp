#include "sps/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sps {

double Rng::gaussian(double stddev) {
  // Box-Muller, cosine branch; two draws per value keeps the stream layout
  // independent of call history.
  const double u1 = unit_open();
  const double u2 = unit_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("below(0) is undefined");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() / k * k;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % k;
}

std::vector<int> Rng::permutation(int m) {
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int i = m - 1; i > 0; --i) {
    const int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t h = mix(master);
  h = mix(h ^ mix(stream + 0x632be59bd9b4e019ull));
  h = mix(h ^ mix(index + 0xd6e8feb86659fd93ull));
  return h;
}

}  // namespace sps
