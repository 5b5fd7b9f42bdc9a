#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sps {

// Deterministic random source. The engine is a standard mt19937_64 (whose
// output sequence is pinned by the standard); every distribution transform
// is implemented here rather than through std:: distributions, whose output
// may differ between standard libraries. Seeded experiments rely on this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double unit_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * unit_open();
  }

  // Uniform on (-c, c), exactly symmetric about zero.
  double symmetric_uniform(double c) {
    return c * (2.0 * unit_open() - 1.0);
  }

  int rademacher() { return (engine_() & 1u) ? 1 : -1; }

  double gaussian(double stddev);

  // Uniform integer in [0, k), k >= 1, by rejection.
  std::uint64_t below(std::uint64_t k);

  // Uniform random permutation of {0, ..., m-1}.
  std::vector<int> permutation(int m);

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from (master, stream, index) so trials
// can be keyed by position instead of consuming one shared sequence; results
// then do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

}  // namespace sps
