#pragma once

#include <stdexcept>
#include <string>

namespace sps {

// Thrown when a closed-form radius inversion is requested below the minimal
// sample size for which the formula is defined. Carries that minimal n.
class SampleSizeError : public std::runtime_error {
 public:
  SampleSizeError(const std::string& what, int min_valid_n)
      : std::runtime_error(what), min_valid_n_(min_valid_n) {}
  int min_valid_n() const noexcept { return min_valid_n_; }

 private:
  int min_valid_n_;
};

// Thrown when no closed-form bound exists for a regime/target combination
// (e.g. outer-approximation bounds with unbounded regressors).
class BoundNotAvailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when the outer approximation has no finite radius because degenerate
// sign rows leave one of the per-sum feasible sets unbounded.
class UnboundedRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sps
