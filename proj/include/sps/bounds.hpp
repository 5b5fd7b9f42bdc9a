#pragma once

#include <cmath>

#include "sps/model.hpp"

namespace sps {

// A tail bound of the form prefactor * base^exponent, kept factored so the
// power is evaluated in the log domain (large n would underflow a direct
// power) and so values above 1 survive until the reporting boundary.
struct BoundValue {
  double prefactor = 1.0;
  double exponent = 1.0;
  double log_base = 0.0;

  double log_raw() const { return std::log(prefactor) + exponent * log_base; }
  double raw() const { return prefactor * std::exp(exponent * log_base); }
  double probability() const { return std::min(1.0, raw()); }
};

struct TailQuery {
  double epsilon = 0.0;
  int n = 2;
  int m = 2;
  int q = 1;
  BoundSpec spec;
};

struct RadiusQuery {
  double delta = 0.1;
  int n = 2;
  int m = 2;
  int q = 1;
  BoundSpec spec;
};

// Tail bound 2*(1/2 + 1/2*exp(-eps^2/(2 sigma^2)))^(n-1) for the deviation of
// a sign-selected subset mean of subgaussian noise. Requires n > 2.
BoundValue lemma_tail(double epsilon, int n, double sigma);

// Tail bound on sup over the exact region of |theta - theta_star|, dispatched
// on the regime. Requires spec.target == exact_region.
BoundValue tail_bound(const TailQuery& query);

// Tail bound on sup over the outer approximation of |theta - lse|. Only the
// constant-in-noise and bounded-regressor regimes have a closed form; the
// others throw BoundNotAvailableError.
BoundValue outer_tail_bound(const TailQuery& query);

// Solves tail = delta for the radius. For exact-region targets the result
// bounds max_j |theta_j - theta_star|; for outer-approximation targets it
// bounds the full width 2*sup|theta - lse|, matching the reported size of
// the interval. Throws SampleSizeError below the validity threshold and
// BoundNotAvailableError where no closed form exists.
double invert_radius(const RadiusQuery& query);

// Smallest n for which invert_radius is defined for this query shape.
int min_valid_sample_size(double delta, int m, int q, const BoundSpec& spec);

}  // namespace sps
