#pragma once

#include "sps/model.hpp"
#include "sps/rng.hpp"

namespace sps {

// The reference sum and the m-1 perturbed sums evaluated at one theta.
struct SumsAtTheta {
  double theta = 0.0;
  double s0 = 0.0;
  std::vector<double> si;  // length m-1; si[i-1] belongs to perturbed sum i
};

// Intersection structure of the reference parabola s0^2 with one perturbed
// parabola si^2. The kind describes the set {theta : s0^2 <= si^2}:
//   two_roots -> the closed interval [lo, hi] (lo == hi for tangency),
//   no_root   -> empty,
//   all_reals -> all of R (identical parabolas),
//   half_line -> a closed half-line ending at `root` on `feasible_side`.
struct IntersectionRoots {
  enum class Kind { two_roots, no_root, all_reals, half_line };
  enum class Side { below, above };

  Kind kind = Kind::two_roots;
  double lo = 0.0;
  double hi = 0.0;
  double root = 0.0;
  Side feasible_side = Side::below;
};

struct PairwiseIntersections {
  std::vector<IntersectionRoots> per_sum;  // index i-1 for perturbed sum i

  // All finite roots, sorted ascending with exact duplicates removed.
  std::vector<double> breakpoints() const;
};

// Draws the sign matrix and tie-break permutation. All n(m-1) signs are
// drawn even when the first two columns get overwritten with +1, -1, so the
// generator consumption does not depend on the fixing flag.
SpsInstance initialize(const SpsConfig& config, Rng& rng);

SumsAtTheta sums_at(double theta, const DataSet& data,
                    const SpsInstance& inst);

// Least-squares estimate (sum phi*y) / (sum phi^2).
double least_squares(const DataSet& data);

// Rank of s0^2 among all m squared sums: 1 plus the number of perturbed sums
// it strictly exceeds, with equal values ordered by tie-break label.
int rank_of(double theta, const DataSet& data, const SpsInstance& inst);

// True when rank_of(theta) <= m - q, i.e. theta is in the confidence region.
bool indicator(double theta, const DataSet& data, const SpsInstance& inst);

PairwiseIntersections pairwise_intersections(const DataSet& data,
                                             const SpsInstance& inst);

// Assembles {theta : indicator(theta)} from the intersection breakpoints:
// the indicator is piecewise constant between consecutive breakpoints, so
// probing one interior point per open segment (and the two outer rays, and
// every breakpoint itself) determines the region. Components are reported
// as closed intervals; an accepted piece's endpoints always join its
// component, which collapses measure-zero punctures at coincident
// breakpoints into the closure.
ConfidenceRegion exact_region(const DataSet& data, const SpsInstance& inst);

// q-th largest over i of max_j |theta_{i,j} - lse|, as the half-width of an
// interval around the least-squares estimate. Contains exact_region. Throws
// UnboundedRegionError when degenerate sign rows make that radius infinite.
OuterInterval outer_approximation(const DataSet& data,
                                  const SpsInstance& inst);

// Brute-force oracle: evaluates the indicator on the grid lo, lo+step, ...
// and merges accepted runs. Deliberately routed through sums_at so it stays
// independent of the breakpoint construction it cross-checks.
ConfidenceRegion grid_scan_region(const DataSet& data, const SpsInstance& inst,
                                  double lo, double hi, double step);

}  // namespace sps
