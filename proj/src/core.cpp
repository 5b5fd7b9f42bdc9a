#include "sps/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sps/errors.hpp"

namespace sps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_matching_length(const DataSet& data, const SpsInstance& inst) {
  if (data.size() != inst.config().n) {
    throw std::invalid_argument("data length does not match instance n");
  }
}

}  // namespace

SpsInstance initialize(const SpsConfig& config, Rng& rng) {
  const int rows = config.m - 1;
  std::vector<std::int8_t> signs(static_cast<std::size_t>(rows) * config.n);
  for (std::size_t idx = 0; idx < signs.size(); ++idx) {
    signs[idx] = static_cast<std::int8_t>(rng.rademacher());
  }
  if (config.fix_first_two_signs) {
    for (int r = 0; r < rows; ++r) {
      signs[static_cast<std::size_t>(r) * config.n] = 1;
      signs[static_cast<std::size_t>(r) * config.n + 1] = -1;
    }
  }
  return SpsInstance(config, std::move(signs), rng.permutation(config.m));
}

SumsAtTheta sums_at(double theta, const DataSet& data,
                    const SpsInstance& inst) {
  require_matching_length(data, inst);
  const int n = data.size();
  const int m = inst.config().m;

  SumsAtTheta out;
  out.theta = theta;
  out.si.resize(m - 1);
  double s0 = 0.0;
  for (int t = 0; t < n; ++t) {
    s0 += data.phi[t] * (data.y[t] - data.phi[t] * theta);
  }
  out.s0 = s0;
  for (int i = 1; i < m; ++i) {
    double si = 0.0;
    for (int t = 0; t < n; ++t) {
      si += inst.sign(i, t) * data.phi[t] * (data.y[t] - data.phi[t] * theta);
    }
    out.si[i - 1] = si;
  }
  return out;
}

double least_squares(const DataSet& data) {
  double num = 0.0;
  double den = 0.0;
  for (int t = 0; t < data.size(); ++t) {
    num += data.phi[t] * data.y[t];
    den += data.phi[t] * data.phi[t];
  }
  if (!(den > 0.0)) {
    throw std::invalid_argument("regressors are identically zero");
  }
  return num / den;
}

int rank_of(double theta, const DataSet& data, const SpsInstance& inst) {
  const SumsAtTheta sums = sums_at(theta, data, inst);
  const double s0sq = sums.s0 * sums.s0;
  const int ref_label = inst.tie_label(0);
  int above = 0;
  for (int i = 1; i < inst.config().m; ++i) {
    const double sisq = sums.si[i - 1] * sums.si[i - 1];
    if (s0sq > sisq || (s0sq == sisq && ref_label > inst.tie_label(i))) {
      ++above;
    }
  }
  return 1 + above;
}

bool indicator(double theta, const DataSet& data, const SpsInstance& inst) {
  return rank_of(theta, data, inst) <= inst.config().m - inst.config().q;
}

std::vector<double> PairwiseIntersections::breakpoints() const {
  std::vector<double> points;
  points.reserve(2 * per_sum.size());
  for (const IntersectionRoots& r : per_sum) {
    switch (r.kind) {
      case IntersectionRoots::Kind::two_roots:
        points.push_back(r.lo);
        points.push_back(r.hi);
        break;
      case IntersectionRoots::Kind::half_line:
        points.push_back(r.root);
        break;
      default:
        break;
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

PairwiseIntersections pairwise_intersections(const DataSet& data,
                                             const SpsInstance& inst) {
  require_matching_length(data, inst);
  const int n = data.size();
  const int m = inst.config().m;

  double a0 = 0.0;  // sum phi^2
  double b0 = 0.0;  // sum phi*y
  for (int t = 0; t < n; ++t) {
    a0 += data.phi[t] * data.phi[t];
    b0 += data.phi[t] * data.y[t];
  }

  PairwiseIntersections out;
  out.per_sum.reserve(m - 1);
  // Scale-aware degeneracy cutoffs keep the classification invariant under
  // rescaling of the data.
  const double lead_tol = 1e-12 * a0 * a0;

  for (int i = 1; i < m; ++i) {
    double ai = 0.0;
    double bi = 0.0;
    for (int t = 0; t < n; ++t) {
      ai += inst.sign(i, t) * data.phi[t] * data.phi[t];
      bi += inst.sign(i, t) * data.phi[t] * data.y[t];
    }

    // s0^2 - si^2 as a quadratic a2*theta^2 + 2b*theta + c.
    const double a2 = a0 * a0 - ai * ai;
    const double b = -(a0 * b0 - ai * bi);
    const double c = b0 * b0 - bi * bi;

    IntersectionRoots roots;
    if (std::abs(a2) <= lead_tol) {
      const double b_scale =
          a0 * std::max({std::abs(b0), std::abs(bi), 1e-300});
      const double c_scale = std::max({b0 * b0, bi * bi, 1e-300});
      if (std::abs(b) <= 1e-12 * b_scale) {
        roots.kind = (c > 1e-12 * c_scale) ? IntersectionRoots::Kind::no_root
                                           : IntersectionRoots::Kind::all_reals;
      } else {
        roots.kind = IntersectionRoots::Kind::half_line;
        roots.root = -c / (2.0 * b);
        roots.feasible_side = (b > 0.0) ? IntersectionRoots::Side::below
                                        : IntersectionRoots::Side::above;
      }
    } else {
      // The discriminant b^2 - a2*c equals (a0*bi - ai*b0)^2 exactly, so the
      // square root is evaluated from the factored form; the remaining root
      // extraction uses the cancellation-free quadratic formula.
      const double sqrt_disc = std::abs(a0 * bi - ai * b0);
      double r1;
      double r2;
      if (sqrt_disc == 0.0) {
        r1 = r2 = -b / a2;
      } else {
        const double qq = -(b + std::copysign(sqrt_disc, b));
        r1 = qq / a2;
        r2 = c / qq;
      }
      roots.kind = IntersectionRoots::Kind::two_roots;
      roots.lo = std::min(r1, r2);
      roots.hi = std::max(r1, r2);
    }
    out.per_sum.push_back(roots);
  }
  return out;
}

ConfidenceRegion exact_region(const DataSet& data, const SpsInstance& inst) {
  const std::vector<double> bps =
      pairwise_intersections(data, inst).breakpoints();

  ConfidenceRegion region;
  auto append = [&region](double lo, double hi) {
    if (!region.intervals.empty() && region.intervals.back().hi >= lo) {
      region.intervals.back().hi = std::max(region.intervals.back().hi, hi);
    } else {
      region.intervals.push_back({lo, hi});
    }
  };

  if (bps.empty()) {
    // No intersections anywhere: the rank is globally constant.
    if (indicator(0.0, data, inst)) {
      region.intervals.push_back({-kInf, kInf});
    }
  } else {
    const double probe =
        std::max(std::abs(bps.front()), std::abs(bps.back())) + 1.0;
    if (indicator(-probe, data, inst)) append(-kInf, bps.front());
    for (std::size_t j = 0; j < bps.size(); ++j) {
      if (indicator(bps[j], data, inst)) append(bps[j], bps[j]);
      if (j + 1 < bps.size()) {
        const double mid = bps[j] + 0.5 * (bps[j + 1] - bps[j]);
        if (indicator(mid, data, inst)) append(bps[j], bps[j + 1]);
      }
    }
    if (indicator(probe, data, inst)) append(bps.back(), kInf);
  }

  region.unbounded_low =
      !region.intervals.empty() && std::isinf(region.intervals.front().lo);
  region.unbounded_high =
      !region.intervals.empty() && std::isinf(region.intervals.back().hi);
  return region;
}

OuterInterval outer_approximation(const DataSet& data,
                                  const SpsInstance& inst) {
  require_matching_length(data, inst);
  const double lse = least_squares(data);
  const PairwiseIntersections inter = pairwise_intersections(data, inst);

  std::vector<double> dist;
  dist.reserve(inter.per_sum.size());
  for (const IntersectionRoots& r : inter.per_sum) {
    switch (r.kind) {
      case IntersectionRoots::Kind::two_roots:
        dist.push_back(std::max(std::abs(r.lo - lse), std::abs(r.hi - lse)));
        break;
      case IntersectionRoots::Kind::no_root:
        // Empty feasible set: this sum can never be one of the q that keep a
        // point inside the region, so it contributes no radius.
        dist.push_back(0.0);
        break;
      default:
        dist.push_back(kInf);
        break;
    }
  }
  std::sort(dist.begin(), dist.end(), std::greater<double>());
  const double half_width = dist[inst.config().q - 1];
  if (!std::isfinite(half_width)) {
    throw UnboundedRegionError(
        "outer approximation is unbounded: a degenerate sign row leaves a "
        "feasible set with no finite endpoint");
  }
  return OuterInterval{lse, half_width,
                       data.sum_phi_squared() / data.size()};
}

ConfidenceRegion grid_scan_region(const DataSet& data, const SpsInstance& inst,
                                  double lo, double hi, double step) {
  if (!(lo < hi)) throw std::invalid_argument("grid needs lo < hi");
  if (!(step > 0.0)) throw std::invalid_argument("grid needs step > 0");

  const long points =
      static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  ConfidenceRegion region;
  bool in_run = false;
  double run_lo = 0.0;
  double run_hi = 0.0;
  for (long j = 0; j < points; ++j) {
    const double theta = lo + static_cast<double>(j) * step;
    if (indicator(theta, data, inst)) {
      if (!in_run) {
        in_run = true;
        run_lo = theta;
      }
      run_hi = theta;
    } else if (in_run) {
      region.intervals.push_back({run_lo, run_hi});
      in_run = false;
    }
  }
  if (in_run) region.intervals.push_back({run_lo, run_hi});
  return region;
}

}  // namespace sps
