#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace sps {

// Exact rational in lowest terms with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long numerator, long long denominator);

  // Accepts "3/4" or a terminating decimal such as "0.75".
  static Rational parse(const std::string& text);

  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// Confidence parameters of one SPS construction. The confidence level
// p = 1 - q/m is exact by construction and exposed as a rational.
struct SpsConfig {
  int m;  // number of sums (one reference plus m-1 perturbed)
  int q;  // rank threshold, 0 < q < m
  int n;  // sample size, >= 2
  bool fix_first_two_signs;

  SpsConfig(int m, int q, int n, bool fix_first_two_signs);

  Rational confidence_level() const;  // (m - q) / m in lowest terms
};

// Builds the config with the minimal (m, q) realizing confidence level p.
// Callers wanting a non-minimal pair construct SpsConfig directly.
SpsConfig config_from_level(const Rational& p, int n, bool fix_signs);

// One realized randomization: the (m-1) x n sign matrix and the tie-break
// permutation over sum labels {0, ..., m-1}. Label 0 belongs to the
// unperturbed reference sum; perturbed sum i (1 <= i <= m-1) owns sign row
// i-1 and label i. Immutable after construction.
class SpsInstance {
 public:
  SpsInstance(SpsConfig config, std::vector<std::int8_t> signs,
              std::vector<int> tie_break);

  const SpsConfig& config() const { return config_; }

  // Sign applied to data point t (0-based) in perturbed sum i, 1 <= i <= m-1.
  int sign(int i, int t) const {
    return signs_[static_cast<std::size_t>(i - 1) * config_.n + t];
  }

  // Tie-break label of sum i, 0 <= i <= m-1.
  int tie_label(int i) const { return tie_break_[i]; }

  const std::vector<std::int8_t>& signs() const { return signs_; }
  const std::vector<int>& tie_break() const { return tie_break_; }

 private:
  SpsConfig config_;
  std::vector<std::int8_t> signs_;
  std::vector<int> tie_break_;
};

// Regressors and outputs of one scalar regression sample.
struct DataSet {
  std::vector<double> phi;
  std::vector<double> y;

  DataSet() = default;
  DataSet(std::vector<double> phi, std::vector<double> y);

  int size() const { return static_cast<int>(phi.size()); }
  double sum_phi_squared() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Union of disjoint closed intervals, sorted increasing. Half-infinite
// components carry infinite endpoints and set the matching flag.
struct ConfidenceRegion {
  std::vector<Interval> intervals;
  bool unbounded_low = false;
  bool unbounded_high = false;

  bool empty() const { return intervals.empty(); }
  bool bounded() const { return !unbounded_low && !unbounded_high; }
  bool contains(double theta) const;

  // Throws std::logic_error if the component list is not sorted strictly
  // increasing and pairwise disjoint.
  void validate() const;
};

// Interval guaranteed to contain the exact region, centered on the
// least-squares estimate.
struct OuterInterval {
  double center = 0.0;  // least-squares estimate
  double half_width = 0.0;
  double r_n = 0.0;  // (1/n) * sum of squared regressors

  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
};

// Distributional regimes a concentration bound can be stated for. sigma is
// always the subgaussian variance-proxy root of the noise.
struct ConstantInNoise {
  double sigma = 1.0;
};

struct BoundedRegressor {
  double sigma = 1.0;
  double phi_min = 1.0;  // almost-sure lower bound on |phi_t|
};

struct GaussianRegressor {
  double sigma = 1.0;
  double sigma_phi = 1.0;  // regressor standard deviation
};

// mgf(t) must return E[exp(t * phi^2)] for t <= 0; it is only ever evaluated
// at nonpositive arguments and must be safe for concurrent calls.
struct UserRegressorMgf {
  double sigma = 1.0;
  std::function<double(double)> mgf;
};

enum class BoundTarget { exact_region, outer_approximation };

struct BoundSpec {
  std::variant<ConstantInNoise, BoundedRegressor, GaussianRegressor,
               UserRegressorMgf>
      regime;
  BoundTarget target = BoundTarget::exact_region;

  double sigma() const;
  void validate() const;

  // Every supported bound is stated for instances whose sign rows start with
  // a fixed +1, -1 pair; callers are responsible for matching instances.
  bool assumes_fixed_signs() const { return true; }
};

}  // namespace sps
