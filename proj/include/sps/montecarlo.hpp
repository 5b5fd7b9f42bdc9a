#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sps/core.hpp"
#include "sps/model.hpp"
#include "sps/rng.hpp"

namespace sps {

// Noise distribution for simulated trials, with its subgaussian variance
// proxy. All variants are symmetric about zero.
struct NoiseModel {
  enum class Kind { uniform, gaussian, rademacher };

  Kind kind = Kind::uniform;
  double scale = 1.0;  // half-width / standard deviation / magnitude
  double variance_proxy = 1.0 / 3.0;

  // Uniform(-c, c); the optimal variance proxy c^2/3.
  static NoiseModel uniform(double half_width);
  static NoiseModel gaussian(double stddev);     // proxy stddev^2
  static NoiseModel rademacher(double magnitude);  // proxy magnitude^2

  double sigma() const;
  double draw(Rng& rng) const;
};

struct RegressorModel {
  enum class Kind { constant, gaussian_iid, bounded_iid };

  Kind kind = Kind::constant;
  double value = 1.0;      // constant
  double sigma_phi = 1.0;  // gaussian_iid
  double phi_min = 0.5;    // bounded_iid: |phi| uniform on [phi_min, phi_max]
  double phi_max = 1.5;    //              with a fair random sign

  static RegressorModel constant(double value = 1.0);
  static RegressorModel gaussian_iid(double sigma_phi);
  static RegressorModel bounded_iid(double phi_min, double phi_max);

  double draw(Rng& rng) const;
};

// A generated sample together with the realized noise, kept so experiments
// can cross-check the closed-form interval endpoints against the noise.
struct GeneratedData {
  DataSet data;
  std::vector<double> noise;
};

// Draws all regressors, then all noise terms, and sets y = phi*theta + w.
GeneratedData generate_dataset(int n, double theta_star,
                               const NoiseModel& noise,
                               const RegressorModel& regressors, Rng& rng);

struct TrialResult {
  // Largest distance from theta_star to a region endpoint; +infinity when
  // the region is unbounded, 0 when it is empty.
  double max_dist_true = 0.0;
  double outer_half_width = 0.0;
  bool outer_unbounded = false;
  bool covers_true = false;
  double lse = 0.0;
  ConfidenceRegion region;
};

// Generates one sample, draws one SPS randomization, and evaluates the
// region, the outer approximation and coverage of theta_star.
TrialResult run_trial(const SpsConfig& config, double theta_star,
                      const NoiseModel& noise,
                      const RegressorModel& regressors, Rng& rng);

// Smallest sample value x with #{s <= x} >= level * count: the ascending
// order statistic at index ceil(level * count). Products within 1e-9 of an
// integer are snapped down so representation noise in `level` cannot bump
// the index.
double empirical_quantile(std::vector<double> samples, double level);

enum class BoundRegime { constant, bounded, gaussian, mgf };

struct ExperimentPlan {
  int m = 2;
  int q = 1;
  bool fix_signs = true;
  double theta_star = 5.0;
  NoiseModel noise;
  RegressorModel regressors;
  double delta = 0.1;
  std::vector<int> n_grid;
  int k = 1000;
  std::uint64_t master_seed = 0;
  BoundRegime regime = BoundRegime::constant;
  std::string csv_path;  // optional output targets
  std::string svg_path;

  void validate() const;
};

// The bound spec matching a plan's regime, with parameters pulled from the
// plan's noise and regressor models.
BoundSpec bound_spec_for(const ExperimentPlan& plan, BoundTarget target);

struct SummaryRow {
  int n = 0;
  double emp_exact = 0.0;  // (1-delta)-quantile of max_dist_true
  double emp_outer = 0.0;  // (1-delta)-quantile of the full outer width
  double theo_exact = 0.0;  // radius inversion; NaN when not available
  double theo_outer = 0.0;  // full-width inversion; NaN when not available
  double coverage = 0.0;
  int k = 0;
  bool bound_valid = false;  // n met the inversion threshold
  int unbounded_trials = 0;
};

struct ExperimentSummary {
  std::uint64_t master_seed = 0;
  double delta = 0.1;
  std::vector<SummaryRow> rows;
};

// Runs k trials per grid point. Each trial's generator is derived from
// (master_seed, n, trial index), and aggregation folds in trial order, so
// the summary does not depend on the thread count.
ExperimentSummary run_experiment(const ExperimentPlan& plan, int threads = 1);

// Simulates the sign-selected subset mean X = sum((1+a_t) w_t) / sum(1+a_t)
// with a_1 = +1, a_2 = -1 and the rest fair signs, and reports the empirical
// frequency of |X| >= eps for each eps in the grid.
std::vector<double> lemma_tail_frequencies(int n, const NoiseModel& noise,
                                           const std::vector<double>& eps_grid,
                                           int k, std::uint64_t master_seed);

}  // namespace sps
