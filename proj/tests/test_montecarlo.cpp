#include "sps/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gtest/gtest.h"
#include "sps/bounds.hpp"
#include "sps/rng.hpp"

namespace {

sps::ExperimentPlan small_plan() {
  sps::ExperimentPlan plan;
  plan.m = 2;
  plan.q = 1;
  plan.fix_signs = true;
  plan.theta_star = 5.0;
  plan.noise = sps::NoiseModel::uniform(1.0);
  plan.regressors = sps::RegressorModel::constant(1.0);
  plan.delta = 0.1;
  plan.n_grid = {25, 50};
  plan.k = 300;
  plan.master_seed = 97;
  plan.regime = sps::BoundRegime::constant;
  return plan;
}

TEST(GenerateDataset, NoiselessAndConstantRegressors) {
  sps::Rng rng(5);
  const auto generated = sps::generate_dataset(
      8, 5.0, sps::NoiseModel::uniform(0.0), sps::RegressorModel::constant(1.0), rng);
  for (int t = 0; t < 8; ++t) {
    EXPECT_EQ(generated.data.phi[t], 1.0);
    EXPECT_EQ(generated.data.y[t], 5.0);
    EXPECT_EQ(generated.noise[t], 0.0);
  }
}

TEST(GenerateDataset, UniformNoiseStaysInOpenSupport) {
  sps::Rng rng(6);
  const int n = 20000;
  const auto generated = sps::generate_dataset(
      n, 0.0, sps::NoiseModel::uniform(1.0), sps::RegressorModel::constant(1.0), rng);
  double mean = 0.0;
  for (double w : generated.noise) {
    EXPECT_LT(std::abs(w), 1.0);
    mean += w;
  }
  mean /= n;
  EXPECT_LT(std::abs(mean), 0.02);
}

TEST(GenerateDataset, OutputsFollowTheModel) {
  sps::Rng rng(7);
  const auto generated = sps::generate_dataset(
      50, -2.5, sps::NoiseModel::gaussian(0.3),
      sps::RegressorModel::gaussian_iid(1.0), rng);
  for (int t = 0; t < 50; ++t) {
    EXPECT_DOUBLE_EQ(generated.data.y[t],
                     generated.data.phi[t] * -2.5 + generated.noise[t]);
  }
}

TEST(NoiseModel, VarianceProxies) {
  EXPECT_DOUBLE_EQ(sps::NoiseModel::uniform(1.0).variance_proxy, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(sps::NoiseModel::uniform(2.0).variance_proxy, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(sps::NoiseModel::gaussian(0.5).variance_proxy, 0.25);
  EXPECT_DOUBLE_EQ(sps::NoiseModel::rademacher(2.0).variance_proxy, 4.0);
}

TEST(RegressorModel, BoundedFamilyRespectsBounds) {
  sps::Rng rng(8);
  const auto model = sps::RegressorModel::bounded_iid(0.5, 2.0);
  bool saw_negative = false;
  for (int i = 0; i < 2000; ++i) {
    const double phi = model.draw(rng);
    EXPECT_GE(std::abs(phi), 0.5);
    EXPECT_LE(std::abs(phi), 2.0);
    saw_negative = saw_negative || phi < 0.0;
  }
  EXPECT_TRUE(saw_negative);
}

TEST(RunTrial, NoiselessTrialHasZeroSize) {
  // tie-break at the single point theta*: seed chosen so the reference sum
  // wins the tie and the region is the singleton {theta*}
  const sps::SpsConfig config(2, 1, 6, true);
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    sps::Rng rng(seed);
    const sps::TrialResult tr =
        sps::run_trial(config, 5.0, sps::NoiseModel::uniform(0.0),
                       sps::RegressorModel::constant(1.0), rng);
    EXPECT_EQ(tr.max_dist_true, 0.0);
    EXPECT_NEAR(tr.outer_half_width, 0.0, 1e-9);
    EXPECT_DOUBLE_EQ(tr.lse, 5.0);
    if (tr.covers_true) {
      EXPECT_TRUE(tr.region.contains(5.0));
      return;  // found the accepting tie-break
    }
  }
  FAIL() << "no seed produced an accepting tie-break";
}

TEST(RunTrial, DeterministicGivenSeed) {
  const sps::SpsConfig config(3, 1, 30, true);
  const auto noise = sps::NoiseModel::uniform(1.0);
  const auto regressors = sps::RegressorModel::gaussian_iid(1.0);
  sps::Rng rng_a(12345);
  sps::Rng rng_b(12345);
  const sps::TrialResult a = sps::run_trial(config, 5.0, noise, regressors, rng_a);
  const sps::TrialResult b = sps::run_trial(config, 5.0, noise, regressors, rng_b);
  EXPECT_EQ(a.max_dist_true, b.max_dist_true);
  EXPECT_EQ(a.outer_half_width, b.outer_half_width);
  EXPECT_EQ(a.covers_true, b.covers_true);
  EXPECT_EQ(a.lse, b.lse);
  ASSERT_EQ(a.region.intervals.size(), b.region.intervals.size());
  for (std::size_t j = 0; j < a.region.intervals.size(); ++j) {
    EXPECT_EQ(a.region.intervals[j].lo, b.region.intervals[j].lo);
    EXPECT_EQ(a.region.intervals[j].hi, b.region.intervals[j].hi);
  }
}

TEST(RunTrial, CoverageFlagAgreesWithRegionMembership) {
  const sps::SpsConfig config(4, 2, 15, true);
  const auto noise = sps::NoiseModel::gaussian(0.7);
  const auto regressors = sps::RegressorModel::constant(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    sps::Rng rng(sps::derive_seed(2718, 15, trial));
    const sps::TrialResult tr = sps::run_trial(config, 5.0, noise, regressors, rng);
    EXPECT_EQ(tr.covers_true, tr.region.contains(5.0)) << "trial " << trial;
  }
}

TEST(RunTrial, OuterWidthDominatesRegionEndpoints) {
  const sps::SpsConfig config(5, 2, 12, true);
  const auto noise = sps::NoiseModel::uniform(1.0);
  const auto regressors = sps::RegressorModel::bounded_iid(0.5, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    sps::Rng rng(sps::derive_seed(3141, 12, trial));
    const sps::TrialResult tr = sps::run_trial(config, 5.0, noise, regressors, rng);
    ASSERT_FALSE(tr.outer_unbounded);
    for (const sps::Interval& iv : tr.region.intervals) {
      EXPECT_LE(std::abs(iv.lo - tr.lse), tr.outer_half_width + 1e-12);
      EXPECT_LE(std::abs(iv.hi - tr.lse), tr.outer_half_width + 1e-12);
    }
  }
}

TEST(EmpiricalQuantile, PaperConvention) {
  std::vector<double> one_to_ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_DOUBLE_EQ(sps::empirical_quantile(one_to_ten, 0.9), 9.0);
  EXPECT_DOUBLE_EQ(sps::empirical_quantile(one_to_ten, 0.91), 10.0);
  EXPECT_DOUBLE_EQ(sps::empirical_quantile(one_to_ten, 0.05), 1.0);

  const double almost_one = std::nextafter(1.0, 0.0);
  EXPECT_DOUBLE_EQ(sps::empirical_quantile(one_to_ten, almost_one), 10.0);

  EXPECT_DOUBLE_EQ(sps::empirical_quantile({5.0, 5.0, 5.0}, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(sps::empirical_quantile({3.0}, 0.5), 3.0);

  EXPECT_THROW(sps::empirical_quantile({}, 0.5), std::invalid_argument);
  EXPECT_THROW(sps::empirical_quantile({1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(sps::empirical_quantile({1.0}, 1.0), std::invalid_argument);
}

TEST(Coverage, MatchesConfidenceLevelWithFreeSigns) {
  // free signs realize the construction whose coverage is exactly p
  for (int m : {2, 5}) {
    const sps::SpsConfig config(m, 1, 25, false);
    const double p = config.confidence_level().value();
    const int k = 2000;
    int covered = 0;
    for (int trial = 0; trial < k; ++trial) {
      sps::Rng rng(sps::derive_seed(31337, m, trial));
      covered += sps::run_trial(config, 5.0, sps::NoiseModel::uniform(1.0),
                                sps::RegressorModel::constant(1.0), rng)
                     .covers_true;
    }
    const double coverage = static_cast<double>(covered) / k;
    EXPECT_NEAR(coverage, p, 3.0 * std::sqrt(p * (1 - p) / k)) << "m " << m;
  }
}

TEST(Coverage, TwoSumCaseStaysExactWithFixedSigns) {
  const sps::SpsConfig config(2, 1, 25, true);
  const int k = 2000;
  int covered = 0;
  for (int trial = 0; trial < k; ++trial) {
    sps::Rng rng(sps::derive_seed(65537, 2, trial));
    covered += sps::run_trial(config, 5.0, sps::NoiseModel::uniform(1.0),
                              sps::RegressorModel::constant(1.0), rng)
                   .covers_true;
  }
  EXPECT_NEAR(static_cast<double>(covered) / k, 0.5, 3.0 * std::sqrt(0.25 / k));
}

TEST(RunExperiment, ThreadCountDoesNotChangeResults) {
  const sps::ExperimentPlan plan = small_plan();
  const sps::ExperimentSummary serial = sps::run_experiment(plan, 1);
  const sps::ExperimentSummary threaded = sps::run_experiment(plan, 3);
  ASSERT_EQ(serial.rows.size(), threaded.rows.size());
  for (std::size_t j = 0; j < serial.rows.size(); ++j) {
    EXPECT_EQ(serial.rows[j].emp_exact, threaded.rows[j].emp_exact);
    EXPECT_EQ(serial.rows[j].emp_outer, threaded.rows[j].emp_outer);
    EXPECT_EQ(serial.rows[j].coverage, threaded.rows[j].coverage);
    EXPECT_EQ(serial.rows[j].theo_exact, threaded.rows[j].theo_exact);
    EXPECT_EQ(serial.rows[j].theo_outer, threaded.rows[j].theo_outer);
  }
}

TEST(RunExperiment, QuantilesStayBelowInvertedBounds) {
  const sps::ExperimentSummary summary = sps::run_experiment(small_plan(), 1);
  for (const sps::SummaryRow& row : summary.rows) {
    ASSERT_TRUE(row.bound_valid);
    EXPECT_LE(row.emp_exact, row.theo_exact) << "n " << row.n;
    EXPECT_LE(row.emp_outer, row.theo_outer) << "n " << row.n;
    EXPECT_EQ(row.unbounded_trials, 0);
    EXPECT_NEAR(row.coverage, 0.5, 3.0 * std::sqrt(0.25 / row.k));
  }
}

TEST(RunExperiment, SingleTrialEchoesTheTrial) {
  sps::ExperimentPlan plan = small_plan();
  plan.k = 1;
  plan.n_grid = {25};
  const sps::ExperimentSummary summary = sps::run_experiment(plan, 1);
  ASSERT_EQ(summary.rows.size(), 1u);

  sps::Rng rng(sps::derive_seed(plan.master_seed, 25, 0));
  const sps::TrialResult tr =
      sps::run_trial(sps::SpsConfig(2, 1, 25, true), 5.0, plan.noise,
                     plan.regressors, rng);
  EXPECT_EQ(summary.rows[0].emp_exact, tr.max_dist_true);
  EXPECT_EQ(summary.rows[0].emp_outer, 2.0 * tr.outer_half_width);
  EXPECT_EQ(summary.rows[0].coverage, tr.covers_true ? 1.0 : 0.0);
}

TEST(RunExperiment, BelowThresholdRowsAreFlagged) {
  sps::ExperimentPlan plan = small_plan();
  plan.n_grid = {5, 25};  // 5 is below the delta = 0.1 threshold of 7
  const sps::ExperimentSummary summary = sps::run_experiment(plan, 1);
  EXPECT_FALSE(summary.rows[0].bound_valid);
  EXPECT_TRUE(std::isnan(summary.rows[0].theo_exact));
  EXPECT_TRUE(summary.rows[1].bound_valid);
}

TEST(RunExperiment, GaussianRegimeHasNoOuterBound) {
  sps::ExperimentPlan plan = small_plan();
  plan.regressors = sps::RegressorModel::gaussian_iid(1.0);
  plan.regime = sps::BoundRegime::gaussian;
  plan.n_grid = {30};
  const sps::ExperimentSummary summary = sps::run_experiment(plan, 1);
  EXPECT_TRUE(std::isfinite(summary.rows[0].theo_exact));
  EXPECT_TRUE(std::isnan(summary.rows[0].theo_outer));
}

TEST(ExperimentPlan, RegimeModelCompatibility) {
  sps::ExperimentPlan plan = small_plan();
  plan.regressors = sps::RegressorModel::gaussian_iid(1.0);
  EXPECT_THROW(plan.validate(), std::invalid_argument);  // constant regime

  plan.regime = sps::BoundRegime::bounded;
  EXPECT_THROW(plan.validate(), std::invalid_argument);

  plan.regime = sps::BoundRegime::gaussian;
  EXPECT_NO_THROW(plan.validate());

  plan.regressors = sps::RegressorModel::constant(1.0);
  EXPECT_THROW(plan.validate(), std::invalid_argument);
}

TEST(BoundSpecFor, MgfRegimeMatchesGaussianRegime) {
  sps::ExperimentPlan plan = small_plan();
  plan.regressors = sps::RegressorModel::gaussian_iid(1.3);
  plan.regime = sps::BoundRegime::mgf;
  const sps::BoundSpec mgf = sps::bound_spec_for(plan, sps::BoundTarget::exact_region);
  plan.regime = sps::BoundRegime::gaussian;
  const sps::BoundSpec gauss =
      sps::bound_spec_for(plan, sps::BoundTarget::exact_region);
  for (double eps : {0.05, 0.4, 2.0}) {
    const double a = sps::tail_bound({eps, 60, 2, 1, mgf}).raw();
    const double b = sps::tail_bound({eps, 60, 2, 1, gauss}).raw();
    EXPECT_NEAR(a, b, 1e-12 * b);
  }
}

TEST(LemmaFrequencies, BasicShapeAndSoundness) {
  const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const int k = 20000;
  const auto noise = sps::NoiseModel::uniform(1.0);
  const auto freq = sps::lemma_tail_frequencies(11, noise, grid, k, 9001);

  ASSERT_EQ(freq.size(), grid.size());
  EXPECT_EQ(freq[0], 1.0);
  for (std::size_t j = 1; j < freq.size(); ++j) {
    EXPECT_LE(freq[j], freq[j - 1]);
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double bound = sps::lemma_tail(grid[j], 11, noise.sigma()).probability();
    const double noise_band =
        3.0 * std::sqrt(std::max(freq[j] * (1 - freq[j]), 1.0 / k) / k);
    EXPECT_LE(freq[j], bound + noise_band) << "eps " << grid[j];
  }

  EXPECT_THROW(sps::lemma_tail_frequencies(2, noise, grid, 10, 1),
               std::invalid_argument);
}

TEST(Shrinkage, MedianSizeDecreasesWithSampleSize) {
  sps::ExperimentPlan plan = small_plan();
  plan.delta = 0.5;  // the reported quantile becomes the median
  plan.n_grid = {25, 100, 400};
  plan.k = 200;
  const sps::ExperimentSummary summary = sps::run_experiment(plan, 1);
  ASSERT_EQ(summary.rows.size(), 3u);
  EXPECT_GT(summary.rows[0].emp_exact, summary.rows[1].emp_exact);
  EXPECT_GT(summary.rows[1].emp_exact, summary.rows[2].emp_exact);
}

}  // namespace
