#include "sps/model.hpp"

#include <stdexcept>

#include "gtest/gtest.h"
#include "sps/core.hpp"
#include "sps/rng.hpp"

namespace {

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(sps::Rational::parse("1/2"), sps::Rational(1, 2));
  EXPECT_EQ(sps::Rational::parse("0.75"), sps::Rational(3, 4));
  EXPECT_EQ(sps::Rational::parse("0.95"), sps::Rational(19, 20));
  EXPECT_EQ(sps::Rational::parse("4/8"), sps::Rational(1, 2));
  EXPECT_THROW(sps::Rational::parse("abc"), std::invalid_argument);
  EXPECT_THROW(sps::Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(sps::Rational::parse(""), std::invalid_argument);
}

TEST(ConfigFromLevel, PicksMinimalPair) {
  const sps::SpsConfig half = sps::config_from_level({1, 2}, 400, true);
  EXPECT_EQ(half.m, 2);
  EXPECT_EQ(half.q, 1);

  const sps::SpsConfig p80 = sps::config_from_level(sps::Rational::parse("0.8"), 25, true);
  EXPECT_EQ(p80.m, 5);
  EXPECT_EQ(p80.q, 1);

  const sps::SpsConfig p95 = sps::config_from_level(sps::Rational::parse("0.95"), 100, true);
  EXPECT_EQ(p95.m, 20);
  EXPECT_EQ(p95.q, 1);
}

TEST(ConfigFromLevel, RejectsOutOfRangeLevels) {
  EXPECT_THROW(sps::config_from_level({1, 1}, 10, false), std::invalid_argument);
  EXPECT_THROW(sps::config_from_level({0, 2}, 10, false), std::invalid_argument);
  EXPECT_THROW(sps::config_from_level({3, 2}, 10, false), std::invalid_argument);
  EXPECT_THROW(sps::config_from_level({-1, 2}, 10, false), std::invalid_argument);
}

TEST(ConfigFromLevel, LevelRoundTripIsExact) {
  // exercised over many (q, m) pairs: rational in, identical rational out
  for (int m = 2; m <= 40; ++m) {
    for (int q = 1; q < m; ++q) {
      const sps::Rational p(m - q, m);
      const sps::SpsConfig config = sps::config_from_level(p, 10, false);
      EXPECT_EQ(config.confidence_level(), p) << "m=" << m << " q=" << q;
    }
  }
}

TEST(SpsConfig, ValidatesShape) {
  EXPECT_THROW(sps::SpsConfig(1, 0, 10, false), std::invalid_argument);
  EXPECT_THROW(sps::SpsConfig(2, 2, 10, false), std::invalid_argument);
  EXPECT_THROW(sps::SpsConfig(2, 0, 10, false), std::invalid_argument);
  EXPECT_THROW(sps::SpsConfig(2, 1, 1, true), std::invalid_argument);
  EXPECT_NO_THROW(sps::SpsConfig(5, 4, 2, true));
}

TEST(SpsInstance, ValidatesEntries) {
  const sps::SpsConfig config(2, 1, 3, false);
  EXPECT_NO_THROW(sps::SpsInstance(config, {1, -1, 1}, {0, 1}));
  EXPECT_THROW(sps::SpsInstance(config, {1, -1}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(sps::SpsInstance(config, {1, 0, 1}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(sps::SpsInstance(config, {1, -1, 1}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(sps::SpsInstance(config, {1, -1, 1}, {1, 2}), std::invalid_argument);
}

TEST(SpsInstance, FixedSignInvariantMatchesFlag) {
  const sps::SpsConfig fixed(3, 1, 3, true);
  EXPECT_THROW(sps::SpsInstance(fixed, {-1, -1, 1, 1, -1, 1}, {0, 1, 2}),
               std::invalid_argument);
  EXPECT_NO_THROW(sps::SpsInstance(fixed, {1, -1, 1, 1, -1, 1}, {0, 1, 2}));

  // any sign pattern is fine when the flag is off
  const sps::SpsConfig free_signs(3, 1, 3, false);
  EXPECT_NO_THROW(sps::SpsInstance(free_signs, {-1, -1, 1, 1, 1, 1}, {0, 1, 2}));

  // instances produced by initialize satisfy the invariant iff requested
  for (bool fix : {true, false}) {
    const sps::SpsConfig config(4, 1, 6, fix);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      sps::Rng rng(seed);
      const sps::SpsInstance inst = sps::initialize(config, rng);
      bool starts_fixed = true;
      for (int i = 1; i < config.m; ++i) {
        starts_fixed = starts_fixed && inst.sign(i, 0) == 1 && inst.sign(i, 1) == -1;
      }
      if (fix) {
        EXPECT_TRUE(starts_fixed) << "seed " << seed;
      }
    }
  }
}

TEST(DataSet, ValidatesShapeAndFiniteness) {
  EXPECT_THROW(sps::DataSet({1.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(sps::DataSet({}, {}), std::invalid_argument);
  EXPECT_THROW(sps::DataSet({1.0, 1.0 / 0.0}, {1.0, 2.0}), std::invalid_argument);
  const sps::DataSet data({1.0, 2.0}, {3.0, 4.0});
  EXPECT_EQ(data.size(), 2);
  EXPECT_DOUBLE_EQ(data.sum_phi_squared(), 5.0);
}

TEST(ConfidenceRegion, ContainsAndValidate) {
  sps::ConfidenceRegion region;
  region.intervals = {{1.0, 2.0}, {3.0, 3.0}};
  region.validate();
  EXPECT_TRUE(region.contains(1.0));
  EXPECT_TRUE(region.contains(1.5));
  EXPECT_TRUE(region.contains(3.0));
  EXPECT_FALSE(region.contains(2.5));
  EXPECT_FALSE(region.contains(0.0));
  EXPECT_FALSE(region.contains(4.0));

  sps::ConfidenceRegion touching;
  touching.intervals = {{1.0, 2.0}, {2.0, 3.0}};
  EXPECT_THROW(touching.validate(), std::logic_error);

  sps::ConfidenceRegion misflagged;
  misflagged.intervals = {{-1.0 / 0.0, 2.0}};
  EXPECT_THROW(misflagged.validate(), std::logic_error);
  misflagged.unbounded_low = true;
  misflagged.validate();
}

TEST(BoundSpec, ValidatesScaleParameters) {
  sps::BoundSpec spec;
  spec.regime = sps::ConstantInNoise{0.0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.regime = sps::BoundedRegressor{1.0, -1.0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.regime = sps::GaussianRegressor{1.0, 0.0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.regime = sps::UserRegressorMgf{1.0, nullptr};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.regime = sps::GaussianRegressor{1.0, 2.0};
  EXPECT_NO_THROW(spec.validate());
}

}  // namespace
