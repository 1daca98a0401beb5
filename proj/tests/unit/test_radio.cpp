// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "anchorsec/radio.hpp"
#include "anchorsec/random.hpp"

namespace anchorsec::radio {
namespace {

double sample_mean(double d, const NoiseModel& m, std::uint64_t seed, int n) {
  Rng rng(seed);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += measure_range(d, m, rng);
  return sum / n;
}

TEST(TrueDistance, Examples) {
  EXPECT_DOUBLE_EQ(true_distance({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(true_distance({7, 7}, {7, 7}), 0.0);
  EXPECT_NEAR(true_distance({0, 0}, {600, 600}), 600.0 * std::sqrt(2.0), 1e-9);
}

TEST(MeasureRange, ExactPassesThrough) {
  Rng rng(1);
  const Rng before = rng;
  EXPECT_EQ(measure_range(50.0, NoiseModel::exact(), rng), 50.0);
  EXPECT_EQ(rng, before) << "exact ranging must not consume randomness";
}

TEST(MeasureRange, ZeroSigmaGaussianIsExact) {
  Rng rng(1);
  EXPECT_EQ(measure_range(50.0, NoiseModel::gaussian(0.0), rng), 50.0);
}

TEST(MeasureRange, GaussianIsUnbiased) {
  constexpr int n = 100000;
  const double mean = sample_mean(50.0, NoiseModel::gaussian(0.5), 7, n);
  EXPECT_NEAR(mean, 50.0, 3.0 * 0.5 / std::sqrt(double(n)));
}

TEST(MeasureRange, GaussianClampsAtZero) {
  Rng rng(3);
  for (int k = 0; k < 10000; ++k) EXPECT_GE(measure_range(0.0, NoiseModel::gaussian(0.5), rng), 0.0);
}

TEST(MeasureRange, ShadowingClampsAtReferenceDistance) {
  Rng rng(4);
  const auto m = NoiseModel::shadowing(8.0, 2.0, 1.0);
  for (int k = 0; k < 10000; ++k) EXPECT_GE(measure_range(0.5, m, rng), 1.0);
}

TEST(MeasureRange, ShadowingMedianIsTrueDistance) {
  // The shadowing term is symmetric in dB, so half the draws fall short.
  Rng rng(5);
  const auto m = NoiseModel::shadowing(4.0, 3.0);
  int below = 0;
  constexpr int n = 20000;
  for (int k = 0; k < n; ++k) below += measure_range(100.0, m, rng) < 100.0;
  EXPECT_NEAR(double(below) / n, 0.5, 0.02);
}

TEST(MeasureRange, Deterministic) {
  Rng a(9), b(9);
  const auto m = NoiseModel::gaussian(0.5);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(measure_range(30.0, m, a), measure_range(30.0, m, b));
}

TEST(MeasureRange, ExpectationNondecreasingInDistance) {
  for (const auto& m : {NoiseModel::gaussian(0.5), NoiseModel::gaussian(3.0),
                        NoiseModel::shadowing(3.0)}) {
    double previous = -1.0;
    for (double d = 0.0; d <= 60.0; d += 5.0) {
      const double mean = sample_mean(d, m, 42, 20000);
      EXPECT_GE(mean, previous - 0.05) << to_string(m.kind) << " at d=" << d;
      previous = mean;
    }
  }
}

TEST(NoiseModel, Validation) {
  EXPECT_NO_THROW(NoiseModel::gaussian(0.5).validate());
  EXPECT_THROW(NoiseModel::gaussian(-0.1).validate(), Error);
  EXPECT_THROW(NoiseModel::shadowing(1.0, 1.0).validate(), Error);
  EXPECT_THROW(NoiseModel::shadowing(1.0, 6.5).validate(), Error);
  EXPECT_THROW(NoiseModel::shadowing(1.0, 2.0, 0.0).validate(), Error);
  EXPECT_TRUE(NoiseModel::exact().noiseless());
  EXPECT_TRUE(NoiseModel::gaussian(0).noiseless());
  EXPECT_FALSE(NoiseModel::gaussian(0.5).noiseless());
}

TEST(Streams, DerivedSeedsDifferByPurposeAndTrial) {
  EXPECT_NE(derive_seed(1, 0, Stream::deployment), derive_seed(1, 0, Stream::attack));
  EXPECT_NE(derive_seed(1, 0, Stream::deployment), derive_seed(1, 1, Stream::deployment));
  EXPECT_NE(derive_seed(1, 0, Stream::deployment), derive_seed(2, 0, Stream::deployment));
  EXPECT_EQ(make_stream(5, 3, Stream::detection)(), make_stream(5, 3, Stream::detection)());
}

}  // namespace
}  // namespace anchorsec::radio
