#include "tollmatch/toll.hpp"

#include <gtest/gtest.h>

#include "tollmatch/predictor.hpp"
#include "tollmatch/rng.hpp"

using namespace tollmatch;

namespace {

TollConfig cfg(double beta, int q = 1, double fixed = 0.0, double initial = 0.0) {
  return {beta, q, fixed, initial};
}

TEST(UpdateToll, ZeroSensitivityLeavesTollUnchanged) {
  EXPECT_DOUBLE_EQ(update_toll(2.0, cfg(0.0), 99.0, 1.0), 2.0);
}

TEST(UpdateToll, FlatPredictionLeavesTollUnchanged) {
  EXPECT_DOUBLE_EQ(update_toll(2.0, cfg(0.1), 40.0, 40.0), 2.0);
}

TEST(UpdateToll, GrowingFlowRaisesToll) {
  EXPECT_NEAR(update_toll(2.0, cfg(0.1), 50.0, 40.0), 3.0, 1e-12);
}

TEST(UpdateToll, ClampedAtZero) {
  EXPECT_DOUBLE_EQ(update_toll(1.0, cfg(1.0), 0.0, 10.0), 0.0);
  auto rng = substream(21, 1);
  std::uniform_real_distribution<double> flow(0.0, 100.0);
  std::uniform_real_distribution<double> toll(0.0, 5.0);
  for (int i = 0; i < 200; ++i)
    EXPECT_GE(update_toll(toll(rng), cfg(0.5), flow(rng), flow(rng)), 0.0);
}

TEST(UpdateToll, PersistencePredictionKeepsTollConstant) {
  // With X_{t+q} = X_t the recurrence is the identity, for any beta.
  PredictorConfig persistence;
  FlowHistory history;
  double toll = 1.75;
  auto rng = substream(22, 1);
  std::uniform_real_distribution<double> flow(0.0, 30.0);
  for (int t = 0; t < 100; ++t) {
    history.push_back(flow(rng));
    const double predicted = predict(history, 3, persistence);
    toll = update_toll(toll, cfg(0.4, 3), predicted, history.back());
    ASSERT_EQ(toll, 1.75);
  }
}

TEST(PerDriverCharge, FreeBelowThreshold) {
  EXPECT_DOUBLE_EQ(per_driver_charge(6.0, 80, 100.0), 0.0);
}

TEST(PerDriverCharge, FreeAtThresholdBoundary) {
  EXPECT_DOUBLE_EQ(per_driver_charge(6.0, 100, 100.0), 0.0);
}

TEST(PerDriverCharge, EvenSplitWhenCongested) {
  EXPECT_DOUBLE_EQ(per_driver_charge(6.0, 120, 100.0), 0.05);
}

TEST(PerDriverCharge, SplitsTollExactlyAcrossTravelers) {
  auto rng = substream(23, 1);
  std::uniform_real_distribution<double> toll(0.0, 50.0);
  std::uniform_int_distribution<int> occupancy(1, 500);
  for (int i = 0; i < 500; ++i) {
    const double c = toll(rng);
    const int k = occupancy(rng);
    const double k_f = k * 0.5;  // force the congested branch
    EXPECT_NEAR(k * per_driver_charge(c, k, k_f), c, 1e-9);
  }
}

TEST(PerDriverCharge, RejectsBadArguments) {
  EXPECT_THROW(per_driver_charge(-1.0, 10, 5.0), std::invalid_argument);
  EXPECT_THROW(per_driver_charge(1.0, -1, 5.0), std::invalid_argument);
  EXPECT_THROW(per_driver_charge(1.0, 10, 0.0), std::invalid_argument);
}

TEST(Penalty, Examples) {
  EXPECT_DOUBLE_EQ(penalty(3.0, cfg(0.0, 1, 0.0)), 3.0);
  EXPECT_DOUBLE_EQ(penalty(0.0, cfg(0.0, 1, 5.0)), 5.0);
  EXPECT_DOUBLE_EQ(penalty(3.0, cfg(0.0, 1, 5.0)), 8.0);
}

TEST(TollConfig, Validation) {
  EXPECT_NO_THROW(cfg(0.1, 3, 5.0, 1.0).validate());
  EXPECT_THROW(cfg(-0.1).validate(), std::invalid_argument);
  EXPECT_THROW(cfg(0.1, 0).validate(), std::invalid_argument);
  EXPECT_THROW(cfg(0.1, 1, -1.0).validate(), std::invalid_argument);
}

}  // namespace
