#include "tollmatch/predictor.hpp"

#include <gtest/gtest.h>

#include "tollmatch/rng.hpp"

using namespace tollmatch;

namespace {

PredictorConfig persistence() { return {PredictorKind::persistence, 5, 5}; }
PredictorConfig linear(int window) { return {PredictorKind::linear, window, 5}; }
PredictorConfig moving_average(int window) { return {PredictorKind::moving_average, 5, window}; }

// Independent least-squares oracle: solves the 2x2 normal equations directly
// over the trailing window, unlike the implementation's centered form.
double least_squares_forecast(const FlowHistory& h, int q, int window) {
  const int n = window;
  const int start = static_cast<int>(h.size()) - n;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += i;
    sy += h[start + i];
    sxx += static_cast<double>(i) * i;
    sxy += i * h[start + i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  return intercept + slope * (n - 1 + q);
}

TEST(Persistence, CarriesLastValueForward) {
  EXPECT_DOUBLE_EQ(predict({10, 40}, 3, persistence()), 40.0);
  EXPECT_DOUBLE_EQ(predict({10, 40}, 1, persistence()), 40.0);
  EXPECT_DOUBLE_EQ(predict({7}, 9, persistence()), 7.0);
}

TEST(Linear, ExtrapolatesSlope) {
  // Slope 10 per step, one step ahead of 30.
  EXPECT_NEAR(predict({10, 20, 30}, 1, linear(3)), 40.0, 1e-9);
  EXPECT_NEAR(predict({10, 20, 30}, 1, linear(3)), least_squares_forecast({10, 20, 30}, 1, 3),
              1e-9);
}

TEST(Linear, MatchesNormalEquationOracle) {
  auto rng = substream(31, 1);
  std::uniform_real_distribution<double> flow(0.0, 60.0);
  for (int trial = 0; trial < 100; ++trial) {
    FlowHistory h;
    for (int i = 0; i < 12; ++i) h.push_back(flow(rng));
    for (int q = 1; q <= 4; ++q) {
      const double expected = std::max(0.0, least_squares_forecast(h, q, 5));
      EXPECT_NEAR(predict(h, q, linear(5)), expected, 1e-9);
    }
  }
}

TEST(Linear, ClampsNegativeForecasts) {
  // Slope -10 extrapolated far past zero.
  EXPECT_DOUBLE_EQ(predict({30, 20, 10}, 5, linear(3)), 0.0);
}

TEST(Linear, ShortHistoryFallsBackToPersistence) {
  EXPECT_DOUBLE_EQ(predict({10, 20, 30}, 1, linear(5)), 30.0);
}

TEST(MovingAverage, MeanOfTrailingWindow) {
  EXPECT_NEAR(predict({10, 20, 30}, 1, moving_average(2)), 25.0, 1e-9);
  EXPECT_NEAR(predict({10, 20, 30}, 7, moving_average(2)), 25.0, 1e-9);
  // Window longer than the history averages what exists.
  EXPECT_NEAR(predict({10, 20}, 1, moving_average(5)), 15.0, 1e-9);
}

TEST(AllMethods, ConstantHistoryIsAFixedPoint) {
  const FlowHistory constant(10, 4.25);
  for (auto cfg : {persistence(), linear(5), moving_average(3)})
    for (int q : {1, 2, 7}) EXPECT_DOUBLE_EQ(predict(constant, q, cfg), 4.25);
}

TEST(AllMethods, ForecastsAreNonnegative) {
  auto rng = substream(32, 1);
  std::uniform_real_distribution<double> flow(0.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    FlowHistory h;
    const int len = 1 + trial % 10;
    for (int i = 0; i < len; ++i) h.push_back(flow(rng));
    for (auto cfg : {persistence(), linear(4), moving_average(3)})
      EXPECT_GE(predict(h, 2, cfg), 0.0);
  }
}

TEST(Predict, RejectsBadInput) {
  EXPECT_THROW(predict({}, 1, persistence()), std::invalid_argument);
  EXPECT_THROW(predict({1.0}, 0, persistence()), std::invalid_argument);
  EXPECT_THROW(predict({1.0}, 1, linear(1)), std::invalid_argument);
  EXPECT_THROW(predict({1.0}, 1, moving_average(0)), std::invalid_argument);
}

}  // namespace
