#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace tollmatch {

// Flow samples X_0 .. X_t for one route, oldest first.
using FlowHistory = std::vector<double>;

enum class PredictorKind { persistence, linear, moving_average };

inline std::string to_string(PredictorKind k) {
  switch (k) {
    case PredictorKind::persistence: return "persistence";
    case PredictorKind::linear: return "linear";
    case PredictorKind::moving_average: return "moving_average";
  }
  return "?";
}

inline PredictorKind predictor_kind_from_string(const std::string& s) {
  if (s == "persistence") return PredictorKind::persistence;
  if (s == "linear") return PredictorKind::linear;
  if (s == "moving_average") return PredictorKind::moving_average;
  throw std::invalid_argument("unknown predictor method '" + s + "'");
}

struct PredictorConfig {
  PredictorKind kind = PredictorKind::persistence;
  int linear_window = 5;          // samples used for the least-squares fit
  int moving_average_window = 5;  // samples averaged

  void validate() const {
    if (linear_window < 2) throw std::invalid_argument("predictor: linear_window must be >= 2");
    if (moving_average_window < 1)
      throw std::invalid_argument("predictor: moving_average_window must be >= 1");
  }
};

namespace detail {

// Least-squares line over the trailing `window` samples, extrapolated q steps
// past the newest one.
inline double linear_forecast(const FlowHistory& h, int q, int window) {
  const int n = window;
  const int start = static_cast<int>(h.size()) - n;
  double mean_x = 0, mean_y = 0;
  for (int i = 0; i < n; ++i) {
    mean_x += i;
    mean_y += h[start + i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (i - mean_x) * (h[start + i] - mean_y);
    sxx += (i - mean_x) * (i - mean_x);
  }
  const double slope = sxy / sxx;
  return mean_y + slope * (n - 1 + q - mean_x);
}

}  // namespace detail

// Forecast X_{t+q} from the recorded history. All methods return a value
// clamped at >= 0. Histories shorter than the linear window fall back to
// persistence.
inline double predict(const FlowHistory& history, int q, const PredictorConfig& cfg) {
  cfg.validate();
  if (history.empty()) throw std::invalid_argument("predict: empty flow history");
  if (q < 1) throw std::invalid_argument("predict: q must be >= 1");
  switch (cfg.kind) {
    case PredictorKind::persistence:
      return history.back();
    case PredictorKind::linear: {
      if (static_cast<int>(history.size()) < cfg.linear_window) return history.back();
      return std::max(0.0, detail::linear_forecast(history, q, cfg.linear_window));
    }
    case PredictorKind::moving_average: {
      const int n = std::min<int>(cfg.moving_average_window, static_cast<int>(history.size()));
      double sum = 0;
      for (int i = static_cast<int>(history.size()) - n; i < static_cast<int>(history.size()); ++i)
        sum += history[i];
      return std::max(0.0, sum / n);
    }
  }
  throw std::logic_error("predict: unreachable");
}

}  // namespace tollmatch
