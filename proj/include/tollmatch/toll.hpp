#pragma once

#include <algorithm>
#include <stdexcept>

namespace tollmatch {

struct TollConfig {
  double beta = 0.0;           // toll change per unit of predicted flow growth
  int prediction_horizon = 1;  // q: timesteps ahead the flow forecast looks
  double fixed_penalty = 0.0;  // F, flat component of the switching penalty
  double initial_toll = 0.0;   // C_r^0

  void validate() const {
    if (!(beta >= 0)) throw std::invalid_argument("toll: beta must be >= 0");
    if (prediction_horizon < 1) throw std::invalid_argument("toll: prediction_horizon must be >= 1");
    if (!(fixed_penalty >= 0)) throw std::invalid_argument("toll: fixed_penalty must be >= 0");
    if (!(initial_toll >= 0)) throw std::invalid_argument("toll: initial_toll must be >= 0");
  }
};

// C_r^t = C_r^{t-1} + beta * (X_{t+q} - X_t), clamped at zero from below: a
// negative toll is not a charge anyone can collect.
inline double update_toll(double c_prev, const TollConfig& cfg, double x_future, double x_now) {
  if (c_prev < 0) throw std::invalid_argument("update_toll: negative previous toll");
  if (x_future < 0 || x_now < 0) throw std::invalid_argument("update_toll: negative flow");
  return std::max(0.0, c_prev + cfg.beta * (x_future - x_now));
}

// The route toll split evenly over the k_t drivers currently traveling, and
// only while the route is congested (k_t - k_f > 0). Uncongested travel is
// free regardless of the posted toll.
inline double per_driver_charge(double route_toll, int k_t, double k_f) {
  if (route_toll < 0) throw std::invalid_argument("per_driver_charge: negative toll");
  if (k_t < 0) throw std::invalid_argument("per_driver_charge: negative occupancy");
  if (!(k_f > 0)) throw std::invalid_argument("per_driver_charge: threshold capacity must be > 0");
  if (static_cast<double>(k_t) - k_f > 0) return route_toll / static_cast<double>(k_t);
  return 0.0;
}

// P = C_r^t + F, charged to a driver who travels a route other than the one
// assigned.
inline double penalty(double route_toll_now, const TollConfig& cfg) {
  if (route_toll_now < 0) throw std::invalid_argument("penalty: negative toll");
  return route_toll_now + cfg.fixed_penalty;
}

}  // namespace tollmatch
