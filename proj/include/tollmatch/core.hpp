#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tollmatch {

// Absolute tolerance for comparing currency/time quantities.
constexpr double kValueTolerance = 1e-9;

// Static parameters of a route. Travel time follows the BPR volume-delay
// curve: E_t = E_f * (1 + A * (k_t / k_f)^B).
struct RouteSpec {
  std::string id;
  double free_flow_time = 1.0;       // E_f, minutes
  double threshold_capacity = 1.0;   // k_f, occupancy up to which traffic is free flowing
  double congestion_a = 0.15;        // A
  double congestion_b = 4.0;         // B
  int slot_capacity = 1;             // max simultaneous assignments

  void validate() const {
    if (id.empty()) throw std::invalid_argument("route: empty id");
    if (!(free_flow_time > 0)) throw std::invalid_argument("route " + id + ": free_flow_time must be > 0");
    if (!(threshold_capacity > 0)) throw std::invalid_argument("route " + id + ": threshold_capacity must be > 0");
    if (!(congestion_a >= 0)) throw std::invalid_argument("route " + id + ": congestion_a must be >= 0");
    if (!(congestion_b >= 1)) throw std::invalid_argument("route " + id + ": congestion_b must be >= 1");
    if (slot_capacity < 1) throw std::invalid_argument("route " + id + ": slot_capacity must be >= 1");
  }
};

// Evolving per-route state owned by one simulation run. flow_history gains
// exactly one sample per timestep; toll stays clamped at >= 0.
struct RouteState {
  int occupancy = 0;                 // k_t: trips currently on the route
  std::vector<double> flow_history;  // X_0 .. X_t
  double toll = 0.0;                 // C_r
};

struct DriverSpec {
  int id = 0;
  int arrival_time = 0;
  double willingness_to_pay = 0.0;   // alpha_d: max per-driver charge the driver accepts
  int deadline_window = 1;           // timesteps between offer and acceptance deadline

  void validate() const {
    if (arrival_time < 0) throw std::invalid_argument("driver: arrival_time must be >= 0");
    if (!(willingness_to_pay >= 0)) throw std::invalid_argument("driver: willingness_to_pay must be >= 0");
    if (deadline_window < 1) throw std::invalid_argument("driver: deadline_window must be >= 1");
  }
};

// One matched driver with the charge and travel time quoted when the
// assignment was issued.
struct MatchedDriver {
  int driver = 0;
  std::string route;
  double charge = 0.0;         // C_d, frozen at issue
  double travel_time = 0.0;    // E_t, frozen at issue
  double free_flow_time = 0.0; // E_f of the route
};

struct Matching {
  std::vector<MatchedDriver> assignments;
  std::vector<int> unmatched;
};

// E_t = E_f * (1 + A * (k_t / k_f)^B). Nondecreasing in k_t, equal to E_f at
// zero occupancy.
inline double travel_time(const RouteSpec& r, double k_t) {
  if (k_t < 0) throw std::invalid_argument("travel_time: negative occupancy");
  return r.free_flow_time *
         (1.0 + r.congestion_a * std::pow(k_t / r.threshold_capacity, r.congestion_b));
}

// R = (E_t - E_f) * C_r: the toll-weighted delay a route imposes.
inline double route_cost(double e_t, double e_f, double toll) {
  if (e_f < 0) throw std::invalid_argument("route_cost: negative free-flow time");
  if (toll < 0) throw std::invalid_argument("route_cost: negative toll");
  if (e_t < e_f) throw std::invalid_argument("route_cost: travel time below free-flow time");
  return (e_t - e_f) * toll;
}

// U = (E_f - E_t) * C_d, taken literally: nonpositive whenever the trip is
// slower than free flow, zero when the trip is free or uncharged.
inline double driver_utility(double e_f, double e_t, double charge) {
  if (charge < 0) throw std::invalid_argument("driver_utility: negative charge");
  return (e_f - e_t) * charge;
}

// W(mu): sum of assigned drivers' utilities; unmatched drivers count 0.
inline double welfare(const Matching& m) {
  double sum = 0.0;
  for (const auto& a : m.assignments)
    sum += driver_utility(a.free_flow_time, a.travel_time, a.charge);
  return sum;
}

}  // namespace tollmatch
