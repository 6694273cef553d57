#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tollmatch/simulator.hpp"

namespace tollmatch {

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const std::string& key,
                                           const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::runtime_error("config: missing field '" + key + "' in " + where);
  return *it;
}

template <typename T>
inline T get_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
  try {
    return require_field(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: bad value for '" + key + "' in " + where + ": " + e.what());
  }
}

template <typename T>
inline T get_field_or(const nlohmann::json& j, const std::string& key, const std::string& where,
                      T fallback) {
  if (j.find(key) == j.end()) return fallback;
  return get_field<T>(j, key, where);
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
  using detail::get_field;
  using detail::get_field_or;
  if (!j.is_object()) throw std::runtime_error("config: top level must be an object");

  ScenarioConfig cfg;
  cfg.horizon = get_field<int>(j, "horizon", "scenario");
  cfg.seed = get_field_or<std::uint64_t>(j, "seed", "scenario", 0);
  cfg.mode = match_mode_from_string(
      get_field_or<std::string>(j, "matching_mode", "scenario", "utility"));

  const auto& routes = detail::require_field(j, "routes", "scenario");
  if (!routes.is_array() || routes.empty())
    throw std::runtime_error("config: 'routes' must be a nonempty array");
  for (const auto& rj : routes) {
    RouteSpec r;
    r.id = get_field<std::string>(rj, "id", "route");
    r.free_flow_time = get_field<double>(rj, "free_flow_time", "route " + r.id);
    r.threshold_capacity = get_field<double>(rj, "threshold_capacity", "route " + r.id);
    r.congestion_a = get_field_or<double>(rj, "congestion_a", "route " + r.id, 0.15);
    r.congestion_b = get_field_or<double>(rj, "congestion_b", "route " + r.id, 4.0);
    r.slot_capacity = get_field<int>(rj, "slot_capacity", "route " + r.id);
    cfg.routes.push_back(r);
  }

  if (auto it = j.find("toll"); it != j.end()) {
    cfg.toll.beta = get_field_or<double>(*it, "beta", "toll", 0.0);
    cfg.toll.prediction_horizon = get_field_or<int>(*it, "prediction_horizon", "toll", 1);
    cfg.toll.fixed_penalty = get_field_or<double>(*it, "fixed_penalty", "toll", 0.0);
    cfg.toll.initial_toll = get_field_or<double>(*it, "initial_toll", "toll", 0.0);
  }

  if (auto it = j.find("predictor"); it != j.end()) {
    cfg.predictor.kind =
        predictor_kind_from_string(get_field_or<std::string>(*it, "method", "predictor",
                                                             "persistence"));
    cfg.predictor.linear_window = get_field_or<int>(*it, "linear_window", "predictor", 5);
    cfg.predictor.moving_average_window =
        get_field_or<int>(*it, "moving_average_window", "predictor", 5);
  }

  const auto& arrivals = detail::require_field(j, "arrivals", "scenario");
  const std::string kind = get_field<std::string>(arrivals, "kind", "arrivals");
  if (kind == "scripted") {
    cfg.arrivals.kind = ArrivalsConfig::Kind::scripted;
    const auto& drivers = detail::require_field(arrivals, "drivers", "arrivals");
    if (!drivers.is_array())
      throw std::runtime_error("config: 'arrivals.drivers' must be an array");
    for (const auto& dj : drivers) {
      DriverScript d;
      d.spec.id = get_field<int>(dj, "id", "driver");
      const std::string where = "driver " + std::to_string(d.spec.id);
      d.spec.arrival_time = get_field<int>(dj, "arrival_time", where);
      d.spec.willingness_to_pay = get_field<double>(dj, "willingness_to_pay", where);
      d.spec.deadline_window = get_field<int>(dj, "deadline_window", where);
      d.ready_at = get_field_or<int>(dj, "ready_at", where, -1);
      d.accepts = get_field_or<bool>(dj, "accepts", where, true);
      d.deviates_to = get_field_or<std::string>(dj, "deviates_to", where, "");
      cfg.arrivals.drivers.push_back(d);
    }
  } else if (kind == "random") {
    cfg.arrivals.kind = ArrivalsConfig::Kind::random;
    cfg.arrivals.random.rate = get_field<double>(arrivals, "rate", "arrivals");
    cfg.arrivals.random.alpha_min = get_field<double>(arrivals, "alpha_min", "arrivals");
    cfg.arrivals.random.alpha_max = get_field<double>(arrivals, "alpha_max", "arrivals");
    cfg.arrivals.random.deadline_window = get_field<int>(arrivals, "deadline_window", "arrivals");
  } else {
    throw std::runtime_error("config: arrivals.kind must be 'scripted' or 'random'");
  }

  if (auto it = j.find("compliance"); it != j.end())
    cfg.compliance.deviation_probability =
        get_field_or<double>(*it, "deviation_probability", "compliance", 0.0);

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(j);
}

}  // namespace tollmatch
