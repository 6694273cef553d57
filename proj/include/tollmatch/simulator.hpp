#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tollmatch/core.hpp"
#include "tollmatch/matching.hpp"
#include "tollmatch/numeric.hpp"
#include "tollmatch/predictor.hpp"
#include "tollmatch/rng.hpp"
#include "tollmatch/toll.hpp"

namespace tollmatch {

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

// One scripted driver. ready_at (default: arrival_time) is the earliest
// timestep the driver can start traveling; the assignment is accepted at
// max(issue time, ready_at) when that is within the deadline. A driver with
// accepts=false lets every offer lapse. deviates_to names a route the driver
// actually travels instead of the assigned one (penalty exercise).
struct DriverScript {
  DriverSpec spec;
  int ready_at = -1;  // -1: same as arrival_time
  bool accepts = true;
  std::string deviates_to;

  int effective_ready_at() const { return ready_at < 0 ? spec.arrival_time : ready_at; }
};

struct RandomArrivals {
  double rate = 1.0;  // Poisson mean arrivals per timestep
  double alpha_min = 0.0;
  double alpha_max = 1.0;
  int deadline_window = 1;
};

struct ArrivalsConfig {
  enum class Kind { scripted, random } kind = Kind::scripted;
  std::vector<DriverScript> drivers;  // scripted mode
  RandomArrivals random;              // random mode
};

struct ComplianceConfig {
  double deviation_probability = 0.0;  // chance an accepting driver departs on another route
};

struct ScenarioConfig {
  int horizon = 1;
  std::vector<RouteSpec> routes;
  TollConfig toll;
  PredictorConfig predictor;
  ArrivalsConfig arrivals;
  MatchMode mode = MatchMode::utility;
  ComplianceConfig compliance;
  std::uint64_t seed = 0;

  const RouteSpec* find_route(const std::string& id) const {
    for (const auto& r : routes)
      if (r.id == id) return &r;
    return nullptr;
  }

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("scenario: horizon must be >= 1");
    if (routes.empty()) throw std::invalid_argument("scenario: at least one route required");
    for (const auto& r : routes) r.validate();
    for (std::size_t i = 0; i < routes.size(); ++i)
      for (std::size_t j = i + 1; j < routes.size(); ++j)
        if (routes[i].id == routes[j].id)
          throw std::invalid_argument("scenario: duplicate route id '" + routes[i].id + "'");
    toll.validate();
    predictor.validate();
    if (arrivals.kind == ArrivalsConfig::Kind::scripted) {
      std::vector<int> ids;
      for (const auto& d : arrivals.drivers) {
        d.spec.validate();
        ids.push_back(d.spec.id);
        if (!d.deviates_to.empty() && find_route(d.deviates_to) == nullptr)
          throw std::invalid_argument("scenario: deviates_to references unknown route '" +
                                      d.deviates_to + "'");
      }
      std::sort(ids.begin(), ids.end());
      if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::invalid_argument("scenario: duplicate driver id");
    } else {
      if (!(arrivals.random.rate >= 0)) throw std::invalid_argument("scenario: arrival rate must be >= 0");
      if (!(arrivals.random.alpha_min >= 0) || arrivals.random.alpha_max < arrivals.random.alpha_min)
        throw std::invalid_argument("scenario: invalid alpha bounds");
      if (arrivals.random.deadline_window < 1)
        throw std::invalid_argument("scenario: deadline_window must be >= 1");
    }
    if (!(compliance.deviation_probability >= 0 && compliance.deviation_probability <= 1))
      throw std::invalid_argument("scenario: deviation_probability must be in [0, 1]");
  }
};

// ---------------------------------------------------------------------------
// Event log
// ---------------------------------------------------------------------------

// The run is fully described by its event stream; metrics are computed from
// events, so replaying a serialized log reproduces the report exactly.
//
// Per-route records each timestep: flow (X_t, departures observed over the
// preceding step), toll (C_r after the anticipatory update), occupancy (k_t
// at the start of the step) and route_cost (R at that toll and occupancy).
// Per-driver records: arrive (value = reported alpha), offer (value = frozen
// charge) + eta (value = frozen travel time), or unmatched; accept (value =
// trip duration) + utility (realized, frozen at issue); penalty (value = P,
// route = the route actually traveled); expire; complete. A terminal `end`
// record (value = horizon) marks a complete log.
enum class EventKind {
  flow, toll, occupancy, route_cost,
  arrive, offer, eta, unmatched,
  accept, utility, penalty, expire, complete,
  end
};

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::flow: return "flow";
    case EventKind::toll: return "toll";
    case EventKind::occupancy: return "occupancy";
    case EventKind::route_cost: return "route_cost";
    case EventKind::arrive: return "arrive";
    case EventKind::offer: return "offer";
    case EventKind::eta: return "eta";
    case EventKind::unmatched: return "unmatched";
    case EventKind::accept: return "accept";
    case EventKind::utility: return "utility";
    case EventKind::penalty: return "penalty";
    case EventKind::expire: return "expire";
    case EventKind::complete: return "complete";
    case EventKind::end: return "end";
  }
  return "?";
}

inline EventKind event_kind_from_string(std::string_view s) {
  static const std::pair<const char*, EventKind> table[] = {
      {"flow", EventKind::flow},           {"toll", EventKind::toll},
      {"occupancy", EventKind::occupancy}, {"route_cost", EventKind::route_cost},
      {"arrive", EventKind::arrive},       {"offer", EventKind::offer},
      {"eta", EventKind::eta},             {"unmatched", EventKind::unmatched},
      {"accept", EventKind::accept},       {"utility", EventKind::utility},
      {"penalty", EventKind::penalty},     {"expire", EventKind::expire},
      {"complete", EventKind::complete},   {"end", EventKind::end},
  };
  for (const auto& [name, kind] : table)
    if (s == name) return kind;
  throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

struct Event {
  int timestep = 0;
  EventKind kind = EventKind::end;
  int driver = -1;      // -1: not a driver event
  std::string route;    // empty: not a route event
  double value = 0.0;
};

inline const char kEventLogHeader[] = "timestep,event_kind,driver,route,value";

inline std::string format_event(const Event& e) {
  std::string line = std::to_string(e.timestep);
  line += ',';
  line += to_string(e.kind);
  line += ',';
  if (e.driver >= 0) line += std::to_string(e.driver);
  line += ',';
  line += e.route;
  line += ',';
  line += format_double(e.value);
  return line;
}

inline Event parse_event(std::string_view line) {
  std::array<std::string_view, 5> col;
  std::size_t field = 0, start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (field >= col.size()) throw std::invalid_argument("too many columns");
      col[field++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (field != col.size()) throw std::invalid_argument("expected 5 columns");
  Event e;
  e.timestep = parse_int(col[0]);
  e.kind = event_kind_from_string(col[1]);
  e.driver = col[2].empty() ? -1 : parse_int(col[2]);
  e.route = std::string(col[3]);
  e.value = parse_double(col[4]);
  return e;
}

inline std::string serialize_log(const std::vector<Event>& events) {
  std::string out(kEventLogHeader);
  out += '\n';
  for (const auto& e : events) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct MetricsReport {
  double welfare = 0.0;
  double total_route_cost = 0.0;    // sum of per-timestep route costs
  double tolls_collected = 0.0;     // sum of charges of accepted assignments
  double penalties_collected = 0.0;
  int drivers = 0;
  int matched = 0;    // accepted an assignment
  int unmatched = 0;  // no eligible route at arrival
  int expired = 0;    // offer lapsed unaccepted
  int penalized = 0;
  int completed = 0;
  std::vector<std::string> route_ids;
  // Per-route traces indexed [route][timestep].
  std::vector<std::vector<double>> flow_trace;
  std::vector<std::vector<double>> toll_trace;
  std::vector<std::vector<double>> occupancy_trace;
  std::vector<std::vector<double>> route_cost_trace;

  bool operator==(const MetricsReport&) const = default;
};

// Folds an event stream into a MetricsReport. run() and replay() share this,
// which is what makes replay equality exact: both accumulate the same values
// in the same order.
class MetricsAccumulator {
 public:
  void feed(const Event& e) {
    if (finished_) throw std::invalid_argument("event after end record");
    switch (e.kind) {
      case EventKind::flow: trace_value(report_.flow_trace, e); break;
      case EventKind::toll: trace_value(report_.toll_trace, e); break;
      case EventKind::occupancy: trace_value(report_.occupancy_trace, e); break;
      case EventKind::route_cost:
        trace_value(report_.route_cost_trace, e);
        report_.total_route_cost += e.value;
        break;
      case EventKind::arrive:
        require_driver(e);
        ++report_.drivers;
        break;
      case EventKind::offer:
        require_driver(e);
        offer_charge_[e.driver] = e.value;
        break;
      case EventKind::eta:
        require_driver(e);
        break;
      case EventKind::unmatched:
        require_driver(e);
        ++report_.unmatched;
        break;
      case EventKind::accept: {
        require_driver(e);
        auto it = offer_charge_.find(e.driver);
        if (it == offer_charge_.end())
          throw std::invalid_argument("accept for driver " + std::to_string(e.driver) +
                                      " without a prior offer");
        ++report_.matched;
        report_.tolls_collected += it->second;
        break;
      }
      case EventKind::utility:
        require_driver(e);
        report_.welfare += e.value;
        break;
      case EventKind::penalty:
        require_driver(e);
        ++report_.penalized;
        report_.penalties_collected += e.value;
        break;
      case EventKind::expire:
        require_driver(e);
        ++report_.expired;
        break;
      case EventKind::complete:
        require_driver(e);
        ++report_.completed;
        break;
      case EventKind::end:
        finished_ = true;
        break;
    }
  }

  bool finished() const { return finished_; }

  MetricsReport finish() {
    if (!finished_) throw std::invalid_argument("log has no end record");
    return report_;
  }

 private:
  void require_driver(const Event& e) {
    if (e.driver < 0) throw std::invalid_argument(to_string(e.kind) + " record without a driver");
  }

  int route_index(const Event& e) {
    if (e.route.empty()) throw std::invalid_argument(to_string(e.kind) + " record without a route");
    for (std::size_t i = 0; i < report_.route_ids.size(); ++i)
      if (report_.route_ids[i] == e.route) return static_cast<int>(i);
    report_.route_ids.push_back(e.route);
    report_.flow_trace.emplace_back();
    report_.toll_trace.emplace_back();
    report_.occupancy_trace.emplace_back();
    report_.route_cost_trace.emplace_back();
    return static_cast<int>(report_.route_ids.size()) - 1;
  }

  void trace_value(std::vector<std::vector<double>>& trace, const Event& e) {
    const int r = route_index(e);
    if (static_cast<int>(trace[r].size()) != e.timestep)
      throw std::invalid_argument("trace record for route '" + e.route +
                                  "' out of order at timestep " + std::to_string(e.timestep));
    trace[r].push_back(e.value);
  }

  MetricsReport report_;
  std::map<int, double> offer_charge_;
  bool finished_ = false;
};

inline MetricsReport aggregate_metrics(const std::vector<Event>& events) {
  MetricsAccumulator acc;
  for (const auto& e : events) acc.feed(e);
  return acc.finish();
}

// Recomputes the metrics report from a serialized log alone. Malformed input
// is rejected with the offending line number.
inline MetricsReport replay(std::istream& in) {
  std::string line;
  int line_no = 0;
  MetricsAccumulator acc;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("event log, line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kEventLogHeader) fail("bad header");
      continue;
    }
    try {
      acc.feed(parse_event(line));
    } catch (const std::invalid_argument& err) {
      fail(err.what());
    }
  }
  if (line_no == 0) {
    line_no = 1;
    fail("empty log");
  }
  if (!acc.finished()) {
    ++line_no;
    fail("log truncated: missing end record");
  }
  return acc.finish();
}

inline MetricsReport replay(const std::string& log_text) {
  std::istringstream in(log_text);
  return replay(in);
}

// ---------------------------------------------------------------------------
// Run engine
// ---------------------------------------------------------------------------

struct RunResult {
  MetricsReport metrics;
  std::vector<Event> events;
  Matching matching;  // accepted assignments with frozen quotes + arrival-time unmatched
};

namespace detail {

constexpr std::uint64_t kArrivalStream = 0xA1;
constexpr std::uint64_t kAlphaStream = 0xA2;
constexpr std::uint64_t kComplianceStream = 0xA3;

struct LiveDriver {
  DriverScript script;
  std::optional<Assignment> assignment;
  int assigned_route = -1;  // route index of the assignment
  int actual_route = -1;    // route index actually traveled (set at departure)
};

// Materializes the arrival list for a run. Scripted scenarios pass through;
// random scenarios draw a Poisson arrival count per timestep and a per-driver
// alpha keyed by driver id, so the draws for one driver are independent of
// how many others exist.
inline std::vector<DriverScript> materialize_arrivals(const ScenarioConfig& cfg) {
  if (cfg.arrivals.kind == ArrivalsConfig::Kind::scripted) return cfg.arrivals.drivers;
  std::vector<DriverScript> out;
  auto arrivals_rng = substream(cfg.seed, kArrivalStream);
  std::poisson_distribution<int> count(cfg.arrivals.random.rate);
  int next_id = 0;
  for (int t = 0; t < cfg.horizon; ++t) {
    const int n = cfg.arrivals.random.rate > 0 ? count(arrivals_rng) : 0;
    for (int i = 0; i < n; ++i) {
      DriverScript d;
      d.spec.id = next_id++;
      d.spec.arrival_time = t;
      auto alpha_rng = substream(cfg.seed, kAlphaStream, static_cast<std::uint64_t>(d.spec.id));
      std::uniform_real_distribution<double> alpha(cfg.arrivals.random.alpha_min,
                                                   cfg.arrivals.random.alpha_max);
      d.spec.willingness_to_pay = alpha(alpha_rng);
      d.spec.deadline_window = cfg.arrivals.random.deadline_window;
      out.push_back(d);
    }
  }
  return out;
}

}  // namespace detail

// Executes one scenario. Per timestep, in fixed order: (1) record X_t per
// route, (2) predict X_{t+q}, (3) update tolls, (4) process arrivals in
// driver-id order through assign_online, (5) resolve acceptances and expiries,
// (6) advance trips, applying completions and penalties. Identical
// (config, seed) gives a byte-identical event log.
inline RunResult run(const ScenarioConfig& cfg) {
  cfg.validate();
  const int m = static_cast<int>(cfg.routes.size());

  std::vector<RouteState> state(m);
  for (auto& s : state) s.toll = cfg.toll.initial_toll;
  std::vector<int> slots_in_use(m, 0);   // pending + accepted-and-traveling assignments
  std::vector<int> departures(m, 0);     // departures since the last flow record

  std::vector<detail::LiveDriver> drivers;
  for (auto& d : detail::materialize_arrivals(cfg)) drivers.push_back({d, std::nullopt, -1, -1});
  std::stable_sort(drivers.begin(), drivers.end(),
                   [](const auto& a, const auto& b) { return a.script.spec.id < b.script.spec.id; });

  struct Trip {
    int driver_index;
    int route;     // route actually traveled
    int ends_at;
  };
  std::vector<Trip> trips;

  auto route_index = [&](const std::string& id) {
    for (int r = 0; r < m; ++r)
      if (cfg.routes[r].id == id) return r;
    throw std::logic_error("unknown route '" + id + "'");
  };

  std::vector<Event> events;
  auto emit = [&](int t, EventKind kind, int driver, const std::string& route, double value) {
    events.push_back({t, kind, driver, route, value});
  };

  for (int t = 0; t < cfg.horizon; ++t) {
    // (1)-(3): flow sample, forecast, anticipatory toll update, per route.
    for (int r = 0; r < m; ++r) {
      const double x_now = static_cast<double>(departures[r]);
      departures[r] = 0;
      state[r].flow_history.push_back(x_now);
      const double x_future = predict(state[r].flow_history, cfg.toll.prediction_horizon, cfg.predictor);
      state[r].toll = update_toll(state[r].toll, cfg.toll, x_future, x_now);

      const double e_t = travel_time(cfg.routes[r], static_cast<double>(state[r].occupancy));
      emit(t, EventKind::flow, -1, cfg.routes[r].id, x_now);
      emit(t, EventKind::toll, -1, cfg.routes[r].id, state[r].toll);
      emit(t, EventKind::occupancy, -1, cfg.routes[r].id, static_cast<double>(state[r].occupancy));
      emit(t, EventKind::route_cost, -1, cfg.routes[r].id,
           route_cost(e_t, cfg.routes[r].free_flow_time, state[r].toll));
    }

    // (4): arrivals, ascending driver id (drivers are sorted by id).
    for (auto& live : drivers) {
      if (live.script.spec.arrival_time != t) continue;
      const DriverSpec& spec = live.script.spec;
      emit(t, EventKind::arrive, spec.id, "", spec.willingness_to_pay);
      std::vector<RouteQuote> quotes;
      quotes.reserve(m);
      for (int r = 0; r < m; ++r)
        quotes.push_back(quote_route(cfg.routes[r], state[r], slots_in_use[r]));
      auto a = assign_online(spec, quotes, cfg.mode, t);
      if (!a) {
        emit(t, EventKind::unmatched, spec.id, "", 0.0);
        continue;
      }
      live.assignment = *a;
      live.assigned_route = route_index(a->route);
      slots_in_use[live.assigned_route] += 1;
      emit(t, EventKind::offer, spec.id, a->route, a->charge);
      emit(t, EventKind::eta, spec.id, a->route, a->travel_time);
    }

    // (5): acceptances and expiries, ascending driver id.
    for (std::size_t di = 0; di < drivers.size(); ++di) {
      auto& live = drivers[di];
      if (!live.assignment || live.assignment->status != AssignmentStatus::pending) continue;
      Assignment& a = *live.assignment;
      const int planned = std::max(a.issued_at, live.script.effective_ready_at());
      if (live.script.accepts && planned == t && t <= a.deadline) {
        a.accept(t);

        // Departure: resolve the route actually traveled.
        int actual = live.assigned_route;
        if (!live.script.deviates_to.empty()) {
          actual = route_index(live.script.deviates_to);
        } else if (cfg.compliance.deviation_probability > 0 && m > 1) {
          auto rng = substream(cfg.seed, detail::kComplianceStream,
                               static_cast<std::uint64_t>(a.driver));
          std::uniform_real_distribution<double> coin(0.0, 1.0);
          if (coin(rng) < cfg.compliance.deviation_probability) {
            std::uniform_int_distribution<int> pick(0, m - 2);
            int r = pick(rng);
            actual = r >= live.assigned_route ? r + 1 : r;
          }
        }
        live.actual_route = actual;

        // Trip duration from the traveled route at the occupancy the driver
        // observes joining (before its own increment).
        const double e_t_now =
            travel_time(cfg.routes[actual], static_cast<double>(state[actual].occupancy));
        const int duration = std::max(1, static_cast<int>(std::ceil(e_t_now)));
        state[actual].occupancy += 1;
        departures[actual] += 1;
        trips.push_back({static_cast<int>(di), actual, t + duration});

        emit(t, EventKind::accept, a.driver, a.route, static_cast<double>(duration));
        emit(t, EventKind::utility, a.driver, a.route, a.quoted_utility());
        if (actual != live.assigned_route) {
          const double p = enforce_penalty(a, cfg.routes[actual].id, state[actual].toll, cfg.toll);
          slots_in_use[live.assigned_route] -= 1;  // slot released; its holder left the mechanism
          emit(t, EventKind::penalty, a.driver, cfg.routes[actual].id, p);
        }
      } else if (t == a.deadline + 1) {
        a.expire();
        slots_in_use[live.assigned_route] -= 1;
        emit(t, EventKind::expire, a.driver, a.route, 0.0);
      }
    }

    // (6): trip completions.
    std::stable_sort(trips.begin(), trips.end(), [&](const Trip& a, const Trip& b) {
      if (a.ends_at != b.ends_at) return a.ends_at < b.ends_at;
      return drivers[a.driver_index].script.spec.id < drivers[b.driver_index].script.spec.id;
    });
    for (auto it = trips.begin(); it != trips.end();) {
      if (it->ends_at != t) {
        ++it;
        continue;
      }
      auto& live = drivers[it->driver_index];
      Assignment& a = *live.assignment;
      state[it->route].occupancy -= 1;
      if (a.status == AssignmentStatus::accepted) {
        a.complete();
        slots_in_use[live.assigned_route] -= 1;
      }
      emit(t, EventKind::complete, a.driver, cfg.routes[it->route].id, 0.0);
      it = trips.erase(it);
    }
  }

  // Offers still pending when the horizon ends lapse administratively so the
  // outcome counts always add up to the number of arrivals.
  for (auto& live : drivers) {
    if (live.assignment && live.assignment->status == AssignmentStatus::pending) {
      live.assignment->expire();
      slots_in_use[live.assigned_route] -= 1;
      emit(cfg.horizon, EventKind::expire, live.assignment->driver, live.assignment->route, 0.0);
    }
  }
  emit(cfg.horizon, EventKind::end, -1, "", static_cast<double>(cfg.horizon));

  RunResult result;
  result.events = std::move(events);
  result.metrics = aggregate_metrics(result.events);
  for (const auto& live : drivers) {
    if (!live.assignment) {
      if (live.script.spec.arrival_time < cfg.horizon)
        result.matching.unmatched.push_back(live.script.spec.id);
      continue;
    }
    const Assignment& a = *live.assignment;
    if (a.status == AssignmentStatus::expired) continue;
    result.matching.assignments.push_back(
        {a.driver, a.route, a.charge, a.travel_time, a.free_flow_time});
  }
  return result;
}

// Realized utility of one driver in a finished run: the frozen quote if the
// driver accepted, otherwise 0 (unmatched, expired, or never arrived).
inline double realized_utility(const std::vector<Event>& events, int driver) {
  for (const auto& e : events)
    if (e.kind == EventKind::utility && e.driver == driver) return e.value;
  return 0.0;
}

}  // namespace tollmatch
