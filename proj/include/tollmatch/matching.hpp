#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tollmatch/core.hpp"
#include "tollmatch/toll.hpp"

namespace tollmatch {

// ---------------------------------------------------------------------------
// Assignment lifecycle
// ---------------------------------------------------------------------------

enum class AssignmentStatus { pending, accepted, expired, penalized, completed };

inline std::string to_string(AssignmentStatus s) {
  switch (s) {
    case AssignmentStatus::pending: return "pending";
    case AssignmentStatus::accepted: return "accepted";
    case AssignmentStatus::expired: return "expired";
    case AssignmentStatus::penalized: return "penalized";
    case AssignmentStatus::completed: return "completed";
  }
  return "?";
}

// A route offer issued to one driver. Charge and travel time are frozen at
// issue time: later toll updates never reprice an outstanding assignment.
// Status moves pending -> {accepted, expired} and accepted -> {completed,
// penalized}; every other transition is rejected.
struct Assignment {
  int driver = 0;
  std::string route;
  int issued_at = 0;
  int deadline = 0;             // issued_at + deadline_window
  double charge = 0.0;          // C_d at issue
  double travel_time = 0.0;     // E_t at issue
  double free_flow_time = 0.0;  // E_f of the route
  AssignmentStatus status = AssignmentStatus::pending;

  void accept(int t) {
    if (status != AssignmentStatus::pending)
      throw std::logic_error("assignment: accept on non-pending assignment");
    if (t > deadline) throw std::logic_error("assignment: accept past deadline");
    status = AssignmentStatus::accepted;
  }
  void expire() {
    if (status != AssignmentStatus::pending)
      throw std::logic_error("assignment: expire on non-pending assignment");
    status = AssignmentStatus::expired;
  }
  void complete() {
    if (status != AssignmentStatus::accepted)
      throw std::logic_error("assignment: complete on non-accepted assignment");
    status = AssignmentStatus::completed;
  }
  void penalize() {
    if (status != AssignmentStatus::accepted)
      throw std::logic_error("assignment: penalize on non-accepted assignment");
    status = AssignmentStatus::penalized;
  }

  // Utility the driver realizes if this assignment is accepted; an expired
  // assignment realizes 0.
  double quoted_utility() const { return driver_utility(free_flow_time, travel_time, charge); }
};

// Accepts at `accepted_at` when that is within the deadline (closed
// interval), otherwise expires; nullopt means the driver never accepted.
inline Assignment resolve_deadline(Assignment a, std::optional<int> accepted_at) {
  if (accepted_at.has_value() && *accepted_at <= a.deadline)
    a.accept(*accepted_at);
  else
    a.expire();
  return a;
}

// Applies the switching rule at departure: a driver traveling the assigned
// route owes nothing extra; a driver departing on any other route is marked
// penalized and owes P = C_r^t(actual) + F.
inline double enforce_penalty(Assignment& a, const std::string& actual_route,
                              double actual_route_toll_now, const TollConfig& cfg) {
  if (a.status != AssignmentStatus::accepted)
    throw std::logic_error("enforce_penalty: assignment not accepted");
  if (actual_route == a.route) return 0.0;
  a.penalize();
  return penalty(actual_route_toll_now, cfg);
}

// ---------------------------------------------------------------------------
// Route quotes and online assignment (Algorithms 1 and 2)
// ---------------------------------------------------------------------------

// Snapshot of one route as seen by an arriving driver: travel time and
// per-driver charge at the current occupancy/toll, plus the data the ranking
// tie-break needs.
struct RouteQuote {
  std::string route_id;
  double free_flow_time = 0.0;
  double travel_time = 0.0;        // E_t at current k_t
  double charge = 0.0;             // per-driver charge at current k_t, C_r
  double toll = 0.0;               // route toll C_r
  double residual_capacity = 0.0;  // k_f - k_t
  bool slot_available = true;      // assignments outstanding < slot_capacity

  double projected_utility() const { return driver_utility(free_flow_time, travel_time, charge); }
  double projected_cost() const { return route_cost(travel_time, free_flow_time, toll); }
};

// slots_in_use counts assignments that are pending or accepted-and-traveling
// on the route; it is what slot_capacity bounds.
inline RouteQuote quote_route(const RouteSpec& spec, const RouteState& state, int slots_in_use) {
  RouteQuote q;
  q.route_id = spec.id;
  q.free_flow_time = spec.free_flow_time;
  q.travel_time = travel_time(spec, static_cast<double>(state.occupancy));
  q.toll = state.toll;
  q.charge = per_driver_charge(state.toll, state.occupancy, spec.threshold_capacity);
  q.residual_capacity = spec.threshold_capacity - static_cast<double>(state.occupancy);
  q.slot_available = slots_in_use < spec.slot_capacity;
  return q;
}

// Routes the driver can be assigned to: charge within the reported
// willingness to pay and a slot still open. May be empty.
inline std::vector<RouteQuote> eligible_routes(double willingness_to_pay,
                                               std::span<const RouteQuote> quotes) {
  std::vector<RouteQuote> out;
  for (const auto& q : quotes)
    if (q.slot_available && q.charge <= willingness_to_pay) out.push_back(q);
  return out;
}

inline std::vector<RouteQuote> eligible_routes(const DriverSpec& d,
                                               std::span<const RouteSpec> specs,
                                               std::span<const RouteState> states,
                                               std::span<const int> slots_in_use) {
  if (specs.size() != states.size() || specs.size() != slots_in_use.size())
    throw std::invalid_argument("eligible_routes: mismatched route arrays");
  std::vector<RouteQuote> quotes;
  quotes.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i)
    quotes.push_back(quote_route(specs[i], states[i], slots_in_use[i]));
  return eligible_routes(d.willingness_to_pay, quotes);
}

namespace detail {

// Shared tie-break: larger residual capacity first, then route id, so every
// ranking is a total order.
inline bool tie_break_before(const RouteQuote& a, const RouteQuote& b) {
  if (std::abs(a.residual_capacity - b.residual_capacity) > kValueTolerance)
    return a.residual_capacity > b.residual_capacity;
  return a.route_id < b.route_id;
}

}  // namespace detail

// Descending projected utility; ties by residual capacity, then id.
inline void rank_routes_by_utility(std::vector<RouteQuote>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const RouteQuote& a, const RouteQuote& b) {
                     const double ua = a.projected_utility(), ub = b.projected_utility();
                     if (std::abs(ua - ub) > kValueTolerance) return ua > ub;
                     return detail::tie_break_before(a, b);
                   });
}

// Ascending projected route cost; same tie-break.
inline void rank_routes_by_cost(std::vector<RouteQuote>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const RouteQuote& a, const RouteQuote& b) {
                     const double ca = a.projected_cost(), cb = b.projected_cost();
                     if (std::abs(ca - cb) > kValueTolerance) return ca < cb;
                     return detail::tie_break_before(a, b);
                   });
}

enum class MatchMode { utility, cost };

inline std::string to_string(MatchMode m) {
  return m == MatchMode::utility ? "utility" : "cost";
}

inline MatchMode match_mode_from_string(const std::string& s) {
  if (s == "utility") return MatchMode::utility;
  if (s == "cost") return MatchMode::cost;
  throw std::invalid_argument("unknown matching mode '" + s + "'");
}

// One step of the online matching: rank the driver's eligible routes
// (descending utility or ascending cost) and issue a pending assignment on
// the top route, with charge and travel time frozen at issue. Returns nullopt
// when no route is eligible.
inline std::optional<Assignment> assign_online(const DriverSpec& d,
                                               std::span<const RouteQuote> quotes,
                                               MatchMode mode, int now) {
  std::vector<RouteQuote> candidates = eligible_routes(d.willingness_to_pay, quotes);
  if (candidates.empty()) return std::nullopt;
  if (mode == MatchMode::utility)
    rank_routes_by_utility(candidates);
  else
    rank_routes_by_cost(candidates);
  const RouteQuote& top = candidates.front();
  Assignment a;
  a.driver = d.id;
  a.route = top.route_id;
  a.issued_at = now;
  a.deadline = now + d.deadline_window;
  a.charge = top.charge;
  a.travel_time = top.travel_time;
  a.free_flow_time = top.free_flow_time;
  return a;
}

// ---------------------------------------------------------------------------
// Bipartite reduction and RANKING
// ---------------------------------------------------------------------------

// Drivers in arrival order on one side; unit-capacity route slots on the
// other (each route expanded into slot_capacity slots by the builder).
struct BipartiteInstance {
  int num_drivers = 0;
  int num_slots = 0;
  std::vector<std::vector<int>> edges;  // edges[d]: eligible slots, ascending
  std::vector<int> slot_route;          // slot index -> route index

  void validate() const {
    if (num_drivers < 0 || num_slots < 0)
      throw std::invalid_argument("bipartite instance: negative size");
    if (static_cast<int>(edges.size()) != num_drivers)
      throw std::invalid_argument("bipartite instance: edges size != num_drivers");
    for (const auto& adj : edges)
      for (int s : adj)
        if (s < 0 || s >= num_slots)
          throw std::invalid_argument("bipartite instance: edge references unknown slot");
  }
};

// Expands routes into unit slots and connects each driver to every slot of
// every route whose quoted charge is within the driver's willingness to pay.
inline BipartiteInstance make_bipartite_instance(std::span<const DriverSpec> drivers,
                                                 std::span<const RouteSpec> specs,
                                                 std::span<const double> charges) {
  if (specs.size() != charges.size())
    throw std::invalid_argument("make_bipartite_instance: mismatched route arrays");
  BipartiteInstance g;
  g.num_drivers = static_cast<int>(drivers.size());
  std::vector<std::pair<int, int>> route_slot_range;  // [first, last) slot per route
  for (std::size_t r = 0; r < specs.size(); ++r) {
    route_slot_range.emplace_back(g.num_slots, g.num_slots + specs[r].slot_capacity);
    for (int k = 0; k < specs[r].slot_capacity; ++k) g.slot_route.push_back(static_cast<int>(r));
    g.num_slots += specs[r].slot_capacity;
  }
  g.edges.resize(drivers.size());
  for (std::size_t d = 0; d < drivers.size(); ++d)
    for (std::size_t r = 0; r < specs.size(); ++r)
      if (charges[r] <= drivers[d].willingness_to_pay)
        for (int s = route_slot_range[r].first; s < route_slot_range[r].second; ++s)
          g.edges[d].push_back(s);
  return g;
}

struct SlotMatching {
  std::vector<int> driver_slot;  // slot matched to each driver, -1 if none
  std::vector<int> slot_driver;  // driver matched to each slot, -1 if none
  int cardinality = 0;
};

// RANKING with a fixed priority order over slots: permutation[i] is the slot
// with priority i, and each arriving driver takes its free eligible slot of
// best priority. Deterministic given (instance, permutation).
inline SlotMatching ranking_match(const BipartiteInstance& g, const std::vector<int>& permutation) {
  g.validate();
  if (static_cast<int>(permutation.size()) != g.num_slots)
    throw std::invalid_argument("ranking_match: permutation size != num_slots");
  std::vector<int> rank(g.num_slots, -1);
  for (int i = 0; i < g.num_slots; ++i) {
    const int s = permutation[i];
    if (s < 0 || s >= g.num_slots || rank[s] != -1)
      throw std::invalid_argument("ranking_match: permutation is not a bijection over slots");
    rank[s] = i;
  }
  SlotMatching m;
  m.driver_slot.assign(g.num_drivers, -1);
  m.slot_driver.assign(g.num_slots, -1);
  for (int d = 0; d < g.num_drivers; ++d) {
    int best = -1;
    for (int s : g.edges[d])
      if (m.slot_driver[s] == -1 && (best == -1 || rank[s] < rank[best])) best = s;
    if (best != -1) {
      m.driver_slot[d] = best;
      m.slot_driver[best] = d;
      ++m.cardinality;
    }
  }
  return m;
}

}  // namespace tollmatch
