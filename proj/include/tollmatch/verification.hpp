#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "tollmatch/matching.hpp"
#include "tollmatch/rng.hpp"
#include "tollmatch/simulator.hpp"

namespace tollmatch {

// ---------------------------------------------------------------------------
// Offline optimum
// ---------------------------------------------------------------------------

// Maximum-cardinality matching via Hopcroft-Karp: BFS builds the layered
// graph of alternating paths, DFS augments along it.
inline SlotMatching offline_max_matching(const BipartiteInstance& g) {
  g.validate();
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_driver(g.num_drivers, -1);
  std::vector<int> match_slot(g.num_slots, -1);
  std::vector<int> dist(g.num_drivers, 0);

  auto bfs = [&]() {
    std::deque<int> queue;
    bool reachable_free_slot = false;
    for (int d = 0; d < g.num_drivers; ++d) {
      if (match_driver[d] == -1) {
        dist[d] = 0;
        queue.push_back(d);
      } else {
        dist[d] = kInf;
      }
    }
    while (!queue.empty()) {
      const int d = queue.front();
      queue.pop_front();
      for (int s : g.edges[d]) {
        const int d2 = match_slot[s];
        if (d2 == -1) {
          reachable_free_slot = true;
        } else if (dist[d2] == kInf) {
          dist[d2] = dist[d] + 1;
          queue.push_back(d2);
        }
      }
    }
    return reachable_free_slot;
  };

  std::function<bool(int)> dfs = [&](int d) -> bool {
    for (int s : g.edges[d]) {
      const int d2 = match_slot[s];
      if (d2 == -1 || (dist[d2] == dist[d] + 1 && dfs(d2))) {
        match_driver[d] = s;
        match_slot[s] = d;
        return true;
      }
    }
    dist[d] = kInf;
    return false;
  };

  SlotMatching m;
  m.cardinality = 0;
  while (bfs())
    for (int d = 0; d < g.num_drivers; ++d)
      if (match_driver[d] == -1 && dfs(d)) ++m.cardinality;
  m.driver_slot = std::move(match_driver);
  m.slot_driver = std::move(match_slot);
  return m;
}

// ---------------------------------------------------------------------------
// Instance generators
// ---------------------------------------------------------------------------

// The adversarial family for online matching: driver i is eligible for slots
// i..n-1, so early arrivals are flexible and late ones are cornered; the
// unique perfect matching is the diagonal.
inline BipartiteInstance triangular_instance(int n) {
  BipartiteInstance g;
  g.num_drivers = g.num_slots = n;
  g.edges.resize(n);
  g.slot_route.resize(n);
  std::iota(g.slot_route.begin(), g.slot_route.end(), 0);
  for (int d = 0; d < n; ++d)
    for (int s = d; s < n; ++s) g.edges[d].push_back(s);
  return g;
}

inline BipartiteInstance complete_instance(int n) {
  BipartiteInstance g;
  g.num_drivers = g.num_slots = n;
  g.edges.resize(n);
  g.slot_route.resize(n);
  std::iota(g.slot_route.begin(), g.slot_route.end(), 0);
  for (int d = 0; d < n; ++d)
    for (int s = 0; s < n; ++s) g.edges[d].push_back(s);
  return g;
}

inline BipartiteInstance random_instance(int drivers, int slots, double edge_prob,
                                         std::mt19937_64& rng) {
  BipartiteInstance g;
  g.num_drivers = drivers;
  g.num_slots = slots;
  g.edges.resize(drivers);
  g.slot_route.resize(slots);
  std::iota(g.slot_route.begin(), g.slot_route.end(), 0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int d = 0; d < drivers; ++d)
    for (int s = 0; s < slots; ++s)
      if (coin(rng) < edge_prob) g.edges[d].push_back(s);
  return g;
}

// ---------------------------------------------------------------------------
// Competitive-ratio measurement
// ---------------------------------------------------------------------------

struct RatioReport {
  int trials = 0;
  std::vector<double> ratios;  // online cardinality / offline optimum, per trial
  double mean = 0.0;
  double min = 1.0;
  std::string permutation_strategy;  // "random" or "exhaustive"
};

using InstanceGenerator = std::function<BipartiteInstance(std::mt19937_64&)>;

namespace detail {

constexpr std::uint64_t kRatioStream = 0xB1;
constexpr std::uint64_t kSweepEarlyStream = 0xB2;
constexpr std::uint64_t kSweepReportStream = 0xB3;
constexpr std::uint64_t kParetoStream = 0xB4;

inline void finalize_ratio_report(RatioReport& rep) {
  rep.trials = static_cast<int>(rep.ratios.size());
  double sum = 0.0;
  rep.min = 1.0;
  for (double r : rep.ratios) {
    sum += r;
    rep.min = std::min(rep.min, r);
  }
  rep.mean = rep.trials > 0 ? sum / rep.trials : 0.0;
}

}  // namespace detail

// Runs ranking_match with a fresh uniformly random slot permutation per trial
// and divides by the exact offline optimum. Trials are independently seeded
// by index, so they can be computed in any order (or in parallel) and merged
// by trial index. An instance with nothing to match counts as ratio 1.
inline RatioReport measure_ratio(const InstanceGenerator& generator, int trials,
                                 std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("measure_ratio: trials must be >= 1");
  RatioReport rep;
  rep.permutation_strategy = "random";
  rep.ratios.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    auto rng = substream(seed, detail::kRatioStream, static_cast<std::uint64_t>(i));
    const BipartiteInstance g = generator(rng);
    std::vector<int> perm(g.num_slots);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const int opt = offline_max_matching(g).cardinality;
    const double ratio =
        opt == 0 ? 1.0 : static_cast<double>(ranking_match(g, perm).cardinality) / opt;
    rep.ratios.push_back(ratio);
  }
  detail::finalize_ratio_report(rep);
  return rep;
}

// Exact expected ratio over every slot permutation; only for tiny instances.
inline RatioReport measure_ratio_exhaustive(const BipartiteInstance& g) {
  g.validate();
  if (g.num_slots > 8)
    throw std::invalid_argument("measure_ratio_exhaustive: more than 8 slots");
  const int opt = offline_max_matching(g).cardinality;
  RatioReport rep;
  rep.permutation_strategy = "exhaustive";
  std::vector<int> perm(g.num_slots);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const double ratio =
        opt == 0 ? 1.0 : static_cast<double>(ranking_match(g, perm).cardinality) / opt;
    rep.ratios.push_back(ratio);
  } while (std::next_permutation(perm.begin(), perm.end()));
  detail::finalize_ratio_report(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Pareto dominance on frozen instances
// ---------------------------------------------------------------------------

// A small assignment problem with utilities frozen per (driver, route) pair:
// no congestion feedback, which is the setting in which the serial matcher's
// output is claimed undominated.
struct FrozenInstance {
  std::vector<int> route_capacity;
  std::vector<std::vector<double>> utility;   // [driver][route]
  std::vector<std::vector<char>> eligible;    // [driver][route]

  int drivers() const { return static_cast<int>(utility.size()); }
  int routes() const { return static_cast<int>(route_capacity.size()); }
  int total_slots() const {
    return std::accumulate(route_capacity.begin(), route_capacity.end(), 0);
  }

  void validate() const {
    if (eligible.size() != utility.size())
      throw std::invalid_argument("frozen instance: eligible/utility shape mismatch");
    for (int d = 0; d < drivers(); ++d) {
      if (static_cast<int>(utility[d].size()) != routes() ||
          static_cast<int>(eligible[d].size()) != routes())
        throw std::invalid_argument("frozen instance: row width != route count");
    }
    for (int c : route_capacity)
      if (c < 1) throw std::invalid_argument("frozen instance: route capacity must be >= 1");
  }
};

// Algorithm-1 semantics on a frozen instance: drivers in arrival (index)
// order each take the eligible route with remaining capacity that maximizes
// their frozen utility; ties by larger remaining capacity, then route index.
// -1 marks a driver left unmatched.
inline std::vector<int> serial_utility_assignment(const FrozenInstance& inst) {
  inst.validate();
  std::vector<int> remaining = inst.route_capacity;
  std::vector<int> assign(inst.drivers(), -1);
  for (int d = 0; d < inst.drivers(); ++d) {
    int best = -1;
    for (int r = 0; r < inst.routes(); ++r) {
      if (!inst.eligible[d][r] || remaining[r] == 0) continue;
      if (best == -1) {
        best = r;
        continue;
      }
      const double diff = inst.utility[d][r] - inst.utility[d][best];
      if (diff > kValueTolerance ||
          (std::abs(diff) <= kValueTolerance && remaining[r] > remaining[best]))
        best = r;
    }
    if (best != -1) {
      assign[d] = best;
      --remaining[best];
    }
  }
  return assign;
}

struct ParetoResult {
  bool dominated = false;
  std::vector<int> witness;  // a matching that dominates the candidate, when one exists
};

namespace detail {

inline void check_frozen_guard(const FrozenInstance& inst) {
  if (inst.drivers() > 8 || inst.total_slots() > 8)
    throw std::invalid_argument("frozen instance too large to enumerate (max 8 drivers, 8 slots)");
}

inline void check_feasible(const FrozenInstance& inst, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != inst.drivers())
    throw std::invalid_argument("assignment size != driver count");
  std::vector<int> used(inst.routes(), 0);
  for (int d = 0; d < inst.drivers(); ++d) {
    const int r = assignment[d];
    if (r == -1) continue;
    if (r < 0 || r >= inst.routes() || !inst.eligible[d][r])
      throw std::invalid_argument("assignment gives driver " + std::to_string(d) +
                                  " an ineligible route");
    if (++used[r] > inst.route_capacity[r])
      throw std::invalid_argument("assignment exceeds capacity of route " + std::to_string(r));
  }
}

}  // namespace detail

// Exhaustively searches all feasible matchings for one in which every driver
// does at least as well as under the candidate and someone does strictly
// better (unmatched drivers count utility 0). Branches that already hurt a
// driver are pruned, so the first complete assignment found is a witness.
inline ParetoResult pareto_check(const FrozenInstance& inst, const std::vector<int>& candidate) {
  inst.validate();
  detail::check_frozen_guard(inst);
  detail::check_feasible(inst, candidate);

  std::vector<double> floor(inst.drivers());
  for (int d = 0; d < inst.drivers(); ++d)
    floor[d] = candidate[d] == -1 ? 0.0 : inst.utility[d][candidate[d]];

  std::vector<int> remaining = inst.route_capacity;
  std::vector<int> assign(inst.drivers(), -1);
  ParetoResult res;

  std::function<bool(int, bool)> search = [&](int d, bool strict) -> bool {
    if (d == inst.drivers()) return strict;
    for (int r = 0; r < inst.routes(); ++r) {
      if (!inst.eligible[d][r] || remaining[r] == 0) continue;
      const double u = inst.utility[d][r];
      if (u < floor[d] - kValueTolerance) continue;
      assign[d] = r;
      --remaining[r];
      if (search(d + 1, strict || u > floor[d] + kValueTolerance)) return true;
      ++remaining[r];
      assign[d] = -1;
    }
    if (0.0 >= floor[d] - kValueTolerance) {
      assign[d] = -1;
      if (search(d + 1, strict || 0.0 > floor[d] + kValueTolerance)) return true;
    }
    return false;
  };

  if (search(0, false)) {
    res.dominated = true;
    res.witness = assign;
  }
  return res;
}

// Exhaustive welfare-maximal assignment on a guarded instance; reporting aid,
// not part of the matching path.
inline std::vector<int> welfare_max_assignment(const FrozenInstance& inst) {
  inst.validate();
  detail::check_frozen_guard(inst);
  std::vector<int> remaining = inst.route_capacity;
  std::vector<int> assign(inst.drivers(), -1), best_assign(inst.drivers(), -1);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(int, double)> search = [&](int d, double sum) {
    if (d == inst.drivers()) {
      if (sum > best) {
        best = sum;
        best_assign = assign;
      }
      return;
    }
    for (int r = 0; r < inst.routes(); ++r) {
      if (!inst.eligible[d][r] || remaining[r] == 0) continue;
      assign[d] = r;
      --remaining[r];
      search(d + 1, sum + inst.utility[d][r]);
      ++remaining[r];
      assign[d] = -1;
    }
    search(d + 1, sum);
  };
  search(0, 0.0);
  return best_assign;
}

// Random frozen instance with strictly ordered (and strictly positive)
// per-driver utilities, the preference regime under which serial assignment
// is Pareto efficient. Utilities of one driver are kept at least 1e-6 apart
// so the declared tie tolerance can never blur the order.
inline FrozenInstance random_frozen_instance(std::mt19937_64& rng, int max_drivers = 6,
                                             int max_slots = 6) {
  if (max_drivers < 1 || max_slots < 1)
    throw std::invalid_argument("random_frozen_instance: sizes must be >= 1");
  std::uniform_int_distribution<int> d_count(1, max_drivers);
  FrozenInstance inst;
  const int n = d_count(rng);
  const int max_routes = std::min(4, max_slots);
  std::uniform_int_distribution<int> r_count(1, max_routes);
  const int m = r_count(rng);
  inst.route_capacity.assign(m, 1);
  int slots = m;
  std::uniform_int_distribution<int> pick_route(0, m - 1);
  while (slots < max_slots && pick_route(rng) % 2 == 0) {
    inst.route_capacity[pick_route(rng)] += 1;
    ++slots;
  }
  std::uniform_real_distribution<double> value(0.01, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  inst.utility.assign(n, std::vector<double>(m, 0.0));
  inst.eligible.assign(n, std::vector<char>(m, 0));
  for (int d = 0; d < n; ++d) {
    std::vector<double> vals;
    while (static_cast<int>(vals.size()) < m) {
      const double v = value(rng);
      bool distinct = true;
      for (double w : vals)
        if (std::abs(v - w) < 1e-6) distinct = false;
      if (distinct) vals.push_back(v);
    }
    for (int r = 0; r < m; ++r) {
      inst.utility[d][r] = vals[r];
      inst.eligible[d][r] = coin(rng) < 0.85 ? 1 : 0;
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Strategy-proofness probes
// ---------------------------------------------------------------------------

struct DeviationOutcome {
  std::string kind;  // "early-arrival" or "under-report"
  double truthful_utility = 0.0;
  double deviating_utility = 0.0;
  bool deviating_expired = false;  // the deviating run's offer lapsed unaccepted

  bool holds() const { return deviating_utility <= truthful_utility + kValueTolerance; }
};

namespace detail {

inline DriverScript& find_scripted_driver(ScenarioConfig& cfg, int driver_id) {
  if (cfg.arrivals.kind != ArrivalsConfig::Kind::scripted)
    throw std::invalid_argument("deviation probe requires a scripted scenario");
  for (auto& d : cfg.arrivals.drivers)
    if (d.spec.id == driver_id) return d;
  throw std::invalid_argument("deviation probe: unknown driver id " + std::to_string(driver_id));
}

inline bool driver_expired(const std::vector<Event>& events, int driver) {
  for (const auto& e : events)
    if (e.kind == EventKind::expire && e.driver == driver) return true;
  return false;
}

}  // namespace detail

// Early-arrival probe: the same scenario run truthfully and with the driver
// coming online `shift` steps before they are actually ready to travel.
// Readiness is pinned, so the early offer can only be accepted at the true
// readiness time; when the deadline passes first the assignment expires and
// the deviating utility is exactly 0.
inline DeviationOutcome probe_early_arrival(const ScenarioConfig& cfg, int driver_id, int shift) {
  if (shift < 0) throw std::invalid_argument("probe_early_arrival: shift must be >= 0");
  ScenarioConfig truthful = cfg;
  detail::find_scripted_driver(truthful, driver_id);  // validates the driver exists

  ScenarioConfig deviating = cfg;
  DriverScript& probe = detail::find_scripted_driver(deviating, driver_id);
  probe.ready_at = probe.effective_ready_at();
  probe.spec.arrival_time = std::max(0, probe.spec.arrival_time - shift);

  const RunResult t_run = run(truthful);
  const RunResult d_run = run(deviating);
  DeviationOutcome out;
  out.kind = "early-arrival";
  out.truthful_utility = realized_utility(t_run.events, driver_id);
  out.deviating_utility = realized_utility(d_run.events, driver_id);
  out.deviating_expired = detail::driver_expired(d_run.events, driver_id);
  return out;
}

// Under-report probe: the same scenario with the driver's reported
// willingness to pay lowered to `reported`, which can only shrink the set of
// routes the matcher may offer them.
inline DeviationOutcome probe_under_report(const ScenarioConfig& cfg, int driver_id,
                                           double reported) {
  if (reported < 0) throw std::invalid_argument("probe_under_report: reported alpha must be >= 0");
  ScenarioConfig truthful = cfg;
  const double true_alpha =
      detail::find_scripted_driver(truthful, driver_id).spec.willingness_to_pay;
  if (reported > true_alpha)
    throw std::invalid_argument("probe_under_report: reported alpha above the true value");

  ScenarioConfig deviating = cfg;
  detail::find_scripted_driver(deviating, driver_id).spec.willingness_to_pay = reported;

  const RunResult t_run = run(truthful);
  const RunResult d_run = run(deviating);
  DeviationOutcome out;
  out.kind = "under-report";
  out.truthful_utility = realized_utility(t_run.events, driver_id);
  out.deviating_utility = realized_utility(d_run.events, driver_id);
  out.deviating_expired = detail::driver_expired(d_run.events, driver_id);
  return out;
}

// ---------------------------------------------------------------------------
// Randomized probe sweeps
// ---------------------------------------------------------------------------

namespace detail {

constexpr int kProbeDriverId = 1000;

// Shared scenario family for the deviation sweeps: a burst of background
// drivers is forced onto the tolled routes at t=0 (scripted deviations, so
// the spread does not depend on the matcher) and then drains. Tolls are
// static (beta = 0), so a route's quoted utility never worsens as occupancy
// falls, which is the regime in which coming online early cannot help.
// With relief_route, one uncongestible route guarantees a zero-utility
// option at any probe time.
inline ScenarioConfig drain_scenario(std::mt19937_64& rng, bool relief_route) {
  std::uniform_int_distribution<int> route_count(2, 3);
  std::uniform_real_distribution<double> eff(3.0, 6.0);
  std::uniform_int_distribution<int> kf(3, 5);
  std::uniform_real_distribution<double> cong_a(0.05, 0.2);
  std::uniform_real_distribution<double> cong_b(1.5, 2.0);
  std::uniform_real_distribution<double> toll0(0.5, 2.5);
  std::uniform_int_distribution<int> burst(12, 30);

  ScenarioConfig cfg;
  cfg.horizon = 60;
  const int m = route_count(rng);
  for (int r = 0; r < m; ++r) {
    RouteSpec spec;
    spec.id = "r" + std::to_string(r);
    spec.free_flow_time = eff(rng);
    spec.threshold_capacity = static_cast<double>(kf(rng));
    spec.congestion_a = cong_a(rng);
    spec.congestion_b = cong_b(rng);
    spec.slot_capacity = 500;
    cfg.routes.push_back(spec);
  }
  if (relief_route) {
    RouteSpec spec;
    spec.id = "relief";
    spec.free_flow_time = 3.0;
    spec.threshold_capacity = 1e9;
    spec.slot_capacity = 500;
    cfg.routes.push_back(spec);
  }
  cfg.toll.beta = 0.0;
  cfg.toll.prediction_horizon = 1;
  cfg.toll.fixed_penalty = 1.0;
  cfg.toll.initial_toll = toll0(rng);
  cfg.predictor.kind = PredictorKind::persistence;
  cfg.mode = MatchMode::utility;
  cfg.arrivals.kind = ArrivalsConfig::Kind::scripted;

  const int n = burst(rng);
  for (int j = 0; j < n; ++j) {
    DriverScript d;
    d.spec.id = j;
    d.spec.arrival_time = 0;
    d.spec.willingness_to_pay = 1e9;
    d.spec.deadline_window = 8;
    d.deviates_to = cfg.routes[j % m].id;  // force the burst onto the tolled routes
    cfg.arrivals.drivers.push_back(d);
  }
  return cfg;
}

}  // namespace detail

// Runs `probes` early-arrival probes on freshly generated drain scenarios.
// Even-numbered probes keep the deadline reachable (the early quote is locked
// in); odd-numbered ones make the deadline pass before readiness, the expiry
// sub-case, and add a relief route so the truthful run is quotable at zero.
inline std::vector<DeviationOutcome> sweep_early_arrival(int probes, std::uint64_t seed) {
  std::vector<DeviationOutcome> out;
  for (int i = 0; i < probes; ++i) {
    auto rng = substream(seed, detail::kSweepEarlyStream, static_cast<std::uint64_t>(i));
    const bool expiry_case = i % 2 == 1;
    ScenarioConfig cfg = detail::drain_scenario(rng, expiry_case);

    std::uniform_int_distribution<int> readiness(8, 24);
    const int ready = readiness(rng);
    DriverScript probe;
    probe.spec.id = detail::kProbeDriverId;
    probe.spec.arrival_time = ready;
    probe.spec.willingness_to_pay = 1e9;
    int shift = 0;
    if (expiry_case) {
      std::uniform_int_distribution<int> window(1, 3);
      probe.spec.deadline_window = window(rng);
      std::uniform_int_distribution<int> extra(1, 5);
      shift = probe.spec.deadline_window + extra(rng);
    } else {
      std::uniform_int_distribution<int> window(6, 12);
      probe.spec.deadline_window = window(rng);
      std::uniform_int_distribution<int> s(1, std::min(probe.spec.deadline_window, ready - 1));
      shift = s(rng);
    }
    cfg.arrivals.drivers.push_back(probe);
    out.push_back(probe_early_arrival(cfg, detail::kProbeDriverId, shift));
  }
  return out;
}

// Runs `probes` under-report probes. The reported value is picked from a dry
// run of the truthful scenario: when a cheaper route than the assigned one
// exists at the probe's arrival, the report is placed between the two
// charges, so the deviation genuinely forfeits the assigned route.
inline std::vector<DeviationOutcome> sweep_under_report(int probes, std::uint64_t seed) {
  std::vector<DeviationOutcome> out;
  for (int i = 0; i < probes; ++i) {
    auto rng = substream(seed, detail::kSweepReportStream, static_cast<std::uint64_t>(i));
    ScenarioConfig cfg = detail::drain_scenario(rng, false);

    std::uniform_int_distribution<int> arrival(2, 20);
    DriverScript probe;
    probe.spec.id = detail::kProbeDriverId;
    probe.spec.arrival_time = arrival(rng);
    probe.spec.willingness_to_pay = 1e9;
    probe.spec.deadline_window = 5;
    cfg.arrivals.drivers.push_back(probe);

    const RunResult dry = run(cfg);
    double assigned_charge = -1.0;
    for (const auto& e : dry.events)
      if (e.kind == EventKind::offer && e.driver == detail::kProbeDriverId) {
        assigned_charge = e.value;
        break;
      }

    double reported = 1.0;
    if (assigned_charge >= 0) {
      const int t = probe.spec.arrival_time;
      double best_below = -1.0;
      for (std::size_t r = 0; r < cfg.routes.size(); ++r) {
        const double toll_now = dry.metrics.toll_trace[r][t];
        const int occ = static_cast<int>(dry.metrics.occupancy_trace[r][t]);
        const double charge = per_driver_charge(toll_now, occ, cfg.routes[r].threshold_capacity);
        if (charge < assigned_charge - 1e-12) best_below = std::max(best_below, charge);
      }
      reported = best_below >= 0 ? (best_below + assigned_charge) / 2.0 : assigned_charge + 0.5;
    }
    out.push_back(probe_under_report(cfg, detail::kProbeDriverId, reported));
  }
  return out;
}

// Frozen-instance stream for the Pareto suite.
inline std::vector<FrozenInstance> pareto_suite_instances(int count, std::uint64_t seed,
                                                          int max_drivers = 6, int max_slots = 6) {
  std::vector<FrozenInstance> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto rng = substream(seed, detail::kParetoStream, static_cast<std::uint64_t>(i));
    out.push_back(random_frozen_instance(rng, max_drivers, max_slots));
  }
  return out;
}

}  // namespace tollmatch
