#include "tollmatch/simulator.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "tollmatch/scenario_json.hpp"
#include "scenarios.hpp"

using namespace tollmatch;
using tollmatch::testing::scripted_ten_scenario;

namespace {

ScenarioConfig empty_scenario(int horizon = 5) {
  ScenarioConfig cfg;
  cfg.horizon = horizon;
  cfg.routes.push_back({"r1", 10.0, 100.0, 0.15, 4.0, 5});
  cfg.arrivals.kind = ArrivalsConfig::Kind::scripted;
  return cfg;
}

TEST(Run, EmptySystemIsAllZero) {
  const RunResult res = run(empty_scenario());
  EXPECT_EQ(res.metrics.drivers, 0);
  EXPECT_EQ(res.metrics.matched, 0);
  EXPECT_EQ(res.metrics.unmatched, 0);
  EXPECT_EQ(res.metrics.expired, 0);
  EXPECT_DOUBLE_EQ(res.metrics.welfare, 0.0);
  EXPECT_DOUBLE_EQ(res.metrics.tolls_collected, 0.0);
  EXPECT_DOUBLE_EQ(res.metrics.penalties_collected, 0.0);
  ASSERT_EQ(res.metrics.route_ids.size(), 1u);
  EXPECT_EQ(res.metrics.flow_trace[0].size(), 5u);
  for (double x : res.metrics.flow_trace[0]) EXPECT_EQ(x, 0.0);
}

TEST(Run, SingleDriverOnUntolledFreeFlowRoute) {
  // Horizon leaves room for the ceil(10)-step trip to finish.
  ScenarioConfig cfg = empty_scenario(12);
  DriverScript d;
  d.spec = DriverSpec{1, 0, 5.0, 2};
  cfg.arrivals.drivers.push_back(d);
  const RunResult res = run(cfg);
  EXPECT_EQ(res.metrics.drivers, 1);
  EXPECT_EQ(res.metrics.matched, 1);
  EXPECT_DOUBLE_EQ(res.metrics.welfare, 0.0);          // C_d = 0 below threshold
  EXPECT_DOUBLE_EQ(res.metrics.tolls_collected, 0.0);
  EXPECT_EQ(res.metrics.completed, 1);
  ASSERT_EQ(res.matching.assignments.size(), 1u);
  EXPECT_DOUBLE_EQ(res.matching.assignments[0].charge, 0.0);
  EXPECT_DOUBLE_EQ(res.matching.assignments[0].travel_time, 10.0);
}

TEST(Run, ScriptedTenCoversEveryOutcome) {
  const RunResult res = run(scripted_ten_scenario());
  EXPECT_EQ(res.metrics.drivers, 10);
  EXPECT_EQ(res.metrics.matched, 8);
  EXPECT_EQ(res.metrics.unmatched, 1);  // alpha = 0 against charged routes
  EXPECT_EQ(res.metrics.expired, 1);    // the driver that never accepts
  EXPECT_EQ(res.metrics.matched + res.metrics.unmatched + res.metrics.expired,
            res.metrics.drivers);
  EXPECT_EQ(res.metrics.penalized, 7);  // the whole forced burst
  EXPECT_GT(res.metrics.penalties_collected, 0.0);
  EXPECT_EQ(res.matching.unmatched, (std::vector<int>{7}));
}

TEST(Run, DeterministicEventLogBytes) {
  const std::string log1 = serialize_log(run(scripted_ten_scenario()).events);
  const std::string log2 = serialize_log(run(scripted_ten_scenario()).events);
  EXPECT_EQ(log1, log2);
}

TEST(Run, RandomArrivalsDeterministicGivenSeed) {
  ScenarioConfig cfg = empty_scenario(30);
  cfg.routes.push_back({"r2", 8.0, 3.0, 0.2, 2.0, 5});
  cfg.arrivals.kind = ArrivalsConfig::Kind::random;
  cfg.arrivals.random = {1.5, 0.0, 4.0, 3};
  cfg.toll.initial_toll = 1.0;
  cfg.seed = 99;
  const std::string a = serialize_log(run(cfg).events);
  const std::string b = serialize_log(run(cfg).events);
  EXPECT_EQ(a, b);
  cfg.seed = 100;
  EXPECT_NE(serialize_log(run(cfg).events), a);
}

TEST(Replay, ReproducesMetricsExactly) {
  const RunResult res = run(scripted_ten_scenario());
  const MetricsReport replayed = replay(serialize_log(res.events));
  EXPECT_EQ(replayed, res.metrics);
}

TEST(Replay, EmptyRunReplaysToZeroedReport) {
  const RunResult res = run(empty_scenario());
  const MetricsReport replayed = replay(serialize_log(res.events));
  EXPECT_EQ(replayed, res.metrics);
  EXPECT_EQ(replayed.drivers, 0);
}

TEST(Replay, TruncatedLogRejectedWithLineNumber) {
  std::string log = serialize_log(run(scripted_ten_scenario()).events);
  // Drop the final end record.
  log.erase(log.rfind("\n", log.size() - 2) + 1);
  try {
    replay(log);
    FAIL() << "expected rejection";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
}

TEST(Replay, MalformedLineRejectedWithPosition) {
  try {
    replay(std::string(kEventLogHeader) + "\nnot,a,valid,row\n");
    FAIL() << "expected rejection";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    replay(std::string(kEventLogHeader) + "\n0,accept,5,r1,1\n");
    FAIL() << "expected rejection";  // accept without a prior offer
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(replay(std::string("wrong header\n")), std::runtime_error);
}

TEST(Run, AccountingIdentities) {
  const RunResult res = run(scripted_ten_scenario());
  // Tolls collected = sum of accepted charges; welfare = sum of quoted
  // utilities of the final matching.
  double charges = 0.0;
  for (const auto& a : res.matching.assignments) charges += a.charge;
  EXPECT_DOUBLE_EQ(res.metrics.tolls_collected, charges);
  EXPECT_DOUBLE_EQ(res.metrics.welfare, welfare(res.matching));
  EXPECT_GE(res.metrics.penalties_collected, 0.0);
}

TEST(Run, OccupancyConservation) {
  const RunResult res = run(scripted_ten_scenario());
  const auto& m = res.metrics;
  const int horizon = static_cast<int>(m.occupancy_trace[0].size());
  for (std::size_t r = 0; r < m.route_ids.size(); ++r) {
    std::vector<int> accepts(horizon + 1, 0), completes(horizon + 1, 0);
    for (const auto& e : res.events) {
      // Occupancy moves on the route actually traveled: accept events carry
      // the assigned route, so recover the traveled one from penalty events.
      if (e.kind == EventKind::complete && e.route == m.route_ids[r]) ++completes[e.timestep];
    }
    // Where a driver departs: assigned route unless a penalty names another.
    for (const auto& e : res.events) {
      if (e.kind != EventKind::accept) continue;
      std::string traveled = e.route;
      for (const auto& p : res.events)
        if (p.kind == EventKind::penalty && p.driver == e.driver) traveled = p.route;
      if (traveled == m.route_ids[r]) ++accepts[e.timestep];
    }
    int live = 0;
    for (int t = 0; t < horizon; ++t) {
      EXPECT_EQ(m.occupancy_trace[r][t], static_cast<double>(live))
          << "route " << m.route_ids[r] << " t " << t;
      live += accepts[t] - completes[t];
      EXPECT_GE(live, 0);
    }
  }
}

TEST(Run, StaticTollModeCollectsNothing) {
  // beta = 0 and zero initial toll: no charges, welfare 0, penalties F only.
  ScenarioConfig cfg = scripted_ten_scenario();
  cfg.toll.beta = 0.0;
  cfg.toll.initial_toll = 0.0;
  const RunResult res = run(cfg);
  EXPECT_DOUBLE_EQ(res.metrics.tolls_collected, 0.0);
  EXPECT_DOUBLE_EQ(res.metrics.welfare, 0.0);
  EXPECT_DOUBLE_EQ(res.metrics.penalties_collected,
                   res.metrics.penalized * cfg.toll.fixed_penalty);
  // Everyone can afford free routes, so nobody is unmatched now.
  EXPECT_EQ(res.metrics.unmatched, 0);
}

TEST(Run, PersistencePredictorFreezesTolls) {
  ScenarioConfig cfg = scripted_ten_scenario();
  cfg.predictor.kind = PredictorKind::persistence;
  cfg.toll.beta = 0.7;
  const RunResult res = run(cfg);
  for (const auto& trace : res.metrics.toll_trace)
    for (double toll : trace) ASSERT_EQ(toll, cfg.toll.initial_toll);
}

TEST(Run, SlotCapacityBoundsOutstandingAssignments) {
  // More simultaneous arrivals than slots: the surplus goes unmatched.
  ScenarioConfig cfg = empty_scenario(6);
  cfg.routes[0].slot_capacity = 3;
  for (int i = 0; i < 5; ++i) {
    DriverScript d;
    d.spec = DriverSpec{i, 0, 5.0, 3};
    cfg.arrivals.drivers.push_back(d);
  }
  const RunResult res = run(cfg);
  EXPECT_EQ(res.metrics.matched, 3);
  EXPECT_EQ(res.metrics.unmatched, 2);
}

TEST(Run, RandomComplianceDeviationsArePenalized) {
  ScenarioConfig cfg = empty_scenario(15);
  cfg.routes.push_back({"r2", 8.0, 100.0, 0.15, 4.0, 5});
  cfg.compliance.deviation_probability = 1.0;
  cfg.seed = 31;
  for (int i = 0; i < 4; ++i) {
    DriverScript d;
    d.spec = DriverSpec{i, 0, 5.0, 2};
    cfg.arrivals.drivers.push_back(d);
  }
  const RunResult res = run(cfg);
  EXPECT_EQ(res.metrics.matched, 4);
  EXPECT_EQ(res.metrics.penalized, 4);
}

TEST(Run, ArrivalsPastHorizonNeverEnterTheSystem) {
  ScenarioConfig cfg = empty_scenario(5);
  DriverScript d;
  d.spec = DriverSpec{1, 9, 5.0, 2};
  cfg.arrivals.drivers.push_back(d);
  const RunResult res = run(cfg);
  EXPECT_EQ(res.metrics.drivers, 0);
  EXPECT_TRUE(res.matching.unmatched.empty());
}

TEST(Run, InvalidConfigRejectedUpFront) {
  ScenarioConfig cfg = empty_scenario();
  cfg.horizon = 0;
  EXPECT_THROW(run(cfg), std::invalid_argument);
  cfg = empty_scenario();
  cfg.routes.clear();
  EXPECT_THROW(run(cfg), std::invalid_argument);
  cfg = empty_scenario();
  cfg.arrivals.drivers.push_back({DriverSpec{1, 0, 1.0, 1}, -1, true, "nope"});
  EXPECT_THROW(run(cfg), std::invalid_argument);
}

TEST(ScenarioJson, RoundTripsTheScriptedScenario) {
  const std::string path = ::testing::TempDir() + "scripted_ten.json";
  {
    std::ofstream out(path);
    out << R"({
      "horizon": 20,
      "matching_mode": "utility",
      "routes": [
        {"id": "r1", "free_flow_time": 10.0, "threshold_capacity": 2.0,
         "congestion_a": 0.15, "congestion_b": 4.0, "slot_capacity": 4},
        {"id": "r2", "free_flow_time": 6.0, "threshold_capacity": 3.0,
         "congestion_a": 0.2, "congestion_b": 2.0, "slot_capacity": 3}
      ],
      "toll": {"beta": 0.1, "prediction_horizon": 2, "fixed_penalty": 5.0, "initial_toll": 2.0},
      "predictor": {"method": "moving_average", "moving_average_window": 3},
      "arrivals": {"kind": "scripted", "drivers": [
        {"id": 0, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r1"},
        {"id": 1, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r1"},
        {"id": 2, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r1"},
        {"id": 3, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r2"},
        {"id": 4, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r2"},
        {"id": 5, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r2"},
        {"id": 6, "arrival_time": 0, "willingness_to_pay": 100.0, "deadline_window": 2, "deviates_to": "r2"},
        {"id": 7, "arrival_time": 2, "willingness_to_pay": 0.0, "deadline_window": 2},
        {"id": 8, "arrival_time": 2, "willingness_to_pay": 100.0, "deadline_window": 2, "accepts": false},
        {"id": 9, "arrival_time": 3, "willingness_to_pay": 100.0, "deadline_window": 3, "ready_at": 4}
      ]}
    })";
  }
  const ScenarioConfig loaded = load_scenario(path);
  const std::string from_file = serialize_log(run(loaded).events);
  const std::string from_code = serialize_log(run(scripted_ten_scenario()).events);
  EXPECT_EQ(from_file, from_code);
}

TEST(ScenarioJson, ErrorsNameTheOffendingField) {
  const std::string path = ::testing::TempDir() + "bad_config.json";
  {
    std::ofstream out(path);
    out << R"({"horizon": 5, "routes": [{"id": "r1", "free_flow_time": 10.0, "slot_capacity": 1}],
              "arrivals": {"kind": "scripted", "drivers": []}})";
  }
  try {
    load_scenario(path);
    FAIL() << "expected config error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("threshold_capacity"), std::string::npos);
  }
  EXPECT_THROW(load_scenario("/nonexistent/config.json"), std::runtime_error);
}

TEST(EventIo, FormatParseRoundTrip) {
  const Event e{7, EventKind::offer, 3, "r2", 0.1};
  const Event parsed = parse_event(format_event(e));
  EXPECT_EQ(parsed.timestep, 7);
  EXPECT_EQ(parsed.kind, EventKind::offer);
  EXPECT_EQ(parsed.driver, 3);
  EXPECT_EQ(parsed.route, "r2");
  EXPECT_EQ(parsed.value, 0.1);
}

}  // namespace
