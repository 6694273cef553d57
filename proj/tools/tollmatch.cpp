// Command-line front end: run scenarios, verify mechanism properties, run the
// auction comparison, and emit plot-ready competitive-ratio data.
//
// Exit codes: 0 success (and all checked properties hold), 1 a verified
// property was violated, 2 usage or configuration error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tollmatch/auction.hpp"
#include "tollmatch/numeric.hpp"
#include "tollmatch/scenario_json.hpp"
#include "tollmatch/simulator.hpp"
#include "tollmatch/verification.hpp"

namespace fs = std::filesystem;
using namespace tollmatch;

namespace {

constexpr double kRatioBound = 0.632;  // 1 - 1/e to three decimals

// Files are staged next to their final path and renamed once fully written,
// so an aborted command never leaves a partial file behind.
void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed while writing '" + path.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
  // Probe writability up front so no partial outputs are produced later.
  const fs::path probe = dir / ".tollmatch-probe";
  {
    std::ofstream test(probe);
    if (!test) throw std::runtime_error("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

// "3" -> {3}; "1:4:7" -> 7 evenly spaced values from 1 to 4.
std::vector<double> parse_value_range(const std::string& spec) {
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) return {parse_double(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::runtime_error("range '" + spec + "' must look like lo:hi:count");
  const double lo = parse_double(spec.substr(0, c1));
  const double hi = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
  const int count = parse_int(spec.substr(c2 + 1));
  if (count < 1) throw std::runtime_error("range '" + spec + "': count must be >= 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

std::string trace_csv(const MetricsReport& m) {
  std::string out = "timestep,route,flow,toll,occupancy,route_cost\n";
  for (std::size_t r = 0; r < m.route_ids.size(); ++r)
    for (std::size_t t = 0; t < m.flow_trace[r].size(); ++t) {
      out += std::to_string(t) + ',' + m.route_ids[r] + ',' + format_double(m.flow_trace[r][t]) +
             ',' + format_double(m.toll_trace[r][t]) + ',' +
             format_double(m.occupancy_trace[r][t]) + ',' +
             format_double(m.route_cost_trace[r][t]) + '\n';
    }
  return out;
}

nlohmann::json metrics_json(const MetricsReport& m) {
  return nlohmann::json{{"welfare", m.welfare},
                        {"total_route_cost", m.total_route_cost},
                        {"tolls_collected", m.tolls_collected},
                        {"penalties_collected", m.penalties_collected},
                        {"drivers", m.drivers},
                        {"matched", m.matched},
                        {"unmatched", m.unmatched},
                        {"expired", m.expired},
                        {"penalized", m.penalized},
                        {"completed", m.completed}};
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out) {
  const fs::path dir = prepare_out_dir(out);
  ScenarioConfig cfg = load_scenario(config_path);
  if (seed) cfg.seed = *seed;
  const RunResult result = run(cfg);
  write_file_atomic(dir / "events.csv", serialize_log(result.events));
  write_file_atomic(dir / "trace.csv", trace_csv(result.metrics));
  write_file_atomic(dir / "metrics.json", metrics_json(result.metrics).dump(2) + "\n");
  std::cout << "simulate: " << result.metrics.drivers << " drivers, " << result.metrics.matched
            << " matched, " << result.metrics.unmatched << " unmatched, "
            << result.metrics.expired << " expired; welfare " << result.metrics.welfare
            << ", tolls " << result.metrics.tolls_collected << ", penalties "
            << result.metrics.penalties_collected << "\n";
  std::cout << "wrote " << (dir / "events.csv").string() << ", " << (dir / "trace.csv").string()
            << ", " << (dir / "metrics.json").string() << "\n";
  return 0;
}

int cmd_verify_ratio(int trials, std::uint64_t seed, const fs::path& dir) {
  const RatioReport rep =
      measure_ratio([](std::mt19937_64&) { return triangular_instance(20); }, trials, seed);

  // 2x2 adversarial instance, exact expectation over both permutations.
  BipartiteInstance adversarial;
  adversarial.num_drivers = adversarial.num_slots = 2;
  adversarial.edges = {{0, 1}, {0}};
  adversarial.slot_route = {0, 1};
  const RatioReport exact = measure_ratio_exhaustive(adversarial);

  std::string csv = "trial,ratio\n";
  for (int i = 0; i < rep.trials; ++i)
    csv += std::to_string(i) + ',' + format_double(rep.ratios[i]) + '\n';
  csv += "summary,mean," + format_double(rep.mean) + '\n';
  csv += "summary,min," + format_double(rep.min) + '\n';
  csv += "summary,adversarial_2x2_mean," + format_double(exact.mean) + '\n';
  write_file_atomic(dir / "verify_ratio.csv", csv);

  const bool mean_ok = rep.mean >= kRatioBound;
  const bool exact_ok = exact.mean == 0.75;
  std::cout << (mean_ok ? "PASS" : "FAIL") << " ratio: mean " << rep.mean << " over " << rep.trials
            << " triangular 20x20 trials (bound " << kRatioBound << ", min " << rep.min << ")\n";
  std::cout << (exact_ok ? "PASS" : "FAIL")
            << " ratio: adversarial 2x2 exhaustive mean = " << exact.mean << " (want 0.75)\n";
  return mean_ok && exact_ok ? 0 : 1;
}

int cmd_verify_pareto(int trials, std::uint64_t seed, const fs::path& dir) {
  int dominated = 0;
  std::string csv = "instance,drivers,routes,slots,dominated,serial_welfare,max_welfare\n";
  const auto instances = pareto_suite_instances(trials, seed);
  auto total = [](const FrozenInstance& inst, const std::vector<int>& a) {
    double sum = 0;
    for (int d = 0; d < inst.drivers(); ++d)
      if (a[d] != -1) sum += inst.utility[d][a[d]];
    return sum;
  };
  for (int i = 0; i < trials; ++i) {
    const FrozenInstance& inst = instances[i];
    const auto assignment = serial_utility_assignment(inst);
    const ParetoResult res = pareto_check(inst, assignment);
    if (res.dominated) ++dominated;
    csv += std::to_string(i) + ',' + std::to_string(inst.drivers()) + ',' +
           std::to_string(inst.routes()) + ',' + std::to_string(inst.total_slots()) + ',' +
           (res.dominated ? "yes" : "no") + ',' + format_double(total(inst, assignment)) + ',' +
           format_double(total(inst, welfare_max_assignment(inst))) + '\n';
  }
  write_file_atomic(dir / "verify_pareto.csv", csv);
  std::cout << (dominated == 0 ? "PASS" : "FAIL") << " pareto: " << dominated << "/" << trials
            << " serial assignments dominated\n";
  return dominated == 0 ? 0 : 1;
}

int cmd_verify_strategyproof(int trials, std::uint64_t seed, const fs::path& dir) {
  const auto early = sweep_early_arrival(trials, seed);
  const auto under = sweep_under_report(trials, seed);
  int violations = 0;
  std::string csv = "kind,probe,truthful_utility,deviating_utility,deviating_expired,holds\n";
  auto add_rows = [&](const std::vector<DeviationOutcome>& outcomes) {
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      bool ok = o.holds();
      if (o.deviating_expired && o.deviating_utility != 0.0) ok = false;
      if (!ok) ++violations;
      csv += o.kind + ',' + std::to_string(i) + ',' + format_double(o.truthful_utility) + ',' +
             format_double(o.deviating_utility) + ',' + (o.deviating_expired ? "yes" : "no") +
             ',' + (ok ? "yes" : "no") + '\n';
    }
  };
  add_rows(early);
  add_rows(under);
  write_file_atomic(dir / "verify_strategyproof.csv", csv);
  std::cout << (violations == 0 ? "PASS" : "FAIL") << " strategyproof: " << violations << "/"
            << early.size() + under.size() << " probes found a profitable deviation\n";
  return violations == 0 ? 0 : 1;
}

int cmd_compare_auction(const std::string& theta1_spec, const std::string& theta2_spec,
                        double phi, const std::string& out) {
  const fs::path dir = prepare_out_dir(out);
  AuctionScenario scenario;
  scenario.phi = phi;
  scenario.validate();

  std::string csv =
      "theta1,theta2,case,allocate1,allocate2,payment1,travel_time1,u_auction,u_matching,"
      "utility_ratio\n";
  for (double t1 : parse_value_range(theta1_spec)) {
    for (double t2 : parse_value_range(theta2_spec)) {
      const auto [x1, x2] = auc_allocate(t1, t2);
      const double p1 = auc_payment(t1, t2);
      const auto tt = auc_travel_time(t1, t2);
      // Literal head-to-head: the auction side uses the auction's travel
      // time (0 utility when driver 1 stays home); the matching side always
      // travels, sharing the road, so it is evaluated at c(2) in that case.
      const double t_c = tt ? *tt : scenario.c(2);
      const ComparisonUtilities cu = matching_comparison_utilities(t1, t_c, phi);
      const double u_auc = tt ? cu.u_auction : kOptOutUtility;
      csv += format_double(t1) + ',' + format_double(t2) + ',' + to_string(auc_case(t1, t2)) +
             ',' + std::to_string(x1) + ',' + std::to_string(x2) + ',' + format_double(p1) + ',' +
             (tt ? format_double(*tt) : std::string("no_travel")) + ',' + format_double(u_auc) +
             ',' + format_double(cu.u_matching) + ',' +
             (tt && cu.ratio ? format_double(*cu.ratio) : std::string("")) + '\n';
    }
  }
  write_file_atomic(dir / "auction_comparison.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_ratio_experiment(int trials, std::uint64_t seed, const std::string& sizes_spec,
                         const std::string& out) {
  const fs::path dir = prepare_out_dir(out);
  std::vector<int> sizes;
  std::stringstream ss(sizes_spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const int n = parse_int(token);
    if (n < 1) throw std::runtime_error("ratio-experiment: sizes must be >= 1");
    sizes.push_back(n);
  }
  if (sizes.empty()) throw std::runtime_error("ratio-experiment: no sizes given");

  std::string csv = "size,trial,ratio\n";
  std::string summary = "size,mean,min\n";
  for (int n : sizes) {
    const RatioReport rep =
        measure_ratio([n](std::mt19937_64&) { return triangular_instance(n); }, trials, seed);
    for (int i = 0; i < rep.trials; ++i)
      csv += std::to_string(n) + ',' + std::to_string(i) + ',' + format_double(rep.ratios[i]) +
             '\n';
    summary += std::to_string(n) + ',' + format_double(rep.mean) + ',' + format_double(rep.min) +
               '\n';
    std::cout << "size " << n << ": mean ratio " << rep.mean << ", min " << rep.min << " over "
              << rep.trials << " trials\n";
  }
  write_file_atomic(dir / "ratio_experiment.csv", csv);
  write_file_atomic(dir / "ratio_experiment_summary.csv", summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tollmatch: anticipatory-toll route matching simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, property, theta1 = "1", theta2 = "1", sizes = "20";
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed = 1;
  int trials = 0;
  double phi = 0.5;

  auto* simulate = app.add_subcommand("simulate", "run a scenario config");
  simulate->add_option("--config", config_path, "scenario JSON file")->required();
  simulate->add_option("--seed", seed_override, "override the config seed");
  simulate->add_option("--out", out_dir, "output directory")->envname("TOLLMATCH_OUT");

  auto* verify = app.add_subcommand("verify", "check mechanism properties");
  verify->add_option("--property", property, "pareto | strategyproof | ratio")
      ->required()
      ->check(CLI::IsMember({"pareto", "strategyproof", "ratio"}));
  verify->add_option("--trials", trials, "number of instances/probes");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--out", out_dir, "output directory")->envname("TOLLMATCH_OUT");

  auto* compare = app.add_subcommand("compare-auction", "two-driver auction vs matching table");
  compare->add_option("--theta1", theta1, "driver 1 value of time, value or lo:hi:count");
  compare->add_option("--theta2", theta2, "driver 2 value of time, value or lo:hi:count");
  compare->add_option("--phi", phi, "matching payment fraction in (0,1)");
  compare->add_option("--out", out_dir, "output directory")->envname("TOLLMATCH_OUT");

  auto* ratio = app.add_subcommand("ratio-experiment", "competitive-ratio data emission");
  ratio->add_option("--trials", trials, "trials per size");
  ratio->add_option("--seed", seed, "random seed");
  ratio->add_option("--sizes", sizes, "comma-separated instance sizes");
  ratio->add_option("--out", out_dir, "output directory")->envname("TOLLMATCH_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, seed_override, out_dir);
    if (verify->parsed()) {
      const fs::path dir = prepare_out_dir(out_dir);
      if (property == "ratio") return cmd_verify_ratio(trials > 0 ? trials : 1000, seed, dir);
      if (property == "pareto") return cmd_verify_pareto(trials > 0 ? trials : 200, seed, dir);
      return cmd_verify_strategyproof(trials > 0 ? trials : 100, seed, dir);
    }
    if (compare->parsed()) return cmd_compare_auction(theta1, theta2, phi, out_dir);
    if (ratio->parsed())
      return cmd_ratio_experiment(trials > 0 ? trials : 1000, seed, sizes, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
