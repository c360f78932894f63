// lorp: scenario generation, single runs, batch experiments and paired comparison.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lorp/experiment.hpp"
#include "lorp/records_io.hpp"
#include "lorp/scenario.hpp"
#include "lorp/simulator.hpp"
#include "lorp/stats.hpp"

namespace fs = std::filesystem;
using namespace lorp;

namespace {

// Scenario flags are parsed into optionals and applied over the duration-scaled
// defaults so that only what the user typed is overridden.
struct ScenarioFlags {
  double duration = kMonthSeconds;
  std::optional<double> width, height, comm_range, speed_kmh, crisis_sigma, uniform_fraction,
      hotspot_radius;
  std::optional<int> n_planes, n_operators, total_requests, n_crises;
  std::optional<std::string> spatial_mode;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    app.add_option("--duration", duration, "Scenario horizon in seconds (default: 30 days)");
    app.add_option("--width", width, "World width in metres");
    app.add_option("--height", height, "World height in metres");
    app.add_option("--n-planes", n_planes, "Number of planes");
    app.add_option("--n-operators", n_operators, "Number of operators");
    app.add_option("--comm-range", comm_range, "Communication range in metres");
    app.add_option("--speed", speed_kmh, "Plane speed in km/h");
    app.add_option("--total-requests", total_requests,
                   "Request count (default: one per minute of duration)");
    app.add_option("--n-crises", n_crises, "Number of crisis episodes");
    app.add_option("--crisis-sigma", crisis_sigma,
                   "Crisis time spread in seconds (default: scaled with duration)");
    app.add_option("--uniform-fraction", uniform_fraction, "Share of background requests");
    app.add_option("--spatial-mode", spatial_mode, "uniform or hotspot")
        ->check(CLI::IsMember({"uniform", "hotspot"}));
    app.add_option("--hotspot-radius", hotspot_radius, "Radius holding 90% of a hot spot, metres");
    app.add_option("--seed", seed, "Random seed");
  }

  ScenarioConfig config() const {
    ScenarioConfig c = scaled_config(duration);
    if (width) c.width = *width;
    if (height) c.height = *height;
    if (n_planes) c.n_planes = *n_planes;
    if (n_operators) c.n_operators = *n_operators;
    if (comm_range) c.comm_range = *comm_range;
    if (speed_kmh) c.speed = *speed_kmh * kKmhToMs;
    if (total_requests) c.total_requests = *total_requests;
    if (n_crises) c.n_crises = *n_crises;
    if (crisis_sigma) c.crisis_sigma = *crisis_sigma;
    if (uniform_fraction) c.uniform_fraction = *uniform_fraction;
    if (spatial_mode) c.spatial_mode = parse_spatial_mode(*spatial_mode);
    if (hotspot_radius) c.hotspot_radius = *hotspot_radius;
    c.seed = seed;
    c.validate();
    return c;
  }
};

struct AllocatorFlags {
  double k = 1000.0;
  double alpha = 1.36;
  int iterations = 5;
  int exact_path_limit = 6;

  void add(CLI::App& app) {
    app.add_option("--k", k, "Workload scale k")->capture_default_str();
    app.add_option("--alpha", alpha, "Workload exponent alpha")->capture_default_str();
    app.add_option("--iterations", iterations, "Max-Sum iterations for workload methods")
        ->capture_default_str();
    app.add_option("--exact-path-limit", exact_path_limit,
                   "Largest path solved exactly by c-greedy bids")
        ->capture_default_str();
  }

  AllocatorConfig make(const std::string& name) const {
    AllocatorConfig c = AllocatorConfig::parse(name);
    c.workload.k = k;
    c.workload.alpha = alpha;
    c.iterations = iterations;
    c.exact_path_limit = exact_path_limit;
    c.validate();
    return c;
  }
};

struct SimFlags {
  SimOverrides sim;
  std::string centralized_knowledge = "global";

  void add(CLI::App& app) {
    app.add_option("--dt", sim.dt, "Simulation step in seconds")->capture_default_str();
    app.add_option("--realloc-period", sim.realloc_period, "Seconds between reallocation cycles")
        ->capture_default_str();
    app.add_option("--grace-factor", sim.grace_factor,
                   "Stop at this multiple of the duration even with work left")
        ->capture_default_str();
    app.add_option("--centralized-knowledge", centralized_knowledge,
                   "Candidate sets for c-* methods: global or local")
        ->check(CLI::IsMember({"global", "local"}))
        ->capture_default_str();
  }

  SimOverrides get() const {
    SimOverrides out = sim;
    out.centralized_knowledge =
        centralized_knowledge == "local" ? Knowledge::local : Knowledge::global;
    return out;
  }
};

void print_row(const SummaryRow& row) {
  fmt::print("{} {} avg_service_time={} unserviced={} status={}\n", row.scenario_id, row.allocator,
             row.avg_service_time ? fmt::format("{:.3f}", *row.avg_service_time) : "n/a",
             row.unserviced, row.status);
}

std::vector<NamedScenario> load_scenarios(const std::vector<std::string>& files) {
  std::vector<NamedScenario> out;
  for (const auto& f : files) {
    out.push_back({fs::path(f).stem().string(), read_scenario(f)});
  }
  return out;
}

void print_comparison(const Comparison& c) {
  fmt::print("{} vs {}: {} paired scenarios\n", c.allocator_a, c.allocator_b, c.pairs);
  fmt::print("  {:<16} median={:.3f} mean={:.3f} stderr={:.3f}\n", c.allocator_a, c.a.median,
             c.a.mean, c.a.std_error);
  fmt::print("  {:<16} median={:.3f} mean={:.3f} stderr={:.3f}\n", c.allocator_b, c.b.median,
             c.b.mean, c.b.std_error);
  fmt::print("  diff (a-b)       median={:.3f} mean={:.3f} stderr={:.3f}\n", c.diff.median,
             c.diff.mean, c.diff.std_error);
  fmt::print("  wilcoxon ({}) W+={} n_used={} zeros_dropped={} p={:.6g}\n",
             to_string(c.wilcoxon.method), c.wilcoxon.w_plus, c.wilcoxon.n_used,
             c.wilcoxon.n_zero, c.wilcoxon.p_value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limited-range online routing: UAV task allocation simulator"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write scenario files");
  ScenarioFlags gen_flags;
  gen_flags.add(*gen);
  std::string gen_out;
  bool gen_factorial = false;
  int gen_replicates = 1;
  gen->add_option("--out", gen_out, "Output file, or directory with --factorial")->required();
  gen->add_flag("--factorial", gen_factorial, "Write the whole factorial grid");
  gen->add_option("--replicates", gen_replicates, "Replicates per factorial cell")
      ->capture_default_str();

  // run
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario with one allocator");
  ScenarioFlags run_flags;
  run_flags.add(*run_cmd);
  AllocatorFlags run_alloc;
  run_alloc.add(*run_cmd);
  SimFlags run_sim;
  run_sim.add(*run_cmd);
  std::string run_scenario;
  std::string run_allocator = "d-workload";
  std::string run_out;
  run_cmd->add_option("--scenario", run_scenario,
                      "Scenario file; generated from the scenario flags if absent");
  run_cmd->add_option("--allocator", run_allocator, "Allocation method")->capture_default_str();
  run_cmd->add_option("--out", run_out, "Per-request CSV path");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Run a batch of scenario x allocator cells");
  ScenarioFlags exp_flags;
  exp_flags.add(*exp_cmd);
  AllocatorFlags exp_alloc;
  exp_alloc.add(*exp_cmd);
  SimFlags exp_sim;
  exp_sim.add(*exp_cmd);
  std::vector<std::string> exp_allocators{"d-independent", "d-workload"};
  std::vector<std::string> exp_scenarios;
  std::string exp_out;
  std::size_t exp_parallelism = 1;
  bool exp_factorial = false;
  int exp_replicates = 1;
  exp_cmd->add_option("--allocators", exp_allocators, "Allocation methods")
      ->delimiter(',')
      ->capture_default_str();
  exp_cmd->add_option("--scenarios", exp_scenarios, "Scenario files to include");
  exp_cmd->add_flag("--factorial", exp_factorial,
                    "Add the factorial grid built from the scenario flags");
  exp_cmd->add_option("--replicates", exp_replicates,
                      "Replicates per factorial cell, or seeds without --factorial")
      ->capture_default_str();
  exp_cmd->add_option("--out", exp_out, "Output directory")->required();
  exp_cmd->add_option("--parallelism", exp_parallelism, "Concurrent cells")->capture_default_str();

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Paired Wilcoxon test between two allocators");
  std::string cmp_a;
  std::string cmp_b;
  std::string cmp_alloc_a;
  std::string cmp_alloc_b;
  std::string cmp_method = "auto";
  std::uint64_t cmp_seed = 0;
  cmp_cmd->add_option("--summary-a", cmp_a, "Summary CSV holding allocator A")->required();
  cmp_cmd->add_option("--summary-b", cmp_b, "Summary CSV holding allocator B (default: A's)");
  cmp_cmd->add_option("--allocator-a", cmp_alloc_a, "Allocator A name")->required();
  cmp_cmd->add_option("--allocator-b", cmp_alloc_b, "Allocator B name")->required();
  cmp_cmd->add_option("--method", cmp_method, "auto, exact or normal")
      ->check(CLI::IsMember({"auto", "exact", "normal"}))
      ->capture_default_str();
  cmp_cmd->add_option("--seed", cmp_seed, "Accepted for uniformity; the test is deterministic");

  // explore
  auto* exp2 = app.add_subcommand("explore", "Sweep workload k and alpha");
  ScenarioFlags xp_flags;
  xp_flags.add(*exp2);
  SimFlags xp_sim;
  xp_sim.add(*exp2);
  std::vector<double> xp_k{1, 10, 100, 1000, 10000};
  std::vector<double> xp_alpha{1.0, 1.12, 1.25, 1.36, 1.5, 2.0};
  std::string xp_method = "d-workload";
  std::string xp_out;
  std::size_t xp_parallelism = 1;
  int xp_replicates = 5;
  int xp_iterations = 5;
  exp2->add_option("--k-values", xp_k, "Workload scales")->delimiter(',')->capture_default_str();
  exp2->add_option("--alpha-values", xp_alpha, "Workload exponents")
      ->delimiter(',')
      ->capture_default_str();
  exp2->add_option("--allocator", xp_method, "d-workload or c-workload")
      ->check(CLI::IsMember({"d-workload", "c-workload"}))
      ->capture_default_str();
  exp2->add_option("--iterations", xp_iterations, "Max-Sum iterations")->capture_default_str();
  exp2->add_option("--replicates", xp_replicates, "Scenario seeds")->capture_default_str();
  exp2->add_option("--out", xp_out, "Output directory")->required();
  exp2->add_option("--parallelism", xp_parallelism, "Concurrent cells")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto config = gen_flags.config();
      if (gen_factorial) {
        const auto spec = FactorialSpec::standard_grid(config, gen_replicates);
        fs::create_directories(gen_out);
        for (const auto& cell : expand_factorial(spec)) {
          write_scenario(generate_scenario(cell.config), fs::path(gen_out) / (cell.id + ".json"));
        }
        fmt::print("wrote {} scenarios to {}\n", expand_factorial(spec).size(), gen_out);
      } else {
        const auto scenario = generate_scenario(config);
        write_scenario(scenario, gen_out);
        fmt::print("wrote {} requests to {}\n", scenario.requests.size(), gen_out);
      }
      return 0;
    }

    if (run_cmd->parsed()) {
      NamedScenario named;
      if (!run_scenario.empty()) {
        named = {fs::path(run_scenario).stem().string(), read_scenario(run_scenario)};
      } else {
        named = {fmt::format("seed{}", run_flags.seed), generate_scenario(run_flags.config())};
      }
      std::vector<RunRecord> records;
      const auto row = run_cell(named, run_alloc.make(run_allocator), run_sim.get(), &records);
      if (!run_out.empty()) {
        write_records_csv(fs::path(run_out), records);
      }
      print_row(row);
      return row.ok() ? 0 : 1;
    }

    if (exp_cmd->parsed()) {
      ExperimentSpec spec;
      spec.output_dir = exp_out;
      spec.parallelism = exp_parallelism;
      spec.sim = exp_sim.get();
      for (const auto& name : exp_allocators) {
        spec.allocators.push_back(exp_alloc.make(name));
      }
      spec.scenarios = load_scenarios(exp_scenarios);
      const auto base = exp_flags.config();
      if (exp_factorial) {
        spec.factorial = FactorialSpec::standard_grid(base, exp_replicates);
      } else if (exp_scenarios.empty()) {
        for (int r = 0; r < exp_replicates; ++r) {
          auto c = base;
          c.seed = base.seed + static_cast<std::uint64_t>(r);
          spec.scenarios.push_back({fmt::format("seed{}", c.seed), generate_scenario(c)});
        }
      }
      const auto result = run_experiment(spec);
      for (const auto& row : result.rows) {
        print_row(row);
      }
      fmt::print("{} cells, {} failed; summary in {}\n", result.rows.size(), result.failures,
                 (fs::path(exp_out) / "summary.csv").string());
      return result.failures == 0 ? 0 : 1;
    }

    if (cmp_cmd->parsed()) {
      const auto rows_a = read_summary_csv(fs::path(cmp_a));
      const auto rows_b = cmp_b.empty() ? rows_a : read_summary_csv(fs::path(cmp_b));
      const auto method = cmp_method == "exact"    ? WilcoxonMethod::exact
                          : cmp_method == "normal" ? WilcoxonMethod::normal
                                                   : WilcoxonMethod::automatic;
      print_comparison(compare(rows_a, cmp_alloc_a, rows_b, cmp_alloc_b, method));
      return 0;
    }

    if (exp2->parsed()) {
      ExploreSpec xs;
      xs.k_values = xp_k;
      xs.alpha_values = xp_alpha;
      xs.knowledge = xp_method == "c-workload" ? Knowledge::global : Knowledge::local;
      ExperimentSpec spec;
      spec.allocators = explore_allocators(xs);
      for (auto& a : spec.allocators) {
        a.iterations = xp_iterations;
      }
      spec.output_dir = xp_out;
      spec.parallelism = xp_parallelism;
      spec.sim = xp_sim.get();
      const auto base = xp_flags.config();
      for (int r = 0; r < xp_replicates; ++r) {
        auto c = base;
        c.seed = base.seed + static_cast<std::uint64_t>(r);
        spec.scenarios.push_back({fmt::format("seed{}", c.seed), generate_scenario(c)});
      }
      const auto result = run_experiment(spec);
      const auto cells = summarize_explore(result.rows);
      write_explore_csv(fs::path(xp_out) / "explore.csv", cells);
      for (const auto& c : cells) {
        fmt::print("k={} alpha={} median={:.3f} mean={:.3f} stderr={:.3f}\n", c.k, c.alpha,
                   c.stats.median, c.stats.mean, c.stats.std_error);
      }
      return result.failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "lorp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
