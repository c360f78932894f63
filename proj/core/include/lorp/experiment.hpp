#pragma once

// Batch execution of (scenario, allocator) cells with CSV output, plus the
// paired comparison and k/alpha exploration built on top of it.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lorp/allocators.hpp"
#include "lorp/records_io.hpp"
#include "lorp/scenario.hpp"
#include "lorp/simulator.hpp"
#include "lorp/stats.hpp"

namespace lorp {

struct NamedScenario {
  std::string id;
  Scenario scenario;
};

struct SimOverrides {
  double dt = 1.0;
  double realloc_period = 10.0;
  double grace_factor = 2.0;
  Knowledge centralized_knowledge = Knowledge::global;
};

struct ExperimentSpec {
  std::optional<FactorialSpec> factorial;
  std::vector<NamedScenario> scenarios;  // used as well as / instead of the factorial
  std::vector<AllocatorConfig> allocators;
  std::filesystem::path output_dir;
  std::size_t parallelism = 1;
  SimOverrides sim;
  bool write_scenarios = true;

  void validate() const;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;  // scenario-major, allocator order within
  std::size_t failures = 0;
};

/// Unique label for an allocator config within one experiment; workload
/// methods carry their k and alpha.
std::string allocator_label(const AllocatorConfig& config);

std::filesystem::path records_path(const std::filesystem::path& output_dir,
                                   const std::string& scenario_id, const std::string& label);

/// Materializes the experiment's scenarios: explicit ones first, then factorial cells.
std::vector<NamedScenario> resolve_scenarios(const ExperimentSpec& spec);

/// Runs every cell. Writes <out>/scenarios/<id>.json, <out>/runs/<id>__<label>.csv
/// and <out>/summary.csv. A failing cell becomes a summary row with its error
/// as status.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// One cell without file output.
SummaryRow run_cell(const NamedScenario& scenario, const AllocatorConfig& allocator,
                    const SimOverrides& sim, std::vector<RunRecord>* records_out = nullptr);

struct Comparison {
  std::string allocator_a;
  std::string allocator_b;
  std::size_t pairs = 0;
  SummaryStats a;
  SummaryStats b;
  SummaryStats diff;  // a - b per paired scenario
  WilcoxonResult wilcoxon;
};

/// Pairs rows by scenario_id (failed rows skipped) and tests a against b.
Comparison compare(const std::vector<SummaryRow>& rows_a, const std::string& allocator_a,
                   const std::vector<SummaryRow>& rows_b, const std::string& allocator_b,
                   WilcoxonMethod method = WilcoxonMethod::automatic);

struct ExploreSpec {
  std::vector<double> k_values;
  std::vector<double> alpha_values;
  Method method = Method::workload;
  Knowledge knowledge = Knowledge::local;
  bool include_baseline = true;  // k = 0 reference column of the same method
};

/// One allocator config per (k, alpha) pair, k-major.
std::vector<AllocatorConfig> explore_allocators(const ExploreSpec& spec);

struct ExploreCell {
  double k = 0.0;
  double alpha = 0.0;
  SummaryStats stats;
};

/// Median-oriented grid summary over the rows of an explore experiment.
std::vector<ExploreCell> summarize_explore(const std::vector<SummaryRow>& rows);

void write_explore_csv(const std::filesystem::path& path, const std::vector<ExploreCell>& cells);

}  // namespace lorp
