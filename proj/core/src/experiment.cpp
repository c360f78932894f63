#include "lorp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "lorp/errors.hpp"

namespace lorp {

void ExperimentSpec::validate() const {
  if (!factorial && scenarios.empty()) {
    throw precondition_error("experiment needs at least one scenario");
  }
  if (allocators.empty()) {
    throw precondition_error("experiment needs at least one allocator");
  }
  if (parallelism == 0) {
    throw precondition_error("parallelism must be at least 1");
  }
  if (output_dir.empty()) {
    throw precondition_error("experiment needs an output directory");
  }
  std::set<std::string> labels;
  for (const auto& a : allocators) {
    a.validate();
    if (!labels.insert(allocator_label(a)).second) {
      throw precondition_error("duplicate allocator " + allocator_label(a));
    }
  }
}

std::string allocator_label(const AllocatorConfig& config) {
  if (config.method == Method::workload) {
    return fmt::format("{}_k{}_a{}", config.name(), config.workload.k, config.workload.alpha);
  }
  return config.name();
}

std::filesystem::path records_path(const std::filesystem::path& output_dir,
                                   const std::string& scenario_id, const std::string& label) {
  return output_dir / "runs" / fmt::format("{}__{}.csv", scenario_id, label);
}

std::vector<NamedScenario> resolve_scenarios(const ExperimentSpec& spec) {
  std::vector<NamedScenario> out = spec.scenarios;
  if (spec.factorial) {
    for (const auto& cell : expand_factorial(*spec.factorial)) {
      out.push_back({cell.id, generate_scenario(cell.config)});
    }
  }
  std::set<std::string> ids;
  for (const auto& s : out) {
    if (s.id.empty() || s.id.find_first_of("/\\,\n") != std::string::npos) {
      throw precondition_error("invalid scenario id '" + s.id + "'");
    }
    if (!ids.insert(s.id).second) {
      throw precondition_error("duplicate scenario id " + s.id);
    }
  }
  return out;
}

SummaryRow run_cell(const NamedScenario& named, const AllocatorConfig& allocator,
                    const SimOverrides& sim, std::vector<RunRecord>* records_out) {
  const auto& cfg = named.scenario.config;
  SummaryRow row;
  row.scenario_id = named.id;
  row.seed = cfg.seed;
  row.allocator = allocator.name();
  row.k = allocator.workload.k;
  row.alpha = allocator.workload.alpha;
  row.n_planes = cfg.n_planes;
  row.hotspot_radius = cfg.hotspot_radius;
  row.comm_range = cfg.comm_range;
  row.n_crises = cfg.n_crises;
  try {
    SimConfig config = make_sim_config(named.scenario, allocator);
    config.dt = sim.dt;
    config.realloc_period = sim.realloc_period;
    config.grace_factor = sim.grace_factor;
    config.centralized_knowledge = sim.centralized_knowledge;
    auto result = run(named.scenario, config, cfg.seed);
    row.unserviced = result.summary.unserviced;
    if (result.summary.serviced > 0) {
      row.avg_service_time = avg_service_time(result.records).mean;
    }
    if (records_out != nullptr) {
      *records_out = std::move(result.records);
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    row.avg_service_time.reset();
    row.unserviced = named.scenario.requests.size();
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto scenarios = resolve_scenarios(spec);
  std::filesystem::create_directories(spec.output_dir / "runs");
  if (spec.write_scenarios) {
    std::filesystem::create_directories(spec.output_dir / "scenarios");
    for (const auto& s : scenarios) {
      write_scenario(s.scenario, spec.output_dir / "scenarios" / (s.id + ".json"));
    }
  }

  const std::size_t n_alloc = spec.allocators.size();
  const std::size_t n_cells = scenarios.size() * n_alloc;
  std::vector<SummaryRow> rows(n_cells);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1)) {
      const auto& scenario = scenarios[i / n_alloc];
      const auto& allocator = spec.allocators[i % n_alloc];
      std::vector<RunRecord> records;
      rows[i] = run_cell(scenario, allocator, spec.sim, &records);
      const auto path = records_path(spec.output_dir, scenario.id, allocator_label(allocator));
      try {
        write_records_csv(path, records);
      } catch (const std::exception& e) {
        rows[i].status = std::string("error: ") + e.what();
      }
    }
  };

  const std::size_t n_threads = std::min(spec.parallelism, std::max<std::size_t>(n_cells, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
  }

  ExperimentResult result;
  result.rows = std::move(rows);
  result.failures = static_cast<std::size_t>(
      std::count_if(result.rows.begin(), result.rows.end(), [](const auto& r) { return !r.ok(); }));
  write_summary_csv(spec.output_dir / "summary.csv", result.rows);
  return result;
}

namespace {

std::map<std::string, double> usable_rows(const std::vector<SummaryRow>& rows,
                                          const std::string& allocator) {
  std::map<std::string, double> out;
  for (const auto& r : rows) {
    if (r.allocator != allocator || !r.ok() || !r.avg_service_time) {
      continue;
    }
    if (!out.emplace(r.scenario_id, *r.avg_service_time).second) {
      throw precondition_error(
          fmt::format("allocator {} has several rows for scenario {}", allocator, r.scenario_id));
    }
  }
  return out;
}

}  // namespace

Comparison compare(const std::vector<SummaryRow>& rows_a, const std::string& allocator_a,
                   const std::vector<SummaryRow>& rows_b, const std::string& allocator_b,
                   WilcoxonMethod method) {
  const auto a = usable_rows(rows_a, allocator_a);
  const auto b = usable_rows(rows_b, allocator_b);
  std::vector<double> va;
  std::vector<double> vb;
  std::vector<double> diffs;
  for (const auto& [id, value] : a) {
    const auto it = b.find(id);
    if (it == b.end()) {
      continue;
    }
    va.push_back(value);
    vb.push_back(it->second);
    diffs.push_back(value - it->second);
  }
  if (diffs.empty()) {
    throw precondition_error(
        fmt::format("no paired scenarios between {} and {}", allocator_a, allocator_b));
  }
  Comparison out;
  out.allocator_a = allocator_a;
  out.allocator_b = allocator_b;
  out.pairs = diffs.size();
  out.a = aggregate(va);
  out.b = aggregate(vb);
  out.diff = aggregate(diffs);
  out.wilcoxon = wilcoxon_signed_rank(diffs, method);
  return out;
}

std::vector<AllocatorConfig> explore_allocators(const ExploreSpec& spec) {
  if (spec.k_values.empty() || spec.alpha_values.empty()) {
    throw precondition_error("explore needs at least one k and one alpha");
  }
  std::vector<AllocatorConfig> out;
  auto base = AllocatorConfig{};
  base.method = spec.method;
  base.knowledge = spec.knowledge;
  if (spec.include_baseline) {
    auto c = base;
    c.workload.k = 0.0;
    c.workload.alpha = 1.0;
    out.push_back(c);
  }
  for (const double k : spec.k_values) {
    for (const double alpha : spec.alpha_values) {
      if (spec.include_baseline && k == 0.0 && alpha == 1.0) {
        continue;
      }
      auto c = base;
      c.workload.k = k;
      c.workload.alpha = alpha;
      c.validate();
      out.push_back(c);
    }
  }
  return out;
}

std::vector<ExploreCell> summarize_explore(const std::vector<SummaryRow>& rows) {
  std::map<std::pair<double, double>, std::vector<double>> groups;
  for (const auto& r : rows) {
    if (r.ok() && r.avg_service_time) {
      groups[{r.k, r.alpha}].push_back(*r.avg_service_time);
    }
  }
  std::vector<ExploreCell> out;
  for (const auto& [key, values] : groups) {
    out.push_back({key.first, key.second, aggregate(values)});
  }
  return out;
}

void write_explore_csv(const std::filesystem::path& path, const std::vector<ExploreCell>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "k,alpha,runs,median,mean,std_error,min,max\n";
  for (const auto& c : cells) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", c.k, c.alpha, c.stats.n, c.stats.median,
                       c.stats.mean, c.stats.std_error, c.stats.min, c.stats.max);
  }
}

}  // namespace lorp
