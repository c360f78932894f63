#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lorp/model.hpp"

namespace lorp {

enum class SpatialMode { uniform, hotspot };

std::string to_string(SpatialMode mode);
SpatialMode parse_spatial_mode(std::string_view text);

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kMonthSeconds = 30.0 * 24.0 * kSecondsPerHour;
inline constexpr double kKmhToMs = 1000.0 / 3600.0;

struct ScenarioConfig {
  double duration = kMonthSeconds;
  double width = 10'000.0;
  double height = 10'000.0;
  int n_planes = 10;
  int n_operators = 1;
  double comm_range = 2'000.0;
  double speed = 50.0 * kKmhToMs;
  int total_requests = 43'200;
  int n_crises = 4;
  double crisis_sigma = 7.2 * kSecondsPerHour;
  double uniform_fraction = 0.5;
  SpatialMode spatial_mode = SpatialMode::hotspot;
  double hotspot_radius = 1'000.0;
  std::uint64_t seed = 0;

  void validate() const;
  WorldBounds bounds() const { return {width, height}; }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Month-long defaults with request count and crisis width shrunk in
/// proportion to `duration`: one request per minute, crisis sigma at the same
/// fraction of the horizon.
ScenarioConfig scaled_config(double duration);

struct Covariance2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  /// Ascending eigenvalues.
  std::pair<double, double> eigenvalues() const;

  friend bool operator==(const Covariance2&, const Covariance2&) = default;
};

struct Hotspot {
  Location center;
  Covariance2 covariance;

  friend bool operator==(const Hotspot&, const Hotspot&) = default;
};

struct Scenario {
  ScenarioConfig config;
  std::vector<Request> requests;  // ascending t_submitted, ids 0..n-1
  std::vector<Location> plane_starts;
  std::vector<Location> operator_locations;
  std::vector<Hotspot> hotspots;

  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct TimeSample {
  double t = 0.0;
  std::int32_t crisis = -1;  // -1 for background
};

struct RequestTimes {
  std::vector<TimeSample> samples;  // ascending t
  std::vector<double> crisis_means;
};

/// Background uniform mass `uniform_fraction`, the rest split equally over
/// n_crises normals with uniform means. Out-of-horizon draws are redrawn.
RequestTimes gen_request_times(const ScenarioConfig& config, std::mt19937_64& rng);

/// Crisis requests follow their crisis hotspot in hotspot mode; everything
/// else is uniform over the area. Out-of-area draws are redrawn.
std::vector<Location> gen_request_locations(const ScenarioConfig& config,
                                            std::span<const Hotspot> hotspots,
                                            std::span<const TimeSample> times,
                                            std::mt19937_64& rng);

/// Probability that a zero-mean Gaussian with this covariance lands within
/// `radius` of its mean.
double disk_containment(const Covariance2& cov, double radius);

/// Base deviation radius / sqrt(2 ln 10), i.e. 90% of an isotropic Gaussian
/// inside `radius`.
double hotspot_base_sigma(double radius);

/// Axis deviations base*scale_x, base*scale_y rotated by `angle`, then
/// rescaled as a whole so that exactly 90% of the mass lies inside `radius`.
Covariance2 hotspot_covariance(double radius, double scale_x, double scale_y, double angle);

/// Scale factors Uniform[0.6, 1.4] per axis, rotation Uniform[0, pi).
Covariance2 sample_hotspot_covariance(double radius, std::mt19937_64& rng);

/// Draw from N(center, cov).
Location sample_gaussian(const Hotspot& hotspot, std::mt19937_64& rng);

/// Pure function of the config (including its seed).
Scenario generate_scenario(const ScenarioConfig& config);

struct FactorialSpec {
  std::vector<int> n_planes;              // load
  std::vector<double> hotspot_radius;     // spread
  std::vector<double> comm_range;
  std::vector<int> n_crises;              // sharpness
  int replicates = 1;
  ScenarioConfig base;

  /// Levels of the four-feature factorial grid, low/mid/high.
  static FactorialSpec standard_grid(const ScenarioConfig& base, int replicates);
};

struct FactorialCell {
  std::string id;
  std::size_t cell = 0;
  std::size_t replicate = 0;
  ScenarioConfig config;
};

/// Cross product in (load, spread, range, sharpness) order, replicates
/// innermost. Each cell gets a seed derived from (base seed, cell, replicate).
std::vector<FactorialCell> expand_factorial(const FactorialSpec& spec);

inline constexpr int kScenarioFormatVersion = 1;

void write_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario read_scenario(const std::filesystem::path& path);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

}  // namespace lorp
