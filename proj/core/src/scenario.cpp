#include "lorp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lorp/errors.hpp"
#include "lorp/rng.hpp"

namespace lorp {

std::string to_string(SpatialMode mode) {
  return mode == SpatialMode::uniform ? "uniform" : "hotspot";
}

SpatialMode parse_spatial_mode(std::string_view text) {
  if (text == "uniform") {
    return SpatialMode::uniform;
  }
  if (text == "hotspot") {
    return SpatialMode::hotspot;
  }
  throw precondition_error("unknown spatial mode '" + std::string(text) + "'");
}

void ScenarioConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw precondition_error(std::string("scenario: ") + name + " must be positive");
    }
  };
  positive(duration, "duration");
  positive(width, "width");
  positive(height, "height");
  positive(comm_range, "comm_range");
  positive(speed, "speed");
  positive(crisis_sigma, "crisis_sigma");
  positive(hotspot_radius, "hotspot_radius");
  if (n_planes < 1) {
    throw precondition_error("scenario: n_planes must be >= 1");
  }
  if (n_operators < 1) {
    throw precondition_error("scenario: n_operators must be >= 1");
  }
  if (total_requests < 0) {
    throw precondition_error("scenario: total_requests must be >= 0");
  }
  if (n_crises < 0) {
    throw precondition_error("scenario: n_crises must be >= 0");
  }
  if (!(uniform_fraction >= 0.0 && uniform_fraction <= 1.0)) {
    throw precondition_error("scenario: uniform_fraction must lie in [0, 1]");
  }
}

ScenarioConfig scaled_config(double duration) {
  ScenarioConfig config;
  config.duration = duration;
  config.total_requests = static_cast<int>(std::lround(duration / 60.0));
  config.crisis_sigma = 7.2 * kSecondsPerHour * (duration / kMonthSeconds);
  return config;
}

std::pair<double, double> Covariance2::eigenvalues() const {
  const double mean = 0.5 * (xx + yy);
  const double diff = 0.5 * (xx - yy);
  const double r = std::sqrt(diff * diff + xy * xy);
  return {mean - r, mean + r};
}

void Scenario::validate() const {
  config.validate();
  const auto bounds = config.bounds();
  if (static_cast<int>(requests.size()) != config.total_requests) {
    throw malformed_snapshot("scenario: request count differs from total_requests");
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    if (to_index(r.id) != i) {
      throw malformed_snapshot("scenario: request ids must be dense");
    }
    if (i > 0 && r.t_submitted < requests[i - 1].t_submitted) {
      throw malformed_snapshot("scenario: requests must be sorted by time");
    }
    if (!(r.t_submitted >= 0.0 && r.t_submitted <= config.duration)) {
      throw malformed_snapshot("scenario: request time outside horizon");
    }
    if (!bounds.contains(r.location)) {
      throw malformed_snapshot("scenario: request outside area");
    }
  }
  if (static_cast<int>(plane_starts.size()) != config.n_planes) {
    throw malformed_snapshot("scenario: plane count differs from n_planes");
  }
  if (static_cast<int>(operator_locations.size()) != config.n_operators) {
    throw malformed_snapshot("scenario: operator count differs from n_operators");
  }
  for (const auto& p : plane_starts) {
    if (!bounds.contains(p)) {
      throw malformed_snapshot("scenario: plane outside area");
    }
  }
  for (const auto& o : operator_locations) {
    if (!bounds.contains(o)) {
      throw malformed_snapshot("scenario: operator outside area");
    }
  }
}

RequestTimes gen_request_times(const ScenarioConfig& config, std::mt19937_64& rng) {
  config.validate();
  RequestTimes out;
  std::uniform_real_distribution<double> horizon(0.0, config.duration);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int crises = config.n_crises;
  out.crisis_means.reserve(static_cast<std::size_t>(crises));
  for (int i = 0; i < crises; ++i) {
    out.crisis_means.push_back(horizon(rng));
  }
  const bool all_uniform = crises == 0;

  out.samples.reserve(static_cast<std::size_t>(config.total_requests));
  for (int n = 0; n < config.total_requests; ++n) {
    if (all_uniform || unit(rng) < config.uniform_fraction) {
      out.samples.push_back({horizon(rng), -1});
      continue;
    }
    std::uniform_int_distribution<int> pick(0, crises - 1);
    const int c = pick(rng);
    std::normal_distribution<double> normal(out.crisis_means[static_cast<std::size_t>(c)],
                                            config.crisis_sigma);
    double t = normal(rng);
    while (t < 0.0 || t > config.duration) {
      t = normal(rng);
    }
    out.samples.push_back({t, c});
  }
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const TimeSample& a, const TimeSample& b) { return a.t < b.t; });
  return out;
}

Location sample_gaussian(const Hotspot& hotspot, std::mt19937_64& rng) {
  // Cholesky factor of the 2x2 covariance.
  const auto& c = hotspot.covariance;
  const double l11 = std::sqrt(c.xx);
  const double l21 = c.xy / l11;
  const double l22 = std::sqrt(std::max(c.yy - l21 * l21, 0.0));
  std::normal_distribution<double> standard(0.0, 1.0);
  const double z1 = standard(rng);
  const double z2 = standard(rng);
  return {hotspot.center.x + l11 * z1, hotspot.center.y + l21 * z1 + l22 * z2};
}

std::vector<Location> gen_request_locations(const ScenarioConfig& config,
                                            std::span<const Hotspot> hotspots,
                                            std::span<const TimeSample> times,
                                            std::mt19937_64& rng) {
  const auto bounds = config.bounds();
  std::uniform_real_distribution<double> ux(0.0, config.width);
  std::uniform_real_distribution<double> uy(0.0, config.height);
  std::vector<Location> out;
  out.reserve(times.size());
  for (const auto& sample : times) {
    const bool clustered = config.spatial_mode == SpatialMode::hotspot && sample.crisis >= 0 &&
                           static_cast<std::size_t>(sample.crisis) < hotspots.size();
    if (!clustered) {
      const double x = ux(rng);
      out.push_back({x, uy(rng)});
      continue;
    }
    const auto& spot = hotspots[static_cast<std::size_t>(sample.crisis)];
    Location p = sample_gaussian(spot, rng);
    while (!bounds.contains(p)) {
      p = sample_gaussian(spot, rng);
    }
    out.push_back(p);
  }
  return out;
}

double disk_containment(const Covariance2& cov, double radius) {
  const auto [lo, hi] = cov.eigenvalues();
  const double a = std::sqrt(std::max(hi, 0.0));
  const double b = std::sqrt(std::max(lo, 0.0));
  if (a == 0.0) {
    return 1.0;
  }
  if (b == 0.0) {
    return std::erf(radius / (a * std::numbers::sqrt2));
  }
  // P = integral over x = r sin(t), t in [-pi/2, pi/2], of the x-marginal
  // density times P(|y| <= r cos t); Simpson's rule on the smooth integrand.
  constexpr int kIntervals = 512;
  const double h = std::numbers::pi / kIntervals;
  const double norm = 1.0 / (a * std::sqrt(2.0 * std::numbers::pi));
  const auto f = [&](double t) {
    const double x = radius * std::sin(t);
    const double half = radius * std::cos(t);
    return norm * std::exp(-x * x / (2.0 * a * a)) * std::erf(half / (b * std::numbers::sqrt2)) *
           half;
  };
  double sum = f(-std::numbers::pi / 2) + f(std::numbers::pi / 2);
  for (int i = 1; i < kIntervals; ++i) {
    sum += f(-std::numbers::pi / 2 + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double hotspot_base_sigma(double radius) { return radius / std::sqrt(2.0 * std::log(10.0)); }

Covariance2 hotspot_covariance(double radius, double scale_x, double scale_y, double angle) {
  if (!(radius > 0.0)) {
    throw precondition_error("hotspot radius must be positive");
  }
  if (!(scale_x > 0.0) || !(scale_y > 0.0)) {
    throw precondition_error("hotspot scale factors must be positive");
  }
  const double base = hotspot_base_sigma(radius);
  double sx = base * scale_x;
  double sy = base * scale_y;
  if (scale_x == scale_y) {
    sx = sy = base;
  } else {
    const auto containment = [&](double c) {
      return disk_containment({c * c * sx * sx, 0.0, c * c * sy * sy}, radius);
    };
    double lo = 0.1;
    double hi = 10.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (containment(mid) > 0.9 ? lo : hi) = mid;
    }
    const double c = 0.5 * (lo + hi);
    sx *= c;
    sy *= c;
  }
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  const double vx = sx * sx;
  const double vy = sy * sy;
  return {cs * cs * vx + sn * sn * vy, cs * sn * (vx - vy), sn * sn * vx + cs * cs * vy};
}

Covariance2 sample_hotspot_covariance(double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> scale(0.6, 1.4);
  std::uniform_real_distribution<double> rotation(0.0, std::numbers::pi);
  const double sx = scale(rng);
  const double sy = scale(rng);
  return hotspot_covariance(radius, sx, sy, rotation(rng));
}

Scenario generate_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario scenario;
  scenario.config = config;

  auto placement = make_stream(config.seed, "placement");
  auto hotspot_rng = make_stream(config.seed, "hotspots");
  auto times_rng = make_stream(config.seed, "times");
  auto locations_rng = make_stream(config.seed, "locations");

  const Location center{config.width / 2.0, config.height / 2.0};
  if (config.n_operators == 1) {
    scenario.operator_locations.push_back(center);
  } else {
    const double ring = std::min(config.width, config.height) / 4.0;
    for (int i = 0; i < config.n_operators; ++i) {
      const double a = 2.0 * std::numbers::pi * i / config.n_operators;
      scenario.operator_locations.push_back(
          {center.x + ring * std::cos(a), center.y + ring * std::sin(a)});
    }
  }

  std::uniform_real_distribution<double> ux(0.0, config.width);
  std::uniform_real_distribution<double> uy(0.0, config.height);
  for (int i = 0; i < config.n_planes; ++i) {
    const double x = ux(placement);
    scenario.plane_starts.push_back({x, uy(placement)});
  }

  if (config.spatial_mode == SpatialMode::hotspot) {
    for (int i = 0; i < config.n_crises; ++i) {
      const double x = ux(hotspot_rng);
      const Location c{x, uy(hotspot_rng)};
      scenario.hotspots.push_back({c, sample_hotspot_covariance(config.hotspot_radius,
                                                                hotspot_rng)});
    }
  }

  const auto times = gen_request_times(config, times_rng);
  const auto locations =
      gen_request_locations(config, scenario.hotspots, times.samples, locations_rng);
  scenario.requests.reserve(times.samples.size());
  for (std::size_t i = 0; i < times.samples.size(); ++i) {
    const bool clustered = config.spatial_mode == SpatialMode::hotspot;
    scenario.requests.push_back({RequestId{static_cast<std::uint32_t>(i)}, locations[i],
                                 times.samples[i].t,
                                 clustered ? times.samples[i].crisis : std::int32_t{-1}});
  }
  return scenario;
}

FactorialSpec FactorialSpec::standard_grid(const ScenarioConfig& base, int replicates) {
  FactorialSpec spec;
  spec.n_planes = {20, 10, 5};
  spec.hotspot_radius = {1'000.0, 3'000.0, 6'000.0};
  spec.comm_range = {1'000.0, 2'000.0, 3'000.0};
  spec.n_crises = {9, 3, 1};
  spec.replicates = replicates;
  spec.base = base;
  return spec;
}

std::vector<FactorialCell> expand_factorial(const FactorialSpec& spec) {
  if (spec.n_planes.empty() || spec.hotspot_radius.empty() || spec.comm_range.empty() ||
      spec.n_crises.empty()) {
    throw precondition_error("factorial spec: every feature needs at least one level");
  }
  if (spec.replicates < 1) {
    throw precondition_error("factorial spec: replicates must be >= 1");
  }
  std::vector<FactorialCell> cells;
  std::size_t cell = 0;
  for (const int planes : spec.n_planes) {
    for (const double radius : spec.hotspot_radius) {
      for (const double range : spec.comm_range) {
        for (const int crises : spec.n_crises) {
          for (int rep = 0; rep < spec.replicates; ++rep) {
            FactorialCell c;
            c.cell = cell;
            c.replicate = static_cast<std::size_t>(rep);
            c.config = spec.base;
            c.config.n_planes = planes;
            c.config.hotspot_radius = radius;
            c.config.comm_range = range;
            c.config.n_crises = crises;
            c.config.seed = derive_seed(spec.base.seed, cell, c.replicate);
            c.id = "cell" + std::to_string(cell) + "_rep" + std::to_string(rep);
            cells.push_back(std::move(c));
          }
          ++cell;
        }
      }
    }
  }
  return cells;
}

}  // namespace lorp
