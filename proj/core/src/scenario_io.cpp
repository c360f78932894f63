#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lorp/errors.hpp"
#include "lorp/scenario.hpp"

namespace lorp {

namespace {

using nlohmann::json;

json location_json(Location p) { return json{{"x", p.x}, {"y", p.y}}; }

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) {
    throw parse_error("scenario: '" + path + "' is not an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw parse_error("scenario: missing field '" + path + "." + key + "'");
  }
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number()) {
    throw parse_error("scenario: field '" + path + "." + key + "' is not a number");
  }
  return v.get<double>();
}

template <typename Int>
Int integer(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_number_integer()) {
    throw parse_error("scenario: field '" + path + "." + key + "' is not an integer");
  }
  return v.get<Int>();
}

const json& array(const json& obj, const char* key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_array()) {
    throw parse_error("scenario: field '" + path + "." + key + "' is not an array");
  }
  return v;
}

Location location_from(const json& obj, const std::string& path) {
  return {number(obj, "x", path), number(obj, "y", path)};
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  const auto& c = s.config;
  json config{{"duration", c.duration},
              {"width", c.width},
              {"height", c.height},
              {"n_planes", c.n_planes},
              {"n_operators", c.n_operators},
              {"comm_range", c.comm_range},
              {"speed", c.speed},
              {"total_requests", c.total_requests},
              {"n_crises", c.n_crises},
              {"crisis_sigma", c.crisis_sigma},
              {"uniform_fraction", c.uniform_fraction},
              {"spatial_mode", to_string(c.spatial_mode)},
              {"hotspot_radius", c.hotspot_radius},
              {"seed", c.seed}};

  json planes = json::array();
  for (const auto& p : s.plane_starts) {
    planes.push_back(location_json(p));
  }
  json operators = json::array();
  for (const auto& o : s.operator_locations) {
    operators.push_back(location_json(o));
  }
  json requests = json::array();
  for (const auto& r : s.requests) {
    requests.push_back({{"id", to_index(r.id)},
                        {"t", r.t_submitted},
                        {"x", r.location.x},
                        {"y", r.location.y},
                        {"hotspot", r.hotspot}});
  }
  json hotspots = json::array();
  for (const auto& h : s.hotspots) {
    hotspots.push_back({{"x", h.center.x},
                        {"y", h.center.y},
                        {"cxx", h.covariance.xx},
                        {"cxy", h.covariance.xy},
                        {"cyy", h.covariance.yy}});
  }
  json doc{{"version", kScenarioFormatVersion}, {"config", config},     {"planes", planes},
           {"operators", operators},            {"requests", requests}, {"hotspots", hotspots}};
  return doc.dump(1) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("scenario: ") + e.what());
  }
  if (!doc.is_object()) {
    throw parse_error("scenario: top level is not an object");
  }
  const int version = integer<int>(doc, "version", "$");
  if (version != kScenarioFormatVersion) {
    throw parse_error("scenario: unsupported format version " + std::to_string(version) +
                      " (expected " + std::to_string(kScenarioFormatVersion) + ")");
  }

  Scenario s;
  const auto& c = field(doc, "config", "$");
  const std::string cp = "$.config";
  s.config.duration = number(c, "duration", cp);
  s.config.width = number(c, "width", cp);
  s.config.height = number(c, "height", cp);
  s.config.n_planes = integer<int>(c, "n_planes", cp);
  s.config.n_operators = integer<int>(c, "n_operators", cp);
  s.config.comm_range = number(c, "comm_range", cp);
  s.config.speed = number(c, "speed", cp);
  s.config.total_requests = integer<int>(c, "total_requests", cp);
  s.config.n_crises = integer<int>(c, "n_crises", cp);
  s.config.crisis_sigma = number(c, "crisis_sigma", cp);
  s.config.uniform_fraction = number(c, "uniform_fraction", cp);
  {
    const auto& mode = field(c, "spatial_mode", cp);
    if (!mode.is_string()) {
      throw parse_error("scenario: field '$.config.spatial_mode' is not a string");
    }
    try {
      s.config.spatial_mode = parse_spatial_mode(mode.get<std::string>());
    } catch (const precondition_error& e) {
      throw parse_error(std::string("scenario: field '$.config.spatial_mode': ") + e.what());
    }
  }
  s.config.hotspot_radius = number(c, "hotspot_radius", cp);
  s.config.seed = integer<std::uint64_t>(c, "seed", cp);

  const auto& planes = array(doc, "planes", "$");
  for (std::size_t i = 0; i < planes.size(); ++i) {
    s.plane_starts.push_back(location_from(planes[i], "$.planes[" + std::to_string(i) + "]"));
  }
  const auto& operators = array(doc, "operators", "$");
  for (std::size_t i = 0; i < operators.size(); ++i) {
    s.operator_locations.push_back(
        location_from(operators[i], "$.operators[" + std::to_string(i) + "]"));
  }
  const auto& requests = array(doc, "requests", "$");
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const std::string rp = "$.requests[" + std::to_string(i) + "]";
    Request r;
    r.id = RequestId{integer<std::uint32_t>(requests[i], "id", rp)};
    r.t_submitted = number(requests[i], "t", rp);
    r.location = location_from(requests[i], rp);
    r.hotspot = integer<std::int32_t>(requests[i], "hotspot", rp);
    s.requests.push_back(r);
  }
  const auto& hotspots = array(doc, "hotspots", "$");
  for (std::size_t i = 0; i < hotspots.size(); ++i) {
    const std::string hp = "$.hotspots[" + std::to_string(i) + "]";
    Hotspot h;
    h.center = location_from(hotspots[i], hp);
    h.covariance = {number(hotspots[i], "cxx", hp), number(hotspots[i], "cxy", hp),
                    number(hotspots[i], "cyy", hp)};
    s.hotspots.push_back(h);
  }

  try {
    s.validate();
  } catch (const std::exception& e) {
    throw parse_error(std::string("scenario: ") + e.what());
  }
  return s;
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << scenario_to_json(scenario);
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

Scenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw parse_error("cannot open scenario file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json(buffer.str());
}

}  // namespace lorp
