#include "lorp/records_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "lorp/errors.hpp"

namespace lorp {
namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string{};
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line, std::string_view column) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw parse_error(fmt::format("line {}: bad {} value '{}'", line, column, text));
  }
  return value;
}

std::optional<double> parse_opt(const std::string& text, std::size_t line, std::string_view column) {
  if (text.empty()) {
    return std::nullopt;
  }
  return parse_number<double>(text, line, column);
}

// Commas and newlines would break the one-line-per-row layout.
std::string sanitize(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') {
      c = ';';
    }
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw parse_error("cannot open " + path.string());
  }
  return in;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) {
    throw parse_error("missing header");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != header) {
    throw parse_error(fmt::format("unexpected header '{}'", line));
  }
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    const std::optional<double> service =
        r.t_serviced ? std::optional<double>(*r.t_serviced - r.t_submitted) : std::nullopt;
    out << fmt::format("{},{},{},{},{},{},{}\n", to_index(r.id), r.t_submitted,
                       opt_field(r.t_injected), opt_field(r.t_serviced), opt_field(service),
                       r.plane ? fmt::format("{}", to_index(*r.plane)) : std::string{},
                       r.serviced() ? 1 : 0);
  }
}

void write_records_csv(const std::filesystem::path& path, std::span<const RunRecord> records) {
  auto out = open_out(path);
  write_records_csv(out, records);
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  expect_header(in, kRecordsHeader);
  std::vector<RunRecord> out;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto f = split_line(line);
    if (f.size() != 7) {
      throw parse_error(fmt::format("line {}: expected 7 fields, got {}", line_no, f.size()));
    }
    RunRecord r;
    r.id = RequestId{parse_number<std::uint32_t>(f[0], line_no, "request_id")};
    r.t_submitted = parse_number<double>(f[1], line_no, "t_submitted");
    r.t_injected = parse_opt(f[2], line_no, "t_injected");
    r.t_serviced = parse_opt(f[3], line_no, "t_serviced");
    if (!f[5].empty()) {
      r.plane = PlaneId{parse_number<std::uint32_t>(f[5], line_no, "plane_id")};
    }
    const int flag = parse_number<int>(f[6], line_no, "serviced");
    if (flag != (r.serviced() ? 1 : 0)) {
      throw parse_error(fmt::format("line {}: serviced flag disagrees with t_serviced", line_no));
    }
    out.push_back(r);
  }
  return out;
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_records_csv(in);
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", sanitize(r.scenario_id), r.seed,
                       sanitize(r.allocator), r.k, r.alpha, r.n_planes, r.hotspot_radius,
                       r.comm_range, r.n_crises, opt_field(r.avg_service_time), r.unserviced,
                       sanitize(r.status));
  }
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  auto out = open_out(path);
  write_summary_csv(out, rows);
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  expect_header(in, kSummaryHeader);
  std::vector<SummaryRow> out;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto f = split_line(line);
    if (f.size() != 12) {
      throw parse_error(fmt::format("line {}: expected 12 fields, got {}", line_no, f.size()));
    }
    SummaryRow r;
    r.scenario_id = f[0];
    r.seed = parse_number<std::uint64_t>(f[1], line_no, "seed");
    r.allocator = f[2];
    r.k = parse_number<double>(f[3], line_no, "k");
    r.alpha = parse_number<double>(f[4], line_no, "alpha");
    r.n_planes = parse_number<int>(f[5], line_no, "n_planes");
    r.hotspot_radius = parse_number<double>(f[6], line_no, "hotspot_radius");
    r.comm_range = parse_number<double>(f[7], line_no, "comm_range");
    r.n_crises = parse_number<int>(f[8], line_no, "n_crises");
    r.avg_service_time = parse_opt(f[9], line_no, "avg_service_time");
    r.unserviced = parse_number<std::size_t>(f[10], line_no, "unserviced");
    r.status = f[11];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_summary_csv(in);
}

}  // namespace lorp
