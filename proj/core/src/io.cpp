#include "bricklayer/io.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bricklayer {
namespace {

using Json = nlohmann::ordered_json;

void check_stride(std::int64_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
}

Json cell_json(const Cell& cell) {
  return std::visit([](auto v) { return Json(v); }, cell);
}

Cell parse_cell(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty CSV cell");
  const bool floating = text.find_first_of(".eEnNiI") != std::string_view::npos;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (floating) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    return v;
  }
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Json param_json(const ParamValue& value) {
  return std::visit([](const auto& v) { return Json(v); }, value);
}

ParamValue param_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) return j.get<std::vector<double>>();
  throw std::invalid_argument("unsupported parameter value in report");
}

}  // namespace

Format parse_format(std::string_view tag) {
  if (tag == "csv") return Format::csv;
  if (tag == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(tag) + "'");
}

std::string format_double(double value) {
  char buf[40];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("cannot format double");
  return {buf, ptr};
}

void write_table(std::ostream& out, const Table& table, Format format) {
  if (format == Format::json) {
    Json j;
    j["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json r = Json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    out << j.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  std::string line;
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      if (const auto* v = std::get_if<std::int64_t>(&row[i])) {
        line += std::to_string(*v);
      } else {
        line += format_double(std::get<double>(row[i]));
      }
    }
    line += '\n';
    out << line;
  }
}

std::string to_string(const Table& table, Format format) {
  std::ostringstream out;
  write_table(out, table, format);
  return out.str();
}

Table read_table(std::string_view text, Format format) {
  Table table;
  if (format == Format::json) {
    const auto j = Json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded() || !j.contains("columns") || !j.contains("rows")) {
      throw std::invalid_argument("malformed JSON table");
    }
    table.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : r) {
        if (c.is_number_integer()) {
          row.emplace_back(c.get<std::int64_t>());
        } else if (c.is_number_float()) {
          row.emplace_back(c.get<double>());
        } else {
          throw std::invalid_argument("non-numeric JSON table cell");
        }
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  }
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw std::invalid_argument("CSV has no header");
  for (const auto col : split(lines.front(), ',')) table.columns.emplace_back(col);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != table.columns.size()) {
      throw std::invalid_argument("CSV row " + std::to_string(i) + " has wrong width");
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const auto f : fields) row.push_back(parse_cell(f));
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table brick_trace_table(const DiscreteBrickTrace& trace, std::int64_t stride) {
  check_stride(stride);
  Table table{{"k", "site", "height"}, {}};
  table.rows.reserve(trace.size() / static_cast<std::size_t>(stride) + 1);
  for (std::size_t i = 0; i < trace.size(); i += static_cast<std::size_t>(stride)) {
    table.rows.push_back({trace[i].step, trace[i].site, trace[i].height});
  }
  return table;
}

Table curve_table(const BricklayerTrace& trace, std::int64_t stride) {
  check_stride(stride);
  Table table{{"t", "x", "h"}, {}};
  const auto& pts = trace.points;
  table.rows.reserve(pts.size() / static_cast<std::size_t>(stride) + 1);
  for (std::size_t i = 0; i < pts.size(); i += static_cast<std::size_t>(stride)) {
    table.rows.push_back({pts[i].t, pts[i].x, pts[i].h});
  }
  return table;
}

Table profile_table(const LocalTimeProfile& profile) {
  Table table{{"y", "local_time"}, {}};
  table.rows.reserve(profile.levels.size());
  for (std::size_t i = 0; i < profile.levels.size(); ++i) {
    table.rows.push_back({profile.levels[i], profile.values[i]});
  }
  return table;
}

std::string report_to_json(const TestReport& report) {
  Json j;
  j["test_name"] = report.test_name;
  j["statistic"] = report.statistic;
  j["p_value"] = report.p_value ? Json(*report.p_value) : Json(nullptr);
  j["n_samples"] = report.n_samples;
  j["seed"] = report.seed;
  Json params = Json::object();
  for (const auto& [key, value] : report.params) params[key] = param_json(value);
  j["params"] = std::move(params);
  j["verdict"] = report.pass ? "pass" : "fail";
  return j.dump(2) + "\n";
}

TestReport report_from_json(std::string_view text) {
  const auto j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("malformed report JSON");
  try {
    TestReport report;
    report.test_name = j.at("test_name").get<std::string>();
    report.statistic = j.at("statistic").get<double>();
    if (!j.at("p_value").is_null()) report.p_value = j.at("p_value").get<double>();
    report.n_samples = j.at("n_samples").get<std::int64_t>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("params").items()) {
      report.params.emplace_back(key, param_from_json(value));
    }
    const auto verdict = j.at("verdict").get<std::string>();
    if (verdict != "pass" && verdict != "fail") throw std::invalid_argument("bad verdict");
    report.pass = verdict == "pass";
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace bricklayer
