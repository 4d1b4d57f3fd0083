#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bricklayer/curve.hpp"
#include "bricklayer/local_time.hpp"
#include "bricklayer/stats.hpp"
#include "bricklayer/walk.hpp"

namespace bricklayer {

using Cell = std::variant<std::int64_t, double>;

/// Rows of numeric cells under a header. CSV output is comma-delimited with a
/// header row and "\n" line ends; doubles use 17 significant digits. JSON
/// output is {"columns": [...], "rows": [[...], ...]}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const Table&, const Table&) = default;
};

enum class Format { csv, json };

Format parse_format(std::string_view tag);

/// Shortest form with 17 significant digits ("%.17g"), exact for binary64.
std::string format_double(double value);

void write_table(std::ostream& out, const Table& table, Format format);
std::string to_string(const Table& table, Format format);

/// Inverse of write_table. Cells without '.', 'e', 'n' or 'i' parse as
/// integers. Throws std::invalid_argument on malformed input.
Table read_table(std::string_view text, Format format);

/// Columns k, site, height; every stride-th block.
Table brick_trace_table(const DiscreteBrickTrace& trace, std::int64_t stride = 1);

/// Columns t, x, h; every stride-th point.
Table curve_table(const BricklayerTrace& trace, std::int64_t stride = 1);

/// Columns y, local_time.
Table profile_table(const LocalTimeProfile& profile);

/// Single JSON object with keys test_name, statistic, p_value, n_samples,
/// seed, params, verdict (in that order). p_value is null when absent.
std::string report_to_json(const TestReport& report);
TestReport report_from_json(std::string_view text);

}  // namespace bricklayer
