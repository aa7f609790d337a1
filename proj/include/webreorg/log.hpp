#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace webreorg {

// One parsed access-log line in Common or Combined Log Format.
// url_path and referrer are normalized: scheme+host prefix dropped, query
// string stripped, trailing slash removed except for the root path.
struct LogRecord {
  std::string ip;
  std::int64_t timestamp = 0;  // seconds since epoch, from the [..] field
  std::string method;
  std::string url_path;
  int status = 0;
  std::optional<std::int64_t> bytes;
  std::optional<std::string> referrer;
  std::optional<std::string> user_agent;
};

struct IngestReport {
  std::size_t parsed_count = 0;
  std::size_t skipped_count = 0;
  std::optional<std::size_t> first_error_line;  // 1-based
};

// Reduces a request target or referrer value to a normalized site path.
// Returns nullopt when no path can be extracted (e.g. "*" or empty host-only
// URLs are kept as "/").
std::optional<std::string> normalize_path(std::string_view raw);

// Parses one Common/Combined Log Format line. Throws ParseError (carrying the
// line) on malformed input.
LogRecord parse_line(const std::string& line);

// Non-throwing variant used by stream parsing.
std::optional<LogRecord> try_parse_line(const std::string& line);

// Parses every line of the stream. Malformed lines are skipped and counted,
// never abort the run. Throws InputError only when the underlying stream
// fails (not on EOF).
std::pair<std::vector<LogRecord>, IngestReport> parse_stream(std::istream& in);

std::pair<std::vector<LogRecord>, IngestReport> parse_log_file(
    const std::string& path);

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int year, int month, int day);

// Formats an epoch as the log timestamp field: dd/Mon/yyyy:HH:MM:SS +0000
// (without the surrounding brackets).
std::string format_clf_time(std::int64_t epoch_seconds);

}  // namespace webreorg
