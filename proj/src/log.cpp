#include "webreorg/log.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "webreorg/errors.hpp"

namespace webreorg {

namespace {

constexpr std::array<const char*, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_from_name(std::string_view name) {
  for (int m = 0; m < 12; ++m) {
    if (name == kMonthNames[m]) return m + 1;
  }
  return 0;
}

bool parse_int(std::string_view s, long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Cursor over one log line.
struct Scanner {
  std::string_view line;
  std::size_t pos = 0;

  void skip_spaces() {
    while (pos < line.size() && line[pos] == ' ') ++pos;
  }
  bool at_end() {
    skip_spaces();
    return pos >= line.size();
  }
  // Plain token up to the next space.
  bool token(std::string_view& out) {
    skip_spaces();
    if (pos >= line.size()) return false;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    out = line.substr(start, pos - start);
    return true;
  }
  // [ ... ] group, brackets stripped.
  bool bracketed(std::string_view& out) {
    skip_spaces();
    if (pos >= line.size() || line[pos] != '[') return false;
    std::size_t end = line.find(']', pos + 1);
    if (end == std::string_view::npos) return false;
    out = line.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return true;
  }
  // " ... " group with backslash escapes, quotes stripped.
  bool quoted(std::string& out) {
    skip_spaces();
    if (pos >= line.size() || line[pos] != '"') return false;
    out.clear();
    ++pos;
    while (pos < line.size()) {
      char c = line[pos];
      if (c == '\\' && pos + 1 < line.size()) {
        out.push_back(line[pos + 1]);
        pos += 2;
        continue;
      }
      if (c == '"') {
        ++pos;
        return true;
      }
      out.push_back(c);
      ++pos;
    }
    return false;  // unterminated
  }
};

// "dd/Mon/yyyy:HH:MM:SS +zzzz" -> epoch seconds, or nullopt.
std::optional<std::int64_t> parse_clf_time(std::string_view t) {
  std::size_t sp = t.find(' ');
  if (sp == std::string_view::npos) return std::nullopt;
  std::string_view local = t.substr(0, sp);
  std::string_view zone = t.substr(sp + 1);

  // dd/Mon/yyyy:HH:MM:SS
  std::size_t s1 = local.find('/');
  std::size_t s2 = local.find('/', s1 + 1);
  std::size_t c1 = local.find(':', s2 + 1);
  if (s1 == std::string_view::npos || s2 == std::string_view::npos ||
      c1 == std::string_view::npos) {
    return std::nullopt;
  }
  long long day = 0, year = 0, hh = 0, mm = 0, ss = 0;
  if (!parse_int(local.substr(0, s1), day)) return std::nullopt;
  int month = month_from_name(local.substr(s1 + 1, s2 - s1 - 1));
  if (!parse_int(local.substr(s2 + 1, c1 - s2 - 1), year)) return std::nullopt;
  std::string_view hms = local.substr(c1 + 1);
  std::size_t c2 = hms.find(':');
  std::size_t c3 = hms.find(':', c2 + 1);
  if (c2 == std::string_view::npos || c3 == std::string_view::npos) {
    return std::nullopt;
  }
  if (!parse_int(hms.substr(0, c2), hh) ||
      !parse_int(hms.substr(c2 + 1, c3 - c2 - 1), mm) ||
      !parse_int(hms.substr(c3 + 1), ss)) {
    return std::nullopt;
  }
  if (month == 0 || day < 1 || day > 31 || hh < 0 || hh > 23 || mm < 0 ||
      mm > 59 || ss < 0 || ss > 60) {
    return std::nullopt;
  }

  // +/-HHMM
  if (zone.size() != 5 || (zone[0] != '+' && zone[0] != '-')) {
    return std::nullopt;
  }
  long long zh = 0, zm = 0;
  if (!parse_int(zone.substr(1, 2), zh) || !parse_int(zone.substr(3, 2), zm)) {
    return std::nullopt;
  }
  std::int64_t offset = (zh * 3600 + zm * 60) * (zone[0] == '-' ? -1 : 1);

  std::int64_t days =
      days_from_civil(static_cast<int>(year), month, static_cast<int>(day));
  std::int64_t epoch = days * 86400 + hh * 3600 + mm * 60 + ss - offset;
  if (epoch <= 0) return std::nullopt;
  return epoch;
}

}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 +
         static_cast<std::int64_t>(doe) - 719468;
}

std::string format_clf_time(std::int64_t epoch) {
  std::int64_t days = epoch / 86400;
  std::int64_t secs = epoch % 86400;
  if (secs < 0) {
    secs += 86400;
    --days;
  }
  // Inverse of days_from_civil (proleptic Gregorian).
  std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t year = y + (m <= 2);

  char buf[40];
  std::snprintf(buf, sizeof(buf), "%02u/%s/%04lld:%02lld:%02lld:%02lld +0000",
                d, kMonthNames[m - 1], static_cast<long long>(year),
                static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

std::optional<std::string> normalize_path(std::string_view raw) {
  std::string_view v = raw;
  for (std::string_view scheme : {"http://", "https://"}) {
    if (v.substr(0, scheme.size()) == scheme) {
      v.remove_prefix(scheme.size());
      std::size_t slash = v.find('/');
      v = slash == std::string_view::npos ? std::string_view("/")
                                          : v.substr(slash);
      break;
    }
  }
  std::size_t cut = v.find_first_of("?#");
  if (cut != std::string_view::npos) v = v.substr(0, cut);
  if (v.empty() || v[0] != '/') return std::nullopt;
  while (v.size() > 1 && v.back() == '/') v.remove_suffix(1);
  return std::string(v);
}

std::optional<LogRecord> try_parse_line(const std::string& line) {
  Scanner sc{line};
  std::string_view ip, ident, user, timestr, status_tok, bytes_tok;
  std::string request;
  if (!sc.token(ip) || !sc.token(ident) || !sc.token(user)) {
    return std::nullopt;
  }
  if (!sc.bracketed(timestr) || !sc.quoted(request)) return std::nullopt;
  if (!sc.token(status_tok) || !sc.token(bytes_tok)) return std::nullopt;

  LogRecord rec;
  rec.ip = std::string(ip);

  auto ts = parse_clf_time(timestr);
  if (!ts) return std::nullopt;
  rec.timestamp = *ts;

  // "METHOD target [protocol]"
  std::istringstream req(request);
  std::string method, target, proto, extra;
  req >> method >> target >> proto;
  if (method.empty() || target.empty() || (req >> extra)) return std::nullopt;
  auto path = normalize_path(target);
  if (!path) return std::nullopt;
  rec.method = method;
  rec.url_path = *path;

  long long status = 0;
  if (!parse_int(status_tok, status) || status < 100 || status > 599) {
    return std::nullopt;
  }
  rec.status = static_cast<int>(status);

  if (bytes_tok != "-") {
    long long bytes = 0;
    if (!parse_int(bytes_tok, bytes) || bytes < 0) return std::nullopt;
    rec.bytes = bytes;
  }

  if (!sc.at_end()) {
    // Combined format: exactly two quoted fields must follow.
    std::string ref, agent;
    if (!sc.quoted(ref) || !sc.quoted(agent) || !sc.at_end()) {
      return std::nullopt;
    }
    if (ref != "-" && !ref.empty()) {
      rec.referrer = normalize_path(ref);  // unusable referrers stay absent
    }
    if (agent != "-" && !agent.empty()) rec.user_agent = agent;
  }
  return rec;
}

LogRecord parse_line(const std::string& line) {
  auto rec = try_parse_line(line);
  if (!rec) throw ParseError("malformed log line: " + line);
  return *rec;
}

std::pair<std::vector<LogRecord>, IngestReport> parse_stream(std::istream& in) {
  std::vector<LogRecord> records;
  IngestReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto rec = try_parse_line(line)) {
      records.push_back(std::move(*rec));
      ++report.parsed_count;
    } else {
      ++report.skipped_count;
      if (!report.first_error_line) report.first_error_line = line_no;
    }
  }
  if (in.bad()) throw InputError("log stream read failure");
  return {std::move(records), report};
}

std::pair<std::vector<LogRecord>, IngestReport> parse_log_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open log file: " + path);
  return parse_stream(in);
}

}  // namespace webreorg
