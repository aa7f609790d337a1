#include "webreorg/loggen.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "webreorg/log.hpp"

namespace webreorg {

namespace {

struct Event {
  std::int64_t ts;
  int user;
  int step;
  std::string line;
};

std::string user_ip(int u) {
  std::ostringstream ss;
  ss << "10." << ((u >> 16) & 0xff) << "." << ((u >> 8) & 0xff) << "."
     << (u & 0xff);
  return ss.str();
}

}  // namespace

std::vector<std::string> generate_synthetic_logs(const SiteGraph& site,
                                                 int n_users,
                                                 int steps_per_user,
                                                 std::uint64_t rng_seed) {
  std::vector<Event> events;
  if (site.page_count() == 0 || n_users <= 0 || steps_per_user <= 0) return {};
  std::mt19937_64 rng(rng_seed);
  const std::int64_t base_ts = 1700000000;

  for (int u = 0; u < n_users; ++u) {
    std::int64_t t = base_ts + static_cast<std::int64_t>(u) * 37;
    int cur = 0;
    std::string referrer = "-";
    std::string ip = user_ip(u);
    std::string agent =
        "Mozilla/5.0 (SyntheticWalk; user " + std::to_string(u) + ")";
    for (int step = 0; step < steps_per_user; ++step) {
      long bytes = 512 + static_cast<long>(rng() % 8192);
      std::ostringstream line;
      line << ip << " - - [" << format_clf_time(t) << "] \"GET "
           << site.url_of(cur) << " HTTP/1.1\" 200 " << bytes << " \""
           << referrer << "\" \"" << agent << "\"";
      events.push_back({t, u, step, line.str()});

      auto links = site.out_links(cur);
      bool long_gap = rng() % 12 == 0;
      std::int64_t gap = long_gap ? 1900 + static_cast<std::int64_t>(rng() % 2000)
                                  : 5 + static_cast<std::int64_t>(rng() % 236);
      if (long_gap || links.empty()) {
        // New session: back to the entry page, no referrer carried over.
        referrer = "-";
        cur = 0;
      } else {
        referrer = "http://example.com" + site.url_of(cur);
        cur = links[rng() % links.size()];
      }
      t += gap;
    }
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tie(a.ts, a.user, a.step) < std::tie(b.ts, b.user, b.step);
  });
  std::vector<std::string> lines;
  lines.reserve(events.size());
  for (auto& e : events) lines.push_back(std::move(e.line));
  return lines;
}

}  // namespace webreorg
