#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "webreorg/errors.hpp"
#include "webreorg/preprocess.hpp"
#include "webreorg/sitegraph.hpp"

using namespace webreorg;

namespace {

LogRecord rec(const std::string& ip, std::int64_t ts, const std::string& url,
              int status = 200, const char* agent = "ua") {
  LogRecord r;
  r.ip = ip;
  r.timestamp = ts;
  r.method = "GET";
  r.url_path = url;
  r.status = status;
  r.user_agent = agent;
  return r;
}

Visit visit(int page, std::int64_t t, std::optional<int> referrer = {}) {
  Visit v;
  v.page_id = page;
  v.entry_time = t;
  v.dwell = 0.0;
  v.referrer = referrer;
  return v;
}

std::vector<int> pages_of(const Session& s) {
  std::vector<int> out;
  for (const auto& v : s.visits) out.push_back(v.page_id);
  return out;
}

}  // namespace

TEST_CASE("clean drops assets and non-2xx/304 statuses") {
  SUBCASE("asset extensions") {
    auto got = clean({rec("1", 0, "/a.html"), rec("1", 1, "/logo.gif")});
    REQUIRE(got.size() == 1);
    CHECK(got[0].url_path == "/a.html");
  }
  SUBCASE("status filter") {
    CHECK(clean({rec("1", 0, "/a.html", 404)}).empty());
    CHECK(clean({rec("1", 0, "/a.html", 304)}).size() == 1);
    CHECK(clean({rec("1", 0, "/a.html", 500)}).empty());
    CHECK(clean({rec("1", 0, "/a.html", 302)}).empty());
  }
  SUBCASE("empty input") { CHECK(clean({}).empty()); }
  SUBCASE("all asset extensions, any case") {
    for (const char* url :
         {"/x.gif", "/x.jpg", "/x.jpeg", "/x.png", "/x.css", "/x.js",
          "/x.ico", "/x.PNG", "/d.JPG"}) {
      CAPTURE(url);
      CHECK(clean({rec("1", 0, url)}).empty());
    }
    CHECK(clean({rec("1", 0, "/x.html")}).size() == 1);
    CHECK(clean({rec("1", 0, "/jsfaq")}).size() == 1);
  }
  SUBCASE("order preserved") {
    auto got = clean({rec("1", 5, "/b"), rec("1", 2, "/a")});
    REQUIRE(got.size() == 2);
    CHECK(got[0].url_path == "/b");
    CHECK(got[1].url_path == "/a");
  }
}

TEST_CASE("user identity modes") {
  auto r1 = rec("9.9.9.9", 0, "/a", 200, "firefox");
  auto r2 = rec("9.9.9.9", 1, "/b", 200, "firefox");
  auto r3 = rec("9.9.9.9", 2, "/c", 200, "chrome");

  auto distinct = [](const std::vector<std::pair<UserId, LogRecord>>& v) {
    std::vector<std::string> keys;
    for (const auto& [u, r] : v) keys.push_back(u.key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys.size();
  };

  CHECK(distinct(identify_users({r1, r2}, UserIdMode::kIpAndAgent)) == 1);
  CHECK(distinct(identify_users({r1, r3}, UserIdMode::kIpAndAgent)) == 2);
  CHECK(distinct(identify_users({r1, r3}, UserIdMode::kIpOnly)) == 1);
}

TEST_CASE("gaps beyond the timeout split sessions") {
  PageIndex index;
  auto recs = identify_users({rec("1", 0, "/p1"), rec("1", 100, "/p2"),
                              rec("1", 2000, "/p3")},
                             UserIdMode::kIpAndAgent);
  auto sessions = sessionize(recs, 1800, index);
  REQUIRE(sessions.size() == 2);
  REQUIRE(sessions[0].visits.size() == 2);
  CHECK(sessions[0].visits[0].dwell == 100.0);
  // Final dwell falls back to the session's own mean.
  CHECK(sessions[0].visits[1].dwell == 100.0);
  REQUIRE(sessions[1].visits.size() == 1);
  // Singleton dwell falls back to the global mean of observed gaps.
  CHECK(sessions[1].visits[0].dwell == 100.0);
  CHECK(sessions[0].duration() == 200.0);
}

TEST_CASE("a gap of exactly the timeout stays in one session") {
  PageIndex index;
  auto recs = identify_users({rec("1", 0, "/p1"), rec("1", 1800, "/p2")},
                             UserIdMode::kIpAndAgent);
  CHECK(sessionize(recs, 1800, index).size() == 1);
}

TEST_CASE("singleton dwell uses the global mean across users") {
  PageIndex index;
  auto recs = identify_users({rec("1", 0, "/a"), rec("1", 50, "/b"),
                              rec("2", 10000, "/a")},
                             UserIdMode::kIpAndAgent);
  auto sessions = sessionize(recs, 1800, index);
  REQUIRE(sessions.size() == 2);
  REQUIRE(sessions[1].visits.size() == 1);
  CHECK(sessions[1].visits[0].dwell == 50.0);
}

TEST_CASE("no observed gaps anywhere leaves singleton dwells at zero") {
  PageIndex index;
  auto recs = identify_users({rec("1", 0, "/a")}, UserIdMode::kIpAndAgent);
  auto sessions = sessionize(recs, 1800, index);
  REQUIRE(sessions.size() == 1);
  CHECK(sessions[0].visits[0].dwell == 0.0);
}

TEST_CASE("interleaved users never share a session") {
  PageIndex index;
  auto recs = identify_users({rec("1", 0, "/a"), rec("2", 1, "/a"),
                              rec("1", 2, "/b"), rec("2", 3, "/b")},
                             UserIdMode::kIpAndAgent);
  auto sessions = sessionize(recs, 1800, index);
  REQUIRE(sessions.size() == 2);
  for (const auto& s : sessions) CHECK(s.visits.size() == 2);
  CHECK(sessions[0].user.key != sessions[1].user.key);
}

TEST_CASE("out-of-order records are sorted per user before splitting") {
  PageIndex index;
  auto recs = identify_users({rec("1", 100, "/b"), rec("1", 0, "/a")},
                             UserIdMode::kIpAndAgent);
  auto sessions = sessionize(recs, 1800, index);
  REQUIRE(sessions.size() == 1);
  CHECK(sessions[0].visits[0].entry_time == 0);
  CHECK(sessions[0].visits[1].entry_time == 100);
}

TEST_CASE("sessionization partitions the cleaned records") {
  std::mt19937_64 rng(77);
  std::vector<LogRecord> records;
  for (int i = 0; i < 200; ++i) {
    std::string ip = "10.0.0." + std::to_string(rng() % 5);
    records.push_back(rec(ip, static_cast<std::int64_t>(rng() % 100000),
                          "/p" + std::to_string(rng() % 9)));
  }
  PageIndex index;
  auto identified = identify_users(records, UserIdMode::kIpAndAgent);
  auto sessions = sessionize(identified, 600, index);

  std::map<std::string, std::size_t> per_user_records;
  for (const auto& [u, r] : identified) ++per_user_records[u.key];
  std::map<std::string, std::size_t> per_user_visits;
  std::size_t total_visits = 0;
  for (const auto& s : sessions) {
    per_user_visits[s.user.key] += s.visits.size();
    total_visits += s.visits.size();
    // Gap bound inside a session.
    for (std::size_t i = 1; i < s.visits.size(); ++i) {
      auto gap = s.visits[i].entry_time - s.visits[i - 1].entry_time;
      CHECK(gap >= 0);
      CHECK(gap <= 600);
      CHECK(s.visits[i - 1].dwell == static_cast<double>(gap));
    }
  }
  CHECK(total_visits == records.size());
  CHECK(per_user_visits == per_user_records);

  // Adjacent sessions of one user are separated by more than the timeout.
  std::map<std::string, std::int64_t> last_end;
  for (const auto& s : sessions) {
    auto it = last_end.find(s.user.key);
    if (it != last_end.end()) CHECK(s.visits.front().entry_time - it->second > 600);
    last_end[s.user.key] = s.visits.back().entry_time;
  }
}

TEST_CASE("a fixed page index rejects unknown urls") {
  auto index = PageIndex::fixed({"/a", "/b"});
  CHECK(index.size() == 2);
  CHECK(index.add_or_get("/b") == 1);
  CHECK_THROWS_AS(index.add_or_get("/zzz"), InputError);
  CHECK(index.find("/a") == 0);
  CHECK_FALSE(index.find("/zzz").has_value());
}

TEST_CASE("page ids are assigned in first-appearance order") {
  PageIndex index;
  CHECK(index.add_or_get("/x") == 0);
  CHECK(index.add_or_get("/y") == 1);
  CHECK(index.add_or_get("/x") == 0);
  CHECK(index.size() == 2);
}

TEST_CASE("edges are inferred from referrer pairs") {
  PageIndex index;
  index.add_or_get("/a");
  index.add_or_get("/b");
  auto r1 = rec("1", 0, "/b");
  r1.referrer = "/a";
  auto r2 = rec("1", 1, "/b");
  r2.referrer = "/b";  // self edge, dropped
  auto r3 = rec("1", 2, "/b");
  r3.referrer = "/unknown";  // unknown page, dropped
  auto r4 = rec("1", 3, "/b");
  r4.referrer = "/a";  // duplicate
  auto edges = infer_edges({r1, r2, r3, r4}, index);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0] == std::pair<int, int>(0, 1));
}

TEST_CASE("path completion leaves connected sessions alone") {
  auto g = SiteGraph::build(3, {{0, 1}, {1, 2}});
  Session s;
  s.visits = {visit(0, 0), visit(1, 10), visit(2, 20)};
  auto out = complete_paths(s, g);
  CHECK(pages_of(out) == std::vector<int>{0, 1, 2});
  CHECK_FALSE(out.incomplete);
}

TEST_CASE("backward scan inserts the backtrack target before the gap") {
  // Pages: 0=A, 1=B, 2=E. Visits A,B,A then E, with only B->E available.
  auto g = SiteGraph::build(3, {{0, 1}, {1, 0}, {1, 2}});
  Session s;
  s.visits = {visit(0, 0), visit(1, 10), visit(0, 20), visit(2, 30)};
  auto out = complete_paths(s, g);
  CHECK(pages_of(out) == std::vector<int>{0, 1, 0, 1, 2});
  CHECK_FALSE(out.incomplete);
  CHECK(out.visits[3].inserted);
  CHECK(out.visits[3].dwell == 0.0);
  CHECK(out.visits[3].entry_time == 30);
  CHECK_FALSE(out.visits[2].inserted);
}

TEST_CASE("multi-step backtracks replay the return path in reverse") {
  // Visits 0,1,2 then 3; only 0 links to 3, so the user went back 1 -> 0.
  auto g = SiteGraph::build(4, {{0, 1}, {1, 2}, {0, 3}});
  Session s;
  s.visits = {visit(0, 0), visit(1, 10), visit(2, 20), visit(3, 30)};
  auto out = complete_paths(s, g);
  CHECK(pages_of(out) == std::vector<int>{0, 1, 2, 1, 0, 3});
  CHECK(out.visits[3].inserted);
  CHECK(out.visits[4].inserted);
  CHECK_FALSE(out.incomplete);
  // Every inserted hop is a link or a back-step along one.
  for (std::size_t i = 0; i + 1 < out.visits.size(); ++i) {
    if (!out.visits[i].inserted) continue;
    int p = out.visits[i].page_id;
    int q = out.visits[i + 1].page_id;
    CHECK((g.has_link(p, q) || g.has_link(q, p)));
  }
}

TEST_CASE("the referrer shortcuts the backward scan when it links") {
  // Both 0 and 1 could reach 2, but the record says it came from 0.
  auto g = SiteGraph::build(3, {{0, 1}, {0, 2}, {1, 2}});
  Session s;
  s.visits = {visit(0, 0), visit(1, 10), visit(1, 15), visit(2, 30, 0)};
  // (1,2) has an edge, so no gap at all: unchanged.
  auto out = complete_paths(s, g);
  CHECK(pages_of(out) == std::vector<int>{0, 1, 1, 2});

  // Remove 1->2: now the referrer (page 0) is the completion target, and the
  // whole return path 1 -> 1 -> 0 is replayed before the gap page.
  auto g2 = SiteGraph::build(3, {{0, 1}, {0, 2}});
  auto out2 = complete_paths(s, g2);
  CHECK(pages_of(out2) == std::vector<int>{0, 1, 1, 1, 0, 2});
  CHECK(out2.visits[3].inserted);
  CHECK(out2.visits[4].inserted);
  CHECK_FALSE(out2.incomplete);
}

TEST_CASE("unfixable gaps flag the session incomplete") {
  // 2 is reachable from nothing visited.
  auto g = SiteGraph::build(3, {{0, 1}, {1, 0}});
  Session s;
  s.visits = {visit(0, 0), visit(2, 10)};
  auto out = complete_paths(s, g);
  CHECK(out.incomplete);
  CHECK(pages_of(out) == std::vector<int>{0, 2});  // gap left as-is
}

TEST_CASE("a referrer equal to the page itself is ignored") {
  auto g = SiteGraph::build(3, {{0, 1}});
  Session s;
  s.visits = {visit(0, 0), visit(2, 10, 2)};
  auto out = complete_paths(s, g);
  CHECK(out.incomplete);
}

TEST_CASE("repeated visits keep the later one reachable without inserts") {
  auto g = SiteGraph::build(2, {{0, 1}, {1, 0}});
  Session s;
  s.visits = {visit(0, 0), visit(1, 10), visit(0, 20), visit(1, 30)};
  auto out = complete_paths(s, g);
  CHECK(pages_of(out) == std::vector<int>{0, 1, 0, 1});
  CHECK_FALSE(out.incomplete);
}

TEST_CASE("page stats average dwells and count visits") {
  PageIndex index;
  index.add_or_get("/p");
  Session s;
  s.user = {"u"};
  s.visits = {visit(0, 0), visit(0, 100)};
  s.visits[0].dwell = 10.0;
  s.visits[1].dwell = 30.0;

  auto stats = page_stats({s}, index, 0.0, 0);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].page_id == 0);
  CHECK(stats[0].url == "/p");
  CHECK(stats[0].s == 20.0);
  CHECK(stats[0].c == 2);

  CHECK(page_stats({s}, index, 25.0, 0).empty());
  CHECK(page_stats({s}, index, 20.0, 0).size() == 1);  // inclusive threshold
  CHECK(page_stats({s}, index, 0.0, 3).empty());
  CHECK(page_stats({s}, index, 0.0, 2).size() == 1);
}

TEST_CASE("zero thresholds keep one row per visited page") {
  std::mt19937_64 rng(31);
  PageIndex index;
  std::vector<LogRecord> records;
  for (int i = 0; i < 120; ++i) {
    records.push_back(rec("10.0.0." + std::to_string(rng() % 4),
                          static_cast<std::int64_t>(rng() % 50000),
                          "/p" + std::to_string(rng() % 7)));
  }
  auto sessions =
      sessionize(identify_users(records, UserIdMode::kIpAndAgent), 900, index);
  auto stats = page_stats(sessions, index, 0.0, 0);

  std::set<int> seen;
  std::size_t total_visits = 0;
  for (const auto& s : sessions) {
    for (const auto& v : s.visits) {
      seen.insert(v.page_id);
      ++total_visits;
    }
  }
  CHECK(stats.size() == seen.size());
  long c_sum = 0;
  for (const auto& p : stats) c_sum += p.c;
  CHECK(static_cast<std::size_t>(c_sum) == total_visits);
  CHECK(std::is_sorted(stats.begin(), stats.end(),
                       [](const PageStats& a, const PageStats& b) {
                         return a.page_id < b.page_id;
                       }));
}

TEST_CASE("inserted visits contribute zero-dwell clicks") {
  auto g = SiteGraph::build(3, {{0, 1}, {1, 0}, {1, 2}});
  PageIndex index;
  index.add_or_get("/a");
  index.add_or_get("/b");
  index.add_or_get("/e");
  Session s;
  s.visits = {visit(0, 0), visit(1, 10), visit(0, 20), visit(2, 30)};
  for (auto& v : s.visits) v.dwell = 10.0;
  auto completed = complete_paths(s, g);
  auto stats = page_stats({completed}, index, 0.0, 0);
  REQUIRE(stats.size() == 3);
  CHECK(stats[1].c == 2);          // page 1: one real visit, one inserted
  CHECK(stats[1].s == 5.0);        // (10 + 0) / 2
}

TEST_CASE("transactions keep the visit order and dedup the item set") {
  // A,B,E,A,J,K with ids 0,1,2,3,4 -> A=0,B=1,E=2,J=3,K=4.
  Session s;
  s.visits = {visit(0, 0), visit(1, 1), visit(2, 2),
              visit(0, 3), visit(3, 4), visit(4, 5)};
  auto ts = to_transactions({s});
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].sequence == std::vector<int>{0, 1, 2, 0, 3, 4});
  CHECK(ts[0].items == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(to_transactions({}).empty());
}
