#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "webreorg/log.hpp"
#include "webreorg/sitegraph.hpp"

namespace webreorg {

struct UserId {
  std::string key;

  friend bool operator==(const UserId& a, const UserId& b) {
    return a.key == b.key;
  }
  friend bool operator<(const UserId& a, const UserId& b) {
    return a.key < b.key;
  }
};

enum class UserIdMode { kIpOnly, kIpAndAgent };

// Bidirectional url <-> page_id map. Ids are assigned in first-appearance
// order; a fixed index (built from a supplied graph) rejects unknown URLs.
class PageIndex {
 public:
  PageIndex() = default;
  static PageIndex fixed(std::vector<std::string> urls);

  // Returns the id for url, assigning the next id when unseen. Throws
  // InputError when the index is fixed and the url is unknown.
  int add_or_get(const std::string& url);
  std::optional<int> find(const std::string& url) const;

  int size() const { return static_cast<int>(urls_.size()); }
  const std::vector<std::string>& urls() const { return urls_; }

 private:
  std::vector<std::string> urls_;
  mutable std::vector<std::pair<std::string, int>> sorted_;  // lazily rebuilt
  bool fixed_ = false;
  mutable bool dirty_ = false;

  void rebuild() const;
};

struct Visit {
  int page_id = 0;
  std::int64_t entry_time = 0;
  double dwell = 0.0;                // seconds
  std::optional<int> referrer;       // page id, when the record had one
  bool inserted = false;             // added by path completion
};

// One user's contiguous visit run, split on inactivity gaps > timeout.
struct Session {
  UserId user;
  std::vector<Visit> visits;
  bool incomplete = false;  // a navigation gap could not be completed

  double duration() const;
};

// Per-page feature row: S = average dwell seconds, C = visit count.
struct PageStats {
  int page_id = 0;
  std::string url;
  double s = 0.0;
  long c = 0;
};

struct Transaction {
  std::vector<int> items;     // distinct page ids, sorted
  std::vector<int> sequence;  // full visit order, repeats retained
};

// Drops asset requests (.gif .jpg .jpeg .png .css .js .ico) and records whose
// status is neither 200 nor 304. Order preserved.
std::vector<LogRecord> clean(const std::vector<LogRecord>& records);

std::vector<std::pair<UserId, LogRecord>> identify_users(
    const std::vector<LogRecord>& records, UserIdMode mode);

// Splits each user's timestamp-ordered stream on gaps > timeout. Dwell of a
// non-final visit is the gap to the next visit; the final visit gets the mean
// dwell of the session's other visits, or the global mean dwell for
// single-visit sessions. Page ids are resolved through index (assigning new
// ids unless the index is fixed).
std::vector<Session> sessionize(
    const std::vector<std::pair<UserId, LogRecord>>& records,
    std::int64_t timeout_seconds, PageIndex& index);

// Edge (referrer, path) for every record whose referrer and path are both
// known pages. Sorted, deduplicated, self-edges dropped.
std::vector<std::pair<int, int>> infer_edges(
    const std::vector<LogRecord>& records, const PageIndex& index);

// Fills navigation gaps (consecutive visits with no connecting edge) with the
// back-tracked pages leading to a page that links to the target: via the
// target's referrer when it appears earlier in the session, otherwise via a
// backward scan for the most recent page with an edge to the target. Inserted
// visits get dwell 0. Unfixable gaps mark the session incomplete.
Session complete_paths(const Session& session, const SiteGraph& graph);

// Aggregates S and C per page over all sessions, then keeps pages with
// S >= alpha and C >= beta. Rows sorted by page_id.
std::vector<PageStats> page_stats(const std::vector<Session>& sessions,
                                  const PageIndex& index, double alpha,
                                  long beta);

std::vector<Transaction> to_transactions(const std::vector<Session>& sessions);

}  // namespace webreorg
