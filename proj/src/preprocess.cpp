#include "webreorg/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "webreorg/errors.hpp"

namespace webreorg {

namespace {

constexpr std::array<std::string_view, 7> kAssetExtensions = {
    "gif", "jpg", "jpeg", "png", "css", "js", "ico"};

bool is_asset(const std::string& path) {
  std::size_t slash = path.rfind('/');
  std::size_t dot = path.rfind('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return false;
  }
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return std::find(kAssetExtensions.begin(), kAssetExtensions.end(), ext) !=
         kAssetExtensions.end();
}

}  // namespace

PageIndex PageIndex::fixed(std::vector<std::string> urls) {
  PageIndex index;
  index.urls_ = std::move(urls);
  index.fixed_ = true;
  index.dirty_ = true;
  return index;
}

void PageIndex::rebuild() const {
  sorted_.clear();
  sorted_.reserve(urls_.size());
  for (int i = 0; i < static_cast<int>(urls_.size()); ++i) {
    sorted_.emplace_back(urls_[static_cast<std::size_t>(i)], i);
  }
  std::sort(sorted_.begin(), sorted_.end());
  dirty_ = false;
}

std::optional<int> PageIndex::find(const std::string& url) const {
  if (dirty_) rebuild();
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), url,
      [](const std::pair<std::string, int>& a, const std::string& b) {
        return a.first < b;
      });
  if (it == sorted_.end() || it->first != url) return std::nullopt;
  return it->second;
}

int PageIndex::add_or_get(const std::string& url) {
  if (auto id = find(url)) return *id;
  if (fixed_) throw InputError("url not in site graph: " + url);
  urls_.push_back(url);
  dirty_ = true;
  return static_cast<int>(urls_.size()) - 1;
}

double Session::duration() const {
  double total = 0.0;
  for (const auto& v : visits) total += v.dwell;
  return total;
}

std::vector<LogRecord> clean(const std::vector<LogRecord>& records) {
  std::vector<LogRecord> kept;
  for (const auto& rec : records) {
    if (rec.status != 200 && rec.status != 304) continue;
    if (is_asset(rec.url_path)) continue;
    kept.push_back(rec);
  }
  return kept;
}

std::vector<std::pair<UserId, LogRecord>> identify_users(
    const std::vector<LogRecord>& records, UserIdMode mode) {
  std::vector<std::pair<UserId, LogRecord>> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    std::string key = rec.ip;
    if (mode == UserIdMode::kIpAndAgent) {
      key += '\x1f';
      key += rec.user_agent.value_or("-");
    }
    out.emplace_back(UserId{std::move(key)}, rec);
  }
  return out;
}

std::vector<Session> sessionize(
    const std::vector<std::pair<UserId, LogRecord>>& records,
    std::int64_t timeout_seconds, PageIndex& index) {
  // Bucket per user, keeping users in first-appearance order.
  std::vector<std::pair<UserId, std::vector<LogRecord>>> streams;
  std::map<UserId, std::size_t> stream_of;
  for (const auto& [user, rec] : records) {
    auto [it, added] = stream_of.try_emplace(user, streams.size());
    if (added) streams.push_back({user, {}});
    streams[it->second].second.push_back(rec);
  }

  std::vector<Session> sessions;
  double gap_sum = 0.0;
  long gap_count = 0;
  for (auto& [user, recs] : streams) {
    std::stable_sort(recs.begin(), recs.end(),
                     [](const LogRecord& a, const LogRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
    Session current{user, {}, false};
    auto flush = [&] {
      if (!current.visits.empty()) {
        sessions.push_back(std::move(current));
        current = Session{user, {}, false};
      }
    };
    for (const auto& rec : recs) {
      if (!current.visits.empty()) {
        std::int64_t gap = rec.timestamp - current.visits.back().entry_time;
        if (gap > timeout_seconds) {
          flush();
        } else {
          current.visits.back().dwell = static_cast<double>(gap);
          gap_sum += static_cast<double>(gap);
          ++gap_count;
        }
      }
      Visit v;
      v.page_id = index.add_or_get(rec.url_path);
      v.entry_time = rec.timestamp;
      if (rec.referrer) v.referrer = index.find(*rec.referrer);
      current.visits.push_back(v);
    }
    flush();
  }

  // Final visits have no observed gap: use the session's own mean dwell, or
  // the global mean for single-visit sessions.
  double global_mean = gap_count > 0 ? gap_sum / static_cast<double>(gap_count)
                                     : 0.0;
  for (auto& session : sessions) {
    std::size_t n = session.visits.size();
    if (n == 1) {
      session.visits.back().dwell = global_mean;
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) sum += session.visits[i].dwell;
    session.visits.back().dwell = sum / static_cast<double>(n - 1);
  }
  return sessions;
}

std::vector<std::pair<int, int>> infer_edges(
    const std::vector<LogRecord>& records, const PageIndex& index) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& rec : records) {
    if (!rec.referrer) continue;
    auto src = index.find(*rec.referrer);
    auto dst = index.find(rec.url_path);
    if (!src || !dst || *src == *dst) continue;
    edges.emplace_back(*src, *dst);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

Session complete_paths(const Session& session, const SiteGraph& graph) {
  Session out{session.user, {}, session.incomplete};
  const auto& v = session.visits;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t > 0) {
      const Visit& prev = v[t - 1];
      const Visit& q = v[t];
      bool connected =
          prev.page_id == q.page_id || graph.has_link(prev.page_id, q.page_id);
      if (!connected) {
        // The user must have gone back to some earlier page that links to q.
        std::ptrdiff_t back_to = -1;
        if (q.referrer && *q.referrer != q.page_id &&
            graph.has_link(*q.referrer, q.page_id)) {
          for (std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) - 2; s >= 0;
               --s) {
            if (v[static_cast<std::size_t>(s)].page_id == *q.referrer) {
              back_to = s;
              break;
            }
          }
        }
        if (back_to < 0) {
          for (std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) - 2; s >= 0;
               --s) {
            if (graph.has_link(v[static_cast<std::size_t>(s)].page_id,
                               q.page_id)) {
              back_to = s;
              break;
            }
          }
        }
        if (back_to >= 0) {
          for (std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) - 2;
               s >= back_to; --s) {
            Visit filler;
            filler.page_id = v[static_cast<std::size_t>(s)].page_id;
            filler.entry_time = q.entry_time;
            filler.dwell = 0.0;
            filler.inserted = true;
            out.visits.push_back(filler);
          }
        } else {
          out.incomplete = true;
        }
      }
    }
    out.visits.push_back(v[t]);
  }
  return out;
}

std::vector<PageStats> page_stats(const std::vector<Session>& sessions,
                                  const PageIndex& index, double alpha,
                                  long beta) {
  std::vector<double> dwell_sum(static_cast<std::size_t>(index.size()), 0.0);
  std::vector<long> clicks(static_cast<std::size_t>(index.size()), 0);
  for (const auto& session : sessions) {
    for (const auto& visit : session.visits) {
      auto p = static_cast<std::size_t>(visit.page_id);
      if (p >= clicks.size()) {
        throw ConsistencyError("visit page id outside index");
      }
      dwell_sum[p] += visit.dwell;
      ++clicks[p];
    }
  }
  std::vector<PageStats> stats;
  for (int p = 0; p < index.size(); ++p) {
    auto i = static_cast<std::size_t>(p);
    if (clicks[i] == 0) continue;
    double s = dwell_sum[i] / static_cast<double>(clicks[i]);
    if (s >= alpha && clicks[i] >= beta) {
      stats.push_back({p, index.urls()[i], s, clicks[i]});
    }
  }
  return stats;
}

std::vector<Transaction> to_transactions(const std::vector<Session>& sessions) {
  std::vector<Transaction> out;
  out.reserve(sessions.size());
  for (const auto& session : sessions) {
    Transaction t;
    for (const auto& visit : session.visits) {
      t.sequence.push_back(visit.page_id);
    }
    t.items = t.sequence;
    std::sort(t.items.begin(), t.items.end());
    t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace webreorg
