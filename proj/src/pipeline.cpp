#include "webreorg/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "webreorg/errors.hpp"

namespace fs = std::filesystem;

namespace webreorg {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InputError(where + ": bad number '" + s + "'");
  }
  return v;
}

long long parse_ll(const std::string& s, const std::string& where) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InputError(where + ": bad integer '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(delim, start);
    if (end == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::string join_path(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return in;
}

std::string ratio(long num, long den) {
  return std::to_string(num) + "/" + std::to_string(den);
}

// Re-throw stage exceptions with the stage name prefixed.
template <typename F>
auto tagged(const char* stage, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(std::string(stage) + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(std::string(stage) + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(stage) + ": " + e.what());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

MiningParams PipelineConfig::mining_params() const {
  MiningParams p;
  p.upper_bound_support = upper_bound_support;
  p.lower_bound_support = lower_bound_support;
  p.delta = delta;
  p.min_confidence = min_confidence;
  p.required_itemsets = required_itemsets;
  return p;
}

void validate_config(const PipelineConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.alpha_seconds < 0) fail("alpha_seconds must be >= 0");
  if (cfg.beta_clicks < 0) fail("beta_clicks must be >= 0");
  if (cfg.session_timeout_seconds <= 0) {
    fail("session_timeout_seconds must be > 0");
  }
  if (cfg.k_clusters < 1) fail("k_clusters must be >= 1");
  if (cfg.rank_limit < 0) fail("rank_limit must be >= 0");
  if (cfg.lower_bound_support < 0 || cfg.upper_bound_support > 1 ||
      cfg.lower_bound_support > cfg.upper_bound_support) {
    fail("support bounds must satisfy 0 <= lower <= upper <= 1");
  }
  if (!(cfg.delta > 0)) fail("delta must be > 0");
  if (cfg.min_confidence < 0 || cfg.min_confidence > 1) {
    fail("min_confidence must be in [0, 1]");
  }
  if (cfg.required_itemsets < 1) fail("required_itemsets must be >= 1");
  if (cfg.outdeg_threshold < 1) fail("outdeg_threshold must be >= 1");
  if (!(cfg.outlier_factor > 0)) fail("outlier_factor must be > 0");
  if (cfg.extreme_factor < cfg.outlier_factor) {
    fail("extreme_factor must be >= outlier_factor");
  }
}

PipelineConfig load_config(const std::string& path) {
  auto in = open_in(path);
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto bad_value = [&]() {
      return ConfigError(path + ":" + std::to_string(line_no) +
                         ": bad value for " + key + ": '" + value + "'");
    };
    auto as_double = [&] {
      try {
        return parse_double(value, key);
      } catch (const InputError&) {
        throw bad_value();
      }
    };
    auto as_long = [&] {
      try {
        return static_cast<long>(parse_ll(value, key));
      } catch (const InputError&) {
        throw bad_value();
      }
    };
    auto as_bool = [&] {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw bad_value();
    };
    if (key == "alpha_seconds") {
      cfg.alpha_seconds = as_double();
    } else if (key == "beta_clicks") {
      cfg.beta_clicks = as_long();
    } else if (key == "session_timeout_seconds") {
      cfg.session_timeout_seconds = as_long();
    } else if (key == "k_clusters") {
      cfg.k_clusters = static_cast<int>(as_long());
    } else if (key == "metric") {
      if (value == "euclid") {
        cfg.metric = Metric::kEuclid;
      } else if (value == "manhattan") {
        cfg.metric = Metric::kManhattan;
      } else {
        throw bad_value();
      }
    } else if (key == "rank_limit") {
      cfg.rank_limit = static_cast<int>(as_long());
    } else if (key == "upper_bound_support") {
      cfg.upper_bound_support = as_double();
    } else if (key == "lower_bound_support") {
      cfg.lower_bound_support = as_double();
    } else if (key == "delta") {
      cfg.delta = as_double();
    } else if (key == "min_confidence") {
      cfg.min_confidence = as_double();
    } else if (key == "required_itemsets") {
      cfg.required_itemsets = static_cast<int>(as_long());
    } else if (key == "outdeg_threshold") {
      cfg.outdeg_threshold = static_cast<int>(as_long());
    } else if (key == "outlier_factor") {
      cfg.outlier_factor = as_double();
    } else if (key == "extreme_factor") {
      cfg.extreme_factor = as_double();
    } else if (key == "drop_extremes") {
      cfg.drop_extremes = as_bool();
    } else if (key == "normalize_features") {
      cfg.normalize_features = as_bool();
    } else if (key == "user_id_mode") {
      if (value == "ip_only") {
        cfg.user_id_mode = UserIdMode::kIpOnly;
      } else if (value == "ip_and_agent") {
        cfg.user_id_mode = UserIdMode::kIpAndAgent;
      } else {
        throw bad_value();
      }
    } else if (key == "rng_seed") {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(),
                                     value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) {
        throw bad_value();
      }
      cfg.rng_seed = v;
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown config key: " + key);
    }
  }
  validate_config(cfg);
  return cfg;
}

// ---- intermediate files ----

namespace {

constexpr const char* kRecordsHeader =
    "ip\tts\tmethod\turl\tstatus\tbytes\treferrer\tagent";

void write_records_tsv(const std::vector<LogRecord>& records,
                       const std::string& path) {
  auto out = open_out(path);
  out << kRecordsHeader << "\n";
  for (const auto& r : records) {
    std::string agent = r.user_agent.value_or("-");
    std::replace(agent.begin(), agent.end(), '\t', ' ');
    out << r.ip << '\t' << r.timestamp << '\t' << r.method << '\t'
        << r.url_path << '\t' << r.status << '\t';
    if (r.bytes) {
      out << *r.bytes;
    } else {
      out << '-';
    }
    out << '\t' << r.referrer.value_or("-") << '\t' << agent << '\n';
  }
  if (!out) throw InputError("write failure: " + path);
}

}  // namespace

std::vector<LogRecord> read_records_tsv(const std::string& path) {
  auto in = open_in(path);
  std::vector<LogRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;  // header
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 8) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected 8 tab-separated fields");
    }
    std::string where = path + ":" + std::to_string(line_no);
    LogRecord r;
    r.ip = fields[0];
    r.timestamp = parse_ll(fields[1], where);
    r.method = fields[2];
    r.url_path = fields[3];
    r.status = static_cast<int>(parse_ll(fields[4], where));
    if (fields[5] != "-") r.bytes = parse_ll(fields[5], where);
    if (fields[6] != "-") r.referrer = fields[6];
    if (fields[7] != "-") r.user_agent = fields[7];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<PageStats> read_page_stats_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<PageStats> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::string where = path + ":" + std::to_string(line_no);
    // url may contain commas: first field before the first comma, S and C
    // behind the last two.
    std::size_t first = line.find(',');
    std::size_t last = line.rfind(',');
    std::size_t mid = last == std::string::npos || last == 0
                          ? std::string::npos
                          : line.rfind(',', last - 1);
    if (first == std::string::npos || mid == std::string::npos ||
        mid <= first) {
      throw InputError(where + ": expected page_id,url,S,C");
    }
    PageStats p;
    p.page_id = static_cast<int>(parse_ll(line.substr(0, first), where));
    p.url = line.substr(first + 1, mid - first - 1);
    p.s = parse_double(line.substr(mid + 1, last - mid - 1), where);
    p.c = static_cast<long>(parse_ll(line.substr(last + 1), where));
    rows.push_back(std::move(p));
  }
  return rows;
}

std::vector<Transaction> read_sequences(const std::string& path) {
  auto in = open_in(path);
  std::vector<Transaction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Transaction t;
    std::istringstream ss(line);
    int id;
    while (ss >> id) t.sequence.push_back(id);
    if (ss.fail() && !ss.eof()) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected space-separated page ids");
    }
    t.items = t.sequence;
    std::sort(t.items.begin(), t.items.end());
    t.items.erase(std::unique(t.items.begin(), t.items.end()), t.items.end());
    out.push_back(std::move(t));
  }
  return out;
}

ClusterModel read_cluster_model(const std::string& path) {
  auto in = open_in(path);
  ClusterModel model;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<int, Eigen::Vector2d>> centers;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string where = path + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "k") {
        ss >> model.k;
      } else if (key == "metric") {
        std::string m;
        ss >> m;
        if (m == "manhattan") {
          model.metric = Metric::kManhattan;
        } else if (m == "euclid") {
          model.metric = Metric::kEuclid;
        } else {
          throw InputError(where + ": unknown metric " + m);
        }
      } else if (key == "center") {
        int idx;
        std::string s_str, c_str;
        if (!(ss >> idx >> s_str >> c_str)) {
          throw InputError(where + ": bad center line");
        }
        centers.emplace_back(
            idx, Eigen::Vector2d(parse_double(s_str, where),
                                 parse_double(c_str, where)));
      } else if (key == "distance_evals") {
        ss >> model.distance_evals;
      } else if (key == "iterations") {
        ss >> model.iterations;
      }
      // "centers <m>" and unknown keys are informational
      continue;
    }
    if (!saw_header) {  // page_id,s,c,cluster_index
      saw_header = true;
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw InputError(where + ": expected page_id,s,c,cluster_index");
    }
    model.page_ids.push_back(static_cast<int>(parse_ll(fields[0], where)));
    model.labels.push_back(static_cast<int>(parse_ll(fields[3], where)));
  }
  std::sort(centers.begin(), centers.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  model.centers.resize(static_cast<Eigen::Index>(centers.size()), 2);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    model.centers.row(static_cast<Eigen::Index>(i)) =
        centers[i].second.transpose();
  }
  return model;
}

std::vector<CandidateLink> read_candidates_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<CandidateLink> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::string where = path + ":" + std::to_string(line_no);
    auto fields = split(line, ',');
    if (fields.size() != 5) {
      throw InputError(where + ": expected src,dst,support,conf_num,conf_den");
    }
    CandidateLink c;
    c.src = static_cast<int>(parse_ll(fields[0], where));
    c.dst = static_cast<int>(parse_ll(fields[1], where));
    c.support_count = static_cast<long>(parse_ll(fields[2], where));
    c.conf_num = static_cast<long>(parse_ll(fields[3], where));
    c.conf_den = static_cast<long>(parse_ll(fields[4], where));
    out.push_back(c);
  }
  return out;
}

// ---- stages ----

IngestStats stage_ingest(const std::string& log_path,
                         const std::string& out_dir) {
  return tagged("ingest", [&] {
    fs::create_directories(out_dir);
    auto [records, report] = parse_log_file(log_path);
    write_records_tsv(records, join_path(out_dir, kRecordsFile));
    IngestStats stats;
    stats.parsed = report.parsed_count;
    stats.skipped = report.skipped_count;
    stats.total_lines = report.parsed_count + report.skipped_count;
    return stats;
  });
}

PreprocessStats stage_preprocess(
    const PipelineConfig& cfg, const std::string& out_dir,
    const std::optional<std::string>& graph_path) {
  return tagged("preprocess", [&] {
    fs::create_directories(out_dir);
    auto records = read_records_tsv(join_path(out_dir, kRecordsFile));
    auto cleaned = clean(records);
    auto identified = identify_users(cleaned, cfg.user_id_mode);

    std::optional<SiteGraph> supplied;
    PageIndex index;
    if (graph_path) {
      supplied = load_graph(*graph_path);
      index = PageIndex::fixed(supplied->urls());
    }
    auto sessions = sessionize(identified, cfg.session_timeout_seconds, index);
    SiteGraph graph =
        supplied ? std::move(*supplied)
                 : SiteGraph::build(index.size(), infer_edges(cleaned, index),
                                    index.urls());
    for (auto& session : sessions) {
      session = complete_paths(session, graph);
    }
    save_graph(graph, join_path(out_dir, kGraphFile));

    auto kept = page_stats(sessions, index, cfg.alpha_seconds,
                           cfg.beta_clicks);
    {
      auto out = open_out(join_path(out_dir, kPageStatsFile));
      out << "page_id,url,S,C\n";
      for (const auto& p : kept) {
        out << p.page_id << ',' << p.url << ',' << fmt_double(p.s) << ','
            << p.c << '\n';
      }
    }
    // Mining sees the same page universe as clustering: visits to pages
    // dropped by the alpha/beta thresholds are removed from transactions.
    std::vector<char> surviving(static_cast<std::size_t>(index.size()), 0);
    for (const auto& p : kept) {
      surviving[static_cast<std::size_t>(p.page_id)] = 1;
    }
    auto transactions = to_transactions(sessions);
    {
      std::vector<Transaction> filtered;
      for (auto& t : transactions) {
        std::erase_if(t.items, [&](int id) {
          return !surviving[static_cast<std::size_t>(id)];
        });
        std::erase_if(t.sequence, [&](int id) {
          return !surviving[static_cast<std::size_t>(id)];
        });
        if (!t.items.empty()) filtered.push_back(std::move(t));
      }
      transactions = std::move(filtered);
    }
    {
      auto out = open_out(join_path(out_dir, kTransactionsFile));
      for (const auto& t : transactions) {
        for (std::size_t i = 0; i < t.items.size(); ++i) {
          if (i) out << ' ';
          out << t.items[i];
        }
        out << '\n';
      }
    }
    {
      auto out = open_out(join_path(out_dir, kSequencesFile));
      for (const auto& t : transactions) {
        for (std::size_t i = 0; i < t.sequence.size(); ++i) {
          if (i) out << ' ';
          out << t.sequence[i];
        }
        out << '\n';
      }
    }

    PreprocessStats stats;
    stats.records_clean = cleaned.size();
    std::set<std::string> users;
    for (const auto& [user, rec] : identified) users.insert(user.key);
    stats.users = users.size();
    stats.sessions = sessions.size();
    for (const auto& s : sessions) {
      if (s.incomplete) ++stats.sessions_incomplete;
    }
    stats.pages_total = page_stats(sessions, index, 0.0, 0).size();
    stats.pages_after_thresholds = kept.size();
    stats.transactions = transactions.size();
    return stats;
  });
}

ClusterStats stage_cluster(const PipelineConfig& cfg,
                           const std::string& out_dir) {
  return tagged("cluster", [&] {
    fs::create_directories(out_dir);
    auto rows = read_page_stats_csv(join_path(out_dir, kPageStatsFile));
    std::vector<FeaturePoint> points;
    points.reserve(rows.size());
    for (const auto& r : rows) {
      points.push_back({r.page_id, r.s, static_cast<double>(r.c)});
    }

    ClusterStats stats;
    if (!points.empty() && cfg.drop_extremes) {
      std::vector<double> s_vals, c_vals;
      for (const auto& p : points) {
        s_vals.push_back(p.s);
        c_vals.push_back(p.c);
      }
      auto s_flags = iqr_outliers(s_vals, cfg.outlier_factor,
                                  cfg.extreme_factor);
      auto c_flags = iqr_outliers(c_vals, cfg.outlier_factor,
                                  cfg.extreme_factor);
      std::vector<FeaturePoint> filtered;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (s_flags[i] == OutlierFlag::kExtreme ||
            c_flags[i] == OutlierFlag::kExtreme) {
          ++stats.dropped_extreme;
        } else {
          filtered.push_back(points[i]);
        }
      }
      points = std::move(filtered);
    }
    if (cfg.normalize_features) points = minmax_normalize(points);

    std::optional<ClusterModel> model;
    if (!points.empty()) {
      model = farthest_first(points, cfg.k_clusters, cfg.metric);
    }

    auto out = open_out(join_path(out_dir, kClustersFile));
    out << "# k " << cfg.k_clusters << "\n";
    out << "# metric "
        << (cfg.metric == Metric::kEuclid ? "euclid" : "manhattan") << "\n";
    out << "# centers " << (model ? model->center_count() : 0) << "\n";
    if (model) {
      for (int c = 0; c < model->center_count(); ++c) {
        out << "# center " << c << ' ' << fmt_double(model->centers(c, 0))
            << ' ' << fmt_double(model->centers(c, 1)) << "\n";
      }
      out << "# distance_evals " << model->distance_evals << "\n";
      out << "# iterations " << model->iterations << "\n";
    } else {
      out << "# distance_evals 0\n# iterations 0\n";
    }
    out << "page_id,s,c,cluster_index\n";
    if (model) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        out << points[i].page_id << ',' << fmt_double(points[i].s) << ','
            << fmt_double(points[i].c) << ',' << model->labels[i] << '\n';
      }
    }

    stats.pages_clustered = points.size();
    stats.clusters = model ? model->center_count() : 0;
    stats.distance_evals = model ? model->distance_evals : 0;
    return stats;
  });
}

MineStats stage_mine(const PipelineConfig& cfg, const std::string& out_dir) {
  return tagged("mine", [&] {
    fs::create_directories(out_dir);
    auto transactions = read_sequences(join_path(out_dir, kSequencesFile));

    MineStats stats;
    stats.transactions = transactions.size();

    MiningResult result;
    std::vector<Rule> rules;
    std::vector<CandidateLink> candidates;
    if (!transactions.empty()) {
      result = mine_frequent(transactions, cfg.mining_params());
      rules = generate_rules(result.itemsets, transactions,
                             cfg.min_confidence);
      candidates = extract_candidate_links(rules, transactions);
    }

    {
      auto out = open_out(join_path(out_dir, kItemsetsFile));
      for (const auto& is : result.itemsets) {
        for (std::size_t i = 0; i < is.items.size(); ++i) {
          if (i) out << ' ';
          out << is.items[i];
        }
        out << '\t' << is.support_count << '\n';
      }
    }
    {
      auto out = open_out(join_path(out_dir, kRulesFile));
      for (const auto& r : rules) {
        for (std::size_t i = 0; i < r.antecedent.size(); ++i) {
          if (i) out << ' ';
          out << r.antecedent[i];
        }
        out << " -> ";
        for (std::size_t i = 0; i < r.consequent.size(); ++i) {
          if (i) out << ' ';
          out << r.consequent[i];
        }
        out << '\t' << r.support_count << '\t'
            << ratio(r.support_count, r.antecedent_count) << '\n';
      }
    }
    {
      auto out = open_out(join_path(out_dir, kCandidatesFile));
      out << "src,dst,support,conf_num,conf_den\n";
      for (const auto& c : candidates) {
        out << c.src << ',' << c.dst << ',' << c.support_count << ','
            << c.conf_num << ',' << c.conf_den << '\n';
      }
    }

    stats.itemsets = result.itemsets.size();
    stats.rules = rules.size();
    stats.candidates = candidates.size();
    stats.final_support = result.final_support;
    stats.min_count = result.min_count;
    return stats;
  });
}

PlanStats stage_plan(const PipelineConfig& cfg, const std::string& out_dir) {
  return tagged("plan", [&] {
    fs::create_directories(out_dir);
    auto candidates = read_candidates_csv(join_path(out_dir, kCandidatesFile));
    auto model = read_cluster_model(join_path(out_dir, kClustersFile));
    auto graph = load_graph(join_path(out_dir, kGraphFile));

    int rank_limit =
        cfg.rank_limit <= 0 ? model.center_count() : cfg.rank_limit;
    auto matched = match_links(candidates, model, rank_limit);
    auto plan = build_plan(matched, graph, cfg.outdeg_threshold);

    auto out = open_out(join_path(out_dir, kPlanFile));
    out << "src,dst,src_url,dst_url,support,confidence,cluster_rank,t_p,"
           "efficiency_pct,status\n";
    for (const auto& e : plan.entries) {
      out << e.src << ',' << e.dst << ',' << graph.url_of(e.src) << ','
          << graph.url_of(e.dst) << ',' << e.support_count << ','
          << ratio(e.conf_num, e.conf_den) << ',' << e.cluster_rank << ',';
      if (e.t_p) out << *e.t_p;
      out << ',';
      if (e.efficiency_pct) out << fmt_double(*e.efficiency_pct);
      out << ',' << to_string(e.status) << '\n';
    }

    PlanStats stats;
    stats.matched = matched.size();
    stats.accepted = plan.accepted_count();
    stats.rejected = stats.matched - stats.accepted;
    double sum = 0.0;
    std::size_t scored = 0;
    for (const auto& e : plan.entries) {
      if (e.efficiency_pct) {
        sum += *e.efficiency_pct;
        ++scored;
      }
    }
    if (scored > 0) {
      stats.mean_efficiency_pct = sum / static_cast<double>(scored);
    }
    return stats;
  });
}

RunSummary run_pipeline(const PipelineConfig& cfg, const std::string& log_path,
                        const std::optional<std::string>& graph_path,
                        const std::string& out_dir) {
  RunSummary summary;
  summary.ingest = stage_ingest(log_path, out_dir);
  summary.preprocess = stage_preprocess(cfg, out_dir, graph_path);
  summary.cluster = stage_cluster(cfg, out_dir);
  summary.mine = stage_mine(cfg, out_dir);
  summary.plan = stage_plan(cfg, out_dir);
  auto out = open_out(join_path(out_dir, kSummaryFile));
  out << format_summary(summary);
  return summary;
}

std::string format_summary(const RunSummary& s) {
  std::ostringstream out;
  out << "log_lines_total=" << s.ingest.total_lines << "\n";
  out << "log_lines_parsed=" << s.ingest.parsed << "\n";
  out << "log_lines_skipped=" << s.ingest.skipped << "\n";
  out << "records_clean=" << s.preprocess.records_clean << "\n";
  out << "users=" << s.preprocess.users << "\n";
  out << "sessions=" << s.preprocess.sessions << "\n";
  out << "sessions_incomplete=" << s.preprocess.sessions_incomplete << "\n";
  out << "pages_total=" << s.preprocess.pages_total << "\n";
  out << "pages_after_thresholds=" << s.preprocess.pages_after_thresholds
      << "\n";
  out << "transactions=" << s.preprocess.transactions << "\n";
  out << "pages_clustered=" << s.cluster.pages_clustered << "\n";
  out << "pages_dropped_extreme=" << s.cluster.dropped_extreme << "\n";
  out << "clusters=" << s.cluster.clusters << "\n";
  out << "cluster_distance_evals=" << s.cluster.distance_evals << "\n";
  out << "itemsets=" << s.mine.itemsets << "\n";
  out << "rules=" << s.mine.rules << "\n";
  out << "candidates=" << s.mine.candidates << "\n";
  out << "final_support=" << fmt_double(s.mine.final_support) << "\n";
  out << "min_support_count=" << s.mine.min_count << "\n";
  out << "links_matched=" << s.plan.matched << "\n";
  out << "links_accepted=" << s.plan.accepted << "\n";
  out << "links_rejected=" << s.plan.rejected << "\n";
  out << "mean_improved_efficiency_pct="
      << fmt_double(s.plan.mean_efficiency_pct.value_or(0.0)) << "\n";
  return out.str();
}

// ---- benchmark ----

namespace {

double label_agreement(const std::vector<int>& a, const std::vector<int>& b,
                       int ka, int kb) {
  if (a.empty()) return 1.0;
  int m = std::max(std::max(ka, kb), 1);
  std::vector<std::vector<long>> conf(
      static_cast<std::size_t>(m), std::vector<long>(static_cast<std::size_t>(m), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++conf[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
  }
  long best = 0;
  if (m <= 7) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
    do {
      long sum = 0;
      for (int j = 0; j < m; ++j) {
        sum += conf[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]
                   [static_cast<std::size_t>(j)];
      }
      best = std::max(best, sum);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    std::vector<bool> row_used(static_cast<std::size_t>(m), false);
    std::vector<bool> col_used(static_cast<std::size_t>(m), false);
    for (int round = 0; round < m; ++round) {
      long top = -1;
      int ri = -1, ci = -1;
      for (int r = 0; r < m; ++r) {
        if (row_used[static_cast<std::size_t>(r)]) continue;
        for (int c = 0; c < m; ++c) {
          if (col_used[static_cast<std::size_t>(c)]) continue;
          if (conf[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] >
              top) {
            top = conf[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            ri = r;
            ci = c;
          }
        }
      }
      if (ri < 0) break;
      best += top;
      row_used[static_cast<std::size_t>(ri)] = true;
      col_used[static_cast<std::size_t>(ci)] = true;
    }
  }
  return static_cast<double>(best) / static_cast<double>(a.size());
}

}  // namespace

BenchResult bench_compare(int n, int k, int t_min, std::uint64_t rng_seed,
                          int repeats) {
  if (k < 1) throw std::invalid_argument("cluster count must be >= 1");
  if (n < k) throw std::invalid_argument("need at least k points");
  if (t_min < 0) throw std::invalid_argument("t_min must be >= 0");
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

  std::mt19937_64 rng(rng_seed);
  auto unit = [&] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<FeaturePoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    points.push_back({i, unit() * 1000.0, unit() * 100.0});
  }

  using clock = std::chrono::steady_clock;
  BenchResult result;
  result.n = n;
  result.k = k;

  ClusterModel ff, km;
  double ff_best = 0.0, km_best = 0.0;
  const int max_iter = std::max(t_min, 50);
  const std::uint64_t km_seed = rng_seed ^ 0x9e3779b97f4a7c15ULL;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = clock::now();
    ff = farthest_first(points, k, Metric::kEuclid);
    auto t1 = clock::now();
    km = kmeans_baseline(points, k, Metric::kEuclid, max_iter, km_seed);
    auto t2 = clock::now();
    double ff_s = std::chrono::duration<double>(t1 - t0).count();
    double km_s = std::chrono::duration<double>(t2 - t1).count();
    if (r == 0 || ff_s < ff_best) ff_best = ff_s;
    if (r == 0 || km_s < km_best) km_best = km_s;
  }

  result.ff_wall_seconds = ff_best;
  result.km_wall_seconds = km_best;
  result.km_iterations = km.iterations;
  result.ff_distance_evals = ff.distance_evals;
  result.km_distance_evals = km.distance_evals;
  result.labels_agreement =
      label_agreement(ff.labels, km.labels, ff.center_count(),
                      km.center_count());
  return result;
}

std::string format_bench(const BenchResult& r) {
  std::ostringstream out;
  out << "n=" << r.n << "\n";
  out << "k=" << r.k << "\n";
  out << "ff_wall_seconds=" << fmt_double(r.ff_wall_seconds) << "\n";
  out << "km_wall_seconds=" << fmt_double(r.km_wall_seconds) << "\n";
  out << "km_iterations=" << r.km_iterations << "\n";
  out << "ff_distance_evals=" << r.ff_distance_evals << "\n";
  out << "km_distance_evals=" << r.km_distance_evals << "\n";
  out << "labels_agreement=" << fmt_double(r.labels_agreement) << "\n";
  return out.str();
}

}  // namespace webreorg
