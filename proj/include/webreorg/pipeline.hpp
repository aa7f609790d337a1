#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "webreorg/apriori.hpp"
#include "webreorg/clustering.hpp"
#include "webreorg/log.hpp"
#include "webreorg/preprocess.hpp"
#include "webreorg/reorganizer.hpp"
#include "webreorg/sitegraph.hpp"

namespace webreorg {

struct PipelineConfig {
  double alpha_seconds = 0.0;
  long beta_clicks = 0;
  std::int64_t session_timeout_seconds = 1800;
  int k_clusters = 3;
  Metric metric = Metric::kEuclid;
  int rank_limit = 0;  // 0 = all clusters
  double upper_bound_support = 1.0;
  double lower_bound_support = 0.1;
  double delta = 0.05;
  double min_confidence = 0.9;
  int required_itemsets = 10;
  int outdeg_threshold = 4;
  double outlier_factor = 1.5;
  double extreme_factor = 3.0;
  bool drop_extremes = true;
  bool normalize_features = false;
  UserIdMode user_id_mode = UserIdMode::kIpAndAgent;
  std::uint64_t rng_seed = 42;

  MiningParams mining_params() const;
};

// Flat key=value config file; '#' starts a comment. Unknown keys and
// out-of-range values throw ConfigError.
PipelineConfig load_config(const std::string& path);
void validate_config(const PipelineConfig& cfg);

// Stage output file names inside the run directory.
inline constexpr const char* kRecordsFile = "records.tsv";
inline constexpr const char* kGraphFile = "graph.txt";
inline constexpr const char* kPageStatsFile = "page_stats.csv";
inline constexpr const char* kTransactionsFile = "transactions.txt";
inline constexpr const char* kSequencesFile = "sequences.txt";
inline constexpr const char* kClustersFile = "clusters.csv";
inline constexpr const char* kItemsetsFile = "itemsets.txt";
inline constexpr const char* kRulesFile = "rules.txt";
inline constexpr const char* kCandidatesFile = "candidates.csv";
inline constexpr const char* kPlanFile = "plan.csv";
inline constexpr const char* kSummaryFile = "summary.txt";

struct IngestStats {
  std::size_t total_lines = 0;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
};

struct PreprocessStats {
  std::size_t records_clean = 0;
  std::size_t users = 0;
  std::size_t sessions = 0;
  std::size_t sessions_incomplete = 0;
  std::size_t pages_total = 0;
  std::size_t pages_after_thresholds = 0;
  std::size_t transactions = 0;
};

struct ClusterStats {
  std::size_t pages_clustered = 0;
  std::size_t dropped_extreme = 0;
  int clusters = 0;
  long long distance_evals = 0;
};

struct MineStats {
  std::size_t transactions = 0;
  std::size_t itemsets = 0;
  std::size_t rules = 0;
  std::size_t candidates = 0;
  double final_support = 0.0;
  long min_count = 0;
};

struct PlanStats {
  std::size_t matched = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::optional<double> mean_efficiency_pct;  // over scored accepted links
};

struct RunSummary {
  IngestStats ingest;
  PreprocessStats preprocess;
  ClusterStats cluster;
  MineStats mine;
  PlanStats plan;
};

// Each stage reads its predecessors' files from out_dir and writes its own;
// run_pipeline chains them and writes the summary. Stages throw InputError /
// ConfigError / ConsistencyError with a stage-tagged message.
IngestStats stage_ingest(const std::string& log_path,
                         const std::string& out_dir);
PreprocessStats stage_preprocess(const PipelineConfig& cfg,
                                 const std::string& out_dir,
                                 const std::optional<std::string>& graph_path);
ClusterStats stage_cluster(const PipelineConfig& cfg,
                           const std::string& out_dir);
MineStats stage_mine(const PipelineConfig& cfg, const std::string& out_dir);
PlanStats stage_plan(const PipelineConfig& cfg, const std::string& out_dir);

RunSummary run_pipeline(const PipelineConfig& cfg, const std::string& log_path,
                        const std::optional<std::string>& graph_path,
                        const std::string& out_dir);

std::string format_summary(const RunSummary& s);

// Intermediate-file readers (also used by the stage functions).
std::vector<LogRecord> read_records_tsv(const std::string& path);
std::vector<PageStats> read_page_stats_csv(const std::string& path);
std::vector<Transaction> read_sequences(const std::string& path);
ClusterModel read_cluster_model(const std::string& path);
std::vector<CandidateLink> read_candidates_csv(const std::string& path);

struct BenchResult {
  int n = 0;
  int k = 0;
  double ff_wall_seconds = 0.0;
  double km_wall_seconds = 0.0;
  int km_iterations = 0;
  long long ff_distance_evals = 0;
  long long km_distance_evals = 0;
  double labels_agreement = 0.0;  // best label permutation
};

// Runs farthest-first and the k-means baseline on the same n seeded-random
// 2-D points; wall times are the minimum over `repeats` runs. Throws
// std::invalid_argument when n < k or k < 1.
BenchResult bench_compare(int n, int k, int t_min, std::uint64_t rng_seed,
                          int repeats = 3);

std::string format_bench(const BenchResult& r);

}  // namespace webreorg
