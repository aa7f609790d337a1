#pragma once

#include <optional>
#include <string>
#include <vector>

#include "webreorg/apriori.hpp"
#include "webreorg/clustering.hpp"
#include "webreorg/sitegraph.hpp"

namespace webreorg {

// Candidate link that survived the cluster-membership filter.
struct MatchedLink {
  int src = 0;
  int dst = 0;
  long support_count = 0;
  long conf_num = 0;
  long conf_den = 0;
  int cluster_rank = 0;  // better (lower) of the two endpoint ranks
};

enum class ProposalStatus { kAccepted, kExists, kOutdegFull, kSelfLoop };

const char* to_string(ProposalStatus s);

struct PlanEntry {
  int src = 0;
  int dst = 0;
  long support_count = 0;
  long conf_num = 0;
  long conf_den = 0;
  int cluster_rank = 0;
  std::optional<int> t_p;                 // hops in the original graph
  std::optional<double> efficiency_pct;   // present iff t_p reachable
  ProposalStatus status = ProposalStatus::kAccepted;
};

struct ReorgPlan {
  int outdeg_threshold = 0;
  std::vector<PlanEntry> entries;  // candidate scan order

  std::vector<PlanEntry> accepted() const;
  std::size_t accepted_count() const;
};

// Keeps a candidate iff both endpoints were clustered and each lies in a
// cluster of rank < rank_limit; records the better endpoint rank.
std::vector<MatchedLink> match_links(
    const std::vector<CandidateLink>& candidates, const ClusterModel& model,
    int rank_limit);

// Scans candidates in order (expects support/confidence-descending input) and
// accepts each link that is no self-loop, not already present, and keeps the
// source's working out-degree (original + accepted so far) below the
// threshold. Accepted links are scored against the original graph.
ReorgPlan build_plan(const std::vector<MatchedLink>& matched,
                     const SiteGraph& graph, int outdeg_threshold);

// Percentage reduction in path length: (t_p - p_t) / t_p * 100.
// Requires 1 <= p_t <= t_p.
double improved_efficiency(int t_p, int p_t);

// New graph with every accepted proposal's edge set. Throws ConsistencyError
// when a proposed edge already exists (stale plan).
SiteGraph apply_plan(const ReorgPlan& plan, const SiteGraph& graph);

}  // namespace webreorg
