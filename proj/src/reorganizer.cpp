#include "webreorg/reorganizer.hpp"

#include <stdexcept>

#include "webreorg/errors.hpp"

namespace webreorg {

const char* to_string(ProposalStatus s) {
  switch (s) {
    case ProposalStatus::kAccepted:
      return "accepted";
    case ProposalStatus::kExists:
      return "exists";
    case ProposalStatus::kOutdegFull:
      return "outdeg_full";
    case ProposalStatus::kSelfLoop:
      return "self_loop";
  }
  return "?";
}

std::vector<PlanEntry> ReorgPlan::accepted() const {
  std::vector<PlanEntry> out;
  for (const auto& e : entries) {
    if (e.status == ProposalStatus::kAccepted) out.push_back(e);
  }
  return out;
}

std::size_t ReorgPlan::accepted_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (e.status == ProposalStatus::kAccepted) ++n;
  }
  return n;
}

std::vector<MatchedLink> match_links(
    const std::vector<CandidateLink>& candidates, const ClusterModel& model,
    int rank_limit) {
  auto ranks = cluster_ranks(model);
  std::vector<MatchedLink> matched;
  for (const auto& c : candidates) {
    auto src_label = model.label_of(c.src);
    auto dst_label = model.label_of(c.dst);
    if (!src_label || !dst_label) continue;
    int src_rank = ranks[static_cast<std::size_t>(*src_label)];
    int dst_rank = ranks[static_cast<std::size_t>(*dst_label)];
    if (src_rank >= rank_limit || dst_rank >= rank_limit) continue;
    matched.push_back({c.src, c.dst, c.support_count, c.conf_num, c.conf_den,
                       std::min(src_rank, dst_rank)});
  }
  return matched;
}

double improved_efficiency(int t_p, int p_t) {
  if (p_t < 1 || p_t > t_p) {
    throw std::invalid_argument("path lengths must satisfy 1 <= p_t <= t_p");
  }
  return static_cast<double>(t_p - p_t) / static_cast<double>(t_p) * 100.0;
}

ReorgPlan build_plan(const std::vector<MatchedLink>& matched,
                     const SiteGraph& graph, int outdeg_threshold) {
  ReorgPlan plan;
  plan.outdeg_threshold = outdeg_threshold;

  std::vector<int> working_outdeg(static_cast<std::size_t>(graph.page_count()),
                                  0);
  for (int i = 0; i < graph.page_count(); ++i) {
    working_outdeg[static_cast<std::size_t>(i)] = graph.out_degree(i);
  }
  std::vector<std::pair<int, int>> added;
  auto already_added = [&](int src, int dst) {
    for (auto [i, j] : added) {
      if (i == src && j == dst) return true;
    }
    return false;
  };

  for (const auto& link : matched) {
    PlanEntry entry;
    entry.src = link.src;
    entry.dst = link.dst;
    entry.support_count = link.support_count;
    entry.conf_num = link.conf_num;
    entry.conf_den = link.conf_den;
    entry.cluster_rank = link.cluster_rank;
    if (link.src == link.dst) {
      entry.status = ProposalStatus::kSelfLoop;
    } else if (graph.has_link(link.src, link.dst) ||
               already_added(link.src, link.dst)) {
      entry.status = ProposalStatus::kExists;
    } else if (working_outdeg[static_cast<std::size_t>(link.src)] >=
               outdeg_threshold) {
      entry.status = ProposalStatus::kOutdegFull;
    } else {
      entry.status = ProposalStatus::kAccepted;
      ++working_outdeg[static_cast<std::size_t>(link.src)];
      added.emplace_back(link.src, link.dst);
      entry.t_p = graph.shortest_path_len(link.src, link.dst);
      if (entry.t_p) {
        entry.efficiency_pct = improved_efficiency(*entry.t_p, 1);
      }
    }
    plan.entries.push_back(entry);
  }
  return plan;
}

SiteGraph apply_plan(const ReorgPlan& plan, const SiteGraph& graph) {
  SiteGraph out = graph;
  for (const auto& e : plan.entries) {
    if (e.status != ProposalStatus::kAccepted) continue;
    if (out.has_link(e.src, e.dst)) {
      throw ConsistencyError("plan is stale: link " + std::to_string(e.src) +
                             " -> " + std::to_string(e.dst) +
                             " already exists");
    }
    out = out.with_link(e.src, e.dst);
  }
  return out;
}

}  // namespace webreorg
