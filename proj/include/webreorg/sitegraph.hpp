#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace webreorg {

// Directed site graph over pages 0..n-1 with binary adjacency: X(i,j) = 1
// iff page i links to page j. No self-loops. Immutable after construction;
// with_link returns a modified copy.
class SiteGraph {
 public:
  using Adjacency =
      Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  SiteGraph() = default;

  // Throws std::invalid_argument on out-of-range indices or self-loop edges.
  // Duplicate edges collapse. Missing URLs get a default "/page<i>.html".
  static SiteGraph build(int n, const std::vector<std::pair<int, int>>& edges,
                         std::vector<std::string> urls = {});

  int page_count() const { return static_cast<int>(adj_.rows()); }
  bool has_link(int i, int j) const;
  int out_degree(int i) const;

  // Minimum number of edges on any directed path i -> j; 0 for i == j;
  // nullopt when j is unreachable from i.
  std::optional<int> shortest_path_len(int i, int j) const;

  // Copy of this graph with edge (i, j) present.
  SiteGraph with_link(int i, int j) const;

  const std::string& url_of(int i) const;
  const std::vector<std::string>& urls() const { return urls_; }
  std::vector<int> out_links(int i) const;
  std::vector<std::pair<int, int>> edges() const;
  const Adjacency& adjacency() const { return adj_; }

 private:
  void check_index(int i) const;

  Adjacency adj_;
  std::vector<std::string> urls_;
};

// Plain-text graph file: first non-comment line is n, then one "i j" edge per
// line; "# url <i> <path>" comment lines carry URL mappings.
SiteGraph load_graph(const std::string& path);
void save_graph(const SiteGraph& g, const std::string& path);

// Built-in 15-page site used by demos and synthetic log generation.
SiteGraph demo_site();

}  // namespace webreorg
