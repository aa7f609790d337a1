#include "webreorg/sitegraph.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "webreorg/errors.hpp"

namespace webreorg {

void SiteGraph::check_index(int i) const {
  if (i < 0 || i >= page_count()) {
    throw std::invalid_argument("page id out of range: " + std::to_string(i));
  }
}

SiteGraph SiteGraph::build(int n, const std::vector<std::pair<int, int>>& edges,
                           std::vector<std::string> urls) {
  if (n < 0) throw std::invalid_argument("page count must be >= 0");
  SiteGraph g;
  g.adj_ = Adjacency::Zero(n, n);
  if (urls.empty()) {
    g.urls_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      g.urls_.push_back("/page" + std::to_string(i) + ".html");
    }
  } else {
    if (static_cast<int>(urls.size()) != n) {
      throw std::invalid_argument("url list size does not match page count");
    }
    g.urls_ = std::move(urls);
  }
  for (auto [i, j] : edges) {
    g.check_index(i);
    g.check_index(j);
    if (i == j) {
      throw std::invalid_argument("self-loop not allowed: " +
                                  std::to_string(i));
    }
    g.adj_(i, j) = 1;  // duplicates collapse
  }
  return g;
}

bool SiteGraph::has_link(int i, int j) const {
  check_index(i);
  check_index(j);
  return adj_(i, j) != 0;
}

int SiteGraph::out_degree(int i) const {
  check_index(i);
  return static_cast<int>(adj_.row(i).cast<int>().sum());
}

std::vector<int> SiteGraph::out_links(int i) const {
  check_index(i);
  std::vector<int> links;
  for (int j = 0; j < page_count(); ++j) {
    if (adj_(i, j)) links.push_back(j);
  }
  return links;
}

std::vector<std::pair<int, int>> SiteGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < page_count(); ++i) {
    for (int j = 0; j < page_count(); ++j) {
      if (adj_(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::optional<int> SiteGraph::shortest_path_len(int from, int to) const {
  check_index(from);
  check_index(to);
  if (from == to) return 0;
  std::vector<int> dist(static_cast<std::size_t>(page_count()), -1);
  dist[static_cast<std::size_t>(from)] = 0;
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < page_count(); ++v) {
      if (adj_(u, v) && dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        if (v == to) return dist[static_cast<std::size_t>(v)];
        queue.push_back(v);
      }
    }
  }
  return std::nullopt;
}

SiteGraph SiteGraph::with_link(int i, int j) const {
  check_index(i);
  check_index(j);
  if (i == j) throw std::invalid_argument("self-loop not allowed");
  SiteGraph g = *this;
  g.adj_(i, j) = 1;
  return g;
}

const std::string& SiteGraph::url_of(int i) const {
  check_index(i);
  return urls_[static_cast<std::size_t>(i)];
}

void save_graph(const SiteGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write graph file: " + path);
  out << g.page_count() << "\n";
  for (int i = 0; i < g.page_count(); ++i) {
    out << "# url " << i << " " << g.url_of(i) << "\n";
  }
  for (auto [i, j] : g.edges()) {
    out << i << " " << j << "\n";
  }
  if (!out) throw InputError("graph file write failure: " + path);
}

SiteGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file: " + path);
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, std::string>> named;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank
    if (first == "#") {
      std::string kind;
      int id;
      std::string url;
      if (ss >> kind >> id >> url && kind == "url") {
        named.emplace_back(id, url);
      }
      continue;  // other comments ignored
    }
    int i, j;
    try {
      i = std::stoi(first);
    } catch (const std::exception&) {
      throw InputError("graph file line " + std::to_string(line_no) +
                       ": expected a number");
    }
    if (n < 0) {
      n = i;
      if (n < 0) throw InputError("graph file: page count must be >= 0");
      continue;
    }
    if (!(ss >> j)) {
      throw InputError("graph file line " + std::to_string(line_no) +
                       ": expected edge target");
    }
    edges.emplace_back(i, j);
  }
  if (n < 0) throw InputError("graph file missing page count: " + path);
  std::vector<std::string> urls;
  urls.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    urls.push_back("/page" + std::to_string(i) + ".html");
  }
  for (auto& [id, url] : named) {
    if (id < 0 || id >= n) {
      throw InputError("graph file: url id out of range: " +
                       std::to_string(id));
    }
    urls[static_cast<std::size_t>(id)] = url;
  }
  try {
    return SiteGraph::build(n, edges, std::move(urls));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("graph file: ") + e.what());
  }
}

SiteGraph demo_site() {
  const std::vector<std::string> urls = {
      "/index.html",                // 0
      "/products.html",             // 1
      "/blog.html",                 // 2
      "/about.html",                // 3
      "/products/a.html",           // 4
      "/products/b.html",           // 5
      "/blog/post1.html",           // 6
      "/blog/post2.html",           // 7
      "/team.html",                 // 8
      "/contact.html",              // 9
      "/products/a/spec.html",      // 10
      "/products/b/spec.html",      // 11
      "/blog/post1/comments.html",  // 12
      "/legacy.html",               // 13
      "/blog/drafts.html",          // 14
  };
  const std::vector<std::pair<int, int>> edges = {
      {0, 1},  {0, 2},  {0, 3},   {1, 4},  {1, 5},  {1, 0},  {2, 6},
      {2, 7},  {2, 14}, {3, 8},   {3, 9},  {3, 0},  {4, 10}, {4, 0},
      {5, 11}, {5, 0},  {6, 12},  {6, 2},  {7, 0},  {8, 9},  {8, 0},
      {9, 0},  {10, 0}, {10, 11}, {11, 0}, {12, 0}, {13, 0}, {14, 0},
  };
  return SiteGraph::build(15, edges, urls);
}

}  // namespace webreorg
