#include "webreorg/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace webreorg {

double distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, Metric m) {
  return m == Metric::kEuclid ? (a - b).norm() : (a - b).lpNorm<1>();
}

double distance(const FeaturePoint& a, const FeaturePoint& b, Metric m) {
  return distance(a.vec(), b.vec(), m);
}

std::optional<int> ClusterModel::label_of(int page_id) const {
  for (std::size_t i = 0; i < page_ids.size(); ++i) {
    if (page_ids[i] == page_id) return labels[i];
  }
  return std::nullopt;
}

namespace {

// Nearest-center pass over all points; ties go to the lower center index.
// Appends the round's inertia for the euclid metric.
void assign_labels(const std::vector<FeaturePoint>& points,
                   ClusterModel& model) {
  const int m = model.center_count();
  model.labels.assign(points.size(), 0);
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = 0.0;
    int best_c = -1;
    for (int c = 0; c < m; ++c) {
      double d = distance(points[i].vec(), model.centers.row(c).transpose(),
                          model.metric);
      ++model.distance_evals;
      if (best_c < 0 || d < best) {
        best = d;
        best_c = c;
      }
    }
    model.labels[i] = best_c;
    inertia += best * best;
  }
  if (model.metric == Metric::kEuclid) {
    model.inertia_history.push_back(inertia);
  }
}

std::vector<Eigen::Vector2d> distinct_coords(
    const std::vector<FeaturePoint>& points) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& p : points) {
    bool seen = false;
    for (const auto& q : out) {
      if (q.x() == p.s && q.y() == p.c) {
        seen = true;
        break;
      }
    }
    if (!seen) out.emplace_back(p.s, p.c);
  }
  return out;
}

}  // namespace

ClusterModel farthest_first(const std::vector<FeaturePoint>& points, int k,
                            Metric metric) {
  if (k < 1) throw std::invalid_argument("cluster count must be >= 1");
  if (points.empty()) throw std::invalid_argument("no points to cluster");
  const std::size_t n = points.size();

  ClusterModel model;
  model.k = k;
  model.metric = metric;
  model.page_ids.reserve(n);
  for (const auto& p : points) model.page_ids.push_back(p.page_id);

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) mean += p.vec();
  mean /= static_cast<double>(n);

  // Seed: the point farthest from the mean.
  std::size_t seed = 0;
  double seed_dist = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = distance(points[i].vec(), mean, metric);
    ++model.distance_evals;
    if (d > seed_dist) {
      seed_dist = d;
      seed = i;
    }
  }

  std::vector<std::size_t> center_idx{seed};
  std::vector<double> min_dist(n, 0.0);
  bool have_min_dist = false;
  while (static_cast<int>(center_idx.size()) < k) {
    const Eigen::Vector2d last =
        points[center_idx.back()].vec();
    for (std::size_t i = 0; i < n; ++i) {
      double d = distance(points[i].vec(), last, metric);
      ++model.distance_evals;
      if (!have_min_dist || d < min_dist[i]) min_dist[i] = d;
    }
    have_min_dist = true;
    std::size_t next = 0;
    double next_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_dist[i] > next_dist) {
        next_dist = min_dist[i];
        next = i;
      }
    }
    if (next_dist <= 0.0) break;  // every point coincides with a center
    center_idx.push_back(next);
  }

  model.centers.resize(static_cast<Eigen::Index>(center_idx.size()), 2);
  for (std::size_t c = 0; c < center_idx.size(); ++c) {
    model.centers.row(static_cast<Eigen::Index>(c)) =
        points[center_idx[c]].vec().transpose();
  }
  assign_labels(points, model);
  return model;
}

ClusterModel kmeans_baseline(const std::vector<FeaturePoint>& points, int k,
                             Metric metric, int max_iter,
                             std::uint64_t rng_seed) {
  if (k < 1) throw std::invalid_argument("cluster count must be >= 1");
  if (points.empty()) throw std::invalid_argument("no points to cluster");
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
  const std::size_t n = points.size();

  ClusterModel model;
  model.k = k;
  model.metric = metric;
  model.page_ids.reserve(n);
  for (const auto& p : points) model.page_ids.push_back(p.page_id);

  auto coords = distinct_coords(points);
  const std::size_t m =
      std::min(coords.size(), static_cast<std::size_t>(k));
  std::mt19937_64 rng(rng_seed);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + rng() % (coords.size() - i);
    std::swap(coords[i], coords[j]);
  }
  model.centers.resize(static_cast<Eigen::Index>(m), 2);
  for (std::size_t c = 0; c < m; ++c) {
    model.centers.row(static_cast<Eigen::Index>(c)) = coords[c].transpose();
  }

  std::vector<int> prev_labels;
  while (true) {
    assign_labels(points, model);
    if (model.iterations >= max_iter || model.labels == prev_labels) break;
    Eigen::Matrix<double, Eigen::Dynamic, 2> sums =
        Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(
            static_cast<Eigen::Index>(m), 2);
    std::vector<long> counts(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto c = static_cast<std::size_t>(model.labels[i]);
      sums.row(static_cast<Eigen::Index>(c)) += points[i].vec().transpose();
      ++counts[c];
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (counts[c] > 0) {  // empty clusters keep their center
        model.centers.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) /
            static_cast<double>(counts[c]);
      }
    }
    prev_labels = model.labels;
    ++model.iterations;
  }
  return model;
}

std::vector<int> cluster_ranks(const ClusterModel& model) {
  const int m = model.center_count();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return model.centers(a, 0) > model.centers(b, 0);
  });
  std::vector<int> rank(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
  }
  return rank;
}

std::vector<OutlierFlag> iqr_outliers(const std::vector<double>& values,
                                      double outlier_factor,
                                      double extreme_factor) {
  if (values.empty()) throw std::invalid_argument("no values");
  if (!(outlier_factor > 0.0) || extreme_factor < outlier_factor) {
    throw std::invalid_argument("bad fence factors");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double pos) {
    auto lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
  };
  const double n1 = static_cast<double>(sorted.size() - 1);
  const double q1 = quantile(0.25 * n1);
  const double q3 = quantile(0.75 * n1);
  const double iqr = q3 - q1;

  std::vector<OutlierFlag> flags(values.size(), OutlierFlag::kNormal);
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (v < q1 - extreme_factor * iqr || v > q3 + extreme_factor * iqr) {
      flags[i] = OutlierFlag::kExtreme;
    } else if (v < q1 - outlier_factor * iqr || v > q3 + outlier_factor * iqr) {
      flags[i] = OutlierFlag::kOutlier;
    }
  }
  return flags;
}

std::vector<FeaturePoint> minmax_normalize(
    const std::vector<FeaturePoint>& points) {
  if (points.empty()) return {};
  double s_min = points[0].s, s_max = points[0].s;
  double c_min = points[0].c, c_max = points[0].c;
  for (const auto& p : points) {
    s_min = std::min(s_min, p.s);
    s_max = std::max(s_max, p.s);
    c_min = std::min(c_min, p.c);
    c_max = std::max(c_max, p.c);
  }
  std::vector<FeaturePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    FeaturePoint q = p;
    q.s = s_max > s_min ? (p.s - s_min) / (s_max - s_min) : 0.0;
    q.c = c_max > c_min ? (p.c - c_min) / (c_max - c_min) : 0.0;
    out.push_back(q);
  }
  return out;
}

}  // namespace webreorg
