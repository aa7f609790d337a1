#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace webreorg {

enum class Metric { kEuclid, kManhattan };

// One page's (S, C) coordinates: average dwell seconds and click count.
struct FeaturePoint {
  int page_id = 0;
  double s = 0.0;
  double c = 0.0;

  Eigen::Vector2d vec() const { return {s, c}; }
};

double distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b, Metric m);
double distance(const FeaturePoint& a, const FeaturePoint& b, Metric m);

struct ClusterModel {
  int k = 0;  // requested cluster count
  Metric metric = Metric::kEuclid;
  // One row per center, columns (S, C), in selection order (row 0 = first).
  Eigen::Matrix<double, Eigen::Dynamic, 2> centers;
  std::vector<int> page_ids;  // aligned with labels, input order
  std::vector<int> labels;    // nearest-center index per input point
  long long distance_evals = 0;
  int iterations = 0;                  // Lloyd rounds; 0 for farthest-first
  std::vector<double> inertia_history;  // per assignment round (euclid only)

  int center_count() const { return static_cast<int>(centers.rows()); }
  std::optional<int> label_of(int page_id) const;
};

// Greedy k-center traversal: the first center is the point farthest from the
// coordinate-wise mean; each next center maximizes its minimum distance to
// the centers chosen so far; points join their nearest center. All ties break
// toward the lowest input index. Fully deterministic. Throws
// std::invalid_argument for k < 1 or empty input.
ClusterModel farthest_first(const std::vector<FeaturePoint>& points, int k,
                            Metric metric);

// Lloyd iteration with seeded-random initial centers drawn from the distinct
// points; stops at label fixpoint or after max_iter center updates.
ClusterModel kmeans_baseline(const std::vector<FeaturePoint>& points, int k,
                             Metric metric, int max_iter,
                             std::uint64_t rng_seed);

// Rank per center index: 0 for the center with the largest S, descending;
// ties toward the lower center index.
std::vector<int> cluster_ranks(const ClusterModel& model);

enum class OutlierFlag { kNormal, kOutlier, kExtreme };

// Tukey-style fences with Q1/Q3 at linearly interpolated positions
// 0.25(n-1) and 0.75(n-1) of the sorted values. Throws on empty input or
// bad factors (requires extreme_factor >= outlier_factor > 0).
std::vector<OutlierFlag> iqr_outliers(const std::vector<double>& values,
                                      double outlier_factor,
                                      double extreme_factor);

// Optional feature preparation: maps each coordinate to [0, 1] by min-max;
// constant coordinates map to 0.
std::vector<FeaturePoint> minmax_normalize(
    const std::vector<FeaturePoint>& points);

}  // namespace webreorg
