#pragma once

#include <cstdint>
#include <vector>

#include "leadsel/graph.hpp"

namespace leadsel {

struct KMeansOptions {
  int max_iterations = 300;
  double tolerance = 1e-4;  // stop once every center moves less than this
  int restarts = 10;        // independent k-means++ seedings; lowest inertia wins
};

struct ClusterAssignment {
  std::vector<Index> labels;  // per point, in [0, k)
  Points<double> centers;     // k rows
  double inertia = 0;         // within-cluster sum of squares
  int iterations = 0;
  std::vector<double> inertia_history;  // after each assignment step of the winning run
};

ClusterAssignment kmeans_cluster(const Points<double>& points, Index k, std::uint64_t seed,
                                 const KMeansOptions& options = {});

}  // namespace leadsel
