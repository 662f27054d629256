#include "leadsel/kmeans.hpp"

#include <limits>

namespace leadsel {

namespace {

// k-means++: first center uniform, then each next center drawn with
// probability proportional to squared distance to the nearest chosen one.
Points<double> seed_centers(const Points<double>& pts, Index k, Rng& rng) {
  const Index n = pts.rows();
  Points<double> centers(k, 2);
  centers.row(0) = pts.row(static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n))));
  Vector<double> d2 = (pts.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (Index c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = n - 1;
    if (total > 0) {
      const double target = uniform01(rng) * total;
      double acc = 0;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (d2(i) > 0 && acc > target) {
          pick = i;
          break;
        }
      }
      while (d2(pick) == 0) --pick;  // rounding fell off the end
    } else {
      pick = static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = pts.row(pick);
    d2 = d2.cwiseMin((pts.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

double assign(const Points<double>& pts, const Points<double>& centers, std::vector<Index>& labels,
              Vector<double>& dist2) {
  double inertia = 0;
  for (Index i = 0; i < pts.rows(); ++i) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < centers.rows(); ++c) {
      const double d = (pts.row(i) - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist2(i) = best_d;
    inertia += best_d;
  }
  return inertia;
}

// Moves the point farthest from its center into each empty cluster.
void repair_empty(const Points<double>& pts, Points<double>& centers, std::vector<Index>& labels,
                  Vector<double>& dist2) {
  const Index k = centers.rows();
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index l : labels) ++counts[static_cast<std::size_t>(l)];
  for (Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) continue;
    Index far = -1;
    for (Index i = 0; i < pts.rows(); ++i) {
      if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2) continue;
      if (far < 0 || dist2(i) > dist2(far)) far = i;
    }
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    ++counts[static_cast<std::size_t>(c)];
    labels[static_cast<std::size_t>(far)] = c;
    centers.row(c) = pts.row(far);
    dist2(far) = 0;
  }
}

Points<double> member_means(const Points<double>& pts, const std::vector<Index>& labels, Index k) {
  Points<double> sums = Points<double>::Zero(k, 2);
  Vector<double> counts = Vector<double>::Zero(k);
  for (Index i = 0; i < pts.rows(); ++i) {
    sums.row(labels[static_cast<std::size_t>(i)]) += pts.row(i);
    counts(labels[static_cast<std::size_t>(i)]) += 1;
  }
  return sums.array().colwise() / counts.array();
}

ClusterAssignment lloyd(const Points<double>& pts, Index k, Rng& rng, const KMeansOptions& opt) {
  ClusterAssignment out;
  out.labels.assign(static_cast<std::size_t>(pts.rows()), 0);
  Points<double> centers = seed_centers(pts, k, rng);
  Vector<double> dist2(pts.rows());
  for (int it = 1; it <= opt.max_iterations; ++it) {
    assign(pts, centers, out.labels, dist2);
    repair_empty(pts, centers, out.labels, dist2);
    out.inertia_history.push_back(dist2.sum());
    out.iterations = it;
    Points<double> next = member_means(pts, out.labels, k);
    const double shift = (next - centers).rowwise().norm().maxCoeff();
    centers = std::move(next);
    if (shift < opt.tolerance) break;
  }
  out.centers = std::move(centers);
  out.inertia = 0;
  for (Index i = 0; i < pts.rows(); ++i)
    out.inertia += (pts.row(i) - out.centers.row(out.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return out;
}

}  // namespace

ClusterAssignment kmeans_cluster(const Points<double>& points, Index k, std::uint64_t seed,
                                 const KMeansOptions& options) {
  if (k < 1) throw ParameterError("k must be >= 1");
  if (k > points.rows()) throw ParameterError("k must not exceed the number of points");
  if (options.max_iterations < 1 || options.restarts < 1 || !(options.tolerance >= 0))
    throw ParameterError("invalid k-means options");

  Rng rng(seed);
  ClusterAssignment best;
  for (int r = 0; r < options.restarts; ++r) {
    ClusterAssignment run = lloyd(points, k, rng, options);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

}  // namespace leadsel
