#pragma once

// Reference computations for tests. Nothing here calls into the library's
// eigensolvers, subset enumeration, or simulator.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "leadsel/graph.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;

/// Coefficients c[0..m] of det(xI - M) = sum c[i] x^(m-i), Faddeev-LeVerrier.
inline std::vector<double> characteristic_polynomial(const Mat& M) {
  const Eigen::Index m = M.rows();
  std::vector<double> c(static_cast<std::size_t>(m + 1), 0.0);
  c[0] = 1.0;
  Mat Mk = Mat::Zero(m, m);
  for (Eigen::Index k = 1; k <= m; ++k) {
    Mk = M * (Mk + c[static_cast<std::size_t>(k - 1)] * Mat::Identity(m, m));
    c[static_cast<std::size_t>(k)] = -Mk.trace() / static_cast<double>(k);
  }
  return c;
}

inline double horner(const std::vector<double>& c, double x) {
  double v = 0;
  for (double a : c) v = v * x + a;
  return v;
}

/// Smallest real root of the characteristic polynomial by a left-to-right
/// grid scan for a sign change, refined by bisection. Expects the smallest
/// eigenvalue to have odd multiplicity.
inline double charpoly_min_root(const Mat& M) {
  const auto c = characteristic_polynomial(M);
  const double R = M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const int cells = 200000;
  double lo = -R, plo = horner(c, lo);
  for (int i = 1; i <= cells; ++i) {
    const double hi = -R + 2 * R * i / cells;
    const double phi = horner(c, hi);
    if (plo == 0) return lo;
    if ((plo < 0) != (phi < 0) || phi == 0) {
      if (phi == 0) return hi;
      double a = lo, b = hi, pa = plo;
      for (int it = 0; it < 200 && b - a > 0; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double pm = horner(c, mid);
        if ((pm < 0) == (pa < 0)) {
          a = mid;
          pa = pm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    plo = phi;
  }
  return NAN;
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted.
inline std::vector<double> jacobi_eigenvalues(Mat A) {
  const Eigen::Index n = A.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30 * (1 + A.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (A(p, q) == 0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double cs = 1 / std::sqrt(t * t + 1), sn = t * cs;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = cs * akp - sn * akq;
          A(k, q) = sn * akp + cs * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = cs * apk - sn * aqk;
          A(q, k) = sn * apk + cs * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = A(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double jacobi_min(const Mat& A) { return jacobi_eigenvalues(A).front(); }

/// Laplacian built entry by entry.
inline Mat laplacian(const Mat& A) {
  const Eigen::Index n = A.rows();
  Mat L = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) {
        L(i, j) = -A(i, j);
        L(i, i) += A(i, j);
      }
  return L;
}

inline Mat delete_rows_cols(const Mat& L, const std::vector<long>& leaders) {
  std::vector<long> keep;
  for (long i = 0; i < L.rows(); ++i)
    if (std::find(leaders.begin(), leaders.end(), i) == leaders.end()) keep.push_back(i);
  Mat out(static_cast<long>(keep.size()), static_cast<long>(keep.size()));
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b) out(static_cast<long>(a), static_cast<long>(b)) = L(keep[a], keep[b]);
  return out;
}

struct BestSubset {
  std::vector<long> leaders;
  double rate = -1;
};

/// Exhaustive search over k-subsets by bitmask (n <= 20); ties go to the
/// lexicographically smallest subset.
inline BestSubset brute_force_best(const Mat& A, int k) {
  const Mat L = laplacian(A);
  const int n = static_cast<int>(A.rows());
  BestSubset best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    std::vector<long> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) s.push_back(i);
    const double r = jacobi_min(delete_rows_cols(L, s));
    const double band = 1e-9 * (1 + std::abs(best.rate));
    if (best.leaders.empty() || r > best.rate + band || (r >= best.rate - band && s < best.leaders)) {
      best.leaders = s;
      best.rate = r;
    }
  }
  return best;
}

/// Graphs used across tests.
inline leadsel::Graph path_graph(int n, double w = 1.0) {
  leadsel::Points<double> xy = leadsel::Points<double>::Zero(n, 2);
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) xy(i, 0) = i;
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = w;
  return {xy, A};
}

inline leadsel::Graph star_graph(int spokes) {
  const int n = spokes + 1;
  leadsel::Points<double> xy = leadsel::Points<double>::Zero(n, 2);
  Mat A = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    A(0, i) = A(i, 0) = 1.0;
    xy(i, 0) = std::cos(i);
    xy(i, 1) = std::sin(i);
  }
  return {xy, A};
}

inline leadsel::Graph cycle_graph(int n) {
  leadsel::Points<double> xy(n, 2);
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    xy(i, 0) = std::cos(2 * M_PI * i / n);
    xy(i, 1) = std::sin(2 * M_PI * i / n);
    A(i, (i + 1) % n) = A((i + 1) % n, i) = 1.0;
  }
  return {xy, A};
}

}  // namespace oracle
