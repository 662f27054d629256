#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <vector>

#include "leadsel/graph.hpp"

namespace leadsel {

/// Absolute eigenvalue accuracy target, relative to (1 + ||M||_inf).
inline constexpr double kEigenTolerance = 1e-9;
/// Allowed asymmetry |M(i,j) - M(j,i)| for a matrix treated as symmetric.
inline constexpr double kSymmetryTolerance = 1e-10;

template <typename Derived>
typename Derived::RealScalar inf_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double tol = kSymmetryTolerance) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, static_cast<double>(inf_norm(m)));
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

namespace detail {
template <typename Derived>
auto symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  if (m.rows() == 0) throw ParameterError("eigenvalues of an empty matrix");
  if (!is_symmetric(m)) throw ParameterError("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix<S>> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw GroundingError("symmetric eigensolver did not converge");
  return Vector<S>(solver.eigenvalues());
}
}  // namespace detail

/// lambda_min of a symmetric matrix via full tridiagonal QR.
template <typename Derived>
typename Derived::Scalar smallest_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  return detail::symmetric_eigenvalues(m)(0);
}

template <typename Derived>
typename Derived::Scalar largest_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  auto ev = detail::symmetric_eigenvalues(m);
  return ev(ev.size() - 1);
}

/// True when lambda_min(m) > threshold, decided by a Cholesky attempt on
/// m - threshold*I. Much cheaper than an eigensolve for pruning searches.
template <typename Derived>
bool min_eigenvalue_exceeds(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar threshold) {
  using S = typename Derived::Scalar;
  Matrix<S> shifted = m;
  shifted.diagonal().array() -= threshold;
  Eigen::LLT<Matrix<S>> llt(shifted);
  return llt.info() == Eigen::Success;
}

/// Convergence rate of the leader-follower system: lambda_min(L_FF).
template <typename Scalar>
Scalar convergence_rate(const GroundedSystem<Scalar>& sys) {
  if (sys.follower_ids.empty()) throw GroundingError("no followers remain");
  return smallest_eigenvalue(sys.lff);
}

/// lambda_min of the principal submatrix of L with the leader rows/cols removed.
template <typename Derived>
typename Derived::Scalar grounded_rate(const Eigen::MatrixBase<Derived>& L, const LeaderSet& leaders) {
  if (leaders.size() >= L.rows()) throw GroundingError("no followers remain");
  const auto followers = leaders.followers();
  return smallest_eigenvalue(L(followers, followers));
}

/// Full-state equilibrium, one column per axis. Leader rows hold the leader
/// states; follower rows solve L_FF x_F = -L_FL x_L.
template <typename Scalar>
using LimitState = Matrix<Scalar>;

namespace detail {
// Every connected component of the follower subgraph must touch a leader.
template <typename Scalar>
bool followers_reach_leaders(const GroundedSystem<Scalar>& sys) {
  const Index m = sys.lff.rows();
  std::vector<int> comp(static_cast<std::size_t>(m), -1);
  std::vector<char> anchored;
  std::vector<Index> stack;
  for (Index s = 0; s < m; ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(anchored.size());
    anchored.push_back(0);
    comp[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      if ((sys.lfl.row(u).array() != Scalar(0)).any()) anchored[c] = 1;
      for (Index v = 0; v < m; ++v) {
        if (v != u && comp[v] < 0 && sys.lff(u, v) != Scalar(0)) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
  }
  return std::all_of(anchored.begin(), anchored.end(), [](char a) { return a != 0; });
}
}  // namespace detail

template <typename Scalar>
LimitState<Scalar> limit_state(const GroundedSystem<Scalar>& sys) {
  if (sys.follower_ids.empty()) throw GroundingError("no followers remain");
  if (!detail::followers_reach_leaders(sys)) throw GroundingError("unreachable followers");
  Eigen::LLT<Matrix<Scalar>> llt(sys.lff);
  if (llt.info() != Eigen::Success) throw GroundingError("unreachable followers");

  const Matrix<Scalar> rhs = -(sys.lfl * sys.leader_states);
  const Matrix<Scalar> xf = llt.solve(rhs);

  LimitState<Scalar> full(sys.agent_count(), sys.leader_states.cols());
  full(sys.follower_ids, Eigen::all) = xf;
  full(sys.leader_ids, Eigen::all) = sys.leader_states;
  return full;
}

/// Limit state reached from `initial` (one row per agent, one column per
/// axis) when `leaders` hold their initial values.
template <typename DerivedL, typename DerivedX>
LimitState<typename DerivedL::Scalar> limit_state(const Eigen::MatrixBase<DerivedL>& L, const LeaderSet& leaders,
                                                  const Eigen::MatrixBase<DerivedX>& initial) {
  using S = typename DerivedL::Scalar;
  if (initial.rows() != L.rows()) throw ParameterError("initial state must have one row per agent");
  Matrix<S> xl = initial(leaders.members(), Eigen::all);
  return limit_state(ground<S>(L, leaders, std::move(xl)));
}

/// ||L_FF x_F + L_FL x_L||_2 summed in quadrature over axes.
template <typename Scalar>
Scalar limit_residual(const GroundedSystem<Scalar>& sys, const LimitState<Scalar>& x) {
  const Matrix<Scalar> xf = x(sys.follower_ids, Eigen::all);
  return (sys.lff * xf + sys.lfl * sys.leader_states).norm();
}

}  // namespace leadsel
