#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "leadsel/errors.hpp"
#include "leadsel/rng.hpp"

namespace leadsel {

using Index = Eigen::Index;
/// Agent identifier; an index in [0, V).
using AgentId = Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
/// One row per agent, columns (x, y).
template <typename Scalar>
using Points = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

/// Agent coordinates plus a symmetric, nonnegative, zero-diagonal adjacency.
template <typename Scalar>
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(Points<Scalar> coords, Matrix<Scalar> adjacency)
      : coords_(std::move(coords)), adjacency_(std::move(adjacency)) {
    const Index n = coords_.rows();
    if (adjacency_.rows() != n || adjacency_.cols() != n)
      throw ParameterError("adjacency must be " + std::to_string(n) + "x" + std::to_string(n));
    for (Index i = 0; i < n; ++i) {
      if (adjacency_(i, i) != Scalar(0)) throw ParameterError("adjacency diagonal must be zero");
      for (Index j = 0; j < i; ++j) {
        if (adjacency_(i, j) != adjacency_(j, i)) throw ParameterError("adjacency must be symmetric");
        if (!(adjacency_(i, j) >= Scalar(0))) throw ParameterError("edge weights must be nonnegative");
      }
    }
  }

  Index size() const { return coords_.rows(); }
  const Points<Scalar>& coords() const { return coords_; }
  const Matrix<Scalar>& adjacency() const { return adjacency_; }
  Scalar weight(AgentId i, AgentId j) const { return adjacency_(i, j); }
  bool has_edge(AgentId i, AgentId j) const { return adjacency_(i, j) != Scalar(0); }

  Index edge_count() const {
    Index m = 0;
    for (Index i = 0; i < size(); ++i)
      for (Index j = i + 1; j < size(); ++j) m += has_edge(i, j);
    return m;
  }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.coords_.rows() == b.coords_.rows() && a.coords_ == b.coords_ &&
           a.adjacency_ == b.adjacency_;
  }

 private:
  Points<Scalar> coords_;
  Matrix<Scalar> adjacency_;
};

using Graph = WeightedGraph<double>;

/// Sorted, duplicate-free set of leader ids drawn from [0, universe).
class LeaderSet {
 public:
  LeaderSet() = default;

  LeaderSet(std::vector<AgentId> ids, Index universe) : ids_(std::move(ids)), universe_(universe) {
    std::sort(ids_.begin(), ids_.end());
    if (ids_.empty()) throw ParameterError("leader set must not be empty");
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
      throw ParameterError("leader set contains duplicates");
    if (ids_.front() < 0 || ids_.back() >= universe_)
      throw ParameterError("leader id out of range [0, " + std::to_string(universe_) + ")");
  }

  LeaderSet(std::initializer_list<AgentId> ids, Index universe)
      : LeaderSet(std::vector<AgentId>(ids), universe) {}

  Index size() const { return static_cast<Index>(ids_.size()); }
  Index universe() const { return universe_; }
  const std::vector<AgentId>& members() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  AgentId operator[](std::size_t i) const { return ids_[i]; }
  bool contains(AgentId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

  /// Complement in ascending order.
  std::vector<AgentId> followers() const {
    std::vector<AgentId> out;
    out.reserve(static_cast<std::size_t>(universe_ - size()));
    auto it = ids_.begin();
    for (AgentId i = 0; i < universe_; ++i) {
      if (it != ids_.end() && *it == i)
        ++it;
      else
        out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const LeaderSet&, const LeaderSet&) = default;
  friend auto operator<=>(const LeaderSet& a, const LeaderSet& b) { return a.ids_ <=> b.ids_; }

 private:
  std::vector<AgentId> ids_;
  Index universe_ = 0;
};

struct GeometricParams {
  Index n = 100;
  double side = 10.0;        // meters
  double radius = 3.0;       // meters
  double weight_max = 50.0;
};

/// Uniform points on [0, side]^2; an edge joins every pair within `radius`,
/// weighted uniformly on (0, weight_max] with one draw per unordered pair.
template <typename Scalar = double>
WeightedGraph<Scalar> generate_geometric(const GeometricParams& p, std::uint64_t seed) {
  if (p.n < 1) throw ParameterError("n must be >= 1");
  if (!(p.side > 0)) throw ParameterError("side must be > 0");
  if (!(p.radius >= 0)) throw ParameterError("radius must be >= 0");
  if (!(p.weight_max > 0)) throw ParameterError("weight_max must be > 0");

  Rng rng(seed);
  Points<Scalar> coords(p.n, 2);
  for (Index i = 0; i < p.n; ++i) {
    coords(i, 0) = Scalar(p.side * uniform01(rng));
    coords(i, 1) = Scalar(p.side * uniform01(rng));
  }
  Matrix<Scalar> adj = Matrix<Scalar>::Zero(p.n, p.n);
  const Scalar r2 = Scalar(p.radius * p.radius);
  for (Index i = 0; i < p.n; ++i) {
    for (Index j = i + 1; j < p.n; ++j) {
      if ((coords.row(i) - coords.row(j)).squaredNorm() <= r2) {
        const Scalar w = Scalar(p.weight_max * (1.0 - uniform01(rng)));
        adj(i, j) = w;
        adj(j, i) = w;
      }
    }
  }
  return WeightedGraph<Scalar>(std::move(coords), std::move(adj));
}

template <typename Scalar>
bool is_connected(const WeightedGraph<Scalar>& g) {
  const Index n = g.size();
  if (n == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = 1;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    for (Index v = 0; v < n; ++v) {
      if (!seen[v] && g.has_edge(u, v)) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

template <typename Scalar>
struct GeneratedGraph {
  WeightedGraph<Scalar> graph;
  std::uint64_t seed = 0;  // seed of the accepted draw
  int attempts = 0;        // draws taken, including the accepted one
};

/// Redraws with seeds derived from `seed` until `accept(graph)` holds and the
/// graph is connected. Throws after `max_attempts` rejected draws.
template <typename Scalar = double, typename Accept>
GeneratedGraph<Scalar> generate_connected(const GeometricParams& p, std::uint64_t seed, Accept accept,
                                          int max_attempts = 100) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    auto g = generate_geometric<Scalar>(p, s);
    if (is_connected(g) && accept(g)) return {std::move(g), s, attempt + 1};
  }
  throw ParameterError("no acceptable connected graph after " + std::to_string(max_attempts) + " draws");
}

template <typename Scalar = double>
GeneratedGraph<Scalar> generate_connected(const GeometricParams& p, std::uint64_t seed, int max_attempts = 100) {
  return generate_connected<Scalar>(p, seed, [](const WeightedGraph<Scalar>&) { return true; }, max_attempts);
}

/// L = D - A. Degrees use compensated summation so row sums vanish to
/// within one rounding of the degree.
template <typename Scalar>
Matrix<Scalar> laplacian(const WeightedGraph<Scalar>& g) {
  Matrix<Scalar> L = -g.adjacency();
  for (Index i = 0; i < g.size(); ++i) {
    Scalar sum = 0, carry = 0;
    for (Index j = 0; j < g.size(); ++j) {
      const Scalar a = g.adjacency()(i, j);
      const Scalar t = sum + a;
      carry += std::abs(sum) >= std::abs(a) ? (sum - t) + a : (a - t) + sum;
      sum = t;
    }
    L(i, i) = sum + carry;
  }
  return L;
}

/// Sum of incident edge weights; the Laplacian diagonal entry.
template <typename Scalar>
Scalar weighted_indegree(const WeightedGraph<Scalar>& g, AgentId i) {
  if (i < 0 || i >= g.size()) throw ParameterError("agent id out of range");
  return g.adjacency().row(i).sum();
}

template <typename Scalar>
Vector<Scalar> weighted_indegrees(const WeightedGraph<Scalar>& g) {
  return g.adjacency().rowwise().sum();
}

/// Follower/leader partition of a Laplacian. The leader rows are zero in the
/// dynamics and are not stored.
template <typename Scalar>
struct GroundedSystem {
  std::vector<AgentId> follower_ids;
  std::vector<AgentId> leader_ids;
  Matrix<Scalar> lff;            // (V-k) x (V-k)
  Matrix<Scalar> lfl;            // (V-k) x k
  Matrix<Scalar> leader_states;  // k x axes

  Index agent_count() const { return static_cast<Index>(follower_ids.size() + leader_ids.size()); }
};

template <typename Scalar, typename Derived>
GroundedSystem<Scalar> ground(const Eigen::MatrixBase<Derived>& L, const LeaderSet& leaders,
                              Matrix<Scalar> leader_states) {
  const Index n = L.rows();
  if (L.cols() != n) throw ParameterError("Laplacian must be square");
  if (leaders.universe() != n) throw ParameterError("leader set universe does not match Laplacian order");
  if (leader_states.rows() != leaders.size())
    throw ParameterError("leader_states must have one row per leader");
  if (leaders.size() == n) throw GroundingError("no followers remain");

  GroundedSystem<Scalar> sys;
  sys.follower_ids = leaders.followers();
  sys.leader_ids = leaders.members();
  sys.lff = L(sys.follower_ids, sys.follower_ids);
  sys.lfl = L(sys.follower_ids, sys.leader_ids);
  sys.leader_states = std::move(leader_states);
  return sys;
}

/// Grounds with zero leader states; enough for spectral questions.
template <typename Derived>
GroundedSystem<typename Derived::Scalar> ground(const Eigen::MatrixBase<Derived>& L, const LeaderSet& leaders) {
  using S = typename Derived::Scalar;
  return ground<S>(L, leaders, Matrix<S>::Zero(leaders.size(), 1));
}

/// Text format: `n <V>`, V lines `x y`, then one `i j w` line per edge (i < j).
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

/// Dense matrix text format: order line, then one row of decimals per line.
void write_matrix(std::ostream& out, const Matrix<double>& m);
Matrix<double> read_matrix(std::istream& in);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

}  // namespace leadsel
