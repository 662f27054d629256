#include <doctest.h>

#include <cmath>

#include "leadsel/spectral.hpp"
#include "oracles.hpp"

using namespace leadsel;

namespace {
const double kGolden = (3.0 - std::sqrt(5.0)) / 2.0;          // 0.3819660112501051
const double kP4End = 2.0 - 2.0 * std::cos(M_PI / 7.0);       // 0.1980622641951617
}  // namespace

TEST_CASE("smallest_eigenvalue: closed forms") {
  CHECK(smallest_eigenvalue(Eigen::Matrix3d::Identity()) == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::Matrix2d m;
  m << 2, -1, -1, 1;
  CHECK(std::abs(smallest_eigenvalue(m) - 0.3819660112501051) < 1e-12);
  const Graph g = generate_connected({30, 10.0, 3.0, 50.0}, 8).graph;
  const Eigen::MatrixXd L = laplacian(g);
  CHECK(std::abs(smallest_eigenvalue(L)) < kEigenTolerance * (1 + inf_norm(L)));
}

TEST_CASE("smallest_eigenvalue: rejects non-symmetric input") {
  Eigen::Matrix2d m;
  m << 1, 2, 0, 1;
  CHECK_THROWS_AS(smallest_eigenvalue(m), ParameterError);
  CHECK_THROWS_AS(smallest_eigenvalue(Eigen::MatrixXd(0, 0)), ParameterError);
}

TEST_CASE("smallest_eigenvalue: float instantiation") {
  Eigen::Matrix2f m;
  m << 2, -1, -1, 1;
  CHECK(smallest_eigenvalue(m) == doctest::Approx(0.381966f).epsilon(1e-5));
}

TEST_CASE("smallest_eigenvalue agrees with the characteristic-polynomial scan (order <= 4)") {
  std::vector<Eigen::MatrixXd> cases;
  cases.push_back(Eigen::Matrix3d::Identity());
  Eigen::MatrixXd m(2, 2);
  m << 2, -1, -1, 1;
  cases.push_back(m);
  cases.push_back(laplacian(oracle::path_graph(3)));
  cases.push_back(laplacian(oracle::path_graph(4)));
  Rng rng(42);
  for (int t = 0; t < 60; ++t) {
    const int order = 1 + t % 4;
    Eigen::MatrixXd a(order, order);
    for (int i = 0; i < order; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = 20 * uniform01(rng) - 10;
    cases.push_back(a);
  }
  for (const auto& a : cases) {
    const double expected = oracle::charpoly_min_root(a);
    REQUIRE(std::isfinite(expected));
    CHECK(std::abs(smallest_eigenvalue(a) - expected) < 1e-8);
  }
}

TEST_CASE("smallest_eigenvalue matches the Jacobi oracle within tolerance") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = generate_connected({40, 10.0, 3.0, 50.0}, seed).graph;
    const Eigen::MatrixXd L = laplacian(g);
    const auto sys = ground(L, LeaderSet({0, 5}, 40));
    CHECK(std::abs(smallest_eigenvalue(sys.lff) - oracle::jacobi_min(sys.lff)) <= kEigenTolerance * (1 + inf_norm(sys.lff)));
  }
}

TEST_CASE("min_eigenvalue_exceeds brackets lambda_min") {
  Eigen::Matrix2d m;
  m << 2, -1, -1, 1;
  CHECK(min_eigenvalue_exceeds(m, 0.38));
  CHECK_FALSE(min_eigenvalue_exceeds(m, 0.39));
}

TEST_CASE("convergence_rate on grounded paths") {
  const Eigen::MatrixXd L3 = laplacian(oracle::path_graph(3));
  CHECK(std::abs(convergence_rate(ground(L3, LeaderSet({1}, 3))) - 1.0) < 1e-12);
  CHECK(std::abs(convergence_rate(ground(L3, LeaderSet({0}, 3))) - kGolden) < 1e-12);
  const Eigen::MatrixXd L4 = laplacian(oracle::path_graph(4));
  CHECK(std::abs(convergence_rate(ground(L4, LeaderSet({0}, 4))) - kP4End) < 1e-12);
  CHECK(std::abs(convergence_rate(ground(L4, LeaderSet({0}, 4))) - oracle::jacobi_min(oracle::delete_rows_cols(L4, {0}))) < 1e-12);
  CHECK(std::abs(grounded_rate(L4, LeaderSet({1}, 4)) - kGolden) < 1e-12);
  GroundedSystem<double> empty;
  CHECK_THROWS_AS(convergence_rate(empty), GroundingError);
}

TEST_CASE("lambda_min > 0 on connected scenarios and never decreases when leaders are added") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = generate_connected({25, 10.0, 3.0, 50.0}, seed).graph;
    const Eigen::MatrixXd L = laplacian(g);
    std::vector<AgentId> ids;
    Rng rng(seed);
    double prev = 0;
    for (int k = 1; k <= 6; ++k) {
      AgentId c;
      do c = static_cast<AgentId>(uniform_below(rng, 25)); while (std::find(ids.begin(), ids.end(), c) != ids.end());
      ids.push_back(c);
      const double r = grounded_rate(L, LeaderSet(ids, 25));
      CHECK(r > 0);
      CHECK(r >= prev - 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("limit_state: P3 examples") {
  const Eigen::MatrixXd L = laplacian(oracle::path_graph(3));
  Eigen::MatrixXd x0(3, 1);
  x0 << 0, 0, 10;
  const auto xs = limit_state(L, LeaderSet({0, 2}, 3), x0);
  CHECK(xs(1, 0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(xs(0, 0) == 0);
  CHECK(xs(2, 0) == 10);

  x0 << 0, 3, -7;
  const auto single = limit_state(L, LeaderSet({0}, 3), x0);
  CHECK(single.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("limit_state: consensus fixed point and residual bound") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = generate_connected({30, 10.0, 3.0, 50.0}, seed).graph;
    const Eigen::MatrixXd L = laplacian(g);
    const LeaderSet leaders({2, 11, 17}, 30);

    Eigen::MatrixXd same = Eigen::MatrixXd::Constant(30, 2, 4.25);
    CHECK((limit_state(L, LeaderSet({4}, 30), same).array() - 4.25).abs().maxCoeff() < 1e-9);

    const Eigen::MatrixXd x0 = g.coords() * 100.0;
    const auto sys = ground<double>(L, leaders, x0(leaders.members(), Eigen::all));
    const auto xs = limit_state(sys);
    CHECK(limit_residual(sys, xs) <= 1e-9 * sys.leader_states.norm());
    // Every follower sits at the weighted mean of its neighbours.
    for (AgentId i : sys.follower_ids) {
      const Eigen::RowVectorXd mean = g.adjacency().row(i) * xs / weighted_indegree(g, i);
      CHECK((mean - xs.row(i)).norm() < 1e-8);
    }
  }
}

TEST_CASE("limit_state: unreachable followers") {
  // Two disjoint edges; the leader sits on the first.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  A(0, 1) = A(1, 0) = 1;
  A(2, 3) = A(3, 2) = 1;
  const Graph g(Points<double>::Zero(4, 2), A);
  CHECK_THROWS_WITH_AS(limit_state(laplacian(g), LeaderSet({0}, 4), Eigen::MatrixXd::Zero(4, 1)),
                       "unreachable followers", GroundingError);
}
