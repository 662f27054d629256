#include <doctest.h>

#include <cmath>

#include "leadsel/dynamics.hpp"
#include "oracles.hpp"

using namespace leadsel;

namespace {

// Leader 0 and follower 1 joined by a unit edge.
const Eigen::Matrix2d kPairL = (Eigen::Matrix2d() << 1, -1, -1, 1).finished();

SystemState<double> state(std::initializer_list<std::array<double, 2>> rows) {
  SystemState<double> s;
  s.positions.resize(static_cast<Index>(rows.size()), 2);
  Index i = 0;
  for (const auto& r : rows) s.positions.row(i++) << r[0], r[1];
  return s;
}

Graph p3_with_x(double x0, double x1, double x2) {
  Graph p = oracle::path_graph(3);
  Points<double> xy = Points<double>::Zero(3, 2);
  xy.col(0) << x0, x1, x2;
  return {xy, p.adjacency()};
}

}  // namespace

TEST_CASE("step_free: single follower") {
  const LeaderSet leader({0}, 2);
  const auto next = step_free(state({{0, 0}, {100, 0}}), kPairL, leader, 0.001);
  CHECK(next.positions(1, 0) == doctest::Approx(99.9).epsilon(1e-15));
  CHECK(next.positions(0, 0) == 0);
  CHECK(next.time == doctest::Approx(0.001));

  const auto fixed = state({{3, -2}, {3, -2}});
  CHECK(step_free(fixed, kPairL, leader, 0.001).positions == fixed.positions);
  const auto s = state({{0, 0}, {100, 7}});
  CHECK(step_free(s, kPairL, leader, 0.0).positions == s.positions);
}

TEST_CASE("step_capped: saturated and unsaturated") {
  const LeaderSet leader({0}, 2);
  const auto far = step_capped(state({{0, 0}, {100, 0}}), kPairL, leader, 0.001, 15.4);
  CHECK(far.positions(1, 0) == doctest::Approx(99.9846).epsilon(1e-14));

  const auto near = state({{0, 0}, {3, 4}});
  CHECK(step_capped(near, kPairL, leader, 0.001, 15.4).positions == step_free(near, kPairL, leader, 0.001).positions);

  const auto v = capped_velocity(state({{0, 0}, {-30, -40}}), kPairL, leader, 15.4);
  CHECK(v(1, 0) == doctest::Approx(9.24).epsilon(1e-14));
  CHECK(v(1, 1) == doctest::Approx(12.32).epsilon(1e-14));
  CHECK(v.row(0).isZero(0));

  const auto va = capped_velocity(state({{0, 0}, {-30, -40}}), kPairL, leader, 15.4, CapMode::Axis);
  CHECK(va(1, 0) == 15.4);
  CHECK(va(1, 1) == 15.4);
}

TEST_CASE("check_converged boundary is inclusive") {
  const Eigen::MatrixXd x_star = Eigen::MatrixXd::Zero(3, 2);
  auto s = state({{0, 0}, {0, 0}, {0, 0}});
  CHECK(check_converged(s, x_star, 5e-8));
  s.positions(1, 0) = 5e-8;
  CHECK(axis_deviation(s, x_star)(0) == 5e-8);
  CHECK(check_converged(s, x_star, 5e-8));
  s.positions(1, 0) = std::nextafter(5e-8, 1.0);
  CHECK_FALSE(check_converged(s, x_star, 5e-8));
  s.positions(1, 0) = 0;
  s.positions(2, 1) = 6e-8;
  CHECK_FALSE(check_converged(s, x_star, 5e-8));
}

TEST_CASE("simulate: already at equilibrium") {
  const Graph g = p3_with_x(0.2, 0.2, 0.2);
  for (bool capped : {false, true}) {
    SimulationConfig cfg;
    if (capped) cfg.speed_cap = 15.4;
    const auto r = simulate(g, LeaderSet({1}, 3), cfg);
    CHECK(r.status == SimulationStatus::Converged);
    CHECK(r.t_e == 0);
    CHECK(r.steps == 0);
  }
}

TEST_CASE("simulate: P3 with leaders at 0 and 10 cm matches the scalar solution") {
  const Graph g = p3_with_x(0.0, 0.0, 0.1);  // meters
  SimulationConfig cfg;
  const auto r = simulate(g, LeaderSet({0, 2}, 3), cfg);
  REQUIRE(r.status == SimulationStatus::Converged);

  // Discrete oracle: the deviation shrinks by (1 - 2 t_s) per step from 5 cm.
  long steps = 0;
  for (double dev = 5.0; dev > cfg.error; dev *= 1.0 - 2.0 * cfg.step) ++steps;
  CHECK(r.steps == steps);
  CHECK(r.steps == 9202);

  const double analytic = 0.5 * std::log(5.0 / cfg.error);  // x(t) = 5 - 5 exp(-2t)
  CHECK(std::abs(r.t_e - analytic) <= 0.02 * analytic);
  CHECK(r.final_deviation(0) <= cfg.error);
}

TEST_CASE("simulate: iteration cap") {
  SimulationConfig cfg;
  cfg.max_steps = 1;
  const auto r = simulate(p3_with_x(0.0, 5.0, 9.0), LeaderSet({0}, 3), cfg);
  CHECK(r.status == SimulationStatus::MaxIterations);
  CHECK(r.steps == 1);
}

TEST_CASE("simulate: invalid configuration") {
  SimulationConfig cfg;
  cfg.step = 0;
  CHECK_THROWS_AS(simulate(oracle::path_graph(3), LeaderSet({0}, 3), cfg), ParameterError);
  cfg = {};
  cfg.speed_cap = -1.0;
  CHECK_THROWS_AS(simulate(oracle::path_graph(3), LeaderSet({0}, 3), cfg), ParameterError);
}

TEST_CASE("simulate: unreachable followers propagate") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  A(0, 1) = A(1, 0) = A(2, 3) = A(3, 2) = 1;
  Points<double> xy = Points<double>::Random(4, 2);
  CHECK_THROWS_AS(simulate(Graph(xy, A), LeaderSet({0}, 4), {}), GroundingError);
}

TEST_CASE("simulate: dynamics invariants on random scenarios") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Graph g = generate_connected({15, 10.0, 3.5, 50.0}, seed).graph;
    const LeaderSet leaders({1, 8}, 15);
    const Eigen::MatrixXd L = laplacian(g);
    const SystemState<double> start = initial_state(g);
    const Eigen::MatrixXd x_star = limit_state(L, leaders, start.positions);
    REQUIRE(euler_stable(L, leaders, 1e-3));

    SimulationConfig free_cfg;
    Eigen::Vector2d prev = axis_deviation(start, x_star);
    bool leaders_fixed = true, decreasing = true;
    const auto rf = simulate(g, leaders, free_cfg, [&](long, const SystemState<double>& s, const Points<double>&) {
      for (AgentId l : leaders) leaders_fixed &= (s.positions.row(l) == start.positions.row(l));
      const Eigen::Vector2d d = axis_deviation(s, x_star);
      for (int a = 0; a < 2; ++a)
        if (prev(a) > 0) decreasing &= d(a) < prev(a);
      prev = d;
    });
    CHECK(leaders_fixed);
    CHECK(decreasing);
    REQUIRE(rf.status == SimulationStatus::Converged);
    CHECK((rf.final_deviation.array() <= free_cfg.error).all());
    CHECK(rf.euler_stable);

    SimulationConfig capped_cfg;
    capped_cfg.speed_cap = 15.4;
    double max_speed = 0;
    const auto rc = simulate(g, leaders, capped_cfg, [&](long, const SystemState<double>& s, const Points<double>& v) {
      for (AgentId l : leaders) leaders_fixed &= (s.positions.row(l) == start.positions.row(l));
      max_speed = std::max(max_speed, v.rowwise().norm().maxCoeff());
    });
    CHECK(leaders_fixed);
    CHECK(max_speed <= 15.4 + 1e-12);
    REQUIRE(rc.status == SimulationStatus::Converged);
    CHECK((rc.final_deviation.array() <= capped_cfg.error).all());
    CHECK(rc.t_e >= rf.t_e);
  }
}

TEST_CASE("euler_stable flags a stiff graph") {
  Graph p = oracle::path_graph(3, 2000.0);
  const auto r = simulate(p, LeaderSet({0}, 3), [] {
    SimulationConfig c;
    c.max_steps = 10;
    return c;
  }());
  CHECK_FALSE(r.euler_stable);
  CHECK_FALSE(euler_stable(laplacian(p), LeaderSet({0}, 3), 1e-3));
}
