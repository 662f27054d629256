#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string_view>

#include "leadsel/graph.hpp"
#include "leadsel/spectral.hpp"

namespace leadsel {

// Geometry is generated in meters; the simulator works in centimeters so that
// the convergence error and the speed cap keep their natural units.
inline constexpr double kCentimetersPerMeter = 100.0;

/// How the speed cap is applied: to the 2D velocity magnitude, or to each
/// axis component independently.
enum class CapMode { Vector, Axis };

struct SimulationConfig {
  double step = 1e-3;                   // t_s, seconds
  double error = 5e-8;                  // e, centimeters
  long max_steps = 2'000'000;           // N
  std::optional<double> speed_cap;      // v_max, cm/s; empty = free dynamics
  CapMode cap_mode = CapMode::Vector;
  long confirm_steps = 1000;            // capped runs must stay inside the error ball this long

  void validate() const {
    if (!(step > 0)) throw ParameterError("step must be > 0");
    if (!(error > 0)) throw ParameterError("error must be > 0");
    if (max_steps < 1) throw ParameterError("max_steps must be >= 1");
    if (speed_cap && !(*speed_cap > 0)) throw ParameterError("speed cap must be > 0");
    if (confirm_steps < 0) throw ParameterError("confirm_steps must be >= 0");
  }
};

template <typename Scalar>
struct SystemState {
  Points<Scalar> positions;  // column 0 = x, column 1 = y
  Scalar time = 0;
};

/// Consensus velocity -L x with leader rows forced to zero.
template <typename Scalar, typename Derived>
Points<Scalar> consensus_velocity(const SystemState<Scalar>& s, const Eigen::MatrixBase<Derived>& L,
                                  const LeaderSet& leaders) {
  Points<Scalar> v = -(L * s.positions);
  for (AgentId l : leaders) v.row(l).setZero();
  return v;
}

/// Rescales each agent's velocity so its magnitude (or each component, in
/// Axis mode) does not exceed `cap`.
template <typename Scalar>
void apply_speed_cap(Points<Scalar>& v, Scalar cap, CapMode mode) {
  if (mode == CapMode::Axis) {
    v = v.cwiseMax(-cap).cwiseMin(cap);
    return;
  }
  for (Index i = 0; i < v.rows(); ++i) {
    const Scalar speed = v.row(i).norm();
    if (speed > cap) v.row(i) *= cap / speed;
  }
}

template <typename Scalar, typename Derived>
Points<Scalar> capped_velocity(const SystemState<Scalar>& s, const Eigen::MatrixBase<Derived>& L,
                               const LeaderSet& leaders, Scalar cap, CapMode mode = CapMode::Vector) {
  Points<Scalar> v = consensus_velocity(s, L, leaders);
  apply_speed_cap(v, cap, mode);
  return v;
}

/// Explicit Euler step of x' = -L x; leaders stay put.
template <typename Scalar, typename Derived>
SystemState<Scalar> step_free(const SystemState<Scalar>& s, const Eigen::MatrixBase<Derived>& L,
                              const LeaderSet& leaders, Scalar ts) {
  return {s.positions + ts * consensus_velocity(s, L, leaders), s.time + ts};
}

template <typename Scalar, typename Derived>
SystemState<Scalar> step_capped(const SystemState<Scalar>& s, const Eigen::MatrixBase<Derived>& L,
                                const LeaderSet& leaders, Scalar ts, Scalar cap, CapMode mode = CapMode::Vector) {
  return {s.positions + ts * capped_velocity(s, L, leaders, cap, mode), s.time + ts};
}

/// Per-axis Euclidean distance from the limit state.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> axis_deviation(const SystemState<Scalar>& s, const LimitState<Scalar>& x_star) {
  return (s.positions - x_star).colwise().norm().transpose();
}

/// Both axis deviations within `e` (inclusive).
template <typename Scalar>
bool check_converged(const SystemState<Scalar>& s, const LimitState<Scalar>& x_star, Scalar e) {
  return (axis_deviation(s, x_star).array() <= e).all();
}

enum class SimulationStatus { Converged, MaxIterations };
std::string_view status_name(SimulationStatus s);

struct SimulationOutcome {
  SimulationStatus status = SimulationStatus::MaxIterations;
  double t_e = 0;   // seconds; meaningful when Converged
  long steps = 0;   // hitting step when Converged, otherwise steps taken
  Eigen::Vector2d final_deviation = Eigen::Vector2d::Zero();  // cm, per axis
  double lambda_max = 0;     // largest eigenvalue of L_FF
  bool euler_stable = true;  // step * lambda_max < 2
};

/// Called after every step with the new state and the velocity just applied.
using StepObserver = std::function<void(long step, const SystemState<double>&, const Points<double>& velocity)>;

/// Agent coordinates converted to centimeters.
SystemState<double> initial_state(const Graph& g);

/// Runs the leader-follower protocol from the graph's coordinates until the
/// state stays within `cfg.error` of the limit state, or `cfg.max_steps`.
SimulationOutcome simulate(const Graph& g, const LeaderSet& leaders, const SimulationConfig& cfg,
                           const StepObserver& observer = {});

/// True when explicit Euler with step `ts` is contractive on L_FF.
bool euler_stable(const Matrix<double>& L, const LeaderSet& leaders, double ts);

}  // namespace leadsel
