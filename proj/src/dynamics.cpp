#include "leadsel/dynamics.hpp"

namespace leadsel {

std::string_view status_name(SimulationStatus s) {
  return s == SimulationStatus::Converged ? "Converged" : "MaxIterations";
}

SystemState<double> initial_state(const Graph& g) { return {g.coords() * kCentimetersPerMeter, 0.0}; }

bool euler_stable(const Matrix<double>& L, const LeaderSet& leaders, double ts) {
  const auto f = leaders.followers();
  if (f.empty()) return true;
  return ts * largest_eigenvalue(L(f, f)) < 2.0;
}

SimulationOutcome simulate(const Graph& g, const LeaderSet& leaders, const SimulationConfig& cfg,
                           const StepObserver& observer) {
  cfg.validate();
  if (leaders.universe() != g.size()) throw ParameterError("leader set does not match graph size");

  const Matrix<double> L = laplacian(g);
  SystemState<double> s = initial_state(g);
  SimulationOutcome out;

  if (leaders.size() == g.size()) {
    // Nothing moves; the initial state is the limit.
    out.status = SimulationStatus::Converged;
    return out;
  }
  const LimitState<double> x_star = limit_state(L, leaders, s.positions);
  const auto followers = leaders.followers();
  out.lambda_max = largest_eigenvalue(L(followers, followers));
  out.euler_stable = cfg.step * out.lambda_max < 2.0;

  const bool capped = cfg.speed_cap.has_value();
  const long confirm = capped ? cfg.confirm_steps : 0;
  const double ts = cfg.step;

  Points<double> v(g.size(), 2);
  long hit = check_converged(s, x_star, cfg.error) ? 0 : -1;
  long step = 0;
  for (;;) {
    if (hit >= 0 && step - hit >= confirm) break;
    if (hit < 0 && step >= cfg.max_steps) break;
    ++step;

    v.noalias() = -(L * s.positions);
    for (AgentId l : leaders) v.row(l).setZero();
    if (capped) apply_speed_cap(v, *cfg.speed_cap, cfg.cap_mode);
    s.positions.noalias() += ts * v;
    s.time = static_cast<double>(step) * ts;
    if (observer) observer(step, s, v);

    if (check_converged(s, x_star, cfg.error)) {
      if (hit < 0) hit = step;
    } else {
      hit = -1;
    }
  }

  out.final_deviation = axis_deviation(s, x_star);
  if (hit >= 0) {
    out.status = SimulationStatus::Converged;
    out.steps = hit;
    out.t_e = static_cast<double>(hit) * ts;
  } else {
    out.status = SimulationStatus::MaxIterations;
    out.steps = step;
  }
  return out;
}

}  // namespace leadsel
