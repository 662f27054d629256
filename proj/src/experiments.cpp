#include "leadsel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace leadsel {

std::string_view mode_name(Mode m) { return m == Mode::Free ? "free" : "capped"; }

int SweepConfig::repeats_for(Index k) const {
  if (repeats) return *repeats;
  return k <= 9 ? 100 : 30;
}

void SweepConfig::validate() const {
  if (scenario.n < 2) throw ParameterError("sweep needs n >= 2");
  if (!(scenario.side > 0) || !(scenario.radius >= 0) || !(scenario.weight_max > 0))
    throw ParameterError("invalid scenario geometry");
  for (Index k : k_values)
    if (k < 1 || k > scenario.n - 1) throw ParameterError("k values must lie in [1, n-1]");
  if (repeats && *repeats < 1) throw ParameterError("repeats must be >= 1");
  if (!(speed_cap > 0)) throw ParameterError("speed cap must be > 0");
  if (huge_random_samples < 1) throw ParameterError("huge-random samples must be >= 1");
  if (max_regenerations < 1) throw ParameterError("max_regenerations must be >= 1");
  sim.validate();
}

SweepConfig paper_preset() {
  SweepConfig c;
  c.scenario = {100, 10.0, 3.0, 50.0};
  c.k_values.resize(90);
  std::iota(c.k_values.begin(), c.k_values.end(), Index{1});
  return c;
}

SweepConfig desk_preset() {
  SweepConfig c;
  c.scenario = {30, 10.0, 3.0, 50.0};
  c.k_values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  c.repeats = 20;
  return c;
}

std::uint64_t trial_seed(std::uint64_t master_seed, Index k, int trial_index) {
  return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(k)), static_cast<std::uint64_t>(trial_index));
}

std::uint64_t selector_seed(std::uint64_t seed, Algorithm a, int attempt) {
  return derive_seed(derive_seed(seed, 0x100 + static_cast<std::uint64_t>(a)), static_cast<std::uint64_t>(attempt));
}

TrialRecord run_trial(const SweepConfig& cfg, Algorithm a, Index k, int trial_index) {
  TrialRecord rec;
  rec.algorithm = a;
  rec.k = k;
  rec.trial_index = trial_index;
  rec.seed = trial_seed(cfg.master_seed, k, trial_index);

  SimulationConfig free_cfg = cfg.sim;
  free_cfg.speed_cap.reset();
  SimulationConfig capped_cfg = cfg.sim;
  capped_cfg.speed_cap = cfg.speed_cap;

  SelectionOptions sel;
  sel.huge_random_samples = cfg.huge_random_samples;

  // Graph-level rejections (disconnected, Euler-unstable) do not depend on the
  // algorithm, so every algorithm lands on the same accepted graph.
  for (int attempt = 0; attempt < cfg.max_regenerations; ++attempt) {
    rec.regenerations = attempt;
    rec.graph_seed = attempt == 0 ? rec.seed : derive_seed(rec.seed, static_cast<std::uint64_t>(attempt));
    const Graph g = generate_geometric(cfg.scenario, rec.graph_seed);
    if (!is_connected(g)) continue;
    const Matrix<double> L = laplacian(g);
    if (cfg.sim.step * largest_eigenvalue(L) >= 2.0) continue;

    sel.seed = selector_seed(rec.seed, a, attempt);
    rec.leaders = select_leaders(a, g, k, sel);
    rec.lambda_min = grounded_rate(L, rec.leaders);
    try {
      rec.free = simulate(g, rec.leaders, free_cfg);
      if (rec.free.status != SimulationStatus::Converged) continue;
      rec.capped = simulate(g, rec.leaders, capped_cfg);
      if (rec.capped.status != SimulationStatus::Converged) continue;
    } catch (const GroundingError&) {
      continue;
    }
    return rec;
  }
  rec.failed = true;
  rec.regenerations = cfg.max_regenerations;
  rec.error = "no converging scenario after " + std::to_string(cfg.max_regenerations) + " regenerations";
  return rec;
}

const ReportCell* ExperimentReport::find(Algorithm a, Index k, Mode m) const {
  for (const auto& c : cells)
    if (c.algorithm == a && c.k == k && c.mode == m) return &c;
  return nullptr;
}

ExperimentReport aggregate(const SweepConfig& cfg, const std::vector<TrialRecord>& trials) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ExperimentReport report;
  for (Algorithm a : cfg.algorithms) {
    for (Index k : cfg.k_values) {
      std::vector<const TrialRecord*> cell;
      int failures = 0;
      for (const auto& t : trials) {
        if (t.algorithm != a || t.k != k) continue;
        if (t.failed)
          ++failures;
        else
          cell.push_back(&t);
      }
      std::sort(cell.begin(), cell.end(),
                [](const TrialRecord* x, const TrialRecord* y) { return x->trial_index < y->trial_index; });

      for (Mode m : {Mode::Free, Mode::Capped}) {
        CellStats s;
        s.failures = failures;
        s.trials = static_cast<int>(cell.size());
        if (cell.empty()) {
          s.mean_t_e = s.min_t_e = s.max_t_e = s.mean_lambda_min = nan;
        } else {
          double sum_t = 0, sum_rate = 0;
          s.min_t_e = std::numeric_limits<double>::infinity();
          s.max_t_e = -std::numeric_limits<double>::infinity();
          for (const TrialRecord* t : cell) {
            const double te = (m == Mode::Free ? t->free : t->capped).t_e;
            sum_t += te;
            sum_rate += t->lambda_min;
            s.min_t_e = std::min(s.min_t_e, te);
            s.max_t_e = std::max(s.max_t_e, te);
          }
          s.mean_t_e = std::clamp(sum_t / s.trials, s.min_t_e, s.max_t_e);
          s.mean_lambda_min = sum_rate / s.trials;
        }
        report.cells.push_back({a, k, m, s});
      }
    }
  }
  return report;
}

SweepResult run_sweep(const SweepConfig& cfg, int jobs) {
  cfg.validate();
  struct Task {
    Algorithm a;
    Index k;
    int trial;
  };
  std::vector<Task> tasks;
  for (Algorithm a : cfg.algorithms)
    for (Index k : cfg.k_values)
      for (int t = 0; t < cfg.repeats_for(k); ++t) tasks.push_back({a, k, t});

  SweepResult result;
  result.trials.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      const Task& t = tasks[i];
      try {
        result.trials[i] = run_trial(cfg, t.a, t.k, t.trial);
      } catch (const std::exception& e) {
        TrialRecord& r = result.trials[i];
        r.algorithm = t.a;
        r.k = t.k;
        r.trial_index = t.trial;
        r.seed = trial_seed(cfg.master_seed, t.k, t.trial);
        r.failed = true;
        r.error = e.what();
      }
    }
  };

  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::jthread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();

  result.report = aggregate(cfg, result.trials);
  return result;
}

}  // namespace leadsel
