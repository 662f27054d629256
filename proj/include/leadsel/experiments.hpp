#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leadsel/dynamics.hpp"
#include "leadsel/selection.hpp"

namespace leadsel {

enum class Mode { Free, Capped };
std::string_view mode_name(Mode m);

struct SweepConfig {
  GeometricParams scenario;
  std::vector<Index> k_values;
  std::optional<int> repeats;  // empty: default schedule, see repeats_for()
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  SimulationConfig sim;        // speed_cap is the cap used for the capped mode
  double speed_cap = 15.4;     // cm/s
  std::uint64_t huge_random_samples = 10000;
  std::uint64_t master_seed = 1;
  int max_regenerations = 100;

  /// Repeats for one k: `repeats` when set, else 100 for k <= 9 and 30 above.
  int repeats_for(Index k) const;
  void validate() const;
};

/// 100 agents in a 10 m square, 3 m radius, weights (0, 50], k = 1..90.
SweepConfig paper_preset();
/// 30 agents, k = 1..9, 20 repeats.
SweepConfig desk_preset();

struct TrialRecord {
  Algorithm algorithm{};
  Index k = 0;
  int trial_index = 0;
  std::uint64_t seed = 0;        // trial seed shared by every algorithm
  std::uint64_t graph_seed = 0;  // seed of the accepted graph draw
  int regenerations = 0;         // rejected graph draws before acceptance
  bool failed = false;
  std::string error;
  LeaderSet leaders;
  double lambda_min = 0;
  SimulationOutcome free;
  SimulationOutcome capped;
};

/// Seed of the graph for (k, trial); identical across algorithms.
std::uint64_t trial_seed(std::uint64_t master_seed, Index k, int trial_index);
/// Seed of the selector's randomness for one trial and algorithm.
std::uint64_t selector_seed(std::uint64_t trial_seed, Algorithm a, int attempt);

TrialRecord run_trial(const SweepConfig& cfg, Algorithm a, Index k, int trial_index);

struct CellStats {
  int trials = 0;
  double mean_t_e = 0;
  double min_t_e = 0;
  double max_t_e = 0;
  double mean_lambda_min = 0;
  int failures = 0;

  double range_t_e() const { return max_t_e - min_t_e; }
};

struct ReportCell {
  Algorithm algorithm{};
  Index k = 0;
  Mode mode = Mode::Free;
  CellStats stats;
};

struct ExperimentReport {
  std::vector<ReportCell> cells;  // ordered by algorithm, k, mode

  const ReportCell* find(Algorithm a, Index k, Mode m) const;
};

/// Folds trials in the given order-independent way into per-cell statistics.
ExperimentReport aggregate(const SweepConfig& cfg, const std::vector<TrialRecord>& trials);

struct SweepResult {
  std::vector<TrialRecord> trials;  // ordered by algorithm, k, trial_index
  ExperimentReport report;
};

/// Runs every (algorithm, k, trial) with up to `jobs` worker threads.
SweepResult run_sweep(const SweepConfig& cfg, int jobs = 1);

/// `algorithm,k,mode,trials,mean_t_e,min_t_e,max_t_e,range_t_e,mean_lambda_min,failures`
void write_report_csv(std::ostream& out, const ExperimentReport& r);
std::string report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& text);

/// Writes report.csv, report.json and per-figure plot data
/// (time_/rate_/range_<algorithm>_<mode>.dat) into `dir`.
void emit_report(const std::string& dir, const ExperimentReport& r);

/// Algorithms ordered by their mean lambda_min over all k (best first).
std::vector<std::pair<Algorithm, double>> rank_by_rate(const ExperimentReport& r);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace leadsel
