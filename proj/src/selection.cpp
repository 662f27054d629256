#include "leadsel/selection.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "leadsel/combinatorics.hpp"
#include "leadsel/spectral.hpp"

namespace leadsel {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"greedy",         "random", "max-degree",
                                                     "average-degree", "kmeans", "huge-random"};

void check_k(Index k, Index n, bool allow_all) {
  if (k < 1) throw ParameterError("k must be >= 1");
  if (allow_all ? k > n : k >= n)
    throw ParameterError("k must be " + std::string(allow_all ? "<= " : "< ") + std::to_string(n));
}

double tie_band(double best) { return kTieTolerance * (1.0 + std::abs(best)); }

// Agents ordered by key ascending, lowest id first among equal keys.
LeaderSet smallest_keys(const Vector<double>& key, Index k) {
  std::vector<AgentId> order(static_cast<std::size_t>(key.size()));
  std::iota(order.begin(), order.end(), AgentId{0});
  std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) { return key(a) < key(b); });
  order.resize(static_cast<std::size_t>(k));
  return LeaderSet(std::move(order), key.size());
}

// Running arg-max of lambda_min over candidate subsets. Candidates that cannot
// reach the current tie band are rejected with a Cholesky test before any
// eigensolve.
class BestSubset {
 public:
  explicit BestSubset(const Matrix<double>& L) : L_(L) {}

  void offer(const LeaderSet& s) {
    const auto followers = s.followers();
    const Matrix<double> lff = L_(followers, followers);
    if (best_ && !min_eigenvalue_exceeds(lff, rate_ - tie_band(rate_))) return;
    const double rate = smallest_eigenvalue(lff);
    if (!best_ || rate > rate_ + tie_band(rate_) ||
        (rate >= rate_ - tie_band(rate_) && s < *best_)) {
      best_ = s;
      rate_ = rate;
    }
  }

  const LeaderSet& best() const { return *best_; }

 private:
  const Matrix<double>& L_;
  std::optional<LeaderSet> best_;
  double rate_ = 0;
};

}  // namespace

std::string_view algorithm_name(Algorithm a) { return kNames[static_cast<std::size_t>(a)]; }

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Algorithm>(i);
  return std::nullopt;
}

std::string algorithm_names() {
  std::string out;
  for (auto n : kNames) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

LeaderSet select_greedy_k_leader(const Graph& g, Index k) {
  const Index n = g.size();
  check_k(k, n, false);
  const Matrix<double> L = laplacian(g);
  std::vector<AgentId> chosen;
  for (Index round = 0; round < k; ++round) {
    AgentId best = -1;
    double best_rate = 0;
    for (AgentId c = 0; c < n; ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      std::vector<AgentId> trial = chosen;
      trial.push_back(c);
      const double rate = grounded_rate(L, LeaderSet(std::move(trial), n));
      if (best < 0 || rate > best_rate + tie_band(best_rate)) {
        best = c;
        best_rate = rate;
      }
    }
    chosen.push_back(best);
  }
  return LeaderSet(std::move(chosen), n);
}

LeaderSet select_random(Index n, Index k, std::uint64_t seed) {
  check_k(k, n, true);
  std::vector<AgentId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), AgentId{0});
  Rng rng(seed);
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  return LeaderSet(std::move(pool), n);
}

LeaderSet select_max_degree(const Graph& g, Index k) {
  check_k(k, g.size(), true);
  return smallest_keys(-weighted_indegrees(g), k);
}

LeaderSet select_average_degree(const Graph& g, Index k) {
  check_k(k, g.size(), true);
  const Vector<double> deg = weighted_indegrees(g);
  const double mean = deg.mean();
  return smallest_keys((deg.array() - mean).abs().matrix(), k);
}

LeaderSet select_kmeans(const Graph& g, Index k, std::uint64_t seed, const KMeansOptions& options) {
  const Index n = g.size();
  check_k(k, n, true);
  const ClusterAssignment clusters = kmeans_cluster(g.coords(), k, seed, options);
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  std::vector<AgentId> chosen;
  for (Index c = 0; c < k; ++c) {
    // Closest agent to the center; next closest when already taken.
    const Vector<double> d2 = (g.coords().rowwise() - clusters.centers.row(c)).rowwise().squaredNorm();
    AgentId pick = -1;
    for (AgentId i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (pick < 0 || d2(i) < d2(pick)) pick = i;
    }
    taken[static_cast<std::size_t>(pick)] = 1;
    chosen.push_back(pick);
  }
  return LeaderSet(std::move(chosen), n);
}

LeaderSet select_exhaustive(const Graph& g, Index k) {
  const Index n = g.size();
  check_k(k, n, false);
  const Matrix<double> L = laplacian(g);
  BestSubset best(L);
  std::vector<AgentId> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), AgentId{0});
  do {
    best.offer(LeaderSet(c, n));
  } while (next_combination(c, n));
  return best.best();
}

LeaderSet select_huge_random(const Graph& g, Index k, std::uint64_t samples, std::uint64_t seed) {
  const Index n = g.size();
  check_k(k, n, false);
  if (samples < 1) throw ParameterError("samples must be >= 1");
  const BigInt total = binomial(n, k);
  if (total <= samples) return select_exhaustive(g, k);

  const Matrix<double> L = laplacian(g);
  BestSubset best(L);
  Rng rng(seed);
  for (std::uint64_t s = 0; s < samples; ++s) best.offer(unrank_combination(uniform_rank(rng, total), n, k));
  return best.best();
}

LeaderSet select_leaders(Algorithm a, const Graph& g, Index k, const SelectionOptions& o) {
  switch (a) {
    case Algorithm::GreedyKLeader: return select_greedy_k_leader(g, k);
    case Algorithm::Random: return select_random(g.size(), k, o.seed);
    case Algorithm::MaxDegree: return select_max_degree(g, k);
    case Algorithm::AverageDegree: return select_average_degree(g, k);
    case Algorithm::KMeans: return select_kmeans(g, k, o.seed, o.kmeans);
    case Algorithm::HugeRandom: return select_huge_random(g, k, o.huge_random_samples, o.seed);
  }
  throw ParameterError("unknown algorithm");
}

SelectionRecord make_selection_record(Algorithm a, const Graph& g, Index k, const SelectionOptions& o) {
  SelectionRecord r{a, select_leaders(a, g, k, o), std::numeric_limits<double>::quiet_NaN()};
  if (r.leaders.size() < g.size()) r.rate = grounded_rate(laplacian(g), r.leaders);
  return r;
}

std::string to_csv_row(const SelectionRecord& r) {
  std::ostringstream out;
  out << algorithm_name(r.algorithm) << ',' << r.leaders.size() << ',';
  for (std::size_t i = 0; i < r.leaders.members().size(); ++i) out << (i ? ";" : "") << r.leaders[i];
  out << ',' << format_double(r.rate);
  return out.str();
}

}  // namespace leadsel
