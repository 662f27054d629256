#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "leadsel/graph.hpp"
#include "leadsel/kmeans.hpp"

namespace leadsel {

enum class Algorithm { GreedyKLeader, Random, MaxDegree, AverageDegree, KMeans, HugeRandom };

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::GreedyKLeader, Algorithm::Random, Algorithm::MaxDegree,
    Algorithm::AverageDegree, Algorithm::KMeans, Algorithm::HugeRandom};

/// CLI / report name: greedy, random, max-degree, average-degree, kmeans, huge-random.
std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string algorithm_names();  // comma-separated list of valid names

/// Eigenvalues within this (relative) distance count as tied.
inline constexpr double kTieTolerance = 1e-10;

LeaderSet select_greedy_k_leader(const Graph& g, Index k);
LeaderSet select_random(Index n, Index k, std::uint64_t seed);
LeaderSet select_max_degree(const Graph& g, Index k);
LeaderSet select_average_degree(const Graph& g, Index k);
LeaderSet select_kmeans(const Graph& g, Index k, std::uint64_t seed, const KMeansOptions& options = {});
LeaderSet select_huge_random(const Graph& g, Index k, std::uint64_t samples, std::uint64_t seed);

/// Exact optimum of lambda_min(L_FF) over all k-subsets; lexicographically
/// smallest among ties.
LeaderSet select_exhaustive(const Graph& g, Index k);

struct SelectionOptions {
  std::uint64_t seed = 0;
  std::uint64_t huge_random_samples = 10000;
  KMeansOptions kmeans;
};

struct SelectionRecord {
  Algorithm algorithm{};
  LeaderSet leaders;
  double rate = 0;  // lambda_min of the grounded Laplacian
};

LeaderSet select_leaders(Algorithm a, const Graph& g, Index k, const SelectionOptions& options = {});

/// Selects and evaluates. `rate` is NaN when k == n (nothing to ground).
SelectionRecord make_selection_record(Algorithm a, const Graph& g, Index k, const SelectionOptions& options = {});

/// `algorithm,k,leaders(;-joined),lambda_min`
std::string to_csv_row(const SelectionRecord& r);

}  // namespace leadsel
