#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "leadsel/graph.hpp"

namespace leadsel {

using BigInt = boost::multiprecision::cpp_int;

/// Exact C(n, k); zero when k < 0 or k > n.
BigInt binomial(Index n, Index k);

/// The `rank`-th (1-based) k-subset of {0..n-1} in lexicographic order.
LeaderSet unrank_combination(const BigInt& rank, Index n, Index k);

/// Inverse of unrank_combination.
BigInt rank_combination(const LeaderSet& subset);

/// Uniform draw from [1, bound].
BigInt uniform_rank(Rng& rng, const BigInt& bound);

/// Advances a sorted k-subset of {0..n-1} to its lexicographic successor.
/// Returns false (and leaves `c` unspecified) after the last subset.
bool next_combination(std::vector<AgentId>& c, Index n);

}  // namespace leadsel
