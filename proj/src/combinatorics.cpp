#include "leadsel/combinatorics.hpp"

#include <string>

namespace leadsel {

BigInt binomial(Index n, Index k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  // c stays integral: after step i it equals C(n - k + i, i).
  for (Index i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

LeaderSet unrank_combination(const BigInt& rank, Index n, Index k) {
  if (k < 1 || k > n) throw ParameterError("unrank_combination requires 1 <= k <= n");
  const BigInt total = binomial(n, k);
  if (rank < 1 || rank > total)
    throw ParameterError("combination rank out of range [1, " + total.str() + "]");

  BigInt remaining = rank;
  std::vector<AgentId> out;
  out.reserve(static_cast<std::size_t>(k));
  AgentId c = 0;
  for (Index slot = 0; slot < k; ++slot) {
    // Subsets whose next element is c: choose the rest from (c, n).
    for (;; ++c) {
      const BigInt block = binomial(n - 1 - c, k - 1 - slot);
      if (remaining <= block) break;
      remaining -= block;
    }
    out.push_back(c++);
  }
  return LeaderSet(std::move(out), n);
}

BigInt rank_combination(const LeaderSet& subset) {
  const Index n = subset.universe();
  const Index k = subset.size();
  BigInt rank = 1;
  AgentId c = 0;
  for (Index slot = 0; slot < k; ++slot) {
    for (; c < subset[static_cast<std::size_t>(slot)]; ++c) rank += binomial(n - 1 - c, k - 1 - slot);
    ++c;
  }
  return rank;
}

BigInt uniform_rank(Rng& rng, const BigInt& bound) {
  if (bound < 1) throw ParameterError("uniform_rank bound must be >= 1");
  if (bound <= std::numeric_limits<std::uint64_t>::max()) {
    return BigInt(uniform_below(rng, bound.convert_to<std::uint64_t>())) + 1;
  }
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
  for (;;) {
    BigInt r = 0;
    for (unsigned have = 0; have < bits; have += 64) r = (r << 64) | BigInt(rng());
    r >>= (bits + 63) / 64 * 64 - bits;
    if (r < bound) return r + 1;
  }
}

bool next_combination(std::vector<AgentId>& c, Index n) {
  const Index k = static_cast<Index>(c.size());
  Index i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace leadsel
