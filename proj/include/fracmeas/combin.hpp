#pragma once

// Lexicographic k-subset indexing over {0,...,n-1} for dense exterior-algebra
// coefficient arrays, together with the merge sign used by wedge and interior
// products. Subsets are stored as bitmasks (n <= 12 fits in 16 bits).

#include <cstdint>
#include <vector>

namespace fracmeas {

inline constexpr int kMaxDim = 12;

// Exact binomial coefficient for 0 <= k <= n <= 32.
long long binomial(int n, int k);

// Enumeration of all k-element subsets of {0,...,n-1} in lexicographic order
// of the sorted index tuples, plus the inverse mask -> rank lookup.
struct SubsetTable {
  int n = 0;
  int k = 0;
  std::vector<std::uint16_t> masks;  // size C(n,k), lexicographic
  std::vector<std::int32_t> rankOf;  // size 1<<n, -1 where popcount != k

  int rank(std::uint16_t mask) const { return rankOf[mask]; }
};

// Cached table for the given (n, k); valid for 0 <= k <= n <= kMaxDim.
const SubsetTable& subsetTable(int n, int k);

// Sign of the permutation that sorts the concatenation (sorted A, sorted B)
// of two disjoint index sets, i.e. the sign in e_A ^ e_B = sign * e_{A|B}.
inline int mergeSign(std::uint16_t a, std::uint16_t b) {
  int inversions = 0;
  for (std::uint16_t rest = b; rest != 0; rest &= static_cast<std::uint16_t>(rest - 1)) {
    const int bit = __builtin_ctz(rest);
    inversions += __builtin_popcount(a >> (bit + 1));
  }
  return (inversions & 1) ? -1 : 1;
}

}  // namespace fracmeas
