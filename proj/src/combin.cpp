#include "fracmeas/combin.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fracmeas {

long long binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

namespace {

SubsetTable buildTable(int n, int k) {
  SubsetTable table;
  table.n = n;
  table.k = k;
  table.rankOf.assign(std::size_t{1} << n, -1);

  // Standard lexicographic combination walk over sorted index tuples.
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  const long long total = binomial(n, k);
  table.masks.reserve(static_cast<std::size_t>(total));
  for (long long c = 0; c < total; ++c) {
    std::uint16_t mask = 0;
    for (int i = 0; i < k; ++i) mask |= static_cast<std::uint16_t>(1u << idx[i]);
    table.rankOf[mask] = static_cast<std::int32_t>(table.masks.size());
    table.masks.push_back(mask);
    // Advance to the next combination.
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (k == 0) {
    table.masks.assign(1, 0);
    table.rankOf[0] = 0;
  }
  return table;
}

}  // namespace

const SubsetTable& subsetTable(int n, int k) {
  if (n < 0 || n > kMaxDim || k < 0 || k > n) {
    throw std::invalid_argument("subsetTable: need 0 <= k <= n <= 12");
  }
  static std::array<std::array<std::unique_ptr<SubsetTable>, kMaxDim + 1>, kMaxDim + 1> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n][k];
  if (!slot) slot = std::make_unique<SubsetTable>(buildTable(n, k));
  return *slot;
}

}  // namespace fracmeas
