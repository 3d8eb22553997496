#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracmeas/rng.hpp"
#include "statutil.hpp"

using namespace fracmeas;

TEST_SUITE_BEGIN("rng");

TEST_CASE("generator is deterministic in (seed, stream) and streams differ") {
  Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool allEqual = true, streamDiffers = false, seedDiffers = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.nextU64();
    allEqual = allEqual && (va == b.nextU64());
    streamDiffers = streamDiffers || (va != c.nextU64());
    seedDiffers = seedDiffers || (va != d.nextU64());
  }
  CHECK(allEqual);
  CHECK(streamDiffers);
  CHECK(seedDiffers);
}

TEST_CASE("uniform01 passes KS and bin chi-square at the 0.001 level") {
  const std::size_t n = 200000;
  Rng rng(7, 0);
  std::vector<double> values(n);
  const int bins = 128;
  std::vector<long long> counts(bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = rng.uniform01();
    CHECK(values[i] >= 0.0);
    CHECK(values[i] < 1.0);
    ++counts[static_cast<int>(values[i] * bins)];
  }
  CHECK(statutil::ksStatisticUniform(values) <= statutil::ksCritical001(n));
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (long long count : counts) {
    const double diff = count - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 <= statutil::chiSquareQuantile(0.999, bins - 1));
}

TEST_CASE("gaussian matches the first four moments") {
  const long long n = 400000;
  Rng rng(11, 3);
  statutil::RunningMoments m1, m2, m4;
  for (long long i = 0; i < n; ++i) {
    const double x = rng.gaussian();
    m1.add(x);
    m2.add(x * x);
    m4.add(x * x * x * x);
  }
  CHECK(std::abs(m1.zAgainst(0.0)) <= 4.0);
  CHECK(std::abs(m2.zAgainst(1.0)) <= 4.0);
  CHECK(std::abs(m4.zAgainst(3.0)) <= 4.0);
}

TEST_CASE("gaussian CDF transform is uniform") {
  const std::size_t n = 100000;
  Rng rng(5, 0);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = statutil::normalCdf(rng.gaussian());
  CHECK(statutil::ksStatisticUniform(u) <= statutil::ksCritical001(n));
}

TEST_CASE("gamma variates match mean and variance across shapes") {
  Rng rng(2025, 1);
  for (double shape : {0.1, 0.35, 0.8, 1.0, 2.5, 7.0}) {
    const long long n = 200000;
    statutil::RunningMoments mean;
    for (long long i = 0; i < n; ++i) mean.add(rng.gamma(shape));
    // Gamma(shape, 1): mean = shape, sd = sqrt(shape).
    CHECK(std::abs(mean.zAgainst(shape)) <= 4.0);
    CHECK(std::abs(mean.variance() - shape) <= 5.0 * shape * std::sqrt(2.0 / n) +
                                                   0.02 * shape);
  }
}

TEST_CASE("gamma CDF transform is uniform for a fractional shape") {
  // This is the shape regime the xi proposal uses (shape = 1 - sigma < 1).
  const double shape = 0.35;
  const std::size_t n = 100000;
  Rng rng(60, 2);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = statutil::regularizedGammaP(shape, rng.gamma(shape));
  }
  CHECK(statutil::ksStatisticUniform(u) <= statutil::ksCritical001(n));
}

TEST_SUITE_END();
