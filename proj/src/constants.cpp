#include "fracmeas/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace fracmeas {

namespace {

const double kLogPi = std::log(M_PI);
const double kLog2 = std::log(2.0);

// log omega_j for the unit j-sphere in R^{j+1}.
double logSphereSurface(int j) {
  const double half = 0.5 * (j + 1);
  return kLog2 + half * kLogPi - std::lgamma(half);
}

double logSoMeasure(int n) {
  double acc = n * (n - 1) / 4.0 * kLog2;
  for (int j = 1; j <= n - 1; ++j) acc += logSphereSurface(j);
  return acc;
}

double logStiefelMeasure(int q, int k) {
  double acc = k * (k - 1) / 4.0 * kLog2;
  for (int p = 1; p <= k; ++p) acc += logSphereSurface(q - p);
  return acc;
}

double logBladeManifoldMeasure(int q, int k) {
  if (k == 0) return kLog2;  // the two orientations {-1, +1}
  return logStiefelMeasure(q, k) - logSoMeasure(k);
}

void requirePair(int n, int k, const char* op) {
  if (k < 0 || k >= n) {
    throw std::invalid_argument(std::string(op) + ": need 0 <= k < n");
  }
}

}  // namespace

double gammaFn(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gammaFn: need x > 0");
  return std::tgamma(x);
}

double betaFn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("betaFn: need x, y > 0");
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

BallGeometry unitBallGeometry(int n) {
  if (n < 1) throw std::invalid_argument("unitBallGeometry: need n >= 1");
  BallGeometry g;
  g.alphaN = std::exp(0.5 * n * kLogPi - std::lgamma(1.0 + 0.5 * n));
  g.omegaNm1 = std::exp(logSphereSurface(n - 1));
  return g;
}

double sphereSurface(int j) {
  if (j < 0) throw std::invalid_argument("sphereSurface: need j >= 0");
  return std::exp(logSphereSurface(j));
}

double soMeasure(int n) {
  if (n < 1) throw std::invalid_argument("soMeasure: need n >= 1");
  return std::exp(logSoMeasure(n));
}

double stiefelMeasure(int q, int k) {
  if (k < 0 || q < 0 || k > q) throw std::invalid_argument("stiefelMeasure: need 0 <= k <= q");
  return std::exp(logStiefelMeasure(q, k));
}

double bladeManifoldMeasure(int q, int k) {
  if (k < 0 || q < 0 || k > q) {
    throw std::invalid_argument("bladeManifoldMeasure: need 0 <= k <= q");
  }
  return std::exp(logBladeManifoldMeasure(q, k));
}

double wMeasure(int n, int k) {
  requirePair(n, k, "wMeasure");
  return std::exp(0.5 * k * kLog2 + logSphereSurface(n - 1) + logBladeManifoldMeasure(n - 1, k));
}

double vfboundConstant(int n, int k) {
  requirePair(n, k, "vfboundConstant");
  // 2^{(k+4)/2} pi^{(n+2)(k+1)/2} Gamma((n-k+1)/2) / (sqrt(pi) Gamma((n+1)/2))
  //   * prod_{i=1}^{k+1} Gamma(i/2) / (pi^i Gamma((n-i+1)/2))
  double logAcc = 0.5 * (k + 4) * kLog2 + 0.5 * (n + 2) * (k + 1) * kLogPi +
                  std::lgamma(0.5 * (n - k + 1)) - 0.5 * kLogPi - std::lgamma(0.5 * (n + 1));
  for (int i = 1; i <= k + 1; ++i) {
    logAcc += std::lgamma(0.5 * i) - i * kLogPi - std::lgamma(0.5 * (n - i + 1));
  }
  return std::exp(logAcc);
}

double limitConstant(int n, int k) {
  requirePair(n, k, "limitConstant");
  // 4 pi^{(n+2)(k+1)/2} Gamma((n-k+1)/2) / (sqrt(pi) Gamma((n+1)/2) (n-k))
  //   * prod_{i=1}^{k+1} Gamma(i/2) / (pi^i Gamma((n-i+1)/2))
  double logAcc = 2.0 * kLog2 + 0.5 * (n + 2) * (k + 1) * kLogPi +
                  std::lgamma(0.5 * (n - k + 1)) - 0.5 * kLogPi - std::lgamma(0.5 * (n + 1)) -
                  std::log(static_cast<double>(n - k));
  for (int i = 1; i <= k + 1; ++i) {
    logAcc += std::lgamma(0.5 * i) - i * kLogPi - std::lgamma(0.5 * (n - i + 1));
  }
  return std::exp(logAcc);
}

ConstantsReport constantsReport(int n, int k) {
  requirePair(n, k, "constantsReport");
  ConstantsReport report;
  report.n = n;
  report.k = k;
  const BallGeometry g = unitBallGeometry(n);
  report.alphaN = g.alphaN;
  report.omegaNm1 = g.omegaNm1;
  report.soMeasure = soMeasure(n);
  report.stiefelMeasure = stiefelMeasure(n, k);
  report.bladeManifoldMeasure = bladeManifoldMeasure(n, k);
  report.wMeasure = wMeasure(n, k);
  report.vfboundConstant = vfboundConstant(n, k);
  report.limitConstant = limitConstant(n, k);
  return report;
}

}  // namespace fracmeas
