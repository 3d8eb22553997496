#pragma once

// Monte-Carlo estimation of the k-dimensional sigma-measure of a manifold
// relative to a ball domain, via importance sampling in the change-of-
// variables coordinates (z, a, omega, xi, r), plus the Monte-Carlo harnesses
// that cross-check the frame-manifold integral reductions.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fracmeas/geom.hpp"
#include "fracmeas/rng.hpp"
#include "fracmeas/xalg.hpp"

namespace fracmeas {

// Radial proposal family: xi / xi0 follows a beta-prime(1 - sigma, alpha) law
// (density proportional to (xi/xi0)^{-sigma} (1 + xi/xi0)^{sigma - 1 - alpha}),
// whose right tail has Pareto index alpha; r given xi follows the power law
// proportional to r^{k - n - sigma} truncated to [xi, xi + diam(domain)],
// where the integrand is supported. The xi^{-sigma} factor matches the
// integrand's corner growth so importance weights stay bounded near xi = 0
// for every sigma in (0, 1).
struct XiProposal {
  double alpha = 1.0;  // tail shape (> 0)
  double xi0 = 1.0;    // scale (> 0)
};

struct EstimatorConfig {
  double sigma = 0.5;          // in (0, 1)
  long long samples = 100000;  // > 0
  std::uint64_t seed = 1;
  int streams = 1;  // > 0; substreams merged in fixed index order
  // Defaults when unset: xi0 = diam(domain), alpha = sigma (matched tail).
  std::optional<XiProposal> xiProposal;
  double maxDegenerateFraction = 1e-3;
};

// One draw of the change-of-variables coordinates (diagnostic surface).
struct SampleDraw {
  Eigen::VectorXd z;   // point on the manifold
  Eigen::VectorXd a;   // unit vector orthogonal to [omega]
  Blade omega;         // unit simple k-vector
  double xi = 0.0;     // distance from z to the disk center
  double r = 0.0;      // disk radius, in [xi, xi + diam(domain)]
  double weight = 0.0; // importance-weighted contribution (0 when rejected)
  bool accepted = false;
  int multiplicity = 1;
};

struct EstimateResult {
  double mean = 0.0;
  double stderrOfMean = 0.0;
  long long samples = 0;
  long long degenerateResampled = 0;
  double sigma = 0.0;
  double scaledMean = 0.0;  // (1 - sigma) * mean
  std::optional<double> target;  // limitConstant(n, k) * H^k(shape)
  std::uint64_t configHash = 0;
};

// Uniform draw on W = {(a, omega)}: a uniform on the unit sphere, omega a
// Haar k-frame of [a]^perp (a uniform sign for k = 0).
std::pair<Eigen::VectorXd, Blade> sampleW(int n, int k, Rng& rng);

struct RadialDraw {
  double xi = 0.0;
  double r = 0.0;
  double densityXi = 0.0;  // proposal density of xi
  double densityR = 0.0;   // conditional proposal density of r given xi
};

// Draw (xi, r) with their proposal densities. n and k fix the r-power.
RadialDraw sampleRadial(const EstimatorConfig& cfg, int n, int k, double diamOmega, Rng& rng);

// Importance-sampling estimate of Meas_sigma^k(shape, domain). The shape must
// lie strictly inside the domain. Throws std::invalid_argument on input
// violations and std::runtime_error if the degenerate-draw fraction exceeds
// cfg.maxDegenerateFraction.
EstimateResult estimateMeasure(const ManifoldShape& shape, const DomainBall& domain,
                               const EstimatorConfig& cfg);

// One estimate per sigma (strictly increasing, all in (0, 1)); common seed,
// independent substream blocks per sigma; each result carries the limit
// target limitConstant(n, k) * H^k(shape).
std::vector<EstimateResult> convergeSweep(const ManifoldShape& shape, const DomainBall& domain,
                                          const std::vector<double>& sigmas,
                                          const EstimatorConfig& cfg);

struct MeanStderr {
  double mean = 0.0;
  double stderrOfMean = 0.0;
};

// Monte-Carlo mean of |nu . omega| over W; mean * wMeasure(n, k) estimates
// the closed-form integral bound.
MeanStderr mcWIntegral(int n, int k, const Blade& nu, long long samples, std::uint64_t seed);

struct ContractionCheck {
  double lhs = 0.0;     // mean of |(u_1 ^ ... ^ u_p) ⌟ mu| over Haar p-frames
  double rhs = 0.0;     // reduction factor * (p-1)-frame mean, rescaled to match
  double zscore = 0.0;  // discrepancy in combined standard errors
};

// Frame-contraction reduction check: integrating |(u_1 ^ ... ^ u_p) ⌟ mu|
// over orthonormal p-frames of R^q equals a Gamma-ratio factor times the same
// integral over (p-1)-frames (1 <= p <= k <= q, mu of grade k). The reduction
// holds for simple mu (a wedge of k vectors); for a non-simple mu the sphere
// average of the contraction magnitude is not a function of |mu| alone and
// the two sides genuinely differ.
ContractionCheck mcStiefelContraction(int q, int k, int p, const MultiVector& mu,
                                      long long samples, std::uint64_t seed);

enum class SphereTestIntegrand { One, AbsX1, X1Squared, Mixed };

struct SphereSplitCheck {
  double direct = 0.0;      // sphere-surface integral, direct uniform sampling
  double directSe = 0.0;
  double iterated = 0.0;    // same integral via the (y, y', theta) split
  double iteratedSe = 0.0;
  double zscore = 0.0;
};

// Sphere-splitting identity check on S^{dimX-1}: integrate a fixed test
// integrand directly and through the iterated decomposition over
// S^{dimY-1} x S^{dimX-dimY-1} x [0, pi/2] with weight
// cos^{dimY-1} sin^{dimX-dimY-1}.
SphereSplitCheck mcSphereSplit(int dimX, int dimY, long long samples, std::uint64_t seed,
                               SphereTestIntegrand integrand = SphereTestIntegrand::Mixed);

}  // namespace fracmeas
