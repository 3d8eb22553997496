#include "fracmeas/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fracmeas/constants.hpp"

namespace fracmeas {
namespace {

constexpr double kRelTol = 1e-9;
constexpr int kMaxResampleAttempts = 10000;

Eigen::VectorXd gaussianVector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
  return v;
}

struct RadialParams {
  double sigma = 0.0;
  double alpha = 0.0;
  double xi0 = 0.0;
  double diam = 0.0;
  double rho = 0.0;      // r-power k - n + 1 - sigma, always negative
  double logBeta = 0.0;  // log B(1 - sigma, alpha)
};

RadialParams resolveRadial(const EstimatorConfig& cfg, int n, int k, double diamOmega) {
  RadialParams rp;
  rp.sigma = cfg.sigma;
  rp.diam = diamOmega;
  if (cfg.xiProposal) {
    rp.alpha = cfg.xiProposal->alpha;
    rp.xi0 = cfg.xiProposal->xi0;
  } else {
    rp.alpha = cfg.sigma;
    rp.xi0 = diamOmega;
  }
  if (!(rp.alpha > 0.0) || !(rp.xi0 > 0.0)) {
    throw std::invalid_argument("radial proposal requires alpha > 0 and xi0 > 0");
  }
  rp.rho = static_cast<double>(k - n) + 1.0 - cfg.sigma;
  rp.logBeta = std::lgamma(1.0 - cfg.sigma) + std::lgamma(rp.alpha) -
               std::lgamma(1.0 - cfg.sigma + rp.alpha);
  return rp;
}

// Radial factor r^{k-n-sigma} xi^{n-k-1} of the integrand divided by the joint
// proposal density of (xi, r). The r-powers and the xi^{-sigma} corner factor
// cancel exactly, leaving a bounded function of xi alone: finite at xi = 0
// (where pow(1 + diam/xi, rho) underflows to 0) and integrable in the tail.
double radialWeight(const RadialParams& rp, double xi) {
  const double head = (1.0 - std::pow(1.0 + rp.diam / xi, rp.rho)) / (-rp.rho);
  const double tail = std::exp((1.0 - rp.sigma) * std::log(rp.xi0) + rp.logBeta +
                               (1.0 + rp.alpha - rp.sigma) * std::log1p(xi / rp.xi0));
  return head * tail;
}

RadialDraw drawRadial(const RadialParams& rp, Rng& rng) {
  RadialDraw draw;
  double xi = 0.0;
  for (;;) {
    const double g1 = rng.gamma(1.0 - rp.sigma);
    const double g2 = rng.gamma(rp.alpha);
    xi = rp.xi0 * (g1 / g2);
    if (std::isfinite(xi)) break;  // retries the probability-zero denominator underflow
  }
  const double u = rng.uniform01();
  double r = 0.0;
  if (xi > 0.0) {
    // Inverse CDF of the density proportional to r^{rho - 1} on [xi, xi + diam].
    const double t = std::pow(1.0 + rp.diam / xi, rp.rho);
    r = xi * std::pow(1.0 - u * (1.0 - t), 1.0 / rp.rho);
  }
  draw.xi = xi;
  draw.r = r;
  const double scaled = xi / rp.xi0;
  draw.densityXi = std::pow(scaled, -rp.sigma) *
                   std::pow(1.0 + scaled, rp.sigma - 1.0 - rp.alpha) /
                   (rp.xi0 * std::exp(rp.logBeta));
  draw.densityR =
      xi > 0.0 ? (-rp.rho) * std::pow(r, rp.rho - 1.0) /
                     (std::pow(xi, rp.rho) - std::pow(xi + rp.diam, rp.rho))
               : std::numeric_limits<double>::infinity();
  return draw;
}

std::uint64_t fnv1aHash(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

struct SimplexPiece {
  Eigen::MatrixXd verts;  // n x (k+1)
  Blade blade;
  double cumVolume = 0.0;
};

class MeasureSampler {
 public:
  MeasureSampler(const ManifoldShape& shape, const DomainBall& domain, const EstimatorConfig& cfg)
      : shape_(shape), domain_(domain) {
    validateShape(shape);
    n_ = shapeDim(shape);
    k_ = shapeGrade(shape);
    if (k_ >= n_) {
      throw std::invalid_argument("estimation requires shape dimension k < ambient dimension n");
    }
    if (domain.center.size() != n_) {
      throw std::invalid_argument("domain ball dimension must match the shape");
    }
    if (!(domain.radiusR > 0.0)) {
      throw std::invalid_argument("domain ball radius must be positive");
    }
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) {
      throw std::invalid_argument("sigma must lie in (0, 1)");
    }
    if (cfg.samples <= 0) throw std::invalid_argument("sample count must be positive");
    if (cfg.streams <= 0) throw std::invalid_argument("stream count must be positive");
    if (!(cfg.maxDegenerateFraction > 0.0 && cfg.maxDegenerateFraction <= 1.0)) {
      throw std::invalid_argument("maxDegenerateFraction must lie in (0, 1]");
    }
    if (!shapeInsideBall(shape, domain)) {
      throw std::invalid_argument("shape must lie strictly inside the domain ball");
    }
    radial_ = resolveRadial(cfg, n_, k_, domain.diam());
    measure_ = hausdorffK(shape);
    prefactor_ = std::pow(2.0, -0.5 * k_) * measure_ * wMeasure(n_, k_);

    if (const auto* sx = std::get_if<SimplicialK>(&shape_)) {
      double factorial = 1.0;
      for (int i = 2; i <= k_; ++i) factorial *= i;
      double cum = 0.0;
      pieces_.reserve(sx->simplices.size());
      for (const auto& simplex : sx->simplices) {
        SimplexPiece piece;
        piece.verts.resize(n_, k_ + 1);
        for (int i = 0; i <= k_; ++i) piece.verts.col(i) = sx->vertices[simplex[i]];
        Eigen::MatrixXd edges(n_, k_);
        for (int i = 0; i < k_; ++i) edges.col(i) = piece.verts.col(i + 1) - piece.verts.col(0);
        const FrameResult frame = bladeFromFrame(edges);
        cum += frame.magnitude / factorial;
        piece.blade = frame.blade;
        piece.cumVolume = cum;
        pieces_.push_back(std::move(piece));
      }
    } else if (const auto* fd = std::get_if<FlatDiskK>(&shape_)) {
      flatBlade_ = bladeFromFrame(fd->basis).blade;
    }
  }

  int n() const { return n_; }
  int k() const { return k_; }
  double measure() const { return measure_; }
  const RadialParams& radial() const { return radial_; }

  // One accepted draw's importance-weighted contribution (zero when the
  // configuration is rejected by the parity or boundary indicator).
  double step(Rng& rng, long long& degenerates, SampleDraw* record) const {
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
      Eigen::VectorXd z;
      const SurfaceLocation loc = drawLocation(rng, z);
      auto [a, omega] = sampleW(n_, k_, rng);
      const RadialDraw radial = drawRadial(radial_, rng);
      Disk disk;
      disk.center = z + radial.xi * a;
      disk.normal = std::move(omega);
      disk.radius = radial.r;

      // The sampled point z always lies on the disk plane at distance xi < r
      // from the center, so it is counted analytically rather than through
      // the numeric root list (whose self entry carries rounding noise).
      const std::vector<PlaneRoot> roots = planeShapeRoots(shape_, disk);
      const double selfTol = kRelTol * std::max(1.0, z.norm());
      bool degenerate = false;
      int othersInside = 0;
      for (const PlaneRoot& root : roots) {
        if (isSelfRoot(root, loc, z, selfTol)) continue;
        if (root.degenerate) {
          degenerate = true;
          break;
        }
        if (root.distance < disk.radius) ++othersInside;
      }
      if (degenerate) {
        ++degenerates;
        continue;
      }

      double volDotOmega = 1.0;
      if (k_ > 0) {
        const Blade vol = volumeAt(loc);
        volDotOmega = std::abs(inner(vol.cached, disk.normal.cached));
      }
      const int multiplicity = 1 + othersInside;
      const bool odd = multiplicity % 2 == 1;
      const bool touches = boundaryTouchesOmega(disk, domain_);
      double weight = 0.0;
      if (odd && touches) {
        weight = radialWeight(radial_, radial.xi) * prefactor_ * volDotOmega /
                 static_cast<double>(multiplicity);
      }
      if (record) {
        record->z = z;
        record->a = a;
        record->omega = disk.normal;
        record->xi = radial.xi;
        record->r = radial.r;
        record->weight = weight;
        record->accepted = true;
        record->multiplicity = multiplicity;
      }
      return weight;
    }
    throw std::runtime_error(
        "degenerate disk configurations persisted through resampling; "
        "the geometry violates the transversality assumptions");
  }

 private:
  SurfaceLocation drawLocation(Rng& rng, Eigen::VectorXd& z) const {
    SurfaceLocation loc;
    if (const auto* ps = std::get_if<PointSet>(&shape_)) {
      const std::size_t m = ps->points.size();
      auto idx = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(m));
      if (idx >= m) idx = m - 1;
      z = ps->points[idx];
      loc.pieceIndex = static_cast<int>(idx);
    } else if (std::holds_alternative<SimplicialK>(shape_)) {
      const double ticket = rng.uniform01() * pieces_.back().cumVolume;
      std::size_t idx = 0;
      while (idx + 1 < pieces_.size() && pieces_[idx].cumVolume <= ticket) ++idx;
      // Dirichlet(1, ..., 1) barycentric coordinates via normalized exponentials.
      Eigen::VectorXd bary(k_ + 1);
      double sum = 0.0;
      for (int i = 0; i <= k_; ++i) {
        bary(i) = -std::log(1.0 - rng.uniform01());
        sum += bary(i);
      }
      bary /= sum;
      z = pieces_[idx].verts * bary;
      loc.pieceIndex = static_cast<int>(idx);
    } else if (const auto* sp = std::get_if<SphereK>(&shape_)) {
      Eigen::VectorXd y;
      double norm = 0.0;
      do {
        y = gaussianVector(k_ + 1, rng);
        norm = y.norm();
      } while (norm < 1e-12);
      z = sp->center + sp->radius * (sp->basis * (y / norm));
    } else {
      const auto& fd = std::get<FlatDiskK>(shape_);
      Eigen::VectorXd dir;
      double norm = 0.0;
      do {
        dir = gaussianVector(k_, rng);
        norm = dir.norm();
      } while (norm < 1e-12);
      const double rad = fd.radius * std::pow(rng.uniform01(), 1.0 / k_);
      z = fd.center + fd.basis * ((rad / norm) * dir);
    }
    loc.point = z;
    return loc;
  }

  bool isSelfRoot(const PlaneRoot& root, const SurfaceLocation& loc, const Eigen::VectorXd& z,
                  double selfTol) const {
    if (loc.pieceIndex >= 0) return root.pieceIndex == loc.pieceIndex;
    return root.point.size() == z.size() && (root.point - z).norm() <= selfTol;
  }

  Blade volumeAt(const SurfaceLocation& loc) const {
    if (std::holds_alternative<SimplicialK>(shape_)) {
      return pieces_[static_cast<std::size_t>(loc.pieceIndex)].blade;
    }
    if (std::holds_alternative<FlatDiskK>(shape_)) return flatBlade_;
    return volumeFormAt(shape_, loc);  // sphere: tangent frame at the sampled point
  }

  const ManifoldShape& shape_;
  const DomainBall& domain_;
  int n_ = 0;
  int k_ = 0;
  RadialParams radial_;
  double measure_ = 0.0;
  double prefactor_ = 0.0;
  std::vector<SimplexPiece> pieces_;
  Blade flatBlade_;
};

std::uint64_t hashConfig(const EstimatorConfig& cfg, const RadialParams& rp, int n, int k,
                         std::uint64_t streamBase) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "sigma=%.17g;samples=%lld;seed=%llu;streams=%d;alpha=%.17g;xi0=%.17g;"
                "maxDegenerateFraction=%.17g;n=%d;k=%d;streamBase=%llu",
                cfg.sigma, cfg.samples, static_cast<unsigned long long>(cfg.seed), cfg.streams,
                rp.alpha, rp.xi0, cfg.maxDegenerateFraction, n, k,
                static_cast<unsigned long long>(streamBase));
  return fnv1aHash(buf);
}

EstimateResult runEstimate(const MeasureSampler& sampler, const EstimatorConfig& cfg,
                           std::uint64_t streamBase) {
  double sum = 0.0;
  double sumSq = 0.0;
  long long degenerates = 0;
  for (int j = 0; j < cfg.streams; ++j) {
    long long quota = cfg.samples / cfg.streams + (j < cfg.samples % cfg.streams ? 1 : 0);
    Rng rng(cfg.seed, streamBase + static_cast<std::uint64_t>(j));
    double partSum = 0.0;
    double partSq = 0.0;
    long long partDeg = 0;
    for (long long i = 0; i < quota; ++i) {
      const double w = sampler.step(rng, partDeg, nullptr);
      partSum += w;
      partSq += w * w;
    }
    // Partial sums are merged in fixed stream order for reproducibility.
    sum += partSum;
    sumSq += partSq;
    degenerates += partDeg;
  }

  const double attempts = static_cast<double>(cfg.samples + degenerates);
  if (static_cast<double>(degenerates) > cfg.maxDegenerateFraction * attempts) {
    char msg[224];
    std::snprintf(msg, sizeof msg,
                  "degenerate draw fraction %.3g exceeds the configured bound %.3g "
                  "(for small sigma, a heavier xi-proposal tail is the usual cause; "
                  "raising xiProposal.alpha typically resolves it)",
                  static_cast<double>(degenerates) / attempts, cfg.maxDegenerateFraction);
    throw std::runtime_error(msg);
  }

  EstimateResult result;
  result.samples = cfg.samples;
  result.degenerateResampled = degenerates;
  result.sigma = cfg.sigma;
  const double nSamples = static_cast<double>(cfg.samples);
  result.mean = sum / nSamples;
  if (cfg.samples > 1) {
    const double variance =
        std::max(0.0, (sumSq - nSamples * result.mean * result.mean) / (nSamples - 1.0));
    result.stderrOfMean = std::sqrt(variance / nSamples);
  }
  result.scaledMean = (1.0 - cfg.sigma) * result.mean;
  result.target = limitConstant(sampler.n(), sampler.k()) * sampler.measure();
  result.configHash = hashConfig(cfg, sampler.radial(), sampler.n(), sampler.k(), streamBase);
  return result;
}

MeanStderr meanAndStderr(double sum, double sumSq, long long samples) {
  MeanStderr out;
  const double n = static_cast<double>(samples);
  out.mean = sum / n;
  if (samples > 1) {
    const double variance = std::max(0.0, (sumSq - n * out.mean * out.mean) / (n - 1.0));
    out.stderrOfMean = std::sqrt(variance / n);
  }
  return out;
}

}  // namespace

std::pair<Eigen::VectorXd, Blade> sampleW(int n, int k, Rng& rng) {
  if (n < 1 || k < 0 || k >= n) {
    throw std::invalid_argument("sampleW requires 0 <= k < n");
  }
  for (;;) {
    Eigen::VectorXd a = gaussianVector(n, rng);
    const double norm = a.norm();
    if (norm < 1e-12) continue;
    a /= norm;
    if (k == 0) {
      const double sign = (rng.nextU64() & 1ull) ? 1.0 : -1.0;
      return {std::move(a), Blade::signBlade(n, sign)};
    }
    Eigen::MatrixXd g(n, k);
    for (int c = 0; c < k; ++c) g.col(c) = gaussianVector(n, rng);
    g -= a * (a.transpose() * g);  // project the frame into the orthocomplement of a
    FrameResult frame = bladeFromFrame(g);
    if (frame.degenerate) continue;
    return {std::move(a), std::move(frame.blade)};
  }
}

RadialDraw sampleRadial(const EstimatorConfig& cfg, int n, int k, double diamOmega, Rng& rng) {
  if (n < 1 || k < 0 || k >= n) {
    throw std::invalid_argument("sampleRadial requires 0 <= k < n");
  }
  if (!(diamOmega > 0.0)) {
    throw std::invalid_argument("sampleRadial requires a positive domain diameter");
  }
  if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) {
    throw std::invalid_argument("sigma must lie in (0, 1)");
  }
  return drawRadial(resolveRadial(cfg, n, k, diamOmega), rng);
}

EstimateResult estimateMeasure(const ManifoldShape& shape, const DomainBall& domain,
                               const EstimatorConfig& cfg) {
  const MeasureSampler sampler(shape, domain, cfg);
  return runEstimate(sampler, cfg, 0);
}

std::vector<EstimateResult> convergeSweep(const ManifoldShape& shape, const DomainBall& domain,
                                          const std::vector<double>& sigmas,
                                          const EstimatorConfig& cfg) {
  if (sigmas.empty()) throw std::invalid_argument("convergeSweep requires at least one sigma");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0 && sigmas[i] < 1.0)) {
      throw std::invalid_argument("every sigma must lie in (0, 1)");
    }
    if (i > 0 && !(sigmas[i] > sigmas[i - 1])) {
      throw std::invalid_argument("sigmas must be strictly increasing");
    }
  }
  std::vector<EstimateResult> results;
  results.reserve(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    EstimatorConfig local = cfg;
    local.sigma = sigmas[i];
    const MeasureSampler sampler(shape, domain, local);
    // Disjoint substream blocks per sigma keep the sweep entries independent.
    const std::uint64_t streamBase = static_cast<std::uint64_t>(i) *
                                     static_cast<std::uint64_t>(cfg.streams);
    results.push_back(runEstimate(sampler, local, streamBase));
  }
  return results;
}

MeanStderr mcWIntegral(int n, int k, const Blade& nu, long long samples, std::uint64_t seed) {
  if (n < 1 || k < 0 || k >= n) throw std::invalid_argument("mcWIntegral requires 0 <= k < n");
  if (nu.dim() != n || nu.grade() != k) {
    throw std::invalid_argument("mcWIntegral: blade must have the requested dimension and grade");
  }
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  Rng rng(seed, 0);
  double sum = 0.0;
  double sumSq = 0.0;
  for (long long i = 0; i < samples; ++i) {
    const auto [a, omega] = sampleW(n, k, rng);
    const double v = std::abs(inner(nu.cached, omega.cached));
    sum += v;
    sumSq += v * v;
  }
  return meanAndStderr(sum, sumSq, samples);
}

ContractionCheck mcStiefelContraction(int q, int k, int p, const MultiVector& mu,
                                      long long samples, std::uint64_t seed) {
  if (!(1 <= p && p <= k && k <= q)) {
    throw std::invalid_argument("mcStiefelContraction requires 1 <= p <= k <= q");
  }
  if (mu.dim() != q || mu.grade() != k) {
    throw std::invalid_argument("mcStiefelContraction: multivector shape mismatch");
  }
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");

  const auto frameMean = [&](int frameSize, std::uint64_t stream) -> MeanStderr {
    if (frameSize == 0) {
      // The empty wedge is the scalar 1, so the integrand is the constant |mu|.
      MeanStderr out;
      out.mean = mu.norm();
      return out;
    }
    Rng rng(seed, stream);
    double sum = 0.0;
    double sumSq = 0.0;
    for (long long i = 0; i < samples; ++i) {
      FrameResult frame;
      do {
        Eigen::MatrixXd g(q, frameSize);
        for (int c = 0; c < frameSize; ++c) g.col(c) = gaussianVector(q, rng);
        frame = bladeFromFrame(g);
      } while (frame.degenerate);
      const double v = interiorLeft(frame.blade.cached, mu).norm();
      sum += v;
      sumSq += v * v;
    }
    return meanAndStderr(sum, sumSq, samples);
  };

  const MeanStderr top = frameMean(p, 0);
  const MeanStderr reduced = frameMean(p - 1, 1);
  const double logFactor = 0.5 * (p + 1) * std::log(2.0) + 0.5 * (q - p + 1) * std::log(M_PI) +
                           std::lgamma(0.5 * (k - p + 2)) - std::lgamma(0.5 * (k - p + 1)) -
                           std::lgamma(0.5 * (q - p + 2));
  // Rescale the reduced-frame mean into top-frame-mean units.
  const double rescale =
      std::exp(logFactor) * stiefelMeasure(q, p - 1) / stiefelMeasure(q, p);
  ContractionCheck check;
  check.lhs = top.mean;
  check.rhs = rescale * reduced.mean;
  const double combined = std::hypot(top.stderrOfMean, rescale * reduced.stderrOfMean);
  if (combined > 0.0) {
    check.zscore = (check.lhs - check.rhs) / combined;
  } else {
    check.zscore =
        check.lhs == check.rhs ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return check;
}

SphereSplitCheck mcSphereSplit(int dimX, int dimY, long long samples, std::uint64_t seed,
                               SphereTestIntegrand integrand) {
  if (dimY < 1 || dimX - dimY < 1) {
    throw std::invalid_argument("mcSphereSplit requires 1 <= dimY and dimY < dimX");
  }
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  const int d = dimX;
  const int ell = dimY;

  const auto g = [integrand](const Eigen::VectorXd& x) -> double {
    switch (integrand) {
      case SphereTestIntegrand::One:
        return 1.0;
      case SphereTestIntegrand::AbsX1:
        return std::abs(x(0));
      case SphereTestIntegrand::X1Squared:
        return x(0) * x(0);
      case SphereTestIntegrand::Mixed:
        return 1.0 + std::abs(x(0)) + x(0) * x(0);
    }
    return 0.0;
  };

  const double areaD = sphereSurface(d - 1);
  const double areaY = sphereSurface(ell - 1);
  const double areaYPerp = sphereSurface(d - ell - 1);

  SphereSplitCheck check;
  {
    Rng rng(seed, 0);
    double sum = 0.0;
    double sumSq = 0.0;
    for (long long i = 0; i < samples; ++i) {
      Eigen::VectorXd x;
      double norm = 0.0;
      do {
        x = gaussianVector(d, rng);
        norm = x.norm();
      } while (norm < 1e-12);
      x /= norm;
      const double v = g(x);
      sum += v;
      sumSq += v * v;
    }
    const MeanStderr direct = meanAndStderr(sum, sumSq, samples);
    check.direct = direct.mean * areaD;
    check.directSe = direct.stderrOfMean * areaD;
  }
  {
    Rng rng(seed, 1);
    double sum = 0.0;
    double sumSq = 0.0;
    Eigen::VectorXd x(d);
    for (long long i = 0; i < samples; ++i) {
      Eigen::VectorXd y;
      double norm = 0.0;
      do {
        y = gaussianVector(ell, rng);
        norm = y.norm();
      } while (norm < 1e-12);
      y /= norm;
      Eigen::VectorXd yp;
      do {
        yp = gaussianVector(d - ell, rng);
        norm = yp.norm();
      } while (norm < 1e-12);
      yp /= norm;
      const double theta = 0.5 * M_PI * rng.uniform01();
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      x.head(ell) = c * y;
      x.tail(d - ell) = s * yp;
      const double jacobian = std::pow(c, ell - 1) * std::pow(s, d - ell - 1);
      const double v = g(x) * jacobian * (0.5 * M_PI) * areaY * areaYPerp;
      sum += v;
      sumSq += v * v;
    }
    const MeanStderr iterated = meanAndStderr(sum, sumSq, samples);
    check.iterated = iterated.mean;
    check.iteratedSe = iterated.stderrOfMean;
  }
  const double combined = std::hypot(check.directSe, check.iteratedSe);
  check.zscore = combined > 0.0 ? (check.direct - check.iterated) / combined : 0.0;
  return check;
}

}  // namespace fracmeas
