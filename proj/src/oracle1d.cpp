#include "fracmeas/oracle1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracmeas {

namespace {

// Signed-slope distance function |p - anchor| restricted to a cell where its
// sign pattern is constant: slope +1 means p > anchor throughout the cell.
struct Affine {
  int slope = 1;
  double anchor = 0.0;

  double at(double p) const { return slope > 0 ? p - anchor : anchor - p; }
};

Affine distanceDescriptor(double probe, double anchor) {
  return Affine{probe >= anchor ? 1 : -1, anchor};
}

// Antiderivative in p of at(p)^{-sigma} on the cell.
double antiderivative(const Affine& f, double p, double sigma) {
  const double value = std::pow(f.at(p), 1.0 - sigma) / (1.0 - sigma);
  return f.slope > 0 ? value : -value;
}

}  // namespace

double oracleMeasure1D(const std::vector<double>& points, double center, double radiusR,
                       double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("oracleMeasure1D: sigma in (0,1)");
  if (!(radiusR > 0.0)) throw std::invalid_argument("oracleMeasure1D: radius must be positive");
  if (points.empty()) throw std::invalid_argument("oracleMeasure1D: empty point set");
  const double lo = center - radiusR;
  const double hi = center + radiusR;
  for (double x : points) {
    if (!(x > lo && x < hi)) {
      throw std::invalid_argument("oracleMeasure1D: points must lie strictly inside the domain");
    }
  }

  // Cell decomposition of the p-axis: between consecutive breakpoints every
  // |p - anchor| keeps its sign and every pairwise ordering of the distance
  // functions is constant, so the (odd parity) ∧ (boundary touches domain)
  // radius set is a fixed list of intervals with affine endpoints.
  std::vector<double> anchors(points);
  anchors.push_back(lo);
  anchors.push_back(hi);
  std::vector<double> breaks;
  for (double a : anchors) breaks.push_back(a);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      breaks.push_back(0.5 * (anchors[i] + anchors[j]));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  const double scale = std::max(std::abs(lo), std::abs(hi));
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [scale](double a, double b) {
                             return std::abs(a - b) <= 1e-13 * std::max(1.0, scale);
                           }),
               breaks.end());

  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;

  for (std::size_t cell = 0; cell + 1 <= breaks.size() + 1; ++cell) {
    const double pLo = (cell == 0) ? -inf : breaks[cell - 1];
    const double pHi = (cell == breaks.size()) ? inf : breaks[cell];
    if (pHi - pLo <= 0.0) continue;
    double probe;
    if (cell == 0) {
      probe = breaks.front() - 1.0;
    } else if (cell == breaks.size()) {
      probe = breaks.back() + 1.0;
    } else {
      probe = 0.5 * (pLo + pHi);
    }

    // Distances to the sample points, sorted at the probe.
    std::vector<Affine> dist;
    dist.reserve(points.size());
    for (double x : points) dist.push_back(distanceDescriptor(probe, x));
    std::sort(dist.begin(), dist.end(),
              [probe](const Affine& a, const Affine& b) { return a.at(probe) < b.at(probe); });

    // Radii whose disk boundary still meets the domain: a single interval
    // (touchLo, touchHi). Inside the domain the lower end is 0.
    const bool inside = probe > lo && probe < hi;
    const Affine eLo = distanceDescriptor(probe, lo);
    const Affine eHi = distanceDescriptor(probe, hi);
    const bool loIsNear = eLo.at(probe) <= eHi.at(probe);
    const Affine touchLo = loIsNear ? eLo : eHi;  // unused when inside
    const Affine touchHi = loIsNear ? eHi : eLo;

    // Odd-parity radius intervals: between consecutive sorted distances,
    // starting after the first.
    for (std::size_t j = 0; j < dist.size(); j += 2) {
      Affine lower = dist[j];
      if (!inside && touchLo.at(probe) > lower.at(probe)) lower = touchLo;
      Affine upper = touchHi;
      if (j + 1 < dist.size() && dist[j + 1].at(probe) < upper.at(probe)) upper = dist[j + 1];
      if (!(lower.at(probe) < upper.at(probe))) continue;

      // ∫ r^{-1-sigma} dr over (lower, upper) = (lower^{-sigma} - upper^{-sigma}) / sigma,
      // then integrate the pair over the cell. At infinite cell ends the two
      // antiderivatives cancel exactly (their difference tends to zero).
      double increment = 0.0;
      if (std::isfinite(pHi)) {
        increment += antiderivative(lower, pHi, sigma) - antiderivative(upper, pHi, sigma);
      }
      if (std::isfinite(pLo)) {
        increment -= antiderivative(lower, pLo, sigma) - antiderivative(upper, pLo, sigma);
      }
      total += increment / sigma;
    }
  }

  // Factor two for the disk orientation (grade-0 normals are signs).
  return 2.0 * total;
}

}  // namespace fracmeas
