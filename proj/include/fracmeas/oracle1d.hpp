#pragma once

// Exact 1D reference values: the sigma-measure of a finite point set relative
// to an interval domain, computed by closed-form piecewise integration over
// the disk configuration half-plane (center p, radius r). Accurate to ~1e-12
// relative; used to cross-check the Monte-Carlo estimator and to reproduce
// the non-additivity of the measure.

#include <vector>

namespace fracmeas {

// Meas_sigma^0(points, (center - radiusR, center + radiusR)) for points
// strictly inside the interval, 0 < sigma < 1.
double oracleMeasure1D(const std::vector<double>& points, double center, double radiusR,
                       double sigma);

}  // namespace fracmeas
