#pragma once

// Closed-form special-function constants of the sigma-measure theory: Gamma
// and Beta, unit-ball and unit-sphere measures, rotation-group and
// orthonormal-frame manifold measures, the configuration-space measure of the
// direction/normal manifold W, the integral bound over W, and the sigma -> 1
// limit constant. Everything is evaluated through log-Gamma so products stay
// finite for all supported (n, k).

namespace fracmeas {

// Gamma function on the positive axis (relative error <= 1e-13).
double gammaFn(double x);

// Euler beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y).
double betaFn(double x, double y);

struct BallGeometry {
  double alphaN;    // Lebesgue measure of the unit n-ball
  double omegaNm1;  // surface measure of the unit (n-1)-sphere in R^n
};

// alpha_n = pi^{n/2} / Gamma(1 + n/2) and omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
BallGeometry unitBallGeometry(int n);

// Surface measure omega_j of the unit j-sphere (embedded in R^{j+1}), j >= 0.
double sphereSurface(int j);

// Hausdorff measure of SO(n) inside R^{n^2}: 2^{n(n-1)/4} * prod_{j=1}^{n-1} omega_j.
double soMeasure(int n);

// Measure of the manifold of orthonormal k-frames in R^q:
// 2^{k(k-1)/4} * prod_{p=1}^{k} omega_{q-p}; 1 for k = 0.
double stiefelMeasure(int q, int k);

// Measure of the manifold of unit simple k-vectors in R^q:
// stiefelMeasure(q, k) / soMeasure(k); 2 for k = 0 (two orientations).
double bladeManifoldMeasure(int q, int k);

// Measure of W = {(a, omega) : a unit, omega unit simple k-vector with
// a ⊥ [omega]}: 2^{k/2} * omega_{n-1} * bladeManifoldMeasure(n-1, k).
double wMeasure(int n, int k);

// Closed form of the integral of |nu . omega| over W (independent of the unit
// simple k-vector nu by rotation invariance).
double vfboundConstant(int n, int k);

// Constant C(n, k) in the limit law (1 - sigma) * Meas_sigma^k -> C * H^k;
// evaluated from the limit theorem's own closed form, which is independent of
// the vfboundConstant code path (their ratio is checked as an invariant).
double limitConstant(int n, int k);

// All constants for one (n, k) pair, for reporting.
struct ConstantsReport {
  int n = 0;
  int k = 0;
  double alphaN = 0;
  double omegaNm1 = 0;
  double soMeasure = 0;            // of SO(n)
  double stiefelMeasure = 0;       // of the k-frames in R^n
  double bladeManifoldMeasure = 0; // of the unit simple k-vectors in R^n
  double wMeasure = 0;
  double vfboundConstant = 0;
  double limitConstant = 0;
};

ConstantsReport constantsReport(int n, int k);

}  // namespace fracmeas
