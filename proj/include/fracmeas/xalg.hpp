#pragma once

// Exterior algebra over R^n (n <= 12): dense k-vectors in the lexicographic
// basis, simple k-vectors (blades) carried as orthonormal frames, wedge and
// left interior products, inner products, linear-map push-forwards, and the
// span/projection queries used by the disk geometry.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fracmeas/combin.hpp"

namespace fracmeas {

// Dense k-vector: coefficient c[i] multiplies e_{S_i} where S_i is the i-th
// k-subset of {0,...,n-1} in lexicographic order. Grade 0 is a scalar
// (single coefficient).
class MultiVector {
 public:
  MultiVector(int n, int k);

  static MultiVector scalar(int n, double value);
  static MultiVector fromVector(const Eigen::VectorXd& v);
  static MultiVector basisVector(int n, int i);

  int dim() const { return n_; }
  int grade() const { return k_; }

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  double coeff(int lexRank) const { return coeffs_[lexRank]; }
  double& coeff(int lexRank) { return coeffs_[lexRank]; }
  // Coefficient of e_S for a subset bitmask S (must have popcount k).
  double coeffForMask(std::uint16_t mask) const;

  double norm() const { return coeffs_.norm(); }

  MultiVector& operator+=(const MultiVector& other);
  MultiVector& operator-=(const MultiVector& other);
  MultiVector& operator*=(double s);
  friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
  friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
  friend MultiVector operator*(double s, MultiVector a) { return a *= s; }

 private:
  int n_;
  int k_;
  Eigen::VectorXd coeffs_;
};

// Exterior product of a grade-k and a grade-l multivector (k + l <= n).
MultiVector wedge(const MultiVector& a, const MultiVector& b);

// Left interior product a ⌟ b of a grade-l and a grade-k multivector
// (l <= k): the unique (k-l)-vector adjoint to wedging on the left, i.e.
// inner(w, interiorLeft(a, b)) == inner(wedge(a, w), b) for all grade-(k-l) w.
MultiVector interiorLeft(const MultiVector& a, const MultiVector& b);

// Inner product of two same-grade multivectors (coefficient dot product in
// the orthonormal lexicographic basis; equals the Gram determinant on simple
// inputs).
double inner(const MultiVector& a, const MultiVector& b);

// Unit simple k-vector represented by an orthonormal frame. For k = 0 the
// blade is just the sign and its span is {0}.
struct Blade {
  Eigen::MatrixXd frame;    // n x k, orthonormal columns (n x 0 for k = 0)
  MultiVector cached;       // unit expansion frame.col(0) ^ ... ^ frame.col(k-1)
  double orientationSign;   // +-1; for k = 0 this is the blade's value

  Blade() : cached(1, 0), orientationSign(1.0) {}

  int dim() const { return cached.dim(); }
  int grade() const { return cached.grade(); }

  // Grade-0 blade (a pure sign) in dimension n.
  static Blade signBlade(int n, double sign);
  // Blade from an already-orthonormal frame (checked in debug builds).
  static Blade fromOrthonormalFrame(const Eigen::MatrixXd& frame);
};

// Result of orthonormalizing a spanning set: the unit blade plus the k-volume
// of the input parallelepiped. A linearly dependent input (residual below
// 1e-12) yields degenerate = true and no blade.
struct FrameResult {
  bool degenerate = false;
  Blade blade;
  double magnitude = 0.0;
};

// Modified Gram-Schmidt with a re-orthogonalization pass; magnitude is the
// product of residual norms, i.e. |v_1 ^ ... ^ v_k|.
FrameResult bladeFromFrame(const std::vector<Eigen::VectorXd>& vectors, int n);
FrameResult bladeFromFrame(const Eigen::MatrixXd& columns);

// Linear map on R^n, pushed forward to k-vectors via k x k minors.
struct LinearMapN {
  Eigen::MatrixXd matrix;
};

MultiVector pushForward(const LinearMapN& map, const MultiVector& a);

// Orthogonal split of a vector against the span of a blade: par lies in the
// span, perp in its orthogonal complement, par + perp = a.
struct ProjectionSplit {
  Eigen::VectorXd par;
  Eigen::VectorXd perp;
};

ProjectionSplit projectVector(const Blade& omega, const Eigen::VectorXd& a);

// Membership of a in the span of the blade: |a ^ omega| <= 1e-9 * |a|.
bool spanContains(const Blade& omega, const Eigen::VectorXd& a);

}  // namespace fracmeas
