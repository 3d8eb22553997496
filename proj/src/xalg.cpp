#include "fracmeas/xalg.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fracmeas {

namespace {

void requireSameDim(const MultiVector& a, const MultiVector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}

constexpr double kDependenceThreshold = 1e-12;
constexpr double kSpanTolerance = 1e-9;

}  // namespace

MultiVector::MultiVector(int n, int k) : n_(n), k_(k) {
  if (n < 0 || n > kMaxDim || k < 0 || k > n) {
    throw std::invalid_argument("MultiVector: need 0 <= k <= n <= 12");
  }
  coeffs_ = Eigen::VectorXd::Zero(binomial(n, k));
}

MultiVector MultiVector::scalar(int n, double value) {
  MultiVector m(n, 0);
  m.coeffs_[0] = value;
  return m;
}

MultiVector MultiVector::fromVector(const Eigen::VectorXd& v) {
  MultiVector m(static_cast<int>(v.size()), 1);
  m.coeffs_ = v;
  return m;
}

MultiVector MultiVector::basisVector(int n, int i) {
  MultiVector m(n, 1);
  m.coeffs_[i] = 1.0;
  return m;
}

double MultiVector::coeffForMask(std::uint16_t mask) const {
  const int rank = subsetTable(n_, k_).rank(mask);
  if (rank < 0) throw std::invalid_argument("coeffForMask: mask has wrong popcount");
  return coeffs_[rank];
}

MultiVector& MultiVector::operator+=(const MultiVector& other) {
  requireSameDim(*this, other, "operator+");
  if (k_ != other.k_) throw std::invalid_argument("operator+: grade mismatch");
  coeffs_ += other.coeffs_;
  return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& other) {
  requireSameDim(*this, other, "operator-");
  if (k_ != other.k_) throw std::invalid_argument("operator-: grade mismatch");
  coeffs_ -= other.coeffs_;
  return *this;
}

MultiVector& MultiVector::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

MultiVector wedge(const MultiVector& a, const MultiVector& b) {
  requireSameDim(a, b, "wedge");
  const int n = a.dim();
  const int k = a.grade();
  const int l = b.grade();
  if (k + l > n) throw std::invalid_argument("wedge: grade overflow (k + l > n)");

  const SubsetTable& ta = subsetTable(n, k);
  const SubsetTable& tb = subsetTable(n, l);
  const SubsetTable& tr = subsetTable(n, k + l);
  MultiVector result(n, k + l);
  for (std::size_t i = 0; i < ta.masks.size(); ++i) {
    const double ca = a.coeff(static_cast<int>(i));
    if (ca == 0.0) continue;
    const std::uint16_t sa = ta.masks[i];
    for (std::size_t j = 0; j < tb.masks.size(); ++j) {
      const double cb = b.coeff(static_cast<int>(j));
      if (cb == 0.0) continue;
      const std::uint16_t sb = tb.masks[j];
      if (sa & sb) continue;
      result.coeff(tr.rank(sa | sb)) += mergeSign(sa, sb) * ca * cb;
    }
  }
  return result;
}

MultiVector interiorLeft(const MultiVector& a, const MultiVector& b) {
  requireSameDim(a, b, "interiorLeft");
  const int n = a.dim();
  const int l = a.grade();
  const int k = b.grade();
  if (l > k) throw std::invalid_argument("interiorLeft: contractor grade exceeds target");

  const SubsetTable& ta = subsetTable(n, l);
  const SubsetTable& tb = subsetTable(n, k);
  const SubsetTable& tr = subsetTable(n, k - l);
  MultiVector result(n, k - l);
  // Adjointness in the orthonormal basis gives
  //   (a ⌟ b)_T = sum over S disjoint from T of a_S * sign(S,T) * b_{S|T}.
  for (std::size_t t = 0; t < tr.masks.size(); ++t) {
    const std::uint16_t st = tr.masks[t];
    double acc = 0.0;
    for (std::size_t s = 0; s < ta.masks.size(); ++s) {
      const std::uint16_t ss = ta.masks[s];
      if (ss & st) continue;
      const double ca = a.coeff(static_cast<int>(s));
      if (ca == 0.0) continue;
      acc += ca * mergeSign(ss, st) * b.coeff(tb.rank(ss | st));
    }
    result.coeff(static_cast<int>(t)) = acc;
  }
  return result;
}

double inner(const MultiVector& a, const MultiVector& b) {
  requireSameDim(a, b, "inner");
  if (a.grade() != b.grade()) throw std::invalid_argument("inner: grade mismatch");
  return a.coeffs().dot(b.coeffs());
}

Blade Blade::signBlade(int n, double sign) {
  if (sign != 1.0 && sign != -1.0) throw std::invalid_argument("signBlade: sign must be +-1");
  Blade blade;
  blade.frame = Eigen::MatrixXd(n, 0);
  blade.cached = MultiVector::scalar(n, sign);
  blade.orientationSign = sign;
  return blade;
}

Blade Blade::fromOrthonormalFrame(const Eigen::MatrixXd& frame) {
  const int n = static_cast<int>(frame.rows());
  const int k = static_cast<int>(frame.cols());
  if (k == 0) return signBlade(n, 1.0);
  assert((frame.transpose() * frame - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-10);
  Blade blade;
  blade.frame = frame;
  MultiVector acc = MultiVector::fromVector(frame.col(0));
  for (int i = 1; i < k; ++i) {
    acc = wedge(acc, MultiVector::fromVector(frame.col(i)));
  }
  blade.cached = acc;
  blade.orientationSign = 1.0;
  return blade;
}

FrameResult bladeFromFrame(const Eigen::MatrixXd& columns) {
  const int n = static_cast<int>(columns.rows());
  const int k = static_cast<int>(columns.cols());
  if (k > n) throw std::invalid_argument("bladeFromFrame: more vectors than dimension");

  FrameResult out;
  if (k == 0) {
    out.blade = Blade::signBlade(n, 1.0);
    out.magnitude = 1.0;
    return out;
  }

  Eigen::MatrixXd q(n, k);
  double magnitude = 1.0;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = columns.col(i);
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        v -= q.col(j).dot(v) * q.col(j);
      }
    }
    const double residual = v.norm();
    if (residual < kDependenceThreshold) {
      out.degenerate = true;
      out.magnitude = 0.0;
      return out;
    }
    magnitude *= residual;
    q.col(i) = v / residual;
  }
  out.blade = Blade::fromOrthonormalFrame(q);
  out.magnitude = magnitude;
  return out;
}

FrameResult bladeFromFrame(const std::vector<Eigen::VectorXd>& vectors, int n) {
  Eigen::MatrixXd columns(n, static_cast<int>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) {
      throw std::invalid_argument("bladeFromFrame: vector dimension mismatch");
    }
    columns.col(static_cast<int>(i)) = vectors[i];
  }
  return bladeFromFrame(columns);
}

MultiVector pushForward(const LinearMapN& map, const MultiVector& a) {
  const int n = a.dim();
  if (map.matrix.rows() != n || map.matrix.cols() != n) {
    throw std::invalid_argument("pushForward: map dimension mismatch");
  }
  const int k = a.grade();
  if (k == 0) return a;

  const SubsetTable& table = subsetTable(n, k);
  MultiVector result(n, k);
  // (L a)_T = sum_S det(L[T, S]) a_S, the k x k minor with rows T, cols S.
  std::vector<int> rows, cols;
  rows.reserve(k);
  cols.reserve(k);
  Eigen::MatrixXd minor(k, k);
  for (std::size_t t = 0; t < table.masks.size(); ++t) {
    rows.clear();
    for (int bit = 0; bit < n; ++bit) {
      if (table.masks[t] & (1u << bit)) rows.push_back(bit);
    }
    double acc = 0.0;
    for (std::size_t s = 0; s < table.masks.size(); ++s) {
      const double ca = a.coeff(static_cast<int>(s));
      if (ca == 0.0) continue;
      cols.clear();
      for (int bit = 0; bit < n; ++bit) {
        if (table.masks[s] & (1u << bit)) cols.push_back(bit);
      }
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          minor(i, j) = map.matrix(rows[i], cols[j]);
        }
      }
      acc += minor.determinant() * ca;
    }
    result.coeff(static_cast<int>(t)) = acc;
  }
  return result;
}

ProjectionSplit projectVector(const Blade& omega, const Eigen::VectorXd& a) {
  if (a.size() != omega.dim()) {
    throw std::invalid_argument("projectVector: dimension mismatch");
  }
  ProjectionSplit split;
  if (omega.grade() == 0) {
    split.par = Eigen::VectorXd::Zero(a.size());
    split.perp = a;
    return split;
  }
  split.par = omega.frame * (omega.frame.transpose() * a);
  split.perp = a - split.par;
  return split;
}

bool spanContains(const Blade& omega, const Eigen::VectorXd& a) {
  if (a.size() != omega.dim()) {
    throw std::invalid_argument("spanContains: dimension mismatch");
  }
  const double norm = a.norm();
  if (omega.grade() == omega.dim()) return true;  // span is all of R^n
  const MultiVector wedged = wedge(MultiVector::fromVector(a), omega.cached);
  return wedged.norm() <= kSpanTolerance * norm;
}

}  // namespace fracmeas
