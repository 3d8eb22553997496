#include "fracmeas/geom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracmeas/constants.hpp"

namespace fracmeas {

namespace {

constexpr double kRelTol = 1e-9;        // boundary / tangency tolerance
constexpr double kFrameTol = 1e-12;     // orthonormality / nondegeneracy
constexpr double kRankTol = 1e-9;       // singular-value ratio for solves
// Disk-boundary proximity uses a much tighter relative window. The distance
// and the radius can both be huge (far-field disk centers from the
// heavy-tailed radial proposal) while the gap between them stays at the
// geometry's own scale; the classification is only genuinely ambiguous once
// the gap falls within a few hundred ulps of the common magnitude. A wider
// window would spuriously flag a polynomially-heavy share of far-field draws.
constexpr double kBoundaryTol = 1e-13;

bool nearlyEqualRel(double a, double b, double tol = kRelTol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void requireOrthonormal(const Eigen::MatrixXd& basis, const char* what) {
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return;
  const double err =
      (basis.transpose() * basis - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
  if (err > kFrameTol) {
    throw std::invalid_argument(std::string(what) + ": basis not orthonormal within 1e-12");
  }
}

Eigen::MatrixXd simplexEdgeMatrix(const SimplicialK& shape, const std::vector<int>& simplex) {
  const int k = shape.k;
  Eigen::MatrixXd edges(shape.n, k);
  for (int i = 0; i < k; ++i) {
    edges.col(i) = shape.vertices[simplex[i + 1]] - shape.vertices[simplex[0]];
  }
  return edges;
}

double simplexVolume(const SimplicialK& shape, const std::vector<int>& simplex) {
  const Eigen::MatrixXd edges = simplexEdgeMatrix(shape, simplex);
  double factorial = 1.0;
  for (int i = 2; i <= shape.k; ++i) factorial *= i;
  return bladeFromFrame(edges).magnitude / factorial;
}

void checkDiskShapeCompatible(const ManifoldShape& shape, const Disk& disk) {
  if (shapeDim(shape) != disk.normal.dim() || shapeDim(shape) != disk.center.size()) {
    throw std::invalid_argument("parity query: ambient dimension mismatch");
  }
  if (shapeGrade(shape) != disk.normal.grade()) {
    throw std::invalid_argument("parity query: shape grade must match disk normal grade");
  }
}

void appendFlagged(std::vector<PlaneRoot>& roots, DegeneracyKind kind, int pieceIndex = -1) {
  PlaneRoot root;
  root.degenerate = true;
  root.kind = kind;
  root.pieceIndex = pieceIndex;
  roots.push_back(std::move(root));
}

PlaneRoot makeRoot(const Eigen::VectorXd& point, int pieceIndex, const Disk& disk) {
  PlaneRoot root;
  root.point = point;
  root.pieceIndex = pieceIndex;
  root.distance = (point - disk.center).norm();
  if (nearlyEqualRel(root.distance, disk.radius, kBoundaryTol)) {
    root.degenerate = true;
    root.kind = DegeneracyKind::BoundaryOfDisk;
  }
  return root;
}

}  // namespace

int shapeDim(const ManifoldShape& shape) {
  return std::visit([](const auto& s) { return s.n; }, shape);
}

int shapeGrade(const ManifoldShape& shape) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PointSet>) {
          return 0;
        } else {
          return s.k;
        }
      },
      shape);
}

void validateShape(const ManifoldShape& shape) {
  const int n = shapeDim(shape);
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("shape: need 1 <= n <= 12");

  if (const auto* ps = std::get_if<PointSet>(&shape)) {
    if (ps->points.empty()) throw std::invalid_argument("PointSet: empty");
    for (const auto& p : ps->points) {
      if (p.size() != n) throw std::invalid_argument("PointSet: point dimension mismatch");
    }
    for (std::size_t i = 0; i < ps->points.size(); ++i) {
      for (std::size_t j = i + 1; j < ps->points.size(); ++j) {
        if ((ps->points[i] - ps->points[j]).norm() <= kFrameTol) {
          throw std::invalid_argument("PointSet: points must be pairwise distinct");
        }
      }
    }
  } else if (const auto* sx = std::get_if<SimplicialK>(&shape)) {
    if (sx->k < 1 || sx->k > n) throw std::invalid_argument("SimplicialK: need 1 <= k <= n");
    if (sx->simplices.empty()) throw std::invalid_argument("SimplicialK: no simplices");
    for (const auto& v : sx->vertices) {
      if (v.size() != n) throw std::invalid_argument("SimplicialK: vertex dimension mismatch");
    }
    for (const auto& simplex : sx->simplices) {
      if (static_cast<int>(simplex.size()) != sx->k + 1) {
        throw std::invalid_argument("SimplicialK: simplex must list k+1 vertices");
      }
      for (int idx : simplex) {
        if (idx < 0 || idx >= static_cast<int>(sx->vertices.size())) {
          throw std::invalid_argument("SimplicialK: vertex index out of range");
        }
      }
      if (simplexVolume(*sx, simplex) <= kFrameTol) {
        throw std::invalid_argument("SimplicialK: degenerate simplex (k-volume <= 1e-12)");
      }
    }
  } else if (const auto* sp = std::get_if<SphereK>(&shape)) {
    if (sp->k < 0 || sp->k + 1 > n) throw std::invalid_argument("SphereK: need 0 <= k <= n-1");
    if (!(sp->radius > 0.0)) throw std::invalid_argument("SphereK: radius must be positive");
    if (sp->center.size() != n || sp->basis.rows() != n || sp->basis.cols() != sp->k + 1) {
      throw std::invalid_argument("SphereK: center/basis dimensions mismatch");
    }
    requireOrthonormal(sp->basis, "SphereK");
  } else if (const auto* fd = std::get_if<FlatDiskK>(&shape)) {
    if (fd->k < 1 || fd->k > n) throw std::invalid_argument("FlatDiskK: need 1 <= k <= n");
    if (!(fd->radius > 0.0)) throw std::invalid_argument("FlatDiskK: radius must be positive");
    if (fd->center.size() != n || fd->basis.rows() != n || fd->basis.cols() != fd->k) {
      throw std::invalid_argument("FlatDiskK: center/basis dimensions mismatch");
    }
    requireOrthonormal(fd->basis, "FlatDiskK");
  }
}

bool shapeInsideBall(const ManifoldShape& shape, const DomainBall& domain) {
  const double R = domain.radiusR;
  const Eigen::VectorXd& c = domain.center;
  if (const auto* ps = std::get_if<PointSet>(&shape)) {
    return std::all_of(ps->points.begin(), ps->points.end(),
                       [&](const Eigen::VectorXd& p) { return (p - c).norm() < R; });
  }
  if (const auto* sx = std::get_if<SimplicialK>(&shape)) {
    return std::all_of(sx->vertices.begin(), sx->vertices.end(),
                       [&](const Eigen::VectorXd& v) { return (v - c).norm() < R; });
  }
  if (const auto* sp = std::get_if<SphereK>(&shape)) {
    return (sp->center - c).norm() + sp->radius < R;
  }
  const auto& fd = std::get<FlatDiskK>(shape);
  return (fd.center - c).norm() + fd.radius < R;
}

PlaneSimplexResult planeSimplexIntersect(const Eigen::MatrixXd& simplexVertices,
                                         const Disk& disk) {
  const int k = disk.normal.grade();
  if (simplexVertices.cols() != k + 1 || simplexVertices.rows() != disk.center.size()) {
    throw std::invalid_argument("planeSimplexIntersect: simplex/disk dimensions mismatch");
  }
  PlaneSimplexResult out;

  Eigen::MatrixXd edges(simplexVertices.rows(), k);
  for (int i = 0; i < k; ++i) {
    edges.col(i) = simplexVertices.col(i + 1) - simplexVertices.col(0);
  }
  // Membership of the plane p + [omega]^perp reads F^T(x - p) = 0 where F is
  // the orthonormal normal frame; with x = V0 + E b this is (F^T E) b = F^T(p - V0).
  const Eigen::MatrixXd system = disk.normal.frame.transpose() * edges;
  const Eigen::VectorXd rhs =
      disk.normal.frame.transpose() * (disk.center - simplexVertices.col(0));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(k - 1);
  if (!(smin > kRankTol * std::max(smax, 1.0))) {
    // Parallel (tangent) simplex: the solve is singular.
    out.degenerate = true;
    out.kind = DegeneracyKind::Tangent;
    return out;
  }

  const Eigen::VectorXd b = svd.solve(rhs);
  out.barycentric = b;
  out.point = simplexVertices.col(0) + edges * b;
  out.margin = 1.0 - b.sum();
  for (int i = 0; i < k; ++i) out.margin = std::min(out.margin, b(i));

  const double distance = (out.point - disk.center).norm();
  if (std::abs(out.margin) <= kRelTol) {
    out.degenerate = true;
    out.kind = DegeneracyKind::BoundaryOfM;
  } else if (out.margin > 0.0 && nearlyEqualRel(distance, disk.radius, kBoundaryTol)) {
    out.degenerate = true;
    out.kind = DegeneracyKind::BoundaryOfDisk;
  }
  out.hit = out.margin > 0.0 && distance < disk.radius;
  return out;
}

PlaneSphereResult planeSphereIntersect(const SphereK& sphere, const Disk& disk) {
  PlaneSphereResult out;
  const int k = disk.normal.grade();
  const double rho = sphere.radius;

  // Express plane membership in the sphere's chart x = center + B y,
  // y in R^{k+1}: (F^T B) y = F^T (p - center). The generic solution set is a
  // line y(t) = y0 + t w with y0 the least-norm solution and w the kernel
  // direction; |y| = rho then gives a quadratic in t.
  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(k + 1);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(k + 1);
  if (k == 0) {
    w(0) = 1.0;
  } else {
    const Eigen::MatrixXd system = disk.normal.frame.transpose() * sphere.basis;
    const Eigen::VectorXd rhs =
        disk.normal.frame.transpose() * (disk.center - sphere.center);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(k - 1);
    if (!(smin > kRankTol * std::max(smax, 1.0))) {
      // The two affine planes do not meet in a line.
      out.degenerate = true;
      out.kind = DegeneracyKind::NearSingular;
      return out;
    }
    y0 = svd.solve(rhs);  // least-norm solution, orthogonal to the kernel
    w = svd.matrixV().col(k);
  }

  const double discriminant = rho * rho - y0.squaredNorm();
  if (std::abs(discriminant) <= kRelTol * rho * rho) {
    out.degenerate = true;
    out.kind = DegeneracyKind::Tangent;
    out.points.push_back(sphere.center + sphere.basis * y0);
    return out;
  }
  if (discriminant < 0.0) return out;  // plane misses the sphere

  const double t = std::sqrt(discriminant);
  out.points.push_back(sphere.center + sphere.basis * (y0 + t * w));
  out.points.push_back(sphere.center + sphere.basis * (y0 - t * w));
  return out;
}

std::vector<PlaneRoot> planeShapeRoots(const ManifoldShape& shape, const Disk& disk) {
  checkDiskShapeCompatible(shape, disk);
  std::vector<PlaneRoot> roots;

  if (const auto* ps = std::get_if<PointSet>(&shape)) {
    // Grade-0 normal: the disk plane is all of R^n, every atom intersects it.
    for (std::size_t i = 0; i < ps->points.size(); ++i) {
      roots.push_back(makeRoot(ps->points[i], static_cast<int>(i), disk));
    }
    return roots;
  }

  if (const auto* sx = std::get_if<SimplicialK>(&shape)) {
    Eigen::MatrixXd verts(sx->n, sx->k + 1);
    for (std::size_t s = 0; s < sx->simplices.size(); ++s) {
      for (int i = 0; i <= sx->k; ++i) verts.col(i) = sx->vertices[sx->simplices[s][i]];
      const PlaneSimplexResult hit = planeSimplexIntersect(verts, disk);
      if (hit.degenerate && hit.kind == DegeneracyKind::Tangent) {
        appendFlagged(roots, DegeneracyKind::Tangent, static_cast<int>(s));
        continue;
      }
      if (hit.margin > kRelTol) {
        roots.push_back(makeRoot(hit.point, static_cast<int>(s), disk));
      } else if (std::abs(hit.margin) <= kRelTol) {
        // Plane passes through a facet or vertex of this simplex.
        PlaneRoot root = makeRoot(hit.point, static_cast<int>(s), disk);
        root.degenerate = true;
        if (!root.kind) root.kind = DegeneracyKind::BoundaryOfM;
        roots.push_back(std::move(root));
      }
    }
    return roots;
  }

  if (const auto* sp = std::get_if<SphereK>(&shape)) {
    const PlaneSphereResult hit = planeSphereIntersect(*sp, disk);
    if (hit.degenerate && hit.points.empty()) {
      appendFlagged(roots, hit.kind.value_or(DegeneracyKind::NearSingular));
      return roots;
    }
    for (const auto& point : hit.points) {
      PlaneRoot root = makeRoot(point, -1, disk);
      if (hit.degenerate) {
        root.degenerate = true;
        if (!root.kind) root.kind = hit.kind;
      }
      roots.push_back(std::move(root));
    }
    return roots;
  }

  const auto& fd = std::get<FlatDiskK>(shape);
  const Eigen::MatrixXd system = disk.normal.frame.transpose() * fd.basis;
  const Eigen::VectorXd rhs = disk.normal.frame.transpose() * (disk.center - fd.center);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(fd.k - 1);
  if (!(smin > kRankTol * std::max(smax, 1.0))) {
    appendFlagged(roots, DegeneracyKind::Tangent);
    return roots;
  }
  const Eigen::VectorXd s = svd.solve(rhs);
  const double radial = s.norm();
  if (nearlyEqualRel(radial, fd.radius)) {
    PlaneRoot root = makeRoot(fd.center + fd.basis * s, -1, disk);
    root.degenerate = true;
    if (!root.kind) root.kind = DegeneracyKind::BoundaryOfM;
    roots.push_back(std::move(root));
  } else if (radial < fd.radius) {
    roots.push_back(makeRoot(fd.center + fd.basis * s, -1, disk));
  }
  return roots;
}

ParityResult parityCount(const ManifoldShape& shape, const Disk& disk) {
  const std::vector<PlaneRoot> roots = planeShapeRoots(shape, disk);
  ParityResult result;
  for (const PlaneRoot& root : roots) {
    if (root.degenerate) {
      result.degenerate = true;
      if (!result.degeneracyKind) result.degeneracyKind = root.kind;
      if (root.point.size() == 0) continue;
    }
    // Transversality at the root: the disk plane must not be tangent to the
    // shape's tangent space there.
    if (root.point.size() > 0 && shapeGrade(shape) > 0) {
      SurfaceLocation loc{root.pieceIndex, root.point};
      const Blade vol = volumeFormAt(shape, loc);
      if (std::abs(inner(vol.cached, disk.normal.cached)) < kRelTol) {
        result.degenerate = true;
        if (!result.degeneracyKind) result.degeneracyKind = DegeneracyKind::Tangent;
      }
    }
    if (root.distance < disk.radius) ++result.count;
    if (root.distance <= disk.radius) ++result.closedCount;
  }
  result.parity = (result.count % 2 == 1) ? Parity::Odd : Parity::Even;
  return result;
}

bool boundaryTouchesOmega(const Disk& disk, const DomainBall& domain) {
  if (disk.center.size() != domain.center.size()) {
    throw std::invalid_argument("boundaryTouchesOmega: dimension mismatch");
  }
  const Eigen::VectorXd m = domain.center - disk.center;
  const ProjectionSplit split = projectVector(disk.normal, m);
  // Minimum distance from the domain center to the disk's boundary sphere:
  // the in-plane component can rotate to the nearest boundary point, the
  // normal component cannot. (With a zero in-plane component every boundary
  // point is equidistant and the same formula applies.)
  const double inPlane = split.perp.norm();
  const double radialGap = inPlane - disk.radius;
  const double minDistSq = split.par.squaredNorm() + radialGap * radialGap;
  return minDistSq < domain.radiusR * domain.radiusR;
}

double hausdorffK(const ManifoldShape& shape) {
  if (const auto* ps = std::get_if<PointSet>(&shape)) {
    return static_cast<double>(ps->points.size());
  }
  if (const auto* sx = std::get_if<SimplicialK>(&shape)) {
    double total = 0.0;
    for (const auto& simplex : sx->simplices) total += simplexVolume(*sx, simplex);
    return total;
  }
  if (const auto* sp = std::get_if<SphereK>(&shape)) {
    return sphereSurface(sp->k) * std::pow(sp->radius, sp->k);
  }
  const auto& fd = std::get<FlatDiskK>(shape);
  return unitBallGeometry(fd.k).alphaN * std::pow(fd.radius, fd.k);
}

Blade volumeFormAt(const ManifoldShape& shape, const SurfaceLocation& location) {
  const int n = shapeDim(shape);

  if (std::holds_alternative<PointSet>(shape)) {
    return Blade::signBlade(n, 1.0);
  }

  if (const auto* sx = std::get_if<SimplicialK>(&shape)) {
    if (location.pieceIndex < 0 ||
        location.pieceIndex >= static_cast<int>(sx->simplices.size())) {
      throw std::invalid_argument("volumeFormAt: simplex index out of range");
    }
    const Eigen::MatrixXd edges = simplexEdgeMatrix(*sx, sx->simplices[location.pieceIndex]);
    if (location.point.size() > 0) {
      // Reject locations off the simplex's affine hull.
      const Eigen::VectorXd offset =
          location.point - sx->vertices[sx->simplices[location.pieceIndex][0]];
      const Eigen::VectorXd b =
          edges.colPivHouseholderQr().solve(offset);
      const double scale = std::max(1.0, offset.norm());
      if ((edges * b - offset).norm() > kRelTol * scale) {
        throw std::invalid_argument("volumeFormAt: point off the simplex plane");
      }
    }
    const FrameResult frame = bladeFromFrame(edges);
    if (frame.degenerate) throw std::invalid_argument("volumeFormAt: degenerate simplex");
    return frame.blade;
  }

  if (const auto* sp = std::get_if<SphereK>(&shape)) {
    if (location.point.size() != n) {
      throw std::invalid_argument("volumeFormAt: sphere location needs the point");
    }
    const Eigen::VectorXd offset = location.point - sp->center;
    const Eigen::VectorXd y = sp->basis.transpose() * offset;
    if (!nearlyEqualRel(offset.norm(), sp->radius) ||
        (sp->basis * y - offset).norm() > kRelTol * sp->radius) {
      throw std::invalid_argument("volumeFormAt: point off the sphere");
    }
    // Tangent space: directions in span(basis) orthogonal to the radial one.
    // Complete y/|y| to an orthonormal basis of R^{k+1} and drop it.
    const Eigen::VectorXd u = y / y.norm();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    const Eigen::MatrixXd full = qr.householderQ();
    const Eigen::MatrixXd tangent = sp->basis * full.rightCols(sp->k);
    return Blade::fromOrthonormalFrame(tangent);
  }

  const auto& fd = std::get<FlatDiskK>(shape);
  if (location.point.size() > 0) {
    const Eigen::VectorXd offset = location.point - fd.center;
    const Eigen::VectorXd s = fd.basis.transpose() * offset;
    if ((fd.basis * s - offset).norm() > kRelTol * std::max(1.0, offset.norm()) ||
        s.norm() > fd.radius * (1.0 + kRelTol)) {
      throw std::invalid_argument("volumeFormAt: point off the flat disk");
    }
  }
  return Blade::fromOrthonormalFrame(fd.basis);
}

PointSample samplePoint(const ManifoldShape& shape, Rng& rng) {
  PointSample sample;
  const double measure = hausdorffK(shape);
  if (!(measure > 0.0)) throw std::invalid_argument("samplePoint: zero-measure shape");
  sample.density = 1.0 / measure;

  if (const auto* ps = std::get_if<PointSet>(&shape)) {
    const auto m = ps->points.size();
    auto index = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(m));
    if (index >= m) index = m - 1;
    sample.z = ps->points[index];
    sample.location = {static_cast<int>(index), sample.z};
    return sample;
  }

  if (const auto* sx = std::get_if<SimplicialK>(&shape)) {
    // Choose a simplex proportionally to its k-volume, then a uniform point
    // via normalized exponential spacings (flat Dirichlet weights).
    double cumulative = rng.uniform01() * measure;
    std::size_t chosen = 0;
    for (; chosen + 1 < sx->simplices.size(); ++chosen) {
      cumulative -= simplexVolume(*sx, sx->simplices[chosen]);
      if (cumulative <= 0.0) break;
    }
    const auto& simplex = sx->simplices[chosen];
    Eigen::VectorXd weights(sx->k + 1);
    for (int i = 0; i <= sx->k; ++i) weights(i) = -std::log(rng.uniformOpen());
    weights /= weights.sum();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(sx->n);
    for (int i = 0; i <= sx->k; ++i) z += weights(i) * sx->vertices[simplex[i]];
    sample.z = z;
    sample.location = {static_cast<int>(chosen), z};
    return sample;
  }

  if (const auto* sp = std::get_if<SphereK>(&shape)) {
    Eigen::VectorXd g(sp->k + 1);
    do {
      for (int i = 0; i <= sp->k; ++i) g(i) = rng.gaussian();
    } while (g.norm() == 0.0);
    sample.z = sp->center + sp->radius * (sp->basis * g.normalized());
    sample.location = {-1, sample.z};
    return sample;
  }

  const auto& fd = std::get<FlatDiskK>(shape);
  Eigen::VectorXd g(fd.k);
  do {
    for (int i = 0; i < fd.k; ++i) g(i) = rng.gaussian();
  } while (g.norm() == 0.0);
  const double radial = fd.radius * std::pow(rng.uniform01(), 1.0 / fd.k);
  sample.z = fd.center + fd.basis * (radial * g.normalized());
  sample.location = {-1, sample.z};
  return sample;
}

}  // namespace fracmeas
