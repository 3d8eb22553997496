#pragma once

// Disks, ball domains, and the supported manifold shapes, with exact
// plane-intersection queries, parity counting with degeneracy flags,
// Hausdorff measure, tangent volume forms, and uniform point sampling.

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "fracmeas/rng.hpp"
#include "fracmeas/xalg.hpp"

namespace fracmeas {

// The (n-k)-dimensional disk D(p, omega, r): points p + v with v in the
// orthogonal complement of the normal span [omega] and |v| < r.
struct Disk {
  Eigen::VectorXd center;
  Blade normal;  // unit simple k-vector; grade 0 means the disk is a full ball
  double radius = 0.0;
};

// Open ball domain.
struct DomainBall {
  Eigen::VectorXd center;
  double radiusR = 0.0;

  double diam() const { return 2.0 * radiusR; }
};

// ---------------------------------------------------------------------------
// Shapes

// Finite set of distinct points (the 0-dimensional case).
struct PointSet {
  int n = 0;
  std::vector<Eigen::VectorXd> points;
};

// Simplicial k-complex: each simplex is k+1 vertex indices.
struct SimplicialK {
  int n = 0;
  int k = 0;
  std::vector<Eigen::VectorXd> vertices;
  std::vector<std::vector<int>> simplices;
};

// Round k-sphere {center + radius * w : w unit vector in span(basis)} where
// basis has k+1 orthonormal columns.
struct SphereK {
  int n = 0;
  int k = 0;
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::MatrixXd basis;  // n x (k+1), orthonormal columns
};

// Flat k-disk {center + basis * s : |s| < radius} with k orthonormal columns.
struct FlatDiskK {
  int n = 0;
  int k = 0;
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::MatrixXd basis;  // n x k, orthonormal columns
};

using ManifoldShape = std::variant<PointSet, SimplicialK, SphereK, FlatDiskK>;

int shapeDim(const ManifoldShape& shape);    // ambient n
int shapeGrade(const ManifoldShape& shape);  // intrinsic k

// Structural invariants: distinct points, nondegenerate simplices,
// orthonormal bases. Throws std::invalid_argument on violation.
void validateShape(const ManifoldShape& shape);

// True iff the shape (including extreme points of spheres/disks) lies
// strictly inside the open ball.
bool shapeInsideBall(const ManifoldShape& shape, const DomainBall& domain);

// ---------------------------------------------------------------------------
// Intersection queries

enum class Parity { Even, Odd };

enum class DegeneracyKind {
  Tangent,         // disk plane tangent to the shape (or parallel solve)
  BoundaryOfM,     // intersection at the shape's boundary (facet/rim)
  BoundaryOfDisk,  // intersection at distance ~ r from the disk center
  NearSingular,    // ill-conditioned linear solve
};

struct ParityResult {
  int count = 0;  // intersections with the open disk
  Parity parity = Parity::Even;
  bool degenerate = false;
  std::optional<DegeneracyKind> degeneracyKind;
  int closedCount = 0;  // intersections with the closed disk
};

// One intersection point of the disk's affine plane with the shape, with
// everything the estimator needs to classify it.
struct PlaneRoot {
  Eigen::VectorXd point;
  int pieceIndex = -1;       // simplex / atom index; -1 for sphere and flat disk
  double distance = 0.0;     // |point - disk.center|
  bool degenerate = false;
  std::optional<DegeneracyKind> kind;
};

// All intersection points of the disk's affine plane with the shape,
// regardless of the disk radius (radius only enters the per-root
// boundary-of-disk flag). Solver-level degeneracies (tangency, rank loss)
// are reported as flagged roots with no point.
std::vector<PlaneRoot> planeShapeRoots(const ManifoldShape& shape, const Disk& disk);

// Plane vs one simplex: solves the k x k barycentric system. `hit` is set iff
// the plane meets the simplex and the point lies in the open disk.
struct PlaneSimplexResult {
  bool degenerate = false;
  std::optional<DegeneracyKind> kind;
  bool hit = false;
  Eigen::VectorXd point;
  Eigen::VectorXd barycentric;  // coordinates (b_1..b_k); b_0 = 1 - sum
  double margin = 0.0;          // min signed distance to a barycentric constraint
};

PlaneSimplexResult planeSimplexIntersect(const Eigen::MatrixXd& simplexVertices,
                                         const Disk& disk);

// Plane vs round sphere: 0, 1 (tangent, flagged), or 2 points on the
// intersection line, not yet filtered by the disk radius.
struct PlaneSphereResult {
  bool degenerate = false;
  std::optional<DegeneracyKind> kind;
  std::vector<Eigen::VectorXd> points;
};

PlaneSphereResult planeSphereIntersect(const SphereK& sphere, const Disk& disk);

// Parity of the open-disk intersection count, degeneracy flags, and the
// closed-disk count used as preimage multiplicity.
ParityResult parityCount(const ManifoldShape& shape, const Disk& disk);

// True iff the disk's boundary sphere meets the open ball: the minimum of
// |p + r v - c| over unit v perpendicular to the normal span, in closed form.
bool boundaryTouchesOmega(const Disk& disk, const DomainBall& domain);

// ---------------------------------------------------------------------------
// Measure, tangent data, sampling

// k-dimensional Hausdorff measure of the shape.
double hausdorffK(const ManifoldShape& shape);

// Position on a shape: the piece (simplex or atom) index where meaningful,
// and the point itself.
struct SurfaceLocation {
  int pieceIndex = -1;
  Eigen::VectorXd point;
};

// Unit simple k-vector spanning the tangent space at the location (sign is
// per-piece arbitrary; only |vol . omega| is consumed downstream). Grade 0
// shapes return the scalar blade +1.
Blade volumeFormAt(const ManifoldShape& shape, const SurfaceLocation& location);

struct PointSample {
  Eigen::VectorXd z;
  double density = 0.0;  // 1 / hausdorffK(shape)
  SurfaceLocation location;
};

// Uniform draw with respect to the k-dimensional measure on the shape.
PointSample samplePoint(const ManifoldShape& shape, Rng& rng);

}  // namespace fracmeas
