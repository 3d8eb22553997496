#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "fracmeas/geom.hpp"
#include "fracmeas/manifold_io.hpp"

using namespace fracmeas;

namespace {
const std::string kDataDir = FRACMEAS_DATA_DIR;
}

TEST_SUITE_BEGIN("manifold_io");

TEST_CASE("bundled example files parse into validated shapes") {
  const ManifoldShape pair = loadManifold(kDataDir + "/two_points_1d.json");
  REQUIRE(std::holds_alternative<PointSet>(pair));
  CHECK(shapeDim(pair) == 1);
  CHECK(shapeGrade(pair) == 0);
  CHECK(hausdorffK(pair) == doctest::Approx(2.0));

  const ManifoldShape single = loadManifold(kDataDir + "/single_point_1d.json");
  CHECK(hausdorffK(single) == doctest::Approx(1.0));

  const ManifoldShape circle = loadManifold(kDataDir + "/unit_circle.json");
  REQUIRE(std::holds_alternative<SphereK>(circle));
  CHECK(shapeDim(circle) == 2);
  CHECK(shapeGrade(circle) == 1);
  CHECK(hausdorffK(circle) == doctest::Approx(2.0 * std::numbers::pi));

  const ManifoldShape sphere = loadManifold(kDataDir + "/unit_sphere.json");
  CHECK(shapeGrade(sphere) == 2);
  CHECK(hausdorffK(sphere) == doctest::Approx(4.0 * std::numbers::pi));

  const ManifoldShape segments = loadManifold(kDataDir + "/segment_mesh.json");
  REQUIRE(std::holds_alternative<SimplicialK>(segments));
  CHECK(hausdorffK(segments) == doctest::Approx(2.0 * std::sqrt(1.25)));

  const ManifoldShape triangles = loadManifold(kDataDir + "/triangle_mesh.json");
  REQUIRE(std::holds_alternative<SimplicialK>(triangles));
  CHECK(shapeGrade(triangles) == 2);
  CHECK(hausdorffK(triangles) > 0.0);
}

TEST_CASE("parser accepts inline documents of every type") {
  const ManifoldShape flat = parseManifold(R"({
    "type": "flat_disk", "n": 3, "k": 2,
    "center": [0, 0, 0], "radius": 1.5,
    "basis": [[1, 0, 0], [0, 1, 0]]
  })");
  REQUIRE(std::holds_alternative<FlatDiskK>(flat));
  CHECK(hausdorffK(flat) == doctest::Approx(std::numbers::pi * 2.25));

  const ManifoldShape mesh = parseManifold(R"({
    "type": "simplicial", "n": 2, "k": 1,
    "vertices": [[0, 0], [1, 0], [1, 1]],
    "simplices": [[0, 1], [1, 2]]
  })");
  CHECK(hausdorffK(mesh) == doctest::Approx(2.0));
}

TEST_CASE("parser rejects malformed documents") {
  CHECK_THROWS_AS(parseManifold("not json at all"), std::invalid_argument);
  CHECK_THROWS_AS(parseManifold("{}"), std::invalid_argument);
  CHECK_THROWS_AS(parseManifold(R"({"type": "nonsense", "n": 2})"), std::invalid_argument);
  // Wrong coordinate dimension.
  CHECK_THROWS_AS(parseManifold(R"({"type": "point_set", "n": 2, "points": [[1, 2, 3]]})"),
                  std::invalid_argument);
  // Ambient dimension out of range.
  CHECK_THROWS_AS(parseManifold(R"({"type": "point_set", "n": 13, "points": [[0]]})"),
                  std::invalid_argument);
  // Structurally valid JSON failing shape validation (duplicate points).
  CHECK_THROWS_AS(parseManifold(R"({"type": "point_set", "n": 1, "points": [[1], [1]]})"),
                  std::invalid_argument);
  // Non-orthonormal sphere basis.
  CHECK_THROWS_AS(parseManifold(R"({
    "type": "sphere", "n": 2, "k": 1, "center": [0, 0], "radius": 1,
    "basis": [[1, 0], [1, 1]]
  })"),
                  std::invalid_argument);
  // Missing file.
  CHECK_THROWS_AS(loadManifold(kDataDir + "/does_not_exist.json"), std::runtime_error);
}

TEST_CASE("content hash is stable and byte-sensitive") {
  const std::string bytes = readFileBytes(kDataDir + "/two_points_1d.json");
  const std::string h1 = contentHashHex(bytes);
  const std::string h2 = contentHashHex(bytes);
  CHECK(h1 == h2);
  CHECK(h1.size() == 16);
  CHECK(h1 != contentHashHex(bytes + " "));
  CHECK(contentHashHex("") != contentHashHex("x"));
}

TEST_SUITE_END();
