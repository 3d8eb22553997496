#pragma once

// JSON manifold descriptions. Schema (all arrays row-major, vectors as
// arrays of n reals):
//   {"type": "point_set",  "n": 1, "points": [[-1.0], [1.0]]}
//   {"type": "simplicial", "n": 2, "k": 1,
//    "vertices": [[0,0], [1,0], [1,1]], "simplices": [[0,1], [1,2]]}
//   {"type": "sphere",     "n": 2, "k": 1, "center": [0,0], "radius": 1.0,
//    "basis": [[1,0], [0,1]]}            // k+1 orthonormal basis vectors
//   {"type": "flat_disk",  "n": 3, "k": 2, "center": [0,0,0], "radius": 1.0,
//    "basis": [[1,0,0], [0,1,0]]}        // k orthonormal basis vectors

#include <string>

#include "fracmeas/geom.hpp"

namespace fracmeas {

// Parse a manifold description; throws std::invalid_argument on schema or
// shape-invariant violations.
ManifoldShape parseManifold(const std::string& jsonText);

// Load from file; also validates. Throws std::invalid_argument (bad content)
// or std::runtime_error (unreadable file).
ManifoldShape loadManifold(const std::string& path);

// FNV-1a 64-bit content hash, as fixed-width hex (for run manifests).
std::string contentHashHex(const std::string& bytes);

// Whole-file read helper used by the CLI for manifest hashing.
std::string readFileBytes(const std::string& path);

}  // namespace fracmeas
