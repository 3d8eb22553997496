#include "fracmeas/manifold_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fracmeas {

namespace {

using nlohmann::json;

Eigen::VectorXd parseVector(const json& node, int n, const char* what) {
  if (!node.is_array() || static_cast<int>(node.size()) != n) {
    throw std::invalid_argument(std::string("manifold: ") + what + " must be an array of n reals");
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = node[i].get<double>();
  return v;
}

Eigen::MatrixXd parseBasis(const json& node, int n, int cols, const char* what) {
  if (!node.is_array() || static_cast<int>(node.size()) != cols) {
    throw std::invalid_argument(std::string("manifold: ") + what + ": wrong number of basis vectors");
  }
  Eigen::MatrixXd basis(n, cols);
  for (int j = 0; j < cols; ++j) basis.col(j) = parseVector(node[j], n, what);
  return basis;
}

}  // namespace

ManifoldShape parseManifold(const std::string& jsonText) {
  json doc;
  try {
    doc = json::parse(jsonText);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("manifold: invalid JSON: ") + err.what());
  }
  if (!doc.is_object() || !doc.contains("type") || !doc.contains("n")) {
    throw std::invalid_argument("manifold: need object with 'type' and 'n'");
  }
  const std::string type = doc["type"].get<std::string>();
  const int n = doc["n"].get<int>();
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("manifold: need 1 <= n <= 12");

  ManifoldShape shape;
  if (type == "point_set") {
    PointSet ps;
    ps.n = n;
    for (const auto& p : doc.at("points")) ps.points.push_back(parseVector(p, n, "points[]"));
    shape = std::move(ps);
  } else if (type == "simplicial") {
    SimplicialK sx;
    sx.n = n;
    sx.k = doc.at("k").get<int>();
    for (const auto& v : doc.at("vertices")) sx.vertices.push_back(parseVector(v, n, "vertices[]"));
    for (const auto& s : doc.at("simplices")) {
      sx.simplices.push_back(s.get<std::vector<int>>());
    }
    shape = std::move(sx);
  } else if (type == "sphere") {
    SphereK sp;
    sp.n = n;
    sp.k = doc.at("k").get<int>();
    sp.center = parseVector(doc.at("center"), n, "center");
    sp.radius = doc.at("radius").get<double>();
    sp.basis = parseBasis(doc.at("basis"), n, sp.k + 1, "basis");
    shape = std::move(sp);
  } else if (type == "flat_disk") {
    FlatDiskK fd;
    fd.n = n;
    fd.k = doc.at("k").get<int>();
    fd.center = parseVector(doc.at("center"), n, "center");
    fd.radius = doc.at("radius").get<double>();
    fd.basis = parseBasis(doc.at("basis"), n, fd.k, "basis");
    shape = std::move(fd);
  } else {
    throw std::invalid_argument("manifold: unknown type '" + type + "'");
  }
  validateShape(shape);
  return shape;
}

ManifoldShape loadManifold(const std::string& path) {
  return parseManifold(readFileBytes(path));
}

std::string contentHashHex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

std::string readFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fracmeas
