#include "npoly/icosphere.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "npoly/errors.hpp"

namespace npoly
{

namespace
{

std::pair<int, int> edge_key(int a, int b)
{
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

Icosphere make_icosphere(int subdivisions)
{
  if (subdivisions < 0 || subdivisions > 9) {
    throw PreconditionError("icosphere subdivisions must lie in [0, 9]");
  }
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> points = {
    {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
    {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
    {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (auto& p : points) {
    p.normalize();
  }
  std::vector<Triangle> triangles = {
    {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
    {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
    {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
    {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
  };

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      const auto key = edge_key(a, b);
      if (auto it = midpoints.find(key); it != midpoints.end()) {
        return it->second;
      }
      points.push_back((points[a] + points[b]).normalized());
      const int index = static_cast<int>(points.size()) - 1;
      midpoints.emplace(key, index);
      return index;
    };
    std::vector<Triangle> refined;
    refined.reserve(triangles.size() * 4);
    for (const auto& [a, b, c] : triangles) {
      const int ab = midpoint(a, b);
      const int bc = midpoint(b, c);
      const int ca = midpoint(c, a);
      refined.push_back({a, ab, ca});
      refined.push_back({b, bc, ab});
      refined.push_back({c, ca, bc});
      refined.push_back({ab, bc, ca});
    }
    triangles = std::move(refined);
  }

  Icosphere sphere;
  sphere.vertices.resize(3, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    sphere.vertices.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  sphere.triangles = std::move(triangles);
  return sphere;
}

int count_edges(const std::vector<Triangle>& triangles)
{
  std::map<std::pair<int, int>, int> uses;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      ++uses[edge_key(tri[k], tri[(k + 1) % 3])];
    }
  }
  return static_cast<int>(uses.size());
}

bool is_closed_surface(const std::vector<Triangle>& triangles)
{
  std::map<std::pair<int, int>, int> uses;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      ++uses[edge_key(tri[k], tri[(k + 1) % 3])];
    }
  }
  for (const auto& [edge, count] : uses) {
    if (count != 2) {
      return false;
    }
  }
  return !uses.empty();
}

}  // namespace npoly
