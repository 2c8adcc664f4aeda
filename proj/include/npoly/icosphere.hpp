#ifndef NPOLY_ICOSPHERE_HPP_
#define NPOLY_ICOSPHERE_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

namespace npoly
{

using Triangle = std::array<int, 3>;

/// Unit-sphere triangulation: an icosahedron whose faces are split into four
/// `subdivisions` times, new vertices projected to the sphere.
/// Vertex count 10 * 4^s + 2; triangles are oriented counter-clockwise seen
/// from outside.
struct Icosphere
{
  Eigen::Matrix3Xd vertices;
  std::vector<Triangle> triangles;
};

Icosphere make_icosphere(int subdivisions);

/// Number of distinct undirected edges of a triangle list.
int count_edges(const std::vector<Triangle>& triangles);

/// True if every undirected edge is used by exactly two triangles.
bool is_closed_surface(const std::vector<Triangle>& triangles);

}  // namespace npoly

#endif  // NPOLY_ICOSPHERE_HPP_
