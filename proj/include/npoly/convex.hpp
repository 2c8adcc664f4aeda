#ifndef NPOLY_CONVEX_HPP_
#define NPOLY_CONVEX_HPP_

#include <vector>

#include <Eigen/Core>

namespace npoly
{

/// A convex polyhedron in R^3 with both representations: vertices, and faces
/// {x : normal . x <= offset} whose vertex cycles run counter-clockwise seen
/// from outside.
struct ConvexPolytope3
{
  struct Face
  {
    std::vector<int> cycle;
    Eigen::Vector3d normal;
    double offset = 0.0;
  };

  std::vector<Eigen::Vector3d> vertices;
  std::vector<Face> faces;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  int edge_count() const;

  /// Boundary distance along unit direction u: 1 / max_f (n_f . u / c_f).
  /// Needs the origin in the interior.
  double radial(const Eigen::Vector3d& u) const;

  /// Convex hull of a point set (points off the hull are dropped). Brute force
  /// over point triples; meant for the small vertex sets of named solids.
  static ConvexPolytope3 from_vertices(const std::vector<Eigen::Vector3d>& points, double tol = 1e-9);

  /// Intersection of half-spaces normal_i . x <= offset_i (normals need not
  /// be unit). Redundant half-spaces are dropped.
  static ConvexPolytope3 from_halfspaces(const std::vector<Eigen::Vector3d>& normals,
                                         const std::vector<double>& offsets,
                                         double tol = 1e-9);
};

/// Polar body {y : x . y <= 1 for all x in P}. Face (n, c) of P becomes the
/// vertex n / c; vertex v becomes the face v . y <= 1.
/// Throws OriginNotInterior unless every face offset is positive.
ConvexPolytope3 polar_dual(const ConvexPolytope3& poly);

/// Largest distance from a vertex of `a` to its nearest vertex of `b`, taken
/// symmetrically; infinity if the vertex counts differ.
double vertex_set_distance(const ConvexPolytope3& a, const ConvexPolytope3& b);

ConvexPolytope3 scaled(const ConvexPolytope3& poly, double factor);

/// Sorts `indices` of `points` counter-clockwise around `axis` (seen from the
/// tip of `axis`) about their centroid.
void order_cycle(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& axis, std::vector<int>& indices);

}  // namespace npoly

#endif  // NPOLY_CONVEX_HPP_
