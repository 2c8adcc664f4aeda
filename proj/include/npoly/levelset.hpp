#ifndef NPOLY_LEVELSET_HPP_
#define NPOLY_LEVELSET_HPP_

// The level set f(x) = 1 of a bias-free network. Positive homogeneity
// f(t u) = t^P f(u) makes the body star-shaped about the origin, so the
// boundary along a unit direction u sits at exactly r(u) = f(u)^(-1/P).

#include <vector>

#include <Eigen/Core>

#include "npoly/icosphere.hpp"
#include "npoly/net.hpp"

namespace npoly
{

/// Boundary of a planar star-shaped body sampled at increasing angles.
struct RadialPolyline
{
  std::vector<double> angles;
  std::vector<double> radii;
  bool closed = true;

  std::size_t size() const { return angles.size(); }
  Eigen::Vector2d point(std::size_t i) const;
  void validate() const;
};

/// Boundary of a star-shaped body in R^3: one radius per unit direction,
/// triangulated with the direction set's (icosphere) combinatorics.
struct RadialMesh
{
  Eigen::Matrix3Xd directions;
  Eigen::VectorXd radii;
  std::vector<Triangle> triangles;

  Eigen::Index size() const { return directions.cols(); }
  Eigen::Vector3d point(Eigen::Index i) const { return radii[i] * directions.col(i); }
  Eigen::Matrix3Xd points() const;
  void validate() const;
};

/// A 3-dimensional linear subspace of R^d given by an orthonormal basis
/// (the columns of `basis`, d x 3).
struct SliceSpec
{
  int ambient_dim = 4;
  Eigen::MatrixXd basis;

  void validate() const;
};

constexpr int kDefaultPolylineSamples = 4096;
constexpr int kDefaultMeshSubdivisions = 5;
constexpr double kDegenerateThreshold = 1e-12;

/// r(u) = f(u)^(-1/P). Throws DegenerateDirection when f(u) <= 1e-12.
double radius(const NetworkD& net, const Eigen::Ref<const Eigen::VectorXd>& direction);

/// Radii at `samples` uniformly spaced angles k * 2pi / samples. Needs d = 2.
RadialPolyline extract_polyline(const NetworkD& net, int samples = kDefaultPolylineSamples);

/// Radii over the vertices of an icosphere. Needs d = 3.
RadialMesh extract_mesh(const NetworkD& net, int subdivisions = kDefaultMeshSubdivisions);

/// Radii of an arbitrary direction set (columns, unit norm) sharing the given
/// triangulation. Needs d = 3.
RadialMesh extract_mesh(const NetworkD& net, const Eigen::Matrix3Xd& directions,
                        std::vector<Triangle> triangles);

/// x -> f(B y) restricted to the slice subspace, as a d = 3 network.
NetworkD slice_network(const NetworkD& net, const SliceSpec& slice);

/// Level set of f restricted to the slice, g(y) = f(B y) = 1, y in R^3.
RadialMesh slice_section(const NetworkD& net, const SliceSpec& slice,
                         int subdivisions = kDefaultMeshSubdivisions);

/// The subspace {x_3 = 0, x_4 = x_5 tan(theta)} of R^d (d >= 5), with the
/// remaining coordinates x_6.. set to zero. Basis: Gram-Schmidt of
/// (e_1, e_2, sin(theta) e_4 + cos(theta) e_5).
SliceSpec theta_slice(int ambient_dim, double theta);

}  // namespace npoly

#endif  // NPOLY_LEVELSET_HPP_
