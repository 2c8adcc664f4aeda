#include "npoly/levelset.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace npoly
{

Eigen::Vector2d RadialPolyline::point(std::size_t i) const
{
  return radii[i] * Eigen::Vector2d(std::cos(angles[i]), std::sin(angles[i]));
}

void RadialPolyline::validate() const
{
  if (angles.size() != radii.size()) {
    throw PreconditionError("polyline angle and radius counts differ");
  }
  if (angles.size() < 16) {
    throw PreconditionError("polyline needs at least 16 samples");
  }
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!(angles[i] >= 0.0 && angles[i] < 2.0 * std::numbers::pi)) {
      throw PreconditionError("polyline angles must lie in [0, 2pi)");
    }
    if (i > 0 && !(angles[i] > angles[i - 1])) {
      throw PreconditionError("polyline angles must be strictly increasing");
    }
    if (!std::isfinite(radii[i]) || !(radii[i] > 0.0)) {
      throw PreconditionError("polyline radii must be finite and positive");
    }
  }
}

Eigen::Matrix3Xd RadialMesh::points() const
{
  return directions * radii.asDiagonal();
}

void RadialMesh::validate() const
{
  if (directions.cols() == 0 || triangles.empty()) {
    throw PreconditionError("mesh is empty");
  }
  if (radii.size() != directions.cols()) {
    throw PreconditionError("mesh radius and direction counts differ");
  }
  if (!radii.allFinite() || (radii.array() <= 0.0).any()) {
    throw PreconditionError("mesh radii must be finite and positive");
  }
  for (const auto& tri : triangles) {
    for (int v : tri) {
      if (v < 0 || v >= directions.cols()) {
        throw PreconditionError("mesh triangle index out of range");
      }
    }
  }
  if (!is_closed_surface(triangles)) {
    throw PreconditionError("mesh is not a closed surface");
  }
}

void SliceSpec::validate() const
{
  if (ambient_dim <= 3) {
    throw PreconditionError("slices need an ambient dimension > 3");
  }
  if (basis.rows() != ambient_dim || basis.cols() != 3) {
    throw PreconditionError("slice basis must be ambient_dim x 3");
  }
  const Eigen::Matrix3d gram = basis.transpose() * basis;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
    throw PreconditionError("slice basis is not orthonormal");
  }
}

double radius(const NetworkD& net, const Eigen::Ref<const Eigen::VectorXd>& direction)
{
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw PreconditionError("radius() needs a unit direction");
  }
  const double value = forward(net, direction);
  if (!(value > kDegenerateThreshold)) {
    std::ostringstream msg;
    msg << "level set is unbounded along direction (" << direction.transpose() << "), f = " << value;
    throw DegenerateDirection(msg.str());
  }
  return std::pow(value, -1.0 / homogeneity_degree(net.spec()));
}

RadialPolyline extract_polyline(const NetworkD& net, int samples)
{
  if (net.input_dim() != 2) {
    throw PreconditionError("polyline extraction needs a d = 2 network");
  }
  if (samples < 64) {
    throw PreconditionError("polyline extraction needs at least 64 samples");
  }
  RadialPolyline line;
  line.angles.reserve(samples);
  line.radii.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / samples;
    line.angles.push_back(theta);
    line.radii.push_back(radius(net, Eigen::Vector2d(std::cos(theta), std::sin(theta))));
  }
  return line;
}

RadialMesh extract_mesh(const NetworkD& net, const Eigen::Matrix3Xd& directions, std::vector<Triangle> triangles)
{
  if (net.input_dim() != 3) {
    throw PreconditionError("mesh extraction needs a d = 3 network");
  }
  RadialMesh mesh;
  mesh.directions = directions;
  mesh.triangles = std::move(triangles);
  mesh.radii.resize(directions.cols());
  for (Eigen::Index i = 0; i < directions.cols(); ++i) {
    mesh.radii[i] = radius(net, directions.col(i));
  }
  return mesh;
}

RadialMesh extract_mesh(const NetworkD& net, int subdivisions)
{
  if (subdivisions < 2) {
    throw PreconditionError("mesh extraction needs at least 2 icosphere subdivisions");
  }
  if (net.input_dim() != 3) {
    throw PreconditionError("mesh extraction needs a d = 3 network");
  }
  Icosphere sphere = make_icosphere(subdivisions);
  return extract_mesh(net, sphere.vertices, std::move(sphere.triangles));
}

NetworkD slice_network(const NetworkD& net, const SliceSpec& slice)
{
  slice.validate();
  if (net.input_dim() != slice.ambient_dim) {
    throw PreconditionError("slice dimension does not match the network input dimension");
  }
  return compose_input(net, slice.basis);
}

RadialMesh slice_section(const NetworkD& net, const SliceSpec& slice, int subdivisions)
{
  return extract_mesh(slice_network(net, slice), subdivisions);
}

SliceSpec theta_slice(int ambient_dim, double theta)
{
  if (ambient_dim < 5) {
    throw PreconditionError("theta slices need an ambient dimension >= 5");
  }
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(ambient_dim, 3);
  raw(0, 0) = 1.0;
  raw(1, 1) = 1.0;
  raw(3, 2) = std::sin(theta);
  raw(4, 2) = std::cos(theta);
  // Gram-Schmidt; the columns are already orthogonal, this only normalizes.
  Eigen::MatrixXd basis(ambient_dim, 3);
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd v = raw.col(c);
    for (int k = 0; k < c; ++k) {
      v -= basis.col(k).dot(v) * basis.col(k);
    }
    basis.col(c) = v.normalized();
  }
  return SliceSpec{ambient_dim, std::move(basis)};
}

}  // namespace npoly
