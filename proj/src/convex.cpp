#include "npoly/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include <Eigen/Dense>

#include "npoly/errors.hpp"

namespace npoly
{

namespace
{

// Any unit vector orthogonal to `axis`.
Eigen::Vector3d orthogonal_to(const Eigen::Vector3d& axis)
{
  Eigen::Index smallest = 0;
  axis.cwiseAbs().minCoeff(&smallest);
  return axis.cross(Eigen::Vector3d::Unit(smallest)).normalized();
}

// Faces and vertices from unit-normal planes and a candidate point list:
// a candidate is a vertex when it lies on >= 3 planes whose normals span R^3.
ConvexPolytope3 assemble(std::vector<Eigen::Vector3d> candidates,
                         const std::vector<Eigen::Vector3d>& normals,
                         const std::vector<double>& offsets,
                         double tol)
{
  double scale = 1.0;
  for (const auto& p : candidates) {
    scale = std::max(scale, p.norm());
  }
  const double plane_tol = tol * scale;

  ConvexPolytope3 poly;
  std::vector<std::vector<int>> incident_planes;
  for (const auto& p : candidates) {
    std::vector<int> on;
    for (std::size_t f = 0; f < normals.size(); ++f) {
      if (std::abs(normals[f].dot(p) - offsets[f]) <= plane_tol) {
        on.push_back(static_cast<int>(f));
      }
    }
    if (on.size() < 3) {
      continue;
    }
    Eigen::Matrix3Xd span(3, on.size());
    for (std::size_t k = 0; k < on.size(); ++k) {
      span.col(static_cast<Eigen::Index>(k)) = normals[on[k]];
    }
    Eigen::FullPivLU<Eigen::Matrix3Xd> lu(span);
    lu.setThreshold(1e-9);
    if (lu.rank() < 3) {
      continue;
    }
    bool duplicate = false;
    for (const auto& v : poly.vertices) {
      if ((v - p).norm() <= plane_tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      poly.vertices.push_back(p);
      incident_planes.push_back(std::move(on));
    }
  }

  for (std::size_t f = 0; f < normals.size(); ++f) {
    ConvexPolytope3::Face face;
    face.normal = normals[f];
    face.offset = offsets[f];
    for (std::size_t v = 0; v < poly.vertices.size(); ++v) {
      const auto& on = incident_planes[v];
      if (std::find(on.begin(), on.end(), static_cast<int>(f)) != on.end()) {
        face.cycle.push_back(static_cast<int>(v));
      }
    }
    if (face.cycle.size() < 3) {
      continue;
    }
    order_cycle(poly.vertices, face.normal, face.cycle);
    poly.faces.push_back(std::move(face));
  }
  return poly;
}

}  // namespace

void order_cycle(const std::vector<Eigen::Vector3d>& points, const Eigen::Vector3d& axis, std::vector<int>& indices)
{
  if (indices.empty()) {
    return;
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (int i : indices) {
    centroid += points[i];
  }
  centroid /= static_cast<double>(indices.size());
  const Eigen::Vector3d n = axis.normalized();
  const Eigen::Vector3d e1 = orthogonal_to(n);
  const Eigen::Vector3d e2 = n.cross(e1);
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(indices.size());
  for (int i : indices) {
    const Eigen::Vector3d d = points[i] - centroid;
    keyed.emplace_back(std::atan2(d.dot(e2), d.dot(e1)), i);
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    indices[k] = keyed[k].second;
  }
}

int ConvexPolytope3::edge_count() const
{
  std::set<std::pair<int, int>> edges;
  for (const auto& face : faces) {
    for (std::size_t k = 0; k < face.cycle.size(); ++k) {
      const int a = face.cycle[k];
      const int b = face.cycle[(k + 1) % face.cycle.size()];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return static_cast<int>(edges.size());
}

double ConvexPolytope3::radial(const Eigen::Vector3d& u) const
{
  double support = 0.0;
  for (const auto& face : faces) {
    if (!(face.offset > 0.0)) {
      throw OriginNotInterior("radial function needs the origin strictly inside");
    }
    support = std::max(support, face.normal.dot(u) / face.offset);
  }
  if (!(support > 0.0)) {
    throw PreconditionError("polytope is unbounded along the requested direction");
  }
  return 1.0 / support;
}

ConvexPolytope3 ConvexPolytope3::from_vertices(const std::vector<Eigen::Vector3d>& points, double tol)
{
  if (points.size() < 4) {
    throw PreconditionError("a convex hull in R^3 needs at least 4 points");
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  double scale = 0.0;
  for (const auto& p : points) {
    centroid += p;
    scale = std::max(scale, p.norm());
  }
  centroid /= static_cast<double>(points.size());
  const double side_tol = tol * std::max(scale, 1.0);

  std::vector<Eigen::Vector3d> normals;
  std::vector<double> offsets;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Vector3d normal = (points[j] - points[i]).cross(points[k] - points[i]);
        if (normal.norm() <= side_tol * side_tol) {
          continue;
        }
        normal.normalize();
        if (normal.dot(points[i] - centroid) < 0.0) {
          normal = -normal;
        }
        const double offset = normal.dot(points[i]);
        bool supporting = true;
        for (const auto& p : points) {
          if (normal.dot(p) - offset > side_tol) {
            supporting = false;
            break;
          }
        }
        if (!supporting) {
          continue;
        }
        bool seen = false;
        for (std::size_t f = 0; f < normals.size(); ++f) {
          if ((normals[f] - normal).norm() <= tol && std::abs(offsets[f] - offset) <= side_tol) {
            seen = true;
            break;
          }
        }
        if (!seen) {
          normals.push_back(normal);
          offsets.push_back(offset);
        }
      }
    }
  }
  if (normals.size() < 4) {
    throw PreconditionError("points are degenerate (coplanar or collinear)");
  }
  return assemble(points, normals, offsets, tol);
}

ConvexPolytope3 ConvexPolytope3::from_halfspaces(const std::vector<Eigen::Vector3d>& normals,
                                                 const std::vector<double>& offsets,
                                                 double tol)
{
  if (normals.size() != offsets.size()) {
    throw PreconditionError("normal and offset counts differ");
  }
  if (normals.size() < 4) {
    throw PreconditionError("a bounded polytope in R^3 needs at least 4 half-spaces");
  }
  std::vector<Eigen::Vector3d> unit_normals;
  std::vector<double> unit_offsets;
  for (std::size_t f = 0; f < normals.size(); ++f) {
    const double length = normals[f].norm();
    if (!(length > 0.0)) {
      throw PreconditionError("half-space normal has zero length");
    }
    unit_normals.push_back(normals[f] / length);
    unit_offsets.push_back(offsets[f] / length);
  }

  double scale = 1.0;
  for (double c : unit_offsets) {
    scale = std::max(scale, std::abs(c));
  }
  std::vector<Eigen::Vector3d> candidates;
  const std::size_t n = unit_normals.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d a;
        a.row(0) = unit_normals[i];
        a.row(1) = unit_normals[j];
        a.row(2) = unit_normals[k];
        if (std::abs(a.determinant()) < 1e-9) {
          continue;
        }
        const Eigen::Vector3d p = a.partialPivLu().solve(Eigen::Vector3d(unit_offsets[i], unit_offsets[j], unit_offsets[k]));
        bool feasible = true;
        for (std::size_t f = 0; f < n; ++f) {
          if (unit_normals[f].dot(p) - unit_offsets[f] > tol * std::max(scale, p.norm())) {
            feasible = false;
            break;
          }
        }
        if (feasible) {
          candidates.push_back(p);
        }
      }
    }
  }
  return assemble(std::move(candidates), unit_normals, unit_offsets, tol);
}

ConvexPolytope3 polar_dual(const ConvexPolytope3& poly)
{
  if (poly.faces.size() < 4 || poly.vertices.size() < 4) {
    throw PreconditionError("polar dual needs a solid polytope");
  }
  ConvexPolytope3 dual;
  dual.vertices.reserve(poly.faces.size());
  for (const auto& face : poly.faces) {
    if (!(face.offset > 0.0)) {
      throw OriginNotInterior("polar dual needs the origin strictly inside the polytope");
    }
    dual.vertices.push_back(face.normal / face.offset);
  }
  for (std::size_t v = 0; v < poly.vertices.size(); ++v) {
    const Eigen::Vector3d& p = poly.vertices[v];
    ConvexPolytope3::Face face;
    const double length = p.norm();
    face.normal = p / length;
    face.offset = 1.0 / length;
    for (std::size_t f = 0; f < poly.faces.size(); ++f) {
      const auto& cycle = poly.faces[f].cycle;
      if (std::find(cycle.begin(), cycle.end(), static_cast<int>(v)) != cycle.end()) {
        face.cycle.push_back(static_cast<int>(f));
      }
    }
    order_cycle(dual.vertices, face.normal, face.cycle);
    dual.faces.push_back(std::move(face));
  }
  return dual;
}

double vertex_set_distance(const ConvexPolytope3& a, const ConvexPolytope3& b)
{
  if (a.vertices.size() != b.vertices.size() || a.vertices.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  auto directed = [](const ConvexPolytope3& from, const ConvexPolytope3& to) {
    double worst = 0.0;
    for (const auto& p : from.vertices) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to.vertices) {
        nearest = std::min(nearest, (p - q).norm());
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

ConvexPolytope3 scaled(const ConvexPolytope3& poly, double factor)
{
  if (!(factor > 0.0)) {
    throw PreconditionError("scale factor must be positive");
  }
  ConvexPolytope3 out = poly;
  for (auto& v : out.vertices) {
    v *= factor;
  }
  for (auto& f : out.faces) {
    f.offset *= factor;
  }
  return out;
}

}  // namespace npoly
