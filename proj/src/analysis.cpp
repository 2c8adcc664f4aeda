#include "npoly/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <utility>

#include <Eigen/Dense>

#include "npoly/errors.hpp"

namespace npoly
{

namespace
{

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b)
{
  return a.x() * b.y() - a.y() * b.x();
}

double coefficient_of_variation(const std::vector<double>& values)
{
  if (values.empty()) {
    return 0.0;
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double variance = 0.0;
  for (double v : values) {
    variance += (v - mean) * (v - mean);
  }
  variance /= n;
  return mean > 0.0 ? std::sqrt(variance) / mean : 0.0;
}

// Intersection of the lines through p + t d and q + s e.
Eigen::Vector2d intersect_lines(const Eigen::Vector2d& p, const Eigen::Vector2d& d,
                                const Eigen::Vector2d& q, const Eigen::Vector2d& e)
{
  const double denom = cross2(d, e);
  if (std::abs(denom) <= 1e-300) {
    return 0.5 * (p + q);
  }
  const double t = cross2(q - p, e) / denom;
  return p + t * d;
}

std::map<std::string, double> tolerance_map(const AnalysisTolerances& tol, int dim)
{
  if (dim == 2) {
    return {{"vertex_angle", tol.vertex_angle},
            {"polygon_edge_cv", tol.polygon_edge_cv},
            {"polygon_angle", tol.polygon_angle}};
  }
  return {{"face_normal", tol.face_normal}, {"edge_cv", tol.edge_cv}, {"boundary", tol.boundary}};
}

bool is_unit_degree(const NetworkD& net)
{
  return std::abs(homogeneity_degree(net.spec()) - 1.0) <= 1e-12;
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalog

Catalog::Catalog(std::vector<CatalogEntry> solids) : solids_(std::move(solids))
{
  for (const auto& e : solids_) {
    if (e.vertices - e.edges + e.faces != 2) {
      throw PreconditionError("catalog entry '" + e.name + "' violates V - E + F = 2");
    }
  }
}

const Catalog& Catalog::standard()
{
  static const Catalog catalog({
    {"octahedron", 6, 12, 8, true},
    {"cube", 8, 12, 6, true},
    {"cuboctahedron", 12, 24, 14, true},
    {"icosidodecahedron", 30, 60, 32, true},
  });
  return catalog;
}

std::optional<std::string> Catalog::lookup(int vertices, int edges, int faces) const
{
  std::optional<std::string> found;
  for (const auto& e : solids_) {
    if (e.vertices == vertices && e.edges == edges && e.faces == faces) {
      if (found) {
        throw AmbiguousMatch("signature shared by '" + *found + "' and '" + e.name + "'");
      }
      found = e.name;
    }
  }
  return found;
}

std::optional<std::string> Catalog::polygon_name(int vertices, int edges)
{
  if (vertices != edges || vertices < 4 || vertices % 2 != 0) {
    return std::nullopt;
  }
  return "regular " + std::to_string(vertices) + "-gon";
}

// ---------------------------------------------------------------------------
// 2D

std::vector<Eigen::Vector2d> detect_vertices_2d(const RadialPolyline& polyline, double angle_tol)
{
  polyline.validate();
  if (!(angle_tol > 0.0 && angle_tol < std::numbers::pi / 4)) {
    throw PreconditionError("angle_tol must lie in (0, pi/4)");
  }
  const std::size_t n = polyline.size();
  std::vector<Eigen::Vector2d> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = polyline.point(i);
  }
  std::vector<Eigen::Vector2d> dirs(n);
  std::vector<Eigen::Vector2d> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    dirs[i] = points[(i + 1) % n] - points[i];
    normals[i] = Eigen::Vector2d(dirs[i].y(), -dirs[i].x()).normalized();
  }
  // turning[i]: the normal turns sharply between segment i and segment i + 1.
  std::vector<bool> turning(n);
  std::size_t turns = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = normals[i];
    const auto& b = normals[(i + 1) % n];
    turning[i] = std::abs(std::atan2(cross2(a, b), a.dot(b))) > angle_tol;
    turns += turning[i] ? 1 : 0;
  }
  if (turns == 0 || turns == n) {
    throw NotPolygonal("no polygonal corners found (round boundary: p != 1 or an undertrained network?)");
  }

  std::size_t start = 0;
  while (turning[start]) {
    ++start;
  }
  std::vector<Eigen::Vector2d> corners;
  std::size_t k = 1;
  while (k <= n) {
    const std::size_t i = (start + k) % n;
    if (!turning[i]) {
      ++k;
      continue;
    }
    std::size_t last = k;
    while (last + 1 <= n && turning[(start + last + 1) % n]) {
      ++last;
    }
    const std::size_t in = i;
    const std::size_t out = (start + last + 1) % n;
    corners.push_back(intersect_lines(points[in], dirs[in], points[out], dirs[out]));
    k = last + 1;
  }
  if (corners.size() < 3) {
    throw NotPolygonal("only " + std::to_string(corners.size()) +
                       " corners found (p != 1 or an undertrained network?)");
  }
  // Corners come out in increasing angle starting after `start`; rotate so the
  // list starts at the smallest polar angle.
  auto polar = [](const Eigen::Vector2d& v) {
    const double a = std::atan2(v.y(), v.x());
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
  };
  const auto first = std::min_element(corners.begin(), corners.end(), [&](const auto& a, const auto& b) {
    return polar(a) < polar(b);
  });
  std::rotate(corners.begin(), first, corners.end());
  return corners;
}

std::pair<double, double> sphere_deviation(const RadialPolyline& polyline)
{
  double worst = 0.0;
  double total = 0.0;
  for (double r : polyline.radii) {
    worst = std::max(worst, std::abs(r - 1.0));
    total += std::abs(r - 1.0);
  }
  return {worst, polyline.radii.empty() ? 0.0 : total / static_cast<double>(polyline.radii.size())};
}

std::pair<double, double> sphere_deviation(const RadialMesh& mesh)
{
  const Eigen::ArrayXd gap = (mesh.radii.array() - 1.0).abs();
  if (gap.size() == 0) {
    return {0.0, 0.0};
  }
  return {gap.maxCoeff(), gap.mean()};
}

PolytopeReport polygon_report(const RadialPolyline& polyline, const AnalysisTolerances& tol)
{
  const auto corners = detect_vertices_2d(polyline, tol.vertex_angle);
  const std::size_t n = corners.size();

  std::vector<double> lengths(n);
  std::vector<double> angles(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prev = corners[(i + n - 1) % n];
    const auto& here = corners[i];
    const auto& next = corners[(i + 1) % n];
    lengths[i] = (next - here).norm();
    const Eigen::Vector2d a = prev - here;
    const Eigen::Vector2d b = next - here;
    angles[i] = std::atan2(std::abs(cross2(a, b)), a.dot(b));
  }
  const double mean_angle = std::accumulate(angles.begin(), angles.end(), 0.0) / static_cast<double>(n);
  double angle_spread = 0.0;
  for (double a : angles) {
    angle_spread = std::max(angle_spread, std::abs(a - mean_angle));
  }

  PolytopeReport report;
  report.dim = 2;
  report.vertex_count = static_cast<int>(n);
  report.edge_count = static_cast<int>(n);
  report.face_count = 0;
  report.euler = report.vertex_count - report.edge_count;
  report.edge_length_cv = coefficient_of_variation(lengths);
  std::tie(report.max_sphere_deviation, report.mean_sphere_deviation) = sphere_deviation(polyline);
  if (report.edge_length_cv < tol.polygon_edge_cv && angle_spread <= tol.polygon_angle) {
    report.identified = Catalog::polygon_name(report.vertex_count, report.edge_count);
  }
  report.tolerances_used = tolerance_map(tol, 2);
  return report;
}

// ---------------------------------------------------------------------------
// 3D

std::vector<FaceCluster> cluster_faces_3d(const NetworkD& net, const RadialMesh& mesh, double normal_tol)
{
  if (net.input_dim() != 3) {
    throw PreconditionError("face clustering needs a d = 3 network");
  }
  if (!is_unit_degree(net)) {
    throw PreconditionError("face clustering needs a piecewise-linear network (homogeneity degree 1)");
  }
  if (!(normal_tol > 0.0)) {
    throw PreconditionError("normal_tol must be positive");
  }
  const double cos_tol = std::cos(normal_tol);
  std::vector<FaceCluster> clusters;
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const Eigen::Vector3d q = mesh.point(i);
    if (kink_margin(net, q) < 1e-9) {
      continue;
    }
    const Eigen::Vector3d g = grad_input(net, q);
    const double length = g.norm();
    if (!(length > 0.0)) {
      continue;
    }
    const Eigen::Vector3d n = g / length;
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const FaceCluster& c) { return c.normal.dot(n) >= cos_tol; });
    if (it != clusters.end()) {
      ++it->members;
      continue;
    }
    // On a face f(x) = g . x, so the face plane is g . x = 1.
    clusters.push_back(FaceCluster{n, 1.0 / length, g, 1});
  }
  if (static_cast<double>(clusters.size()) > static_cast<double>(mesh.size()) / 10.0) {
    throw NotPolyhedral(std::to_string(clusters.size()) + " face clusters for " + std::to_string(mesh.size()) +
                        " samples: the boundary is not piecewise flat at this tolerance");
  }
  return clusters;
}

FaceCombinatorics combinatorics_from_faces(const NetworkD& net, const std::vector<FaceCluster>& faces,
                                           double boundary_tol)
{
  if (faces.size() < 4) {
    throw PreconditionError("at least 4 face planes are required");
  }
  if (net.input_dim() != 3) {
    throw PreconditionError("combinatorics need a d = 3 network");
  }
  const std::size_t nf = faces.size();

  FaceCombinatorics out;
  auto& vertices = out.polytope.vertices;
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = i + 1; j < nf; ++j) {
      for (std::size_t k = j + 1; k < nf; ++k) {
        Eigen::Matrix3d a;
        a.row(0) = faces[i].normal;
        a.row(1) = faces[j].normal;
        a.row(2) = faces[k].normal;
        if (std::abs(a.determinant()) < 1e-9) {
          continue;
        }
        const Eigen::Vector3d q =
          a.partialPivLu().solve(Eigen::Vector3d(faces[i].offset, faces[j].offset, faces[k].offset));
        if (!q.allFinite() || std::abs(forward(net, q) - 1.0) > boundary_tol) {
          continue;
        }
        const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const Eigen::Vector3d& v) {
          return (v - q).norm() <= boundary_tol * std::max(1.0, q.norm());
        });
        if (!seen) {
          vertices.push_back(q);
        }
      }
    }
  }

  std::vector<std::vector<int>> on_face(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      if (std::abs(faces[f].normal.dot(vertices[v]) - faces[f].offset) <=
          boundary_tol * std::max(1.0, vertices[v].norm())) {
        on_face[f].push_back(static_cast<int>(v));
      }
    }
    ConvexPolytope3::Face face;
    face.cycle = on_face[f];
    face.normal = faces[f].normal;
    face.offset = faces[f].offset;
    order_cycle(vertices, face.normal, face.cycle);
    out.polytope.faces.push_back(std::move(face));
  }

  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t g = f + 1; g < nf; ++g) {
      std::vector<int> shared;
      std::set_intersection(on_face[f].begin(), on_face[f].end(), on_face[g].begin(), on_face[g].end(),
                            std::back_inserter(shared));
      if (shared.size() < 2) {
        continue;
      }
      std::pair<int, int> ends{shared[0], shared[1]};
      double longest = -1.0;
      for (std::size_t a = 0; a < shared.size(); ++a) {
        for (std::size_t b = a + 1; b < shared.size(); ++b) {
          const double d = (vertices[shared[a]] - vertices[shared[b]]).norm();
          if (d > longest) {
            longest = d;
            ends = {shared[a], shared[b]};
          }
        }
      }
      out.edges.push_back(ends);
      out.edge_lengths.push_back(longest);
    }
  }

  PolytopeReport& report = out.report;
  report.dim = 3;
  report.vertex_count = static_cast<int>(vertices.size());
  report.edge_count = static_cast<int>(out.edges.size());
  report.face_count = static_cast<int>(nf);
  report.euler = report.vertex_count - report.edge_count + report.face_count;
  report.edge_length_cv = coefficient_of_variation(out.edge_lengths);
  if (report.euler != 2) {
    throw EulerViolation("recovered (V, E, F) = (" + std::to_string(report.vertex_count) + ", " +
                         std::to_string(report.edge_count) + ", " + std::to_string(report.face_count) +
                         ") has V - E + F = " + std::to_string(report.euler));
  }
  return out;
}

std::optional<std::string> identify(const PolytopeReport& report, const Catalog& catalog, double edge_cv_tol)
{
  if (!(report.edge_length_cv < edge_cv_tol)) {
    return std::nullopt;
  }
  if (report.dim == 2) {
    return Catalog::polygon_name(report.vertex_count, report.edge_count);
  }
  if (report.euler != 2) {
    return std::nullopt;
  }
  return catalog.lookup(report.vertex_count, report.edge_count, report.face_count);
}

FaceCombinatorics analyze_polyhedron(const NetworkD& net, const RadialMesh& mesh, const AnalysisTolerances& tol,
                                     const Catalog& catalog)
{
  const auto clusters = cluster_faces_3d(net, mesh, tol.face_normal);
  FaceCombinatorics result = combinatorics_from_faces(net, clusters, tol.boundary);
  std::tie(result.report.max_sphere_deviation, result.report.mean_sphere_deviation) = sphere_deviation(mesh);
  result.report.identified = identify(result.report, catalog, tol.edge_cv);
  result.report.tolerances_used = tolerance_map(tol, 3);
  return result;
}

PolytopeReport analyze_network(const NetworkD& net, const AnalysisTolerances& tol)
{
  if (net.input_dim() == 2) {
    const RadialPolyline line = extract_polyline(net);
    try {
      return polygon_report(line, tol);
    } catch (const NotPolygonal& e) {
      PolytopeReport report;
      report.dim = 2;
      std::tie(report.max_sphere_deviation, report.mean_sphere_deviation) = sphere_deviation(line);
      report.tolerances_used = tolerance_map(tol, 2);
      report.diagnostic = e.what();
      return report;
    }
  }
  if (net.input_dim() == 3) {
    const RadialMesh mesh = extract_mesh(net);
    PolytopeReport report;
    report.dim = 3;
    report.tolerances_used = tolerance_map(tol, 3);
    if (!is_unit_degree(net)) {
      report.diagnostic = "face analysis needs homogeneity degree 1";
    } else {
      try {
        report = analyze_polyhedron(net, mesh, tol).report;
      } catch (const NotPolyhedral& e) {
        report.diagnostic = e.what();
      } catch (const EulerViolation& e) {
        report.diagnostic = e.what();
      }
    }
    std::tie(report.max_sphere_deviation, report.mean_sphere_deviation) = sphere_deviation(mesh);
    return report;
  }
  throw PreconditionError("analysis is available for d = 2 and d = 3 only; slice higher-dimensional bodies");
}

// ---------------------------------------------------------------------------
// Comparisons

double hausdorff_distance(const RadialMesh& a, const RadialMesh& b)
{
  if (a.size() != b.size() || a.size() == 0 ||
      (a.directions - b.directions).cwiseAbs().maxCoeff() > 1e-12) {
    throw PreconditionError("radial meshes are sampled on different direction sets");
  }
  return (a.radii - b.radii).cwiseAbs().maxCoeff();
}

double hausdorff_distance(const RadialPolyline& a, const RadialPolyline& b)
{
  if (a.size() != b.size() || a.size() == 0) {
    throw PreconditionError("polylines are sampled on different angle sets");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.angles[i] - b.angles[i]) > 1e-12) {
      throw PreconditionError("polylines are sampled on different angle sets");
    }
    worst = std::max(worst, std::abs(a.radii[i] - b.radii[i]));
  }
  return worst;
}

RadialMesh sample_polytope(const ConvexPolytope3& poly, const RadialMesh& like)
{
  RadialMesh out;
  out.directions = like.directions;
  out.triangles = like.triangles;
  out.radii.resize(like.size());
  for (Eigen::Index i = 0; i < like.size(); ++i) {
    out.radii[i] = poly.radial(like.directions.col(i));
  }
  return out;
}

RadialMesh rescale_to_mean_radius(const RadialMesh& mesh, double target)
{
  if (mesh.size() == 0 || !(target > 0.0)) {
    throw PreconditionError("rescaling needs a nonempty mesh and a positive target");
  }
  RadialMesh out = mesh;
  out.radii *= target / mesh.radii.mean();
  return out;
}

std::vector<double> weight_direction_spacing(const NetworkD& net)
{
  if (net.input_dim() != 2 || net.depth() != 1) {
    throw PreconditionError("weight direction spacing needs a single-layer d = 2 network");
  }
  const auto& w = net.weight(0);
  std::vector<double> angles;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (!(w.row(i).norm() > 0.0)) {
      throw PreconditionError("weight row " + std::to_string(i) + " has zero norm");
    }
    double a = std::fmod(std::atan2(w(i, 1), w(i, 0)) + 2.0 * std::numbers::pi, std::numbers::pi);
    if (std::numbers::pi - a < 1e-12) {
      a = 0.0;
    }
    angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
    gaps.push_back(angles[i + 1] - angles[i]);
  }
  gaps.push_back(angles.front() + std::numbers::pi - angles.back());
  return gaps;
}

namespace
{

Eigen::Matrix3d frame(const Eigen::Vector3d& a, const Eigen::Vector3d& b)
{
  Eigen::Matrix3d f;
  const Eigen::Vector3d e1 = a.normalized();
  const Eigen::Vector3d e2 = (b - b.dot(e1) * e1).normalized();
  f.col(0) = e1;
  f.col(1) = e2;
  f.col(2) = e1.cross(e2);
  return f;
}

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b)
{
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Kabsch refinement of `rotation` on nearest-neighbour matches; returns the
// RMS residual.
double refine(const std::vector<Eigen::Vector3d>& reference, const std::vector<Eigen::Vector3d>& moving,
              Eigen::Matrix3d& rotation)
{
  double rms = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 3; ++iter) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    double sq = 0.0;
    for (const auto& m : moving) {
      const Eigen::Vector3d rm = rotation * m;
      const Eigen::Vector3d* best = &reference.front();
      for (const auto& r : reference) {
        if ((r - rm).squaredNorm() < (*best - rm).squaredNorm()) {
          best = &r;
        }
      }
      sq += (*best - rm).squaredNorm();
      h += m * best->transpose();
    }
    rms = std::sqrt(sq / static_cast<double>(moving.size()));
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    rotation = svd.matrixV() * d * svd.matrixU().transpose();
  }
  double sq = 0.0;
  for (const auto& m : moving) {
    const Eigen::Vector3d rm = rotation * m;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& r : reference) {
      nearest = std::min(nearest, (r - rm).squaredNorm());
    }
    sq += nearest;
  }
  return std::min(rms, std::sqrt(sq / static_cast<double>(moving.size())));
}

}  // namespace

Eigen::Matrix3d align_rotation(const std::vector<Eigen::Vector3d>& reference, const std::vector<Eigen::Vector3d>& moving)
{
  if (reference.size() < 2 || moving.size() < 2) {
    throw PreconditionError("alignment needs at least two points on each side");
  }
  const Eigen::Vector3d& a1 = reference.front();
  const Eigen::Vector3d* a2 = nullptr;
  for (std::size_t i = 1; i < reference.size(); ++i) {
    const double ang = angle_between(a1, reference[i]);
    if (ang > 1e-3 && ang < std::numbers::pi - 1e-3 && (a2 == nullptr || ang < angle_between(a1, *a2))) {
      a2 = &reference[i];
    }
  }
  if (a2 == nullptr) {
    throw PreconditionError("reference points are collinear");
  }
  const Eigen::Matrix3d fa = frame(a1, *a2);
  const double target_angle = angle_between(a1, *a2);

  Eigen::Matrix3d best = Eigen::Matrix3d::Identity();
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& b1 : moving) {
    if (std::abs(b1.norm() - a1.norm()) > 0.1 * a1.norm()) {
      continue;
    }
    for (const auto& b2 : moving) {
      const double ang = angle_between(b1, b2);
      if (&b1 == &b2 || std::abs(ang - target_angle) > 0.1 || ang < 1e-3) {
        continue;
      }
      Eigen::Matrix3d rotation = fa * frame(b1, b2).transpose();
      const double score = refine(reference, moving, rotation);
      if (score < best_score) {
        best_score = score;
        best = rotation;
      }
    }
  }
  return best;
}

NetworkD rotate_network(const NetworkD& net, const Eigen::Matrix3d& rotation)
{
  if (net.input_dim() != 3) {
    throw PreconditionError("rotation needs a d = 3 network");
  }
  return compose_input(net, Eigen::MatrixXd(rotation.transpose()));
}

}  // namespace npoly
