#ifndef NPOLY_ANALYSIS_HPP_
#define NPOLY_ANALYSIS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "npoly/convex.hpp"
#include "npoly/levelset.hpp"
#include "npoly/net.hpp"

namespace npoly
{

/// Default tolerances; every analysis entry point takes them as overridable
/// arguments.
struct AnalysisTolerances
{
  /// Normal turn (rad) that marks a polygon corner.
  double vertex_angle = 0.05;
  /// Gradient-direction angle (rad) within which mesh samples share a face.
  double face_normal = 0.02;
  /// Edge-length coefficient of variation for a regular polygon.
  double polygon_edge_cv = 0.01;
  /// Spread (rad) allowed among interior angles of a regular polygon.
  double polygon_angle = 0.02;
  /// Edge-length coefficient of variation for a catalog match in 3D.
  double edge_cv = 0.02;
  /// |f - 1| for a plane-triple intersection to count as a boundary vertex.
  double boundary = 1e-6;
};

struct PolytopeReport
{
  int dim = 3;
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  int euler = 0;
  double edge_length_cv = 0.0;
  std::optional<std::string> identified;
  /// max over the extracted boundary of | |q| - 1 |.
  double max_sphere_deviation = 0.0;
  /// mean over the extracted boundary of | |q| - 1 |.
  double mean_sphere_deviation = 0.0;
  std::map<std::string, double> tolerances_used;
  /// Why combinatorics are missing, when they are (empty otherwise).
  std::string diagnostic;
};

struct CatalogEntry
{
  std::string name;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  bool vertex_transitive = true;
};

/// Named polytopes matched by their (V, E, F) signature. The planar family of
/// regular 2n-gons is implicit.
class Catalog
{
public:
  /// Throws PreconditionError if an entry violates V - E + F = 2.
  explicit Catalog(std::vector<CatalogEntry> solids);

  /// Octahedron, cube, cuboctahedron, icosidodecahedron.
  static const Catalog& standard();

  const std::vector<CatalogEntry>& solids() const { return solids_; }

  /// Unique solid with the given signature; throws AmbiguousMatch if several.
  std::optional<std::string> lookup(int vertices, int edges, int faces) const;

  /// "regular 2n-gon" for an even V = E >= 4.
  static std::optional<std::string> polygon_name(int vertices, int edges);

private:
  std::vector<CatalogEntry> solids_;
};

/// Corners of a polygonal boundary: places where consecutive segment normals
/// turn by more than `angle_tol`. Runs of turning segments (a corner cut by a
/// chord) give one corner at the intersection of the adjoining straight edges.
/// Throws NotPolygonal if fewer than 3 corners are found.
std::vector<Eigen::Vector2d> detect_vertices_2d(const RadialPolyline& polyline, double angle_tol = 0.05);

/// Corner count, edge regularity and "regular 2n-gon" identification.
PolytopeReport polygon_report(const RadialPolyline& polyline, const AnalysisTolerances& tol = {});

/// A face plane n . x = offset (n unit) recovered from the gradient field.
struct FaceCluster
{
  Eigen::Vector3d normal;
  double offset = 0.0;
  Eigen::Vector3d gradient;
  int members = 0;
};

/// Greedy clustering of mesh samples by the direction of grad f. Needs d = 3
/// and homogeneity degree 1, where grad f is constant on each face. Samples
/// on a kink of f are skipped. Throws NotPolyhedral if the clusters exceed a
/// tenth of the samples.
std::vector<FaceCluster> cluster_faces_3d(const NetworkD& net, const RadialMesh& mesh, double normal_tol = 0.02);

/// Vertices, edges and faces of the body cut out by the face planes.
struct FaceCombinatorics
{
  ConvexPolytope3 polytope;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> edge_lengths;
  PolytopeReport report;
};

/// Intersects face-plane triples, keeps points with |f - 1| <= boundary_tol,
/// links faces that share two vertices. Throws EulerViolation unless
/// V - E + F = 2.
FaceCombinatorics combinatorics_from_faces(const NetworkD& net,
                                           const std::vector<FaceCluster>& faces,
                                           double boundary_tol = 1e-6);

/// Catalog name for a complete report, or none when the signature is unknown
/// or the edges are too irregular.
std::optional<std::string> identify(const PolytopeReport& report,
                                     const Catalog& catalog = Catalog::standard(),
                                     double edge_cv_tol = 0.02);

/// Full 3D pipeline: face clustering, combinatorics, sphere deviation and
/// identification.
FaceCombinatorics analyze_polyhedron(const NetworkD& net,
                                     const RadialMesh& mesh,
                                     const AnalysisTolerances& tol = {},
                                     const Catalog& catalog = Catalog::standard());

/// Extraction plus analysis for d = 2 or d = 3 networks with default sampling.
PolytopeReport analyze_network(const NetworkD& net, const AnalysisTolerances& tol = {});

/// max | |q| - 1 | and mean | |q| - 1 | over boundary samples.
std::pair<double, double> sphere_deviation(const RadialMesh& mesh);
std::pair<double, double> sphere_deviation(const RadialPolyline& polyline);

/// Radial sup-difference max_u |r_A(u) - r_B(u)|. Both sides must share the
/// same direction set; throws PreconditionError otherwise.
double hausdorff_distance(const RadialMesh& a, const RadialMesh& b);
double hausdorff_distance(const RadialPolyline& a, const RadialPolyline& b);

/// Boundary of a convex polytope sampled on the directions of `like`.
RadialMesh sample_polytope(const ConvexPolytope3& poly, const RadialMesh& like);

/// Uniformly rescaled copy whose mean radius equals `target`.
RadialMesh rescale_to_mean_radius(const RadialMesh& mesh, double target = 1.0);

/// Sorted gaps between first-layer row directions taken mod pi, including
/// the wrap-around gap. Needs d = 2 and a single layer.
std::vector<double> weight_direction_spacing(const NetworkD& net);

/// Rotation R (det +1) that best maps the points `moving` onto `reference`:
/// candidate frames from vertex pairs, then Kabsch on nearest-neighbour
/// matches. Point sets should be vertex sets of congruent polytopes.
Eigen::Matrix3d align_rotation(const std::vector<Eigen::Vector3d>& reference,
                               const std::vector<Eigen::Vector3d>& moving);

/// The network x -> f(R^T x), i.e. the body of `net` rotated by R.
NetworkD rotate_network(const NetworkD& net, const Eigen::Matrix3d& rotation);

}  // namespace npoly

#endif  // NPOLY_ANALYSIS_HPP_
