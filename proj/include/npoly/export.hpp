#ifndef NPOLY_EXPORT_HPP_
#define NPOLY_EXPORT_HPP_

// Deterministic emitters: equal inputs give byte-identical files. Numbers are
// formatted with std::to_chars, so output never depends on the C locale.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "npoly/analysis.hpp"
#include "npoly/levelset.hpp"
#include "npoly/net.hpp"
#include "npoly/train.hpp"

namespace npoly
{

using Json = nlohmann::json;

struct RenderStyle
{
  double stroke_width_px = 2.0;
  int image_size_px = 512;
  double margin = 0.08;
  bool overlay_unit_circle = true;

  void validate() const;
};

/// Shortest decimal with `significant` digits ('.' radix, no locale).
std::string format_number(double value, int significant = 9);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

/// Drops polyline points that are collinear with their neighbours.
std::vector<Eigen::Vector2d> prune_collinear(const std::vector<Eigen::Vector2d>& points, double tol = 1e-9);

std::string svg_document(const RadialPolyline& polyline, const RenderStyle& style = {});
void write_svg(const RadialPolyline& polyline, const RenderStyle& style, const std::filesystem::path& path);

/// "v x y z" lines then "f a b c" lines (1-based), 9 significant digits.
std::string obj_document(const RadialMesh& mesh);
void write_obj(const RadialMesh& mesh, const std::filesystem::path& path);

struct ObjData
{
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Triangle> faces;
};

ObjData parse_obj(const std::string& text);
ObjData read_obj(const std::filesystem::path& path);

/// theta,r,x,y
std::string polyline_csv(const RadialPolyline& polyline);
/// ux,uy,uz,r,x,y,z
std::string mesh_csv(const RadialMesh& mesh);
/// {directions, radii, triangles}
Json mesh_to_json(const RadialMesh& mesh);
/// epoch,loss
std::string loss_history_csv(const std::vector<std::pair<int, double>>& history);

Json report_to_json(const PolytopeReport& report);
PolytopeReport report_from_json(const Json& j);
void write_report(const PolytopeReport& report, const std::filesystem::path& path);

inline constexpr int kModelFormatVersion = 1;

/// A trained network as stored on disk.
struct ModelFile
{
  NetworkD network;
  std::uint64_t seed = 0;
  Json train_meta = Json::object();
};

/// {format_version, spec: {d, widths, powers}, weights, seed, train_meta}.
/// Weights are row-major nested arrays of shortest round-trip decimals, so
/// reading restores every double bit-exactly.
Json model_to_json(const ModelFile& model);
/// Throws VersionMismatch for an unknown format_version.
ModelFile model_from_json(const Json& j);
void write_model(const ModelFile& model, const std::filesystem::path& path);
ModelFile read_model(const std::filesystem::path& path);

Json train_config_to_json(const TrainConfig& config);
/// Overrides the fields of `base` present in `j`; unknown keys are rejected.
TrainConfig train_config_from_json(const Json& j, TrainConfig base = {});
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});

}  // namespace npoly

#endif  // NPOLY_EXPORT_HPP_
