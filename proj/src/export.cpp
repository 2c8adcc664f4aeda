#include "npoly/export.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

namespace npoly
{

void RenderStyle::validate() const
{
  if (image_size_px < 64) {
    throw PreconditionError("image size must be >= 64 px");
  }
  if (!(margin >= 0.0 && margin < 0.5)) {
    throw PreconditionError("margin must lie in [0, 0.5)");
  }
  if (!(stroke_width_px > 0.0)) {
    throw PreconditionError("stroke width must be positive");
  }
}

std::string format_number(double value, int significant)
{
  std::array<char, 64> buffer{};
  const auto [end, ec] =
    std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::general, significant);
  if (ec != std::errc()) {
    throw Error("number formatting failed");
  }
  return std::string(buffer.data(), end);
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << content;
  out.close();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

std::string read_text_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::vector<Eigen::Vector2d> prune_collinear(const std::vector<Eigen::Vector2d>& points, double tol)
{
  const std::size_t n = points.size();
  if (n < 3) {
    return points;
  }
  std::vector<Eigen::Vector2d> kept;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = points[i] - points[(i + n - 1) % n];
    const Eigen::Vector2d b = points[(i + 1) % n] - points[i];
    const double cross = a.x() * b.y() - a.y() * b.x();
    if (std::abs(cross) > tol * a.norm() * b.norm() || a.dot(b) < 0.0) {
      kept.push_back(points[i]);
    }
  }
  return kept;
}

std::string svg_document(const RadialPolyline& polyline, const RenderStyle& style)
{
  polyline.validate();
  style.validate();
  std::vector<Eigen::Vector2d> points(polyline.size());
  double extent = style.overlay_unit_circle ? 1.0 : 0.0;
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    points[i] = polyline.point(i);
    extent = std::max(extent, polyline.radii[i]);
  }
  points = prune_collinear(points);

  const double half = extent / (1.0 - 2.0 * style.margin);
  const double units_per_px = 2.0 * half / style.image_size_px;
  const std::string stroke = format_number(style.stroke_width_px * units_per_px);
  const std::string size = std::to_string(style.image_size_px);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"" << format_number(-half) << ' ' << format_number(-half) << ' ' << format_number(2 * half)
      << ' ' << format_number(2 * half) << "\">\n";
  if (style.overlay_unit_circle) {
    svg << "  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" << stroke
        << "\"/>\n";
  }
  svg << "  <path fill=\"none\" stroke=\"#000000\" stroke-linejoin=\"round\" stroke-width=\"" << stroke
      << "\" d=\"";
  // Rounding dust such as cos(pi/2) prints as 0; SVG's y axis points down.
  const auto coord = [dust = 1e-12 * extent](double v) { return format_number(std::abs(v) < dust ? 0.0 : v); };
  for (std::size_t i = 0; i < points.size(); ++i) {
    svg << (i == 0 ? "M" : " L") << coord(points[i].x()) << ' ' << coord(-points[i].y());
  }
  svg << " Z\"/>\n</svg>\n";
  return svg.str();
}

void write_svg(const RadialPolyline& polyline, const RenderStyle& style, const std::filesystem::path& path)
{
  write_text_file(path, svg_document(polyline, style));
}

std::string obj_document(const RadialMesh& mesh)
{
  mesh.validate();
  std::ostringstream obj;
  obj << "# radial level-set mesh: " << mesh.size() << " vertices, " << mesh.triangles.size() << " faces\n";
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const Eigen::Vector3d p = mesh.point(i);
    obj << "v " << format_number(p.x()) << ' ' << format_number(p.y()) << ' ' << format_number(p.z()) << '\n';
  }
  for (const auto& [a, b, c] : mesh.triangles) {
    obj << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << '\n';
  }
  return obj.str();
}

void write_obj(const RadialMesh& mesh, const std::filesystem::path& path)
{
  write_text_file(path, obj_document(mesh));
}

ObjData parse_obj(const std::string& text)
{
  ObjData data;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Eigen::Vector3d v;
      if (!(ls >> v.x() >> v.y() >> v.z())) {
        throw IoError("malformed OBJ vertex line: " + line);
      }
      data.vertices.push_back(v);
    } else if (tag == "f") {
      Triangle t{};
      for (int& idx : t) {
        std::string token;
        if (!(ls >> token)) {
          throw IoError("malformed OBJ face line: " + line);
        }
        const std::string head = token.substr(0, token.find('/'));
        const auto [end, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || end != head.data() + head.size()) {
          throw IoError("malformed OBJ face line: " + line);
        }
        --idx;
      }
      data.faces.push_back(t);
    }
  }
  for (const Triangle& t : data.faces) {
    for (int idx : t) {
      if (idx < 0 || idx >= static_cast<int>(data.vertices.size())) {
        throw IoError("OBJ face refers to vertex " + std::to_string(idx + 1) + " of " +
                      std::to_string(data.vertices.size()));
      }
    }
  }
  return data;
}

ObjData read_obj(const std::filesystem::path& path)
{
  return parse_obj(read_text_file(path));
}

std::string polyline_csv(const RadialPolyline& polyline)
{
  std::ostringstream csv;
  csv << "theta,r,x,y\n";
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    const Eigen::Vector2d p = polyline.point(i);
    csv << format_number(polyline.angles[i], 17) << ',' << format_number(polyline.radii[i], 17) << ','
        << format_number(p.x(), 17) << ',' << format_number(p.y(), 17) << '\n';
  }
  return csv.str();
}

std::string mesh_csv(const RadialMesh& mesh)
{
  std::ostringstream csv;
  csv << "ux,uy,uz,r,x,y,z\n";
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    const Eigen::Vector3d u = mesh.directions.col(i);
    const Eigen::Vector3d p = mesh.point(i);
    csv << format_number(u.x(), 17) << ',' << format_number(u.y(), 17) << ',' << format_number(u.z(), 17) << ','
        << format_number(mesh.radii[i], 17) << ',' << format_number(p.x(), 17) << ','
        << format_number(p.y(), 17) << ',' << format_number(p.z(), 17) << '\n';
  }
  return csv.str();
}

Json mesh_to_json(const RadialMesh& mesh)
{
  Json directions = Json::array();
  Json radii = Json::array();
  Json triangles = Json::array();
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    directions.push_back({mesh.directions(0, i), mesh.directions(1, i), mesh.directions(2, i)});
    radii.push_back(mesh.radii[i]);
  }
  for (const auto& [a, b, c] : mesh.triangles) {
    triangles.push_back({a, b, c});
  }
  return Json{{"directions", directions}, {"radii", radii}, {"triangles", triangles}};
}

std::string loss_history_csv(const std::vector<std::pair<int, double>>& history)
{
  std::ostringstream csv;
  csv << "epoch,loss\n";
  for (const auto& [epoch, loss] : history) {
    csv << epoch << ',' << format_number(loss, 17) << '\n';
  }
  return csv.str();
}

Json report_to_json(const PolytopeReport& report)
{
  Json j;
  j["dim"] = report.dim;
  j["V"] = report.vertex_count;
  j["E"] = report.edge_count;
  j["F"] = report.face_count;
  j["euler"] = report.euler;
  j["edge_length_cv"] = report.edge_length_cv;
  j["identified"] = report.identified ? Json(*report.identified) : Json(nullptr);
  j["max_sphere_deviation"] = report.max_sphere_deviation;
  j["mean_sphere_deviation"] = report.mean_sphere_deviation;
  j["tolerances_used"] = report.tolerances_used;
  if (!report.diagnostic.empty()) {
    j["diagnostic"] = report.diagnostic;
  }
  return j;
}

PolytopeReport report_from_json(const Json& j)
{
  PolytopeReport r;
  r.dim = j.at("dim").get<int>();
  r.vertex_count = j.at("V").get<int>();
  r.edge_count = j.at("E").get<int>();
  r.face_count = j.at("F").get<int>();
  r.euler = j.at("euler").get<int>();
  r.edge_length_cv = j.at("edge_length_cv").get<double>();
  if (!j.at("identified").is_null()) {
    r.identified = j.at("identified").get<std::string>();
  }
  r.max_sphere_deviation = j.at("max_sphere_deviation").get<double>();
  r.mean_sphere_deviation = j.value("mean_sphere_deviation", 0.0);
  r.tolerances_used = j.at("tolerances_used").get<std::map<std::string, double>>();
  r.diagnostic = j.value("diagnostic", std::string());
  return r;
}

void write_report(const PolytopeReport& report, const std::filesystem::path& path)
{
  write_text_file(path, report_to_json(report).dump(2) + "\n");
}

Json model_to_json(const ModelFile& model)
{
  const NetworkD& net = model.network;
  Json weights = Json::array();
  for (const auto& w : net.weights()) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < w.cols(); ++k) {
        row.push_back(w(i, k));
      }
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
  }
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["spec"] = {{"d", net.spec().input_dim}, {"widths", net.spec().widths}, {"powers", net.spec().powers}};
  j["weights"] = std::move(weights);
  j["seed"] = model.seed;
  j["train_meta"] = model.train_meta;
  return j;
}

ModelFile model_from_json(const Json& j)
{
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw VersionMismatch("model format_version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kModelFormatVersion) + ")");
    }
    NetworkSpec spec;
    spec.input_dim = j.at("spec").at("d").get<int>();
    spec.widths = j.at("spec").at("widths").get<std::vector<int>>();
    spec.powers = j.at("spec").at("powers").get<std::vector<double>>();
    spec.validate();
    const Json& layers = j.at("weights");
    if (!layers.is_array() || static_cast<int>(layers.size()) != spec.depth()) {
      throw PreconditionError("model weights do not match the spec depth");
    }
    std::vector<Eigen::MatrixXd> weights;
    for (int l = 0; l < spec.depth(); ++l) {
      const Json& rows = layers[l];
      Eigen::MatrixXd w(spec.widths[l], spec.fan_in(l));
      if (static_cast<Eigen::Index>(rows.size()) != w.rows()) {
        throw PreconditionError("model weight matrix " + std::to_string(l) + " has the wrong row count");
      }
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != w.cols()) {
          throw PreconditionError("model weight matrix " + std::to_string(l) + " has the wrong column count");
        }
        for (Eigen::Index k = 0; k < w.cols(); ++k) {
          w(i, k) = rows[i][k].get<double>();
        }
      }
      weights.push_back(std::move(w));
    }
    return ModelFile{NetworkD(std::move(spec), std::move(weights)), j.value("seed", std::uint64_t{0}),
                     j.value("train_meta", Json::object())};
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed model document: ") + e.what());
  }
}

void write_model(const ModelFile& model, const std::filesystem::path& path)
{
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

ModelFile read_model(const std::filesystem::path& path)
{
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw PreconditionError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

Json train_config_to_json(const TrainConfig& c)
{
  return Json{{"num_points", c.num_points}, {"batch_size", c.batch_size},     {"epochs", c.epochs},
              {"learning_rate", c.learning_rate}, {"adam_beta1", c.adam_beta1}, {"adam_beta2", c.adam_beta2},
              {"adam_eps", c.adam_eps},     {"seed", c.seed},                 {"restarts", c.restarts}};
}

TrainConfig train_config_from_json(const Json& j, TrainConfig base)
{
  if (!j.is_object()) {
    throw PreconditionError("train config must be a JSON object");
  }
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "num_points") {
        base.num_points = value.get<int>();
      } else if (key == "batch_size") {
        base.batch_size = value.get<int>();
      } else if (key == "epochs") {
        base.epochs = value.get<int>();
      } else if (key == "learning_rate") {
        base.learning_rate = value.get<double>();
      } else if (key == "adam_beta1") {
        base.adam_beta1 = value.get<double>();
      } else if (key == "adam_beta2") {
        base.adam_beta2 = value.get<double>();
      } else if (key == "adam_eps") {
        base.adam_eps = value.get<double>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "restarts") {
        base.restarts = value.get<int>();
      } else {
        throw PreconditionError("unknown train config key '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed train config: ") + e.what());
  }
  base.validate();
  return base;
}

TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base)
{
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw PreconditionError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return train_config_from_json(j, base);
}

}  // namespace npoly
