#include <cmath>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "npoly/export.hpp"
#include "test_support.hpp"

using namespace npoly;
using npoly::testing::identity_net;
using npoly::testing::random_vector;
using npoly::testing::scratch_dir;

namespace
{

int count_occurrences(const std::string& text, const std::string& needle)
{
  int count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

std::string path_data(const std::string& svg)
{
  const std::regex d_attr(R"re(<path[^>]* d="([^"]*)")re");
  std::smatch m;
  return std::regex_search(svg, m, d_attr) ? m[1].str() : std::string();
}

}  // namespace

TEST(FormatNumber, LocaleFreeSignificantDigits)
{
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(-0.5), "-0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(std::sqrt(2.0), 4), "1.414");
  EXPECT_EQ(format_number(12345678912.0), "1.23456789e+10");
}

TEST(Sha256, KnownVectors)
{
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Svg, SquareHasFourCorners)
{
  const std::string svg = svg_document(extract_polyline(identity_net(2, 1.0)));
  const std::string d = path_data(svg);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(count_occurrences(d, "M"), 1);
  EXPECT_EQ(count_occurrences(d, "L"), 3);
  EXPECT_EQ(count_occurrences(d, "Z"), 1);
  EXPECT_EQ(count_occurrences(svg, "<path"), 1);
}

TEST(Svg, OverlayCircle)
{
  const RadialPolyline line = extract_polyline(identity_net(2, 2.0), 256);
  RenderStyle style;
  EXPECT_EQ(count_occurrences(svg_document(line, style), "<circle"), 1);
  style.overlay_unit_circle = false;
  EXPECT_EQ(count_occurrences(svg_document(line, style), "<circle"), 0);
  style.image_size_px = 32;
  EXPECT_THROW(svg_document(line, style), PreconditionError);
}

TEST(Svg, ByteIdenticalFiles)
{
  const auto dir = scratch_dir("svg");
  const RadialPolyline line = extract_polyline(init_network(NetworkSpec{2, {5}, {1.0}}, 3));
  write_svg(line, {}, dir / "a.svg");
  write_svg(line, {}, dir / "b.svg");
  EXPECT_EQ(read_text_file(dir / "a.svg"), read_text_file(dir / "b.svg"));
  EXPECT_THROW(write_svg(line, {}, "/proc/npoly/nope.svg"), IoError);
}

TEST(Obj, OctahedronRoundTrip)
{
  const RadialMesh mesh = extract_mesh(identity_net(3, 1.0), 3);
  const auto dir = scratch_dir("obj");
  write_obj(mesh, dir / "a.obj");
  write_obj(mesh, dir / "b.obj");
  EXPECT_EQ(read_text_file(dir / "a.obj"), read_text_file(dir / "b.obj"));

  const ObjData data = read_obj(dir / "a.obj");
  ASSERT_EQ(static_cast<Eigen::Index>(data.vertices.size()), mesh.size());
  ASSERT_EQ(data.faces.size(), mesh.triangles.size());
  EXPECT_EQ(data.faces, mesh.triangles);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    // Nine significant digits.
    EXPECT_LT((data.vertices[i] - mesh.point(i)).norm(), 1e-8);
  }
  std::set<std::pair<int, int>> edges;
  for (const auto& t : data.faces) {
    for (int k = 0; k < 3; ++k) {
      edges.insert(std::minmax(t[k], t[(k + 1) % 3]));
    }
  }
  const long v = static_cast<long>(data.vertices.size());
  EXPECT_EQ(v - static_cast<long>(edges.size()) + static_cast<long>(data.faces.size()), 2);
}

TEST(Obj, OneBasedFaceIndices)
{
  const std::string text = obj_document(extract_mesh(identity_net(3, 1.0), 2));
  EXPECT_EQ(text.find("f 0 "), std::string::npos);
  EXPECT_NE(text.find("\nf "), std::string::npos);
  // Header comment aside, every record is "v x y z" or "f a b c".
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    EXPECT_TRUE(line.rfind("v ", 0) == 0 || line.rfind("f ", 0) == 0) << line;
    EXPECT_EQ(line.find(','), std::string::npos) << line;
  }
}

TEST(Obj, EmptyMeshRejected)
{
  RadialMesh empty;
  EXPECT_THROW(obj_document(empty), PreconditionError);
  EXPECT_THROW(parse_obj("v 1 2\n"), IoError);
  EXPECT_THROW(parse_obj("v 0 0 0\nf 1 2 3\n"), IoError);
  EXPECT_THROW(parse_obj("v 0 0 0\nf 1 x 1\n"), IoError);
}

TEST(Csv, Headers)
{
  const std::string poly = polyline_csv(extract_polyline(identity_net(2, 1.0), 64));
  EXPECT_EQ(poly.substr(0, poly.find('\n')), "theta,r,x,y");
  EXPECT_EQ(count_occurrences(poly, "\n"), 65);
  const std::string mesh = mesh_csv(extract_mesh(identity_net(3, 1.0), 2));
  EXPECT_EQ(mesh.substr(0, mesh.find('\n')), "ux,uy,uz,r,x,y,z");
  EXPECT_EQ(loss_history_csv({{1, 0.5}, {2, 0.25}}), "epoch,loss\n1,0.5\n2,0.25\n");
}

TEST(Report, JsonHasEveryField)
{
  const PolytopeReport report = analyze_network(identity_net(3, 1.0));
  const Json j = report_to_json(report);
  for (const char* key : {"dim", "V", "E", "F", "euler", "edge_length_cv", "identified", "max_sphere_deviation",
                          "mean_sphere_deviation", "tolerances_used"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["identified"], "octahedron");
  EXPECT_EQ(j["V"], 6);

  const PolytopeReport back = report_from_json(j);
  EXPECT_EQ(back.vertex_count, report.vertex_count);
  EXPECT_EQ(back.identified, report.identified);
  EXPECT_EQ(back.edge_length_cv, report.edge_length_cv);
  EXPECT_EQ(back.tolerances_used, report.tolerances_used);

  PolytopeReport unnamed = report;
  unnamed.identified.reset();
  EXPECT_TRUE(report_to_json(unnamed)["identified"].is_null());
}

TEST(Model, RoundTripIsBitExact)
{
  std::mt19937_64 rng(41);
  const NetworkD net = init_network(NetworkSpec{3, {7, 3}, {1.0, 1.7}}, 77);
  ModelFile model{net, 77, Json{{"epochs", 10}}};
  const auto dir = scratch_dir("model");
  write_model(model, dir / "m.json");
  const ModelFile back = read_model(dir / "m.json");
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.train_meta, model.train_meta);
  EXPECT_EQ(back.network.spec(), net.spec());
  for (int l = 0; l < net.depth(); ++l) {
    EXPECT_EQ(back.network.weight(l), net.weight(l));
  }
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = random_vector(3, rng);
    EXPECT_EQ(forward(back.network, x), forward(net, x));
  }
}

TEST(Model, VersionMismatchAndMalformed)
{
  Json j = model_to_json(ModelFile{identity_net(2, 1.0), 0, Json::object()});
  j["format_version"] = 999;
  EXPECT_THROW(model_from_json(j), VersionMismatch);

  Json bad = model_to_json(ModelFile{identity_net(2, 1.0), 0, Json::object()});
  bad["weights"][0][0] = Json::array({1.0});
  EXPECT_THROW(model_from_json(bad), PreconditionError);
  EXPECT_THROW(model_from_json(Json::object()), PreconditionError);
}

TEST(TrainConfigJson, RoundTripAndOverrides)
{
  TrainConfig config;
  config.epochs = 123;
  config.learning_rate = 0.01;
  config.seed = 9;
  const TrainConfig back = train_config_from_json(train_config_to_json(config));
  EXPECT_EQ(back.epochs, 123);
  EXPECT_EQ(back.learning_rate, 0.01);
  EXPECT_EQ(back.seed, 9u);

  const TrainConfig partial = train_config_from_json(Json{{"restarts", 2}});
  EXPECT_EQ(partial.restarts, 2);
  EXPECT_EQ(partial.epochs, TrainConfig{}.epochs);
  EXPECT_THROW(train_config_from_json(Json{{"epoch", 2}}), PreconditionError);
  EXPECT_THROW(train_config_from_json(Json{{"batch_size", 0}}), PreconditionError);

  const auto dir = scratch_dir("config");
  write_text_file(dir / "c.json", R"({"epochs": 50, "batch_size": 100})");
  const TrainConfig loaded = load_train_config(dir / "c.json");
  EXPECT_EQ(loaded.epochs, 50);
  EXPECT_EQ(loaded.batch_size, 100);
  EXPECT_THROW(load_train_config(dir / "missing.json"), IoError);
}
