#include "npoly/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace npoly
{

namespace fs = std::filesystem;

namespace
{

fs::path with_suffix(const fs::path& stem, const std::string& suffix)
{
  return fs::path(stem.string() + suffix);
}

std::string iso_time(std::chrono::system_clock::time_point t)
{
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json spec_json(const NetworkSpec& spec)
{
  return Json{{"d", spec.input_dim}, {"widths", spec.widths}, {"powers", spec.powers}};
}

std::string fmt(double v, int digits = 4)
{
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

void write_table(const std::vector<std::vector<std::string>>& rows, const fs::path& path, std::ostream& log)
{
  std::ostringstream tsv;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      tsv << (i ? "\t" : "") << row[i];
    }
    tsv << '\n';
  }
  write_text_file(path, tsv.str());
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      log << std::left << std::setw(static_cast<int>(width[i]) + 2) << row[i];
    }
    log << '\n';
  }
}

TrainCommandResult train_and_save(const NetworkSpec& spec, const TrainConfig& config, const fs::path& stem,
                                  RunManifest& manifest, std::ostream& log)
{
  log << "training " << spec.type_name() << " in d=" << spec.input_dim << " (" << config.restarts
      << " restarts, " << config.epochs << " epochs)\n";
  auto outcomes = train_restarts(spec, config);
  for (const auto& o : outcomes) {
    manifest.add_seed(o.seed);
    log << "  restart " << o.restart_index << " seed " << o.seed << ": "
        << (o.result ? "final loss " + format_number(o.result->final_loss, 6) : "diverged: " + o.error) << '\n';
  }
  TrainResult best = select_best(outcomes);
  ModelFile model{best.network, best.seed_used,
                  Json{{"final_loss", best.final_loss},
                       {"restart_index", best.restart_index},
                       {"config", train_config_to_json(config)}}};
  const fs::path model_path = with_suffix(stem, ".model.json");
  write_model(model, model_path);
  manifest.add_output(model_path);
  const fs::path loss_path = with_suffix(stem, ".losshistory.csv");
  write_text_file(loss_path, loss_history_csv(best.loss_history));
  manifest.add_output(loss_path);
  return TrainCommandResult{std::move(best), std::move(outcomes), model_path};
}

}  // namespace

fs::path default_output_dir()
{
  if (const char* env = std::getenv("NPOLY_OUT_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env);
  }
  return fs::path("npoly_out");
}

std::string type_slug(const NetworkSpec& spec)
{
  std::string slug = "type_";
  for (std::size_t i = 0; i < spec.widths.size(); ++i) {
    slug += (i ? "-" : "") + std::to_string(spec.widths[i]);
  }
  slug += "_p";
  bool uniform = true;
  for (double p : spec.powers) {
    uniform = uniform && p == spec.powers.front();
  }
  for (std::size_t i = 0; i < (uniform ? 1 : spec.powers.size()); ++i) {
    std::string p = format_number(spec.powers[i], 6);
    for (char& c : p) {
      c = c == '.' ? '_' : c;
    }
    slug += (i ? "-" : "") + p;
  }
  return slug;
}

RunManifest::RunManifest(std::string command)
  : command_(std::move(command)),
    started_(std::chrono::system_clock::now()),
    started_steady_(std::chrono::steady_clock::now())
{
}

void RunManifest::add_output(const fs::path& path)
{
  outputs_.emplace_back(path.generic_string(), sha256_hex(read_text_file(path)));
}

Json RunManifest::to_json() const
{
  Json outputs = Json::array();
  for (const auto& [path, hash] : outputs_) {
    outputs.push_back({{"path", path}, {"sha256", hash}});
  }
  const double seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - started_steady_).count();
  return Json{{"command", command_},
              {"config", config_},
              {"seeds", seeds_},
              {"outputs", outputs},
              {"timing", {{"started_at", iso_time(started_)}, {"wall_clock_seconds", seconds}}}};
}

void RunManifest::write(const fs::path& path) const
{
  write_text_file(path, to_json().dump(2) + "\n");
}

TrainCommandResult cmd_train(const NetworkSpec& spec, const TrainConfig& config, const fs::path& stem,
                             std::ostream& log)
{
  spec.validate();
  config.validate();
  RunManifest manifest("train");
  manifest.set_config(Json{{"spec", spec_json(spec)}, {"train", train_config_to_json(config)}});
  TrainCommandResult result = train_and_save(spec, config, stem, manifest, log);
  manifest.write(with_suffix(stem, ".manifest.json"));
  log << "best restart " << result.best.restart_index << " (loss " << result.best.final_loss << ") -> "
      << result.model_path.string() << '\n';
  return result;
}

namespace
{

void extract_into(const NetworkD& net, int samples, int subdivisions, const fs::path& stem, RunManifest& manifest)
{
  if (net.input_dim() == 2) {
    const RadialPolyline line = extract_polyline(net, samples);
    write_svg(line, RenderStyle{}, with_suffix(stem, ".svg"));
    manifest.add_output(with_suffix(stem, ".svg"));
    write_text_file(with_suffix(stem, ".radial.csv"), polyline_csv(line));
    manifest.add_output(with_suffix(stem, ".radial.csv"));
  } else if (net.input_dim() == 3) {
    const RadialMesh mesh = extract_mesh(net, subdivisions);
    write_obj(mesh, with_suffix(stem, ".obj"));
    manifest.add_output(with_suffix(stem, ".obj"));
    write_text_file(with_suffix(stem, ".radial.csv"), mesh_csv(mesh));
    manifest.add_output(with_suffix(stem, ".radial.csv"));
    write_text_file(with_suffix(stem, ".mesh.json"), mesh_to_json(mesh).dump() + "\n");
    manifest.add_output(with_suffix(stem, ".mesh.json"));
  } else {
    throw PreconditionError("extract handles d = 2 and d = 3; use `slice` for d = " +
                            std::to_string(net.input_dim()));
  }
}

}  // namespace

void cmd_extract(const fs::path& model_path, int samples, int subdivisions, const fs::path& stem, std::ostream& log)
{
  const ModelFile model = read_model(model_path);
  RunManifest manifest("extract");
  manifest.set_config(Json{{"model", model_path.generic_string()}, {"samples", samples}, {"subdiv", subdivisions}});
  manifest.add_seed(model.seed);
  extract_into(model.network, samples, subdivisions, stem, manifest);
  manifest.write(with_suffix(stem, ".extract.manifest.json"));
  for (const auto& [path, hash] : manifest.outputs()) {
    log << "wrote " << path << '\n';
  }
}

PolytopeReport cmd_analyze(const fs::path& model_path, const fs::path& stem, std::ostream& log)
{
  const ModelFile model = read_model(model_path);
  RunManifest manifest("analyze");
  manifest.set_config(Json{{"model", model_path.generic_string()}});
  manifest.add_seed(model.seed);
  const PolytopeReport report = analyze_network(model.network);
  const fs::path report_path = with_suffix(stem, ".report.json");
  write_report(report, report_path);
  manifest.add_output(report_path);
  manifest.write(with_suffix(stem, ".analyze.manifest.json"));
  log << model.network.spec().type_name() << " d=" << model.network.input_dim() << ": V=" << report.vertex_count
      << " E=" << report.edge_count;
  if (report.dim == 3) {
    log << " F=" << report.face_count;
  }
  log << " edge_cv=" << report.edge_length_cv << " -> " << report.identified.value_or("unidentified") << '\n';
  if (!report.diagnostic.empty()) {
    log << "note: " << report.diagnostic << '\n';
  }
  return report;
}

void cmd_sweep(int dim, const std::vector<int>& widths, const std::vector<double>& powers, const TrainConfig& config,
               const fs::path& out_dir, std::ostream& log)
{
  if (powers.empty()) {
    throw PreconditionError("sweep needs at least one power");
  }
  RunManifest manifest("sweep");
  manifest.set_config(Json{{"d", dim}, {"widths", widths}, {"p_list", powers}, {"train", train_config_to_json(config)}});
  std::ostringstream summary;
  summary << "type,p,final_loss,max_sphere_deviation,mean_sphere_deviation,V,E,F,identified\n";
  for (double p : powers) {
    NetworkSpec spec{dim, widths, std::vector<double>(widths.size(), p)};
    spec.validate();
    const fs::path stem = out_dir / type_slug(spec);
    const TrainResult best = train_and_save(spec, config, stem, manifest, log).best;
    PolytopeReport report;
    if (dim <= 3) {
      extract_into(best.network, kDefaultPolylineSamples, kDefaultMeshSubdivisions, stem, manifest);
      report = analyze_network(best.network);
      write_report(report, with_suffix(stem, ".report.json"));
      manifest.add_output(with_suffix(stem, ".report.json"));
    }
    summary << '"' << spec.type_name() << "\"," << format_number(p) << ',' << format_number(best.final_loss) << ','
            << format_number(report.max_sphere_deviation) << ',' << format_number(report.mean_sphere_deviation)
            << ',' << report.vertex_count << ',' << report.edge_count << ',' << report.face_count << ','
            << report.identified.value_or("") << '\n';
    log << "  p=" << p << " max |r-1| = " << report.max_sphere_deviation << '\n';
  }
  write_text_file(out_dir / "summary.csv", summary.str());
  manifest.add_output(out_dir / "summary.csv");
  manifest.write(out_dir / "sweep.manifest.json");
}

void cmd_slice(const fs::path& model_path, int theta_steps, int subdivisions, const fs::path& out_dir,
               std::ostream& log)
{
  if (theta_steps < 1) {
    throw PreconditionError("theta-steps must be >= 1");
  }
  const ModelFile model = read_model(model_path);
  const NetworkD& net = model.network;
  RunManifest manifest("slice");
  manifest.set_config(
    Json{{"model", model_path.generic_string()}, {"theta_steps", theta_steps}, {"subdiv", subdivisions}});
  manifest.add_seed(model.seed);
  for (int n = 0; n < theta_steps; ++n) {
    const double theta = n * std::numbers::pi / theta_steps;
    const RadialMesh mesh = slice_section(net, theta_slice(net.input_dim(), theta), subdivisions);
    const fs::path path = out_dir / ("slice_" + std::to_string(n) + ".obj");
    write_obj(mesh, path);
    manifest.add_output(path);
    log << "theta = " << n << "pi/" << theta_steps << ": radii in [" << mesh.radii.minCoeff() << ", "
        << mesh.radii.maxCoeff() << "] -> " << path.string() << '\n';
  }
  manifest.write(out_dir / "slice.manifest.json");
}

std::vector<std::vector<std::string>> cmd_reproduce(const std::string& figure, const ReproduceOptions& options,
                                                    const fs::path& out_dir, std::ostream& log)
{
  RunManifest manifest("reproduce " + figure);
  manifest.set_config(Json{{"figure", figure}, {"full", options.full}, {"train", train_config_to_json(options.config)}});
  std::vector<std::vector<std::string>> rows;

  auto run = [&](const NetworkSpec& spec) {
    const fs::path stem = out_dir / type_slug(spec);
    TrainResult best = train_and_save(spec, options.config, stem, manifest, log).best;
    extract_into(best.network, kDefaultPolylineSamples, kDefaultMeshSubdivisions, stem, manifest);
    PolytopeReport report = analyze_network(best.network);
    write_report(report, with_suffix(stem, ".report.json"));
    manifest.add_output(with_suffix(stem, ".report.json"));
    return std::make_pair(std::move(best), std::move(report));
  };

  if (figure == "fig1") {
    rows.push_back({"type", "V", "identified", "edge_cv", "max_gap_error_rad", "final_loss"});
    for (int n = 2; n <= 7; ++n) {
      const auto [best, report] = run(NetworkSpec{2, {n}, {1.0}});
      double gap_error = 0.0;
      for (double g : weight_direction_spacing(best.network)) {
        gap_error = std::max(gap_error, std::abs(g - std::numbers::pi / n));
      }
      rows.push_back({best.network.spec().type_name(), std::to_string(report.vertex_count),
                      report.identified.value_or("none"), fmt(report.edge_length_cv), fmt(gap_error),
                      fmt(best.final_loss)});
    }
  } else if (figure == "fig2") {
    rows.push_back({"type", "V", "E", "F", "identified", "edge_cv", "final_loss"});
    std::vector<int> ns = options.full ? std::vector<int>{3, 4, 5, 6, 7, 8, 9, 10, 11, 12} : std::vector<int>{3, 4, 6};
    for (int n : ns) {
      const auto [best, report] = run(NetworkSpec{3, {n}, {1.0}});
      rows.push_back({best.network.spec().type_name(), std::to_string(report.vertex_count),
                      std::to_string(report.edge_count), std::to_string(report.face_count),
                      report.identified.value_or("none"), fmt(report.edge_length_cv), fmt(best.final_loss)});
    }
  } else if (figure == "fig3") {
    rows.push_back({"n", "mean|r-1| (n;1)", "mean|r-1| (n,2;1)", "deeper_not_worse"});
    std::vector<int> ns = options.full ? std::vector<int>{4, 5, 6, 7, 8, 9, 10, 11} : std::vector<int>{4, 6, 8};
    for (int n : ns) {
      const auto shallow = run(NetworkSpec{3, {n}, {1.0}}).second;
      const auto deep = run(NetworkSpec{3, {n, 2}, {1.0, 1.0}}).second;
      rows.push_back({std::to_string(n), fmt(shallow.mean_sphere_deviation), fmt(deep.mean_sphere_deviation),
                      deep.mean_sphere_deviation <= shallow.mean_sphere_deviation ? "yes" : "no"});
    }
  } else if (figure == "fig5") {
    rows.push_back({"p", "max|r-1|", "mean|r-1|", "V", "final_loss"});
    for (double p : {0.8, 1.0, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0}) {
      const auto [best, report] = run(NetworkSpec{2, {2}, {p}});
      rows.push_back({fmt(p), fmt(report.max_sphere_deviation), fmt(report.mean_sphere_deviation),
                      std::to_string(report.vertex_count), fmt(best.final_loss)});
    }
  } else {
    throw PreconditionError("unknown figure '" + figure + "' (expected fig1, fig2, fig3 or fig5)");
  }

  write_table(rows, out_dir / "summary.tsv", log);
  manifest.add_output(out_dir / "summary.tsv");
  manifest.write(out_dir / "reproduce.manifest.json");
  return rows;
}

}  // namespace npoly
