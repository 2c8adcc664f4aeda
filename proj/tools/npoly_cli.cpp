// npoly: train bias-free |x|^p networks on the unit sphere and study the
// polytopes cut out by f(x) = 1.
//
// Exit codes: 0 success, 1 runtime failure (divergence, degeneracy, I/O),
// 2 usage error or invalid arguments.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "npoly/commands.hpp"

namespace fs = std::filesystem;

namespace
{

struct TrainFlags
{
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> epochs;
  std::optional<int> num_points;
  std::optional<double> learning_rate;

  void attach(CLI::App* cmd)
  {
    cmd->add_option("--config", config_path, "JSON file with TrainConfig fields")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "master seed (restart k uses seed + k)");
    cmd->add_option("--restarts", restarts, "independent restarts; the lowest final loss wins");
    cmd->add_option("--epochs", epochs, "training epochs");
    cmd->add_option("--num-points", num_points, "training points on the sphere");
    cmd->add_option("--learning-rate", learning_rate, "ADAM learning rate");
  }

  npoly::TrainConfig resolve() const
  {
    npoly::TrainConfig config;
    if (!config_path.empty()) {
      config = npoly::load_train_config(config_path, config);
    }
    if (seed) config.seed = *seed;
    if (restarts) config.restarts = *restarts;
    if (epochs) config.epochs = *epochs;
    if (num_points) config.num_points = *num_points;
    if (learning_rate) config.learning_rate = *learning_rate;
    config.validate();
    return config;
  }
};

std::vector<double> broadcast_powers(const std::vector<int>& widths, std::vector<double> powers)
{
  if (powers.size() == 1 && widths.size() > 1) {
    powers.assign(widths.size(), powers.front());
  }
  return powers;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Neural polytopes: level sets f(x) = 1 of bias-free |x|^p networks fitted to the unit sphere"};
  app.require_subcommand(1);

  const fs::path out_root = npoly::default_output_dir();

  // train
  auto* train = app.add_subcommand("train", "train a network (best of several restarts)");
  int dim = 0;
  std::vector<int> widths;
  std::vector<double> powers;
  std::string out;
  TrainFlags train_flags;
  train->add_option("--dim", dim, "input dimension d")->required();
  train->add_option("--widths", widths, "hidden layer widths, e.g. 4,2")->required()->delimiter(',');
  train->add_option("--powers", powers, "activation powers, one per layer or one for all")->required()->delimiter(',');
  train->add_option("--out", out, "output path stem (default $NPOLY_OUT_DIR/<type>)");
  train_flags.attach(train);

  // extract
  auto* extract = app.add_subcommand("extract", "sample the level set f = 1 (SVG for d=2, OBJ for d=3)");
  std::string model_path;
  int samples = npoly::kDefaultPolylineSamples;
  int subdiv = npoly::kDefaultMeshSubdivisions;
  extract->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  extract->add_option("--samples", samples, "angular samples (d=2)");
  extract->add_option("--subdiv", subdiv, "icosphere subdivisions (d=3)");
  extract->add_option("--out", out, "output path stem (default next to the model)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "extract, count vertices/edges/faces and identify the polytope");
  analyze->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", out, "output path stem (default next to the model)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "train and extract one model per activation power");
  std::vector<double> p_list;
  std::string out_dir;
  TrainFlags sweep_flags;
  sweep->add_option("--dim", dim, "input dimension d")->required();
  sweep->add_option("--widths", widths, "hidden layer widths")->required()->delimiter(',');
  sweep->add_option("--p-list", p_list, "powers, e.g. 0.6,0.8,1,2,10")->required()->delimiter(',');
  sweep->add_option("--out-dir", out_dir, "output directory");
  sweep_flags.attach(sweep);

  // slice
  auto* slice = app.add_subcommand("slice", "3D sections {x3=0, x4 = x5 tan(theta)} of a d>=5 model");
  int theta_steps = 10;
  slice->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  slice->add_option("--theta-steps", theta_steps, "theta = n pi / steps, n = 0..steps-1");
  slice->add_option("--subdiv", subdiv, "icosphere subdivisions");
  slice->add_option("--out-dir", out_dir, "output directory");

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "run a figure preset and print its summary table");
  std::string figure;
  bool full = false;
  TrainFlags reproduce_flags;
  reproduce->add_option("figure", figure, "fig1 | fig2 | fig3 | fig5")
    ->required()
    ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig5"}));
  reproduce->add_flag("--full", full, "full parameter lists (fig2: n=3..12, fig3: n=4..11)");
  reproduce->add_option("--out-dir", out_dir, "output directory");
  reproduce_flags.attach(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto model_stem = [&]() {
    if (!out.empty()) {
      return fs::path(out);
    }
    std::string s = model_path;
    const std::string suffix = ".model.json";
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
    }
    return fs::path(s);
  };

  try {
    if (*train) {
      npoly::NetworkSpec spec{dim, widths, broadcast_powers(widths, powers)};
      spec.validate();
      const fs::path stem = out.empty() ? out_root / npoly::type_slug(spec) : fs::path(out);
      npoly::cmd_train(spec, train_flags.resolve(), stem, std::cout);
    } else if (*extract) {
      npoly::cmd_extract(model_path, samples, subdiv, model_stem(), std::cout);
    } else if (*analyze) {
      npoly::cmd_analyze(model_path, model_stem(), std::cout);
    } else if (*sweep) {
      npoly::cmd_sweep(dim, widths, p_list, sweep_flags.resolve(),
                       out_dir.empty() ? out_root / "sweep" : fs::path(out_dir), std::cout);
    } else if (*slice) {
      npoly::cmd_slice(model_path, theta_steps, subdiv, out_dir.empty() ? out_root / "slices" : fs::path(out_dir),
                       std::cout);
    } else if (*reproduce) {
      npoly::ReproduceOptions options{reproduce_flags.resolve(), full};
      npoly::cmd_reproduce(figure, options, out_dir.empty() ? out_root / figure : fs::path(out_dir), std::cout);
    }
  } catch (const npoly::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
