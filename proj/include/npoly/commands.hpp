#ifndef NPOLY_COMMANDS_HPP_
#define NPOLY_COMMANDS_HPP_

// End-to-end experiment drivers behind the `npoly` command-line tool. Each
// command writes its artifacts plus a manifest listing every file with its
// SHA-256.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "npoly/analysis.hpp"
#include "npoly/export.hpp"
#include "npoly/train.hpp"

namespace npoly
{

/// Default output directory: $NPOLY_OUT_DIR, else "npoly_out".
std::filesystem::path default_output_dir();

/// "(4,2;1)" -> "type_4-2_p1", usable in file names.
std::string type_slug(const NetworkSpec& spec);

/// Records a command's configuration and emitted files.
class RunManifest
{
public:
  explicit RunManifest(std::string command);

  void set_config(Json config) { config_ = std::move(config); }
  void add_seed(std::uint64_t seed) { seeds_.push_back(seed); }
  /// Registers a file already written to disk; hashes its contents.
  void add_output(const std::filesystem::path& path);
  const std::vector<std::pair<std::string, std::string>>& outputs() const { return outputs_; }

  /// Manifest document; wall-clock fields are kept apart from the hashes.
  Json to_json() const;
  void write(const std::filesystem::path& path) const;

private:
  std::string command_;
  Json config_ = Json::object();
  std::vector<std::uint64_t> seeds_;
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point started_steady_;
};

struct TrainCommandResult
{
  TrainResult best;
  std::vector<RestartOutcome> restarts;
  std::filesystem::path model_path;
};

/// train_best_of, then <stem>.model.json, <stem>.losshistory.csv and
/// <stem>.manifest.json.
TrainCommandResult cmd_train(const NetworkSpec& spec, const TrainConfig& config,
                             const std::filesystem::path& stem, std::ostream& log);

/// d = 2: <stem>.svg and <stem>.radial.csv. d = 3: <stem>.obj,
/// <stem>.radial.csv and <stem>.mesh.json. Manifest: <stem>.extract.manifest.json.
void cmd_extract(const std::filesystem::path& model_path, int samples, int subdivisions,
                 const std::filesystem::path& stem, std::ostream& log);

/// Extraction plus analysis; writes <stem>.report.json and
/// <stem>.analyze.manifest.json.
PolytopeReport cmd_analyze(const std::filesystem::path& model_path, const std::filesystem::path& stem,
                           std::ostream& log);

/// One trained model, extraction and report per power; summary.csv in out_dir.
void cmd_sweep(int dim, const std::vector<int>& widths, const std::vector<double>& powers,
               const TrainConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// theta = n pi / steps for n = 0 .. steps-1; one OBJ per slice.
void cmd_slice(const std::filesystem::path& model_path, int theta_steps, int subdivisions,
               const std::filesystem::path& out_dir, std::ostream& log);

struct ReproduceOptions
{
  TrainConfig config;
  /// Full parameter lists instead of the named subset (fig2, fig3).
  bool full = false;
};

/// Runs the preset for "fig1", "fig2", "fig3" or "fig5" and writes
/// summary.tsv in out_dir. Returns the table rows (header first).
std::vector<std::vector<std::string>> cmd_reproduce(const std::string& figure, const ReproduceOptions& options,
                                                    const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace npoly

#endif  // NPOLY_COMMANDS_HPP_
