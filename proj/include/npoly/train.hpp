#ifndef NPOLY_TRAIN_HPP_
#define NPOLY_TRAIN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "npoly/net.hpp"

namespace npoly
{

struct TrainConfig
{
  int num_points = 10000;
  int batch_size = 1000;
  int epochs = 10000;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 5;

  void validate() const;
};

/// Points on the unit sphere S^{d-1}, one per column. Every training target is 1.
struct Dataset
{
  Eigen::MatrixXd points;

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
};

/// m points uniform on S^{d-1} (normalized Gaussian vectors).
Dataset sample_sphere(int dim, int count, std::uint64_t seed);

/// First and second moment estimates of ADAM plus the step counter.
struct AdamState
{
  std::vector<Eigen::MatrixXd> first_moment;
  std::vector<Eigen::MatrixXd> second_moment;
  long step = 0;

  static AdamState zeros_like(const std::vector<Eigen::MatrixXd>& weights);
};

/// One bias-corrected ADAM update of `weights` in place.
void adam_step(std::vector<Eigen::MatrixXd>& weights,
               AdamState& state,
               const GradientBundle<double>& grads,
               const TrainConfig& config);

struct TrainResult
{
  NetworkD network;
  double final_loss = 0.0;
  /// (epoch, mean minibatch loss over that epoch), epochs counted from 1.
  std::vector<std::pair<int, double>> loss_history;
  int restart_index = 0;
  std::uint64_t seed_used = 0;
};

/// Independent 64-bit stream derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// One training run with `config.seed`. Throws DivergenceError if the loss
/// becomes non-finite or exceeds 1e12.
TrainResult train(const NetworkSpec& spec, const TrainConfig& config);

/// Outcome of one restart: a result, or the divergence message.
struct RestartOutcome
{
  int restart_index = 0;
  std::uint64_t seed = 0;
  std::optional<TrainResult> result;
  std::string error;
};

/// Runs `config.restarts` trainings with seeds seed+0 .. seed+restarts-1.
/// Restarts run on worker threads; the outcome is independent of scheduling.
std::vector<RestartOutcome> train_restarts(const NetworkSpec& spec, const TrainConfig& config);

/// Lowest final loss among `outcomes`; ties go to the lowest restart index.
/// Throws DivergenceError if every restart diverged.
TrainResult select_best(const std::vector<RestartOutcome>& outcomes);

TrainResult train_best_of(const NetworkSpec& spec, const TrainConfig& config);

/// Upper bound on worker threads used by the library (defaults to the
/// hardware concurrency; NPOLY_THREADS overrides).
unsigned worker_threads();

}  // namespace npoly

#endif  // NPOLY_TRAIN_HPP_
