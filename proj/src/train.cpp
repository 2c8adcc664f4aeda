#include "npoly/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "parallel.hpp"

namespace npoly
{

void TrainConfig::validate() const
{
  if (batch_size < 1) {
    throw PreconditionError("batch_size must be >= 1");
  }
  if (num_points < batch_size) {
    throw PreconditionError("num_points must be >= batch_size");
  }
  if (epochs < 1) {
    throw PreconditionError("epochs must be >= 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw PreconditionError("learning_rate must be > 0");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw PreconditionError("ADAM betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) {
    throw PreconditionError("adam_eps must be > 0");
  }
  if (restarts < 1) {
    throw PreconditionError("restarts must be >= 1");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
  // splitmix64 finalizer over (master, stream)
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Dataset sample_sphere(int dim, int count, std::uint64_t seed)
{
  if (dim < 2) {
    throw PreconditionError("sphere dimension must be >= 2");
  }
  if (count < 1) {
    throw PreconditionError("point count must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data;
  data.points.resize(dim, count);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < count; ++i) {
    double norm = 0.0;
    do {
      for (int k = 0; k < dim; ++k) {
        v[k] = normal(rng);
      }
      norm = v.norm();
    } while (!(norm > 1e-12));
    data.points.col(i) = v / norm;
  }
  return data;
}

AdamState AdamState::zeros_like(const std::vector<Eigen::MatrixXd>& weights)
{
  AdamState state;
  for (const auto& w : weights) {
    state.first_moment.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    state.second_moment.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  return state;
}

void adam_step(std::vector<Eigen::MatrixXd>& weights,
               AdamState& state,
               const GradientBundle<double>& grads,
               const TrainConfig& config)
{
  const std::size_t layers = weights.size();
  if (grads.weights.size() != layers || state.first_moment.size() != layers ||
      state.second_moment.size() != layers) {
    throw PreconditionError("ADAM state, gradients and weights disagree on layer count");
  }
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = weights[l].rows();
    const auto cols = weights[l].cols();
    if (grads.weights[l].rows() != rows || grads.weights[l].cols() != cols ||
        state.first_moment[l].rows() != rows || state.first_moment[l].cols() != cols ||
        state.second_moment[l].rows() != rows || state.second_moment[l].cols() != cols) {
      throw PreconditionError("ADAM shape mismatch in layer " + std::to_string(l));
    }
  }

  ++state.step;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < layers; ++l) {
    const Eigen::MatrixXd& g = grads.weights[l];
    auto& m = state.first_moment[l];
    auto& v = state.second_moment[l];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    weights[l].array() -= config.learning_rate * (m.array() / correction1) /
                          ((v.array() / correction2).sqrt() + config.adam_eps);
  }
}

TrainResult train(const NetworkSpec& spec, const TrainConfig& config)
{
  spec.validate();
  config.validate();

  const Dataset data = sample_sphere(spec.input_dim, config.num_points, derive_seed(config.seed, 0));
  std::vector<Eigen::MatrixXd> weights = init_network<double>(spec, derive_seed(config.seed, 1)).weights();
  AdamState state = AdamState::zeros_like(weights);
  const std::uint64_t shuffle_master = derive_seed(config.seed, 2);

  std::vector<int> order(config.num_points);
  Eigen::MatrixXd batch(spec.input_dim, config.batch_size);
  Eigen::VectorXd targets = Eigen::VectorXd::Ones(config.batch_size);
  GradientBundle<double> grads;

  std::vector<std::pair<int, double>> history;
  history.reserve(config.epochs);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(derive_seed(shuffle_master, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double epoch_loss = 0.0;
    int batches = 0;
    for (int start = 0; start < config.num_points; start += config.batch_size) {
      const int size = std::min(config.batch_size, config.num_points - start);
      for (int i = 0; i < size; ++i) {
        batch.col(i) = data.points.col(order[start + i]);
      }
      grads.loss = mse_loss_and_gradient<double>(
        spec, weights, batch.leftCols(size), targets.head(size), grads.weights);
      if (!std::isfinite(grads.loss) || grads.loss > 1e12) {
        std::ostringstream msg;
        msg << "training of type " << spec.type_name() << " diverged at epoch " << epoch
            << " (loss " << grads.loss << ", seed " << config.seed << ")";
        throw DivergenceError(msg.str());
      }
      adam_step(weights, state, grads, config);
      epoch_loss += grads.loss;
      ++batches;
    }
    history.emplace_back(epoch, epoch_loss / batches);
  }

  for (const auto& w : weights) {
    if (!w.allFinite()) {
      throw DivergenceError("training of type " + spec.type_name() + " produced non-finite weights");
    }
  }
  const double final_loss = history.back().second;
  return TrainResult{NetworkD(spec, std::move(weights)), final_loss, std::move(history), 0, config.seed};
}

unsigned worker_threads()
{
  if (const char* env = std::getenv("NPOLY_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) {
      return static_cast<unsigned>(n);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RestartOutcome> train_restarts(const NetworkSpec& spec, const TrainConfig& config)
{
  spec.validate();
  config.validate();
  std::vector<RestartOutcome> outcomes(config.restarts);
  detail::parallel_for(config.restarts, worker_threads(), [&](int k) {
    TrainConfig run = config;
    run.seed = config.seed + static_cast<std::uint64_t>(k);
    run.restarts = 1;
    RestartOutcome& out = outcomes[k];
    out.restart_index = k;
    out.seed = run.seed;
    try {
      out.result = train(spec, run);
      out.result->restart_index = k;
    } catch (const DivergenceError& e) {
      out.error = e.what();
    }
  });
  return outcomes;
}

TrainResult select_best(const std::vector<RestartOutcome>& outcomes)
{
  const RestartOutcome* best = nullptr;
  for (const auto& out : outcomes) {
    if (!out.result) {
      continue;
    }
    if (best == nullptr || out.result->final_loss < best->result->final_loss ||
        (out.result->final_loss == best->result->final_loss && out.restart_index < best->restart_index)) {
      best = &out;
    }
  }
  if (best == nullptr) {
    std::string msg = "all restarts diverged";
    if (!outcomes.empty()) {
      msg += ": " + outcomes.front().error;
    }
    throw DivergenceError(msg);
  }
  return *best->result;
}

TrainResult train_best_of(const NetworkSpec& spec, const TrainConfig& config)
{
  return select_best(train_restarts(spec, config));
}

}  // namespace npoly
