#ifndef NPOLY_NET_HPP_
#define NPOLY_NET_HPP_

// Bias-free feed-forward networks with |z|^p activations and a summation
// output layer:
//
//   h_0 = x,   h_l = |W_l h_{l-1}|^{p_l} (componentwise),   f(x) = sum(h_N).
//
// Without biases f is even and positively homogeneous of degree prod(p_l),
// which is what makes the level set f = 1 star-shaped about the origin.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "npoly/errors.hpp"

namespace npoly
{

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Architecture of type (n_1, ..., n_N; p_1, ..., p_N) on R^d.
struct NetworkSpec
{
  int input_dim = 2;
  std::vector<int> widths;
  std::vector<double> powers;

  void validate() const
  {
    if (input_dim < 2) {
      throw PreconditionError("input_dim must be >= 2");
    }
    if (widths.empty()) {
      throw PreconditionError("at least one hidden layer is required");
    }
    if (widths.size() != powers.size()) {
      throw PreconditionError("widths and powers must have equal length");
    }
    for (int n : widths) {
      if (n < 1) {
        throw PreconditionError("every layer width must be >= 1");
      }
    }
    for (double p : powers) {
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw PreconditionError("every activation power must be finite and > 0");
      }
    }
  }

  int depth() const { return static_cast<int>(widths.size()); }

  /// Fan-in of layer l (0-based).
  int fan_in(int l) const { return l == 0 ? input_dim : widths[l - 1]; }

  /// "(n_1,...,n_N;p_1,...,p_N)", collapsing equal powers to a single p.
  std::string type_name() const
  {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < widths.size(); ++i) {
      os << (i ? "," : "") << widths[i];
    }
    os << ';';
    bool uniform = true;
    for (double p : powers) {
      uniform = uniform && p == powers.front();
    }
    const std::size_t shown = uniform ? 1 : powers.size();
    for (std::size_t i = 0; i < shown; ++i) {
      os << (i ? "," : "") << powers[i];
    }
    os << ')';
    return os.str();
  }

  bool operator==(const NetworkSpec&) const = default;
};

/// Degree P of positive homogeneity: f(t x) = t^P f(x) for t > 0.
inline double homogeneity_degree(const NetworkSpec& spec)
{
  spec.validate();
  double degree = 1.0;
  for (double p : spec.powers) {
    degree *= p;
  }
  return degree;
}

/// |z|^p
template <typename Scalar>
inline Scalar activate(Scalar z, Scalar p)
{
  using std::abs;
  using std::pow;
  if (p == Scalar(1)) {
    return abs(z);
  }
  if (p == Scalar(2)) {
    return z * z;
  }
  return pow(abs(z), p);
}

/// d/dz |z|^p with the subgradient 0 at z == 0. For p < 1 the magnitude is
/// clamped below at 1e-8 so the derivative stays finite near the kink.
template <typename Scalar>
inline Scalar activate_derivative(Scalar z, Scalar p)
{
  using std::abs;
  using std::pow;
  if (z == Scalar(0)) {
    return Scalar(0);
  }
  const Scalar sign = z > Scalar(0) ? Scalar(1) : Scalar(-1);
  if (p == Scalar(1)) {
    return sign;
  }
  if (p == Scalar(2)) {
    return Scalar(2) * z;
  }
  Scalar magnitude = abs(z);
  if (p < Scalar(1)) {
    magnitude = std::max(magnitude, Scalar(1e-8));
  }
  return p * pow(magnitude, p - Scalar(1)) * sign;
}

/// A NetworkSpec together with its weight matrices. Layer l has shape
/// n_l x n_{l-1} with n_0 = d. Immutable after construction.
template <typename Scalar = double>
class Network
{
public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  Network(NetworkSpec spec, std::vector<Matrix> weights)
    : spec_(std::move(spec)), weights_(std::move(weights))
  {
    spec_.validate();
    if (static_cast<int>(weights_.size()) != spec_.depth()) {
      throw PreconditionError("weight count does not match the number of layers");
    }
    for (int l = 0; l < spec_.depth(); ++l) {
      const Matrix& w = weights_[l];
      if (w.rows() != spec_.widths[l] || w.cols() != spec_.fan_in(l)) {
        throw PreconditionError("weight matrix " + std::to_string(l) + " has the wrong shape");
      }
      if (!w.allFinite()) {
        throw PreconditionError("weight matrix " + std::to_string(l) + " has non-finite entries");
      }
    }
  }

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  const Matrix& weight(int layer) const { return weights_[layer]; }
  int input_dim() const { return spec_.input_dim; }
  int depth() const { return spec_.depth(); }
  Scalar power(int layer) const { return static_cast<Scalar>(spec_.powers[layer]); }

private:
  NetworkSpec spec_;
  std::vector<Matrix> weights_;
};

using NetworkD = Network<double>;

/// Weight-gradient matrices mirroring a Network's shapes, plus the loss.
template <typename Scalar = double>
struct GradientBundle
{
  std::vector<MatrixX<Scalar>> weights;
  Scalar loss = Scalar(0);
};

/// Gaussian weights with standard deviation 1/sqrt(fan-in), filled row by row
/// from a single mt19937_64 stream.
template <typename Scalar = double>
Network<Scalar> init_network(const NetworkSpec& spec, std::uint64_t seed)
{
  spec.validate();
  std::mt19937_64 rng(seed);
  std::vector<MatrixX<Scalar>> weights;
  weights.reserve(spec.widths.size());
  for (int l = 0; l < spec.depth(); ++l) {
    const int rows = spec.widths[l];
    const int cols = spec.fan_in(l);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cols)));
    MatrixX<Scalar> w(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        w(i, j) = static_cast<Scalar>(normal(rng));
      }
    }
    weights.push_back(std::move(w));
  }
  return Network<Scalar>(spec, std::move(weights));
}

namespace detail
{

template <typename Scalar>
void check_input(const Network<Scalar>& net, Eigen::Index size)
{
  if (size != net.input_dim()) {
    throw PreconditionError("input has length " + std::to_string(size) + ", expected " +
                            std::to_string(net.input_dim()));
  }
}

// Elementwise activate / activate_derivative with vectorized fast paths for
// p = 1 and p = 2; values agree with the scalar functions.
template <typename Scalar>
MatrixX<Scalar> activate_all(const MatrixX<Scalar>& z, Scalar p)
{
  if (p == Scalar(1)) {
    return z.cwiseAbs();
  }
  if (p == Scalar(2)) {
    return z.cwiseAbs2();
  }
  return z.unaryExpr([p](Scalar v) { return activate(v, p); });
}

template <typename Scalar>
MatrixX<Scalar> activate_derivative_all(const MatrixX<Scalar>& z, Scalar p)
{
  if (p == Scalar(1)) {
    return z.cwiseSign();
  }
  if (p == Scalar(2)) {
    return Scalar(2) * z;
  }
  return z.unaryExpr([p](Scalar v) { return activate_derivative(v, p); });
}

}  // namespace detail

/// f(x).
template <typename Scalar, typename Derived>
Scalar forward(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x)
{
  detail::check_input(net, x.size());
  VectorX<Scalar> h = x.template cast<Scalar>();
  for (int l = 0; l < net.depth(); ++l) {
    const Scalar p = net.power(l);
    VectorX<Scalar> z = net.weight(l) * h;
    h = z.unaryExpr([p](Scalar v) { return activate(v, p); });
  }
  return h.sum();
}

/// f at every column of `points` (d x m). Bit-identical to repeated forward().
template <typename Scalar, typename Derived>
VectorX<Scalar> forward_batch(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& points)
{
  if (points.cols() > 0) {
    detail::check_input(net, points.rows());
  }
  VectorX<Scalar> out(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    out[i] = forward(net, points.col(i));
  }
  return out;
}

template <typename Scalar>
std::vector<Scalar> forward_batch(const Network<Scalar>& net, const std::vector<VectorX<Scalar>>& points)
{
  std::vector<Scalar> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    out.push_back(forward(net, x));
  }
  return out;
}

/// Gradient of f with respect to the input.
template <typename Scalar, typename Derived>
VectorX<Scalar> grad_input(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x)
{
  detail::check_input(net, x.size());
  std::vector<VectorX<Scalar>> pre(net.depth());
  VectorX<Scalar> h = x.template cast<Scalar>();
  for (int l = 0; l < net.depth(); ++l) {
    const Scalar p = net.power(l);
    pre[l] = net.weight(l) * h;
    h = pre[l].unaryExpr([p](Scalar v) { return activate(v, p); });
  }
  VectorX<Scalar> g = VectorX<Scalar>::Ones(h.size());
  for (int l = net.depth() - 1; l >= 0; --l) {
    const Scalar p = net.power(l);
    const VectorX<Scalar> dz =
      g.cwiseProduct(pre[l].unaryExpr([p](Scalar v) { return activate_derivative(v, p); }));
    g = net.weight(l).transpose() * dz;
  }
  return g;
}

/// Smallest |pre-activation| relative to the row norm times the layer input
/// norm, over all units and layers. Zero means x sits on a kink of f.
template <typename Scalar, typename Derived>
Scalar kink_margin(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x)
{
  detail::check_input(net, x.size());
  Scalar margin = std::numeric_limits<Scalar>::infinity();
  VectorX<Scalar> h = x.template cast<Scalar>();
  for (int l = 0; l < net.depth(); ++l) {
    const Scalar p = net.power(l);
    const VectorX<Scalar> z = net.weight(l) * h;
    const Scalar hn = h.norm();
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const Scalar scale = net.weight(l).row(i).norm() * hn;
      margin = std::min(margin, scale > Scalar(0) ? std::abs(z[i]) / scale : Scalar(0));
    }
    h = z.unaryExpr([p](Scalar v) { return activate(v, p); });
  }
  return margin;
}

/// Mean squared error (f(x_i) - t_i)^2 over the columns of `points` and its
/// gradient with respect to every weight, written into `grads` (resized as
/// needed). Returns the loss.
template <typename Scalar>
Scalar mse_loss_and_gradient(const NetworkSpec& spec,
                             const std::vector<MatrixX<Scalar>>& weights,
                             const Eigen::Ref<const MatrixX<Scalar>>& points,
                             const Eigen::Ref<const VectorX<Scalar>>& targets,
                             std::vector<MatrixX<Scalar>>& grads)
{
  const Eigen::Index batch = points.cols();
  if (batch == 0) {
    throw PreconditionError("empty batch");
  }
  if (targets.size() != batch) {
    throw PreconditionError("target count does not match the batch size");
  }
  if (points.rows() != spec.input_dim) {
    throw PreconditionError("batch points have the wrong dimension");
  }
  const int depth = spec.depth();
  std::vector<MatrixX<Scalar>> pre(depth);
  std::vector<MatrixX<Scalar>> post(depth);
  for (int l = 0; l < depth; ++l) {
    const Scalar p = static_cast<Scalar>(spec.powers[l]);
    if (l == 0) {
      pre[l].noalias() = weights[l] * points;
    } else {
      pre[l].noalias() = weights[l] * post[l - 1];
    }
    post[l] = detail::activate_all(pre[l], p);
  }
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> residual =
    post[depth - 1].colwise().sum() - targets.transpose();
  const Scalar loss = residual.squaredNorm() / static_cast<Scalar>(batch);

  grads.resize(depth);
  MatrixX<Scalar> upstream =
    VectorX<Scalar>::Ones(post[depth - 1].rows()) * (residual * (Scalar(2) / static_cast<Scalar>(batch)));
  for (int l = depth - 1; l >= 0; --l) {
    const Scalar p = static_cast<Scalar>(spec.powers[l]);
    const MatrixX<Scalar> dz = upstream.cwiseProduct(detail::activate_derivative_all(pre[l], p));
    if (l == 0) {
      grads[l].noalias() = dz * points.transpose();
    } else {
      grads[l].noalias() = dz * post[l - 1].transpose();
      upstream.noalias() = weights[l].transpose() * dz;
    }
  }
  return loss;
}

/// Gradient of the batch MSE with respect to every weight of `net`.
/// `points` holds one sample per column.
template <typename Scalar>
GradientBundle<Scalar> grad_weights(const Network<Scalar>& net,
                                    const Eigen::Ref<const MatrixX<std::type_identity_t<Scalar>>>& points,
                                    const Eigen::Ref<const VectorX<std::type_identity_t<Scalar>>>& targets)
{
  GradientBundle<Scalar> bundle;
  bundle.loss = mse_loss_and_gradient(net.spec(), net.weights(), points, targets, bundle.weights);
  return bundle;
}

/// The network x -> f(B x) on R^k, where B is d x k. Only the first layer
/// changes, so all structure (homogeneity, evenness) carries over.
template <typename Scalar, typename Derived>
Network<Scalar> compose_input(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& basis)
{
  if (basis.rows() != net.input_dim()) {
    throw PreconditionError("basis rows must match the network input dimension");
  }
  NetworkSpec spec = net.spec();
  spec.input_dim = static_cast<int>(basis.cols());
  std::vector<MatrixX<Scalar>> weights = net.weights();
  weights[0] = net.weight(0) * basis.template cast<Scalar>();
  return Network<Scalar>(std::move(spec), std::move(weights));
}

}  // namespace npoly

#endif  // NPOLY_NET_HPP_
