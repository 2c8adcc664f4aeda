#ifndef NPOLY_TESTS_TEST_SUPPORT_HPP_
#define NPOLY_TESTS_TEST_SUPPORT_HPP_

// Test-only generators and oracles. Nothing here calls into the code paths
// the tests check, apart from forward() where an oracle needs f itself.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "npoly/net.hpp"

namespace npoly::testing
{

inline Eigen::VectorXd random_vector(int dim, std::mt19937_64& rng, double scale = 1.0)
{
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    v[i] = normal(rng);
  }
  return v;
}

inline Eigen::VectorXd random_unit(int dim, std::mt19937_64& rng)
{
  return random_vector(dim, rng).normalized();
}

/// Haar-ish random orthogonal matrix with det +1 (QR of a Gaussian matrix).
inline Eigen::MatrixXd random_rotation(int dim, std::mt19937_64& rng)
{
  Eigen::MatrixXd a(dim, dim);
  for (int c = 0; c < dim; ++c) {
    a.col(c) = random_vector(dim, rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0.0) {
    q.col(0) = -q.col(0);
  }
  return q;
}

/// Random spec with 1-3 layers, widths 1-5 and powers drawn from `powers`.
inline NetworkSpec random_spec(int dim, std::mt19937_64& rng, const std::vector<double>& powers)
{
  std::uniform_int_distribution<int> depth(1, 3);
  std::uniform_int_distribution<int> width(1, 5);
  std::uniform_int_distribution<std::size_t> pick(0, powers.size() - 1);
  NetworkSpec spec;
  spec.input_dim = dim;
  const int n = depth(rng);
  for (int l = 0; l < n; ++l) {
    spec.widths.push_back(width(rng));
    spec.powers.push_back(powers[pick(rng)]);
  }
  return spec;
}

/// Network with the given single-layer weight rows.
inline NetworkD single_layer(const Eigen::MatrixXd& rows, double p)
{
  NetworkSpec spec{static_cast<int>(rows.cols()), {static_cast<int>(rows.rows())}, {p}};
  return NetworkD(spec, {rows});
}

inline NetworkD identity_net(int dim, double p)
{
  return single_layer(Eigen::MatrixXd::Identity(dim, dim), p);
}

/// Smallest |pre-activation| over all layers (absolute, not relative).
inline double min_abs_preactivation(const NetworkD& net, const Eigen::VectorXd& x)
{
  double smallest = std::numeric_limits<double>::infinity();
  Eigen::VectorXd h = x;
  for (int l = 0; l < net.depth(); ++l) {
    const Eigen::VectorXd z = net.weight(l) * h;
    smallest = std::min(smallest, z.cwiseAbs().minCoeff());
    h = z.unaryExpr([p = net.power(l)](double v) { return std::pow(std::abs(v), p); });
  }
  return smallest;
}

/// Central finite-difference gradient of an arbitrary scalar function.
template <typename F>
Eigen::VectorXd central_difference(F&& f, const Eigen::VectorXd& x, double h = 1e-5)
{
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (f(plus) - f(minus)) / (2.0 * h);
  }
  return g;
}

/// Root of t -> f(t u) - 1 by bracketing then 200 bisection steps.
inline double bisection_radius(const NetworkD& net, const Eigen::VectorXd& u)
{
  double lo = 0.0;
  double hi = 1.0;
  while (forward(net, Eigen::VectorXd(hi * u)) < 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (forward(net, Eigen::VectorXd(mid * u)) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("npoly_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace npoly::testing

#endif  // NPOLY_TESTS_TEST_SUPPORT_HPP_
