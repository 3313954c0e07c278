#include "ww/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ww {

VerticalGrid make_vertical_grid(int n, double depth) {
  if (n < 2) throw std::invalid_argument("vertical resolution must be >= 2");
  if (!(depth > 0.0)) throw std::invalid_argument("depth must be positive");
  const double pi = std::numbers::pi;
  VerticalGrid g;
  g.n = n;
  g.depth = depth;

  Eigen::VectorXd s(n + 1);
  for (int k = 0; k <= n; ++k) s[k] = std::cos(pi * k / n);

  Eigen::VectorXd c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = ((k == 0 || k == n) ? 2.0 : 1.0) * ((k % 2) ? -1.0 : 1.0);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i != j) d(i, j) = (c[i] / c[j]) / (s[i] - s[j]);
    }
  }
  for (int i = 0; i <= n; ++i) d(i, i) = -d.row(i).sum();

  // z = depth (s - 1) / 2
  g.z = depth * (s.array() - 1.0) / 2.0;
  g.dz = d * (2.0 / depth);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n - 1);
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (double(n) * n - 1.0);
    for (int k = 1; k < n / 2; ++k) {
      for (int i = 1; i < n; ++i) v[i - 1] -= 2.0 * std::cos(2.0 * k * pi * i / n) / (4.0 * k * k - 1.0);
    }
    for (int i = 1; i < n; ++i) v[i - 1] -= std::cos(pi * i) / (double(n) * n - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (double(n) * n);
    for (int k = 1; k <= (n - 1) / 2; ++k) {
      for (int i = 1; i < n; ++i) v[i - 1] -= 2.0 * std::cos(2.0 * k * pi * i / n) / (4.0 * k * k - 1.0);
    }
  }
  for (int i = 1; i < n; ++i) w[i] = 2.0 * v[i - 1] / n;
  g.weights = w * (depth / 2.0);
  return g;
}

}  // namespace ww
