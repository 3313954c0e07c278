#pragma once

#include <Eigen/Dense>

namespace ww {

// Chebyshev-Lobatto nodes on [-depth, 0], ordered from the surface
// (index 0, z = 0) to the bottom (index n, z = -depth).
struct VerticalGrid {
  int n = 0;
  double depth = 0.0;
  Eigen::VectorXd z;
  Eigen::MatrixXd dz;       // d/dz
  Eigen::VectorXd weights;  // Clenshaw-Curtis weights for the integral over [-depth, 0]
};

VerticalGrid make_vertical_grid(int n, double depth);

}  // namespace ww
