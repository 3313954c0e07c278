#pragma once

#include "ww/chebyshev.hpp"
#include "ww/spectral_core.hpp"

#include <stdexcept>
#include <vector>

namespace ww {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class GeometryError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Depth {
public:
  static Depth finite(double h);
  static Depth infinite(double truncation = 10.0);

  bool is_infinite() const { return infinite_; }
  // Depth of the computational strip. For infinite depth this is the
  // truncation depth.
  double h() const { return h_; }

private:
  Depth(bool inf, double h) : infinite_(inf), h_(h) {}
  bool infinite_;
  double h_;
};

struct SolverOptions {
  int nz = 32;
  double tol = 1e-12;     // GMRES target, preconditioned max norm relative to max|psi|
  double accept = 1e-10;  // hard failure threshold
  int restart = 60;
  int max_iter = 2000;
};

// Potential on the flattened strip, rows are vertical levels (row 0 is the
// free surface, row nz the bottom), columns are the periodic nodes.
struct FlattenedField {
  Field eta;
  RowMatrix phi;
  RowMatrix d_vertical;    // physical d/dy of the potential
  RowMatrix d_horizontal;  // physical d/dx of the potential
  Field dtn;               // normal derivative at the surface times sqrt(1+eta_x^2)
  int iterations = 0;
  double residual = 0.0;

  Field bottom() const;
  Field surface() const;
};

struct TraceData {
  Field g_psi;
  Field B;  // vertical velocity at the surface
  Field V;  // horizontal velocity at the surface
  Field psi_x;
  Field eta_x;
};

class DtnSolver {
public:
  DtnSolver(const PeriodicGrid& grid, Depth depth, SolverOptions options = {});

  const PeriodicGrid& grid() const { return grid_; }
  const Depth& depth() const { return depth_; }
  const VerticalGrid& vertical() const { return vgrid_; }
  const SolverOptions& options() const { return options_; }

  FlattenedField harmonic_extension(const Field& eta, const Field& psi) const;
  Field dtn_apply(const Field& eta, const Field& psi) const;
  Field dtn_flat(const Field& psi) const;
  Field dtn_shape_derivative(const Field& eta, const Field& psi, const Field& zeta) const;
  TraceData surface_traces(const Field& eta, const Field& psi, const Field& g_psi) const;
  Field bottom_gradx(const FlattenedField& phi) const;
  // integral over the fluid of w_v (d_y phi)^2 + w_h (d_x phi)^2
  double volume_energy(const FlattenedField& phi, double w_vertical, double w_horizontal) const;

  void check_geometry(const Field& eta) const;

private:
  struct Coefficients {
    Field inv_jacobian;  // 1 / (1 + eta/h)
    Field eta_x;
    RowMatrix shear;     // (z + h) eta_x / h
  };

  Coefficients coefficients(const Field& eta) const;
  void apply_operator(const Coefficients& c, const RowMatrix& phi, RowMatrix& out) const;
  void apply_flat_inverse(const RowMatrix& r, RowMatrix& out) const;
  void derivatives(const Coefficients& c, const RowMatrix& phi, RowMatrix& d1, RowMatrix& d2) const;

  PeriodicGrid grid_;
  Depth depth_;
  SolverOptions options_;
  VerticalGrid vgrid_;
  std::vector<Eigen::MatrixXd> flat_inverse_;
};

}  // namespace ww
