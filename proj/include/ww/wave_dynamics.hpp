#pragma once

#include "ww/dtn_solver.hpp"

#include <optional>
#include <vector>

namespace ww {

struct SurfaceState {
  Field eta;
  Field psi;
  double t = 0.0;
};

struct FilterOptions {
  bool enabled = false;
  double strength = 36.0;
  int order = 8;
};

struct ModelOptions {
  double g = 1.0;
  bool dealias = true;
  FilterOptions filter;
  double cfl = 0.5;
};

struct Tendency {
  Field eta_t;
  Field psi_t;
  TraceData traces;
  Field nonlinear;
};

class WaveModel {
public:
  WaveModel(const DtnSolver& solver, ModelOptions options);

  const DtnSolver& solver() const { return solver_; }
  const PeriodicGrid& grid() const { return solver_.grid(); }
  const Depth& depth() const { return solver_.depth(); }
  const ModelOptions& options() const { return options_; }
  double g() const { return options_.g; }

  // 1/2 V^2 - 1/2 B^2 + B V eta_x, checked against the equivalent
  // form written with psi_x and G(eta)psi.
  Field nonlinearity(const Field& eta, const Field& psi, const Field& g_psi) const;
  Tendency rhs(const SurfaceState& s) const;
  SurfaceState step_rk4(const SurfaceState& s, double dt) const;
  double max_stable_dt() const;

  // Potential whose surface value is d_t psi - B d_t eta, i.e. the time
  // derivative of the velocity potential.
  FlattenedField time_derivative_extension(const SurfaceState& s, const Tendency& tend) const;
  // Bernoulli pressure at the bottom, including the hydrostatic part g h.
  Field pressure_bottom(const FlattenedField& phi, const FlattenedField& phi_t) const;

private:
  DtnSolver solver_;
  ModelOptions options_;
};

struct Trajectory {
  std::vector<SurfaceState> states;
  double dt = 0.0;
  double dt_out = 0.0;
  int stride = 1;
};

// Integrates n_out output intervals of `stride` steps each.
Trajectory integrate(const WaveModel& model, const SurfaceState& initial, double dt, int stride, int n_out);

}  // namespace ww
