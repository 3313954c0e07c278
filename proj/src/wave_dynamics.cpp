#include "ww/wave_dynamics.hpp"

#include <cmath>
#include <string>

namespace ww {

WaveModel::WaveModel(const DtnSolver& solver, ModelOptions options) : solver_(solver), options_(options) {
  if (!std::isfinite(options_.g)) throw std::invalid_argument("gravity must be finite");
  if (options_.g < 0.0 && !options_.filter.enabled)
    throw std::invalid_argument("negative gravity requires the spectral filter");
}

Field WaveModel::nonlinearity(const Field& eta, const Field& psi, const Field& g_psi) const {
  const PeriodicGrid& grid = solver_.grid();
  const TraceData t = solver_.surface_traces(eta, psi, g_psi);
  const Field slope2 = 1.0 + t.eta_x.square();
  const Field direct = 0.5 * t.V.square() - 0.5 * t.B.square() + t.B * t.V * t.eta_x;
  const Field alt = 0.5 * t.psi_x.square() - 0.5 * (t.psi_x * t.eta_x + g_psi).square() / slope2;
  const double scale = std::max(1.0, max_abs(t.psi_x.square()) + max_abs(g_psi.square()));
  const double gap = max_abs(direct - alt);
  if (gap > 1e-10 * scale)
    throw std::logic_error("nonlinear term forms disagree by " + std::to_string(gap));
  if (!options_.dealias) return direct;
  const Field bv = grid.dealiased_product(t.B, t.V);
  return 0.5 * grid.dealiased_product(t.V, t.V) - 0.5 * grid.dealiased_product(t.B, t.B) +
         grid.dealiased_product(bv, t.eta_x);
}

Tendency WaveModel::rhs(const SurfaceState& s) const {
  Tendency out;
  const Field g_psi = solver_.dtn_apply(s.eta, s.psi);
  out.traces = solver_.surface_traces(s.eta, s.psi, g_psi);
  out.nonlinear = nonlinearity(s.eta, s.psi, g_psi);
  out.eta_t = g_psi;
  out.psi_t = -options_.g * s.eta - out.nonlinear;
  return out;
}

double WaveModel::max_stable_dt() const {
  return options_.cfl / std::sqrt(std::max(std::abs(options_.g), 1.0) * grid().k_max());
}

SurfaceState WaveModel::step_rk4(const SurfaceState& s, double dt) const {
  if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("time step must be finite and nonzero");
  if (std::abs(dt) > max_stable_dt() * (1.0 + 1e-12))
    throw std::invalid_argument("time step " + std::to_string(dt) + " exceeds the stability limit " +
                                std::to_string(max_stable_dt()));
  auto shifted = [&](const Tendency& k, double c) {
    return SurfaceState{s.eta + c * dt * k.eta_t, s.psi + c * dt * k.psi_t, s.t + c * dt};
  };
  const Tendency k1 = rhs(s);
  const Tendency k2 = rhs(shifted(k1, 0.5));
  const Tendency k3 = rhs(shifted(k2, 0.5));
  const Tendency k4 = rhs(shifted(k3, 1.0));
  SurfaceState out;
  out.t = s.t + dt;
  out.eta = s.eta + dt / 6.0 * (k1.eta_t + 2.0 * k2.eta_t + 2.0 * k3.eta_t + k4.eta_t);
  out.psi = s.psi + dt / 6.0 * (k1.psi_t + 2.0 * k2.psi_t + 2.0 * k3.psi_t + k4.psi_t);
  out.eta -= out.eta.mean();
  if (options_.filter.enabled) {
    out.eta = grid().filter(out.eta, options_.filter.strength, options_.filter.order);
    out.psi = grid().filter(out.psi, options_.filter.strength, options_.filter.order);
  }
  solver_.check_geometry(out.eta);
  return out;
}

FlattenedField WaveModel::time_derivative_extension(const SurfaceState& s, const Tendency& tend) const {
  const Field data = tend.psi_t - tend.traces.B * tend.eta_t;
  return solver_.harmonic_extension(s.eta, data);
}

Field WaveModel::pressure_bottom(const FlattenedField& phi, const FlattenedField& phi_t) const {
  if (depth().is_infinite()) throw std::logic_error("bottom pressure needs a finite depth");
  const Field ux = solver_.bottom_gradx(phi);
  return -phi_t.bottom() - 0.5 * ux.square() + options_.g * depth().h();
}

Trajectory integrate(const WaveModel& model, const SurfaceState& initial, double dt, int stride, int n_out) {
  if (stride < 1 || n_out < 0) throw std::invalid_argument("invalid output schedule");
  Trajectory traj;
  traj.dt = dt;
  traj.stride = stride;
  traj.dt_out = dt * stride;
  traj.states.reserve(n_out + 1);
  SurfaceState s = initial;
  s.eta -= s.eta.mean();
  traj.states.push_back(s);
  for (int i = 0; i < n_out; ++i) {
    for (int k = 0; k < stride; ++k) s = model.step_rk4(s, dt);
    // Re-anchor the clock to avoid accumulated rounding in t.
    s.t = initial.t + (i + 1) * traj.dt_out;
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace ww
