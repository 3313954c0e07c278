#include "ww/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ww {

double DiagnosticsRecord::extra(const std::string& key) const {
  auto it = extras.find(key);
  if (it == extras.end()) throw std::out_of_range("diagnostic not recorded: " + key);
  return it->second;
}

StateAnalysis record(const WaveModel& model, const SurfaceState& s, const AnalysisNeeds& needs) {
  const DtnSolver& solver = model.solver();
  const PeriodicGrid& grid = model.grid();
  const double g = model.g();
  const double h = model.depth().h();
  const bool finite = !model.depth().is_infinite();

  const FlattenedField phi = solver.harmonic_extension(s.eta, s.psi);
  const TraceData tr = solver.surface_traces(s.eta, s.psi, phi.dtn);
  const Field nonlinear = 0.5 * tr.V.square() - 0.5 * tr.B.square() + tr.B * tr.V * tr.eta_x;
  const Field ux_bottom = solver.bottom_gradx(phi);
  const double bottom_half = 0.5 * grid.integrate(ux_bottom.square());

  StateAnalysis out;
  out.B = tr.B;
  out.V = tr.V;
  DiagnosticsRecord& r = out.record;
  r.t = s.t;
  r.E_k = 0.5 * grid.integrate(s.psi, phi.dtn);
  r.E_p = 0.5 * g * grid.integrate(s.eta.square());
  r.E_total = r.E_k + r.E_p;
  r.E_k_mod = solver.volume_energy(phi, 0.75, 0.25);
  r.B_bot = finite ? 0.5 * h * bottom_half : 0.0;
  r.I_virial = grid.integrate(s.eta, s.psi);
  r.mean_psi = s.psi.mean();

  auto& x = r.extras;
  x["int_eta"] = grid.integrate(s.eta);
  x["int_psi"] = grid.integrate(s.psi);
  x["int_eta2"] = grid.integrate(s.eta.square());
  x["int_N"] = grid.integrate(nonlinear);
  x["bottom_grad_half"] = bottom_half;
  x["int_phi_bottom"] = grid.integrate(phi.bottom());
  x["int_B"] = grid.integrate(tr.B);
  x["int_etax_V"] = grid.integrate(tr.eta_x, tr.V);
  x["int_eta_Gpsi"] = grid.integrate(s.eta, phi.dtn);
  x["E_k_volume"] = solver.volume_energy(phi, 0.5, 0.5);
  x["eta_sup"] = max_abs(s.eta);
  x["eta_inf"] = s.eta.minCoeff();
  x["slope_sup"] = max_abs(tr.eta_x);
  x["solver_iterations"] = phi.iterations;

  r.gamma_min = 1.0;
  if (needs.gamma) {
    const Field g_eta = solver.dtn_apply(s.eta, s.eta);
    const Field gamma = 1.0 - g_eta;
    r.gamma_min = gamma.minCoeff();
    x["int_eta_Geta"] = grid.integrate(s.eta, g_eta);
    x["vac_source"] = grid.integrate(0.5 * gamma * (tr.B.square() + tr.V.square()));
  }
  if (needs.time_derivative) {
    Tendency tend;
    tend.traces = tr;
    tend.eta_t = phi.dtn;
    tend.nonlinear = model.nonlinearity(s.eta, s.psi, phi.dtn);
    tend.psi_t = -g * s.eta - tend.nonlinear;
    const FlattenedField phi_t = model.time_derivative_extension(s, tend);
    const Field pressure = model.pressure_bottom(phi, phi_t);
    x["int_dtphi_bottom"] = grid.integrate(phi_t.bottom());
    x["int_pressure_excess"] = grid.integrate(pressure - g * h);
  }
  if (needs.velocity_dtn) {
    x["int_V_GV"] = grid.integrate(tr.V, solver.dtn_apply(s.eta, tr.V));
    x["int_B_GB"] = grid.integrate(tr.B, solver.dtn_apply(s.eta, tr.B));
  }
  return out;
}

std::vector<double> AnalyzedTrajectory::series(const std::string& key) const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) {
    const DiagnosticsRecord& r = s.record;
    if (key == "t") out.push_back(r.t);
    else if (key == "E_k") out.push_back(r.E_k);
    else if (key == "E_p") out.push_back(r.E_p);
    else if (key == "E_total") out.push_back(r.E_total);
    else if (key == "E_k_mod") out.push_back(r.E_k_mod);
    else if (key == "B_bot") out.push_back(r.B_bot);
    else if (key == "I_virial") out.push_back(r.I_virial);
    else if (key == "mean_psi") out.push_back(r.mean_psi);
    else if (key == "gamma_min") out.push_back(r.gamma_min);
    else out.push_back(r.extra(key));
  }
  return out;
}

AnalyzedTrajectory analyze(const WaveModel& model, const Trajectory& traj, const AnalysisNeeds& needs) {
  AnalyzedTrajectory a;
  a.model = &model;
  a.traj = traj;
  a.states.reserve(traj.states.size());
  for (const auto& s : traj.states) a.states.push_back(record(model, s, needs));
  return a;
}

std::string stencil_name(Stencil s) {
  return s == Stencil::Central2 ? "central-3pt" : "central-5pt";
}

int stencil_reach(Stencil s) { return s == Stencil::Central2 ? 1 : 2; }

double first_derivative(const std::vector<double>& y, std::size_t i, double dt, Stencil s) {
  const std::size_t reach = stencil_reach(s);
  if (i < reach || i + reach >= y.size()) throw std::out_of_range("stencil leaves the trajectory");
  if (s == Stencil::Central2) return (y[i + 1] - y[i - 1]) / (2.0 * dt);
  return (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * dt);
}

double second_derivative(const std::vector<double>& y, std::size_t i, double dt, Stencil s) {
  const std::size_t reach = stencil_reach(s);
  if (i < reach || i + reach >= y.size()) throw std::out_of_range("stencil leaves the trajectory");
  if (s == Stencil::Central2) return (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (dt * dt);
  return (-y[i + 2] + 16.0 * y[i + 1] - 30.0 * y[i] + 16.0 * y[i - 1] - y[i - 2]) / (12.0 * dt * dt);
}

ResidualReport make_report(const std::string& identity, double t, double lhs, double rhs) {
  ResidualReport r;
  r.identity = identity;
  r.t = t;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual = r.abs_residual / std::max({std::abs(lhs), std::abs(rhs), 1e-14});
  return r;
}

namespace {

ResidualReport finish(ResidualReport r, const AnalyzedTrajectory& a, const std::string& stencil) {
  r.stencil = stencil;
  r.nx = a.model->grid().size();
  r.nz = a.model->solver().vertical().n;
  r.dt_out = a.dt_out();
  return r;
}


void require_finite(const AnalyzedTrajectory& a, const char* what) {
  if (a.model->depth().is_infinite()) throw std::invalid_argument(std::string(what) + " needs finite depth");
}

void require_infinite(const AnalyzedTrajectory& a, const char* what) {
  if (!a.model->depth().is_infinite()) throw std::invalid_argument(std::string(what) + " needs infinite depth");
}

}  // namespace

ResidualReport check_virial(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  const auto I = a.series("I_virial");
  const auto& r = a.states.at(i).record;
  const double lhs = 0.5 * first_derivative(I, i, a.dt_out(), s);
  const double rhs = r.E_k_mod - r.E_p + r.B_bot;
  return finish(make_report("virial", r.t, lhs, rhs), a, stencil_name(s));
}

ResidualReport check_second_moment(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  const auto m2 = a.series("int_eta2");
  const auto& r = a.states.at(i).record;
  const double g = a.model->g();
  const double lhs = 0.5 * second_derivative(m2, i, a.dt_out(), s);
  double rhs = r.extra("vac_source") - g * r.extra("int_eta_Geta");
  if (!a.model->depth().is_infinite()) rhs -= r.extra("bottom_grad_half");
  return finish(make_report("second_moment", r.t, lhs, rhs), a, stencil_name(s) + "-second");
}

ResidualReport check_rellich(const AnalyzedTrajectory& a, std::size_t i) {
  require_finite(a, "bottom flux identity");
  const auto& r = a.states.at(i).record;
  return finish(make_report("rellich", r.t, r.extra("int_N"), r.extra("bottom_grad_half")), a, "same-time");
}

ResidualReport check_mean_psi_drift(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  require_finite(a, "mean potential drift");
  const auto ip = a.series("int_psi");
  const auto& r = a.states.at(i).record;
  const double lhs = first_derivative(ip, i, a.dt_out(), s);
  return finish(make_report("mean_psi_drift", r.t, lhs, -r.extra("bottom_grad_half")), a, stencil_name(s));
}

ResidualReport check_bottom_pressure(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  require_finite(a, "bottom pressure identity");
  const auto m2 = a.series("int_eta2");
  const auto& r = a.states.at(i).record;
  const double lhs = 0.5 * second_derivative(m2, i, a.dt_out(), s);
  return finish(make_report("bottom_pressure", r.t, lhs, r.extra("int_pressure_excess")), a,
                stencil_name(s) + "-second");
}

ResidualReport check_bottom_potential(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  require_finite(a, "bottom potential identity");
  const auto pb = a.series("int_phi_bottom");
  const auto& r = a.states.at(i).record;
  const double lhs = first_derivative(pb, i, a.dt_out(), s);
  const double rhs = a.model->g() * r.extra("int_eta_Geta") - r.extra("vac_source");
  return finish(make_report("bottom_potential", r.t, lhs, rhs), a, stencil_name(s));
}

ResidualReport check_pressure_closure(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  const ResidualReport p = check_bottom_pressure(a, i, s);
  const ResidualReport m = check_second_moment(a, i, s);
  const ResidualReport b = check_bottom_potential(a, i, s);
  ResidualReport r = make_report("pressure_closure", p.t, p.lhs - p.rhs, (m.lhs - m.rhs) + (b.lhs - b.rhs));
  r.rel_residual = r.abs_residual / std::max({p.abs_residual, m.abs_residual, 1e-300});
  return finish(r, a, stencil_name(s));
}

Field taylor_coefficient(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  const std::size_t reach = stencil_reach(s);
  if (i < reach || i + reach >= a.size()) throw std::out_of_range("stencil leaves the trajectory");
  const double dt = a.dt_out();
  Field bt;
  if (s == Stencil::Central2) {
    bt = (a.states[i + 1].B - a.states[i - 1].B) / (2.0 * dt);
  } else {
    bt = (-a.states[i + 2].B + 8.0 * a.states[i + 1].B - 8.0 * a.states[i - 1].B + a.states[i - 2].B) /
         (12.0 * dt);
  }
  const Field bx = a.model->grid().derivative(a.states[i].B);
  return a.model->g() + bt + a.states[i].V * bx;
}

ResidualReport check_slope_velocity_moment(const AnalyzedTrajectory& a, std::size_t i, Stencil s) {
  const auto m = a.series("int_etax_V");
  const auto& r = a.states.at(i).record;
  const PeriodicGrid& grid = a.model->grid();
  const Field eta_x = grid.derivative(a.traj.states.at(i).eta);
  const Field coef = taylor_coefficient(a, i, s);
  const double lhs = first_derivative(m, i, a.dt_out(), s);
  const double rhs = r.extra("int_V_GV") - grid.integrate(coef * eta_x.square());
  return finish(make_report("slope_velocity_moment", r.t, lhs, rhs), a, stencil_name(s));
}

ResidualReport check_vertical_velocity_mean(const AnalyzedTrajectory& a, std::size_t i, int sign, Stencil s) {
  require_infinite(a, "vertical velocity mean identity");
  const auto m = a.series("int_B");
  const auto& r = a.states.at(i).record;
  const Field coef = taylor_coefficient(a, i, s);
  const double lhs = first_derivative(m, i, a.dt_out(), s);
  const double rhs = sign * (a.model->grid().integrate(coef - a.model->g()) - r.extra("int_B_GB"));
  return finish(make_report(sign > 0 ? "vertical_velocity_mean" : "vertical_velocity_mean_opposite", r.t, lhs,
                            rhs),
                a, stencil_name(s));
}

ResidualReport check_energy_flux(const AnalyzedTrajectory& a, std::size_t i) {
  require_infinite(a, "energy flux bound");
  const double g = a.model->g();
  if (g < 0.0) throw std::invalid_argument("energy flux bound needs g >= 0");
  const auto& r = a.states.at(i).record;
  const double flux = g * r.extra("int_eta_Gpsi");
  const double lhs = flux * flux;
  const double rhs = g * g * r.extra("eta_sup") * 2.0 * std::numbers::pi * r.E_k;
  ResidualReport rep = make_report("energy_flux", r.t, lhs, rhs);
  // Slack of the inequality, positive when it holds.
  rep.abs_residual = rhs - lhs;
  rep.rel_residual = (rhs - lhs) / std::max({std::abs(rhs), std::abs(lhs), 1e-300});
  return finish(rep, a, "same-time");
}

IdentitySeries check_series(const AnalyzedTrajectory& a, int reach, const IndexCheck& check) {
  IdentitySeries out;
  for (std::size_t i = reach; i + reach < a.size(); ++i) {
    ResidualReport r = check(a, i);
    if (out.identity.empty()) out.identity = r.identity;
    out.max_abs = std::max(out.max_abs, r.abs_residual);
    out.scale = std::max({out.scale, std::abs(r.lhs), std::abs(r.rhs)});
    out.max_rel = std::max(out.max_rel, r.rel_residual);
    out.reports.push_back(std::move(r));
  }
  out.scaled = out.scale > 0.0 ? out.max_abs / out.scale : 0.0;
  return out;
}

namespace {

double trapezoid(const std::vector<double>& y, double dt) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

}  // namespace

EquipartitionReport check_equipartition_bound(const AnalyzedTrajectory& a) {
  if (a.size() < 2) throw std::invalid_argument("trajectory too short");
  EquipartitionReport r;
  const double dt = a.dt_out();
  r.T = dt * double(a.size() - 1);
  std::vector<double> defect(a.size());
  double sup_i = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& rec = a.states[i].record;
    defect[i] = rec.E_k_mod + rec.B_bot - rec.E_p;
    sup_i = std::max(sup_i, std::abs(rec.I_virial));
  }
  const double integral = trapezoid(defect, dt);
  r.mean_defect = integral / r.T;
  r.lhs = std::abs(r.mean_defect);
  r.rhs = 2.0 * sup_i / r.T;
  const double i0 = a.states.front().record.I_virial;
  const double i1 = a.states.back().record.I_virial;
  r.integrated_gap = integral - 0.5 * (i1 - i0);
  const double energy = std::abs(a.states.front().record.E_total);
  r.constant = (sup_i > 0.0 && energy > 0.0) ? r.lhs * r.T / (sup_i / energy) / energy : 0.0;
  r.holds = r.lhs <= r.rhs;
  return r;
}

CoerciveAverageReport check_coercive_average(const AnalyzedTrajectory& a) {
  require_infinite(a, "coercive time average");
  if (a.model->g() <= 0.0) throw std::invalid_argument("coercive time average needs g > 0");
  CoerciveAverageReport r;
  const double dt = a.dt_out();
  const double T = dt * double(a.size() - 1);
  const auto src = a.series("vac_source");
  const auto sup = a.series("eta_sup");
  const double M = *std::max_element(sup.begin(), sup.end());
  const double E = a.states.front().record.E_total;
  r.lhs = trapezoid(src, dt) / T;
  r.rhs = 4.0 * std::sqrt(M) * std::sqrt(E) / T + 4.0 * M;
  r.holds = r.lhs <= r.rhs;
  return r;
}

RtReport check_rt_bounds(const AnalyzedTrajectory& a, double tol, Stencil s) {
  const double g = a.model->g();
  if (g > 0.0) throw std::invalid_argument("growth bounds need g <= 0");
  RtReport r;
  const auto I = a.series("I_virial");
  const auto m2 = a.series("int_eta2");
  const auto slope = a.series("slope_sup");
  const double dt = a.dt_out();
  const double T = dt * double(a.size() - 1);
  r.energy = a.states.front().record.E_total;
  const double e = std::abs(r.energy);
  if (e == 0.0) throw std::invalid_argument("growth bounds need nonzero energy");
  r.min_growth_slack = std::numeric_limits<double>::infinity();
  r.min_integral_slack = std::numeric_limits<double>::infinity();
  r.min_kinetic = std::numeric_limits<double>::infinity();
  r.measured_constant = std::numeric_limits<double>::infinity();
  const int reach = stencil_reach(s);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a.states[i].record.t - a.states.front().record.t;
    if (int(i) >= reach && i + reach < a.size()) {
      r.min_growth_slack = std::min(r.min_growth_slack, (first_derivative(I, i, dt, s) - e) / e);
    }
    r.min_integral_slack = std::min(r.min_integral_slack, (I[i] - I[0] - e * t) / (e * T));
    const double kinetic = r.energy + 0.5 * std::abs(g) * m2[i];
    r.min_kinetic = std::min(r.min_kinetic, kinetic);
    const double growth = e * t + I[0];
    if (growth > 0.0 && i > 0) {
      const double amp = std::sqrt(m2[i]) * std::sqrt(1.0 + slope[i]) * std::sqrt(std::max(kinetic, 0.0));
      r.measured_constant = std::min(r.measured_constant, amp / growth);
    }
  }
  r.holds = r.min_growth_slack >= -tol && r.min_integral_slack >= -tol && r.min_kinetic >= -1e-10 &&
            r.measured_constant > 0.0;
  return r;
}

}  // namespace ww
