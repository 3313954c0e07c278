#pragma once

#include "ww/wave_dynamics.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ww {

struct DiagnosticsRecord {
  double t = 0.0;
  double E_k = 0.0;
  double E_p = 0.0;
  double E_total = 0.0;
  double E_k_mod = 0.0;  // integral of 3/4 phi_y^2 + 1/4 phi_x^2
  double B_bot = 0.0;    // h/4 times integral of phi_x(x,-h)^2, zero in infinite depth
  double I_virial = 0.0; // integral of eta psi
  double mean_psi = 0.0;
  double gamma_min = 0.0;
  std::map<std::string, double> extras;

  double extra(const std::string& key) const;
};

// Which extra solves to perform per state.
struct AnalysisNeeds {
  bool gamma = true;            // G(eta)eta
  bool time_derivative = false; // d_t phi and bottom pressure
  bool velocity_dtn = false;    // G(eta)V and G(eta)B
};

struct StateAnalysis {
  DiagnosticsRecord record;
  Field B;
  Field V;
};

StateAnalysis record(const WaveModel& model, const SurfaceState& s, const AnalysisNeeds& needs = {});

struct AnalyzedTrajectory {
  const WaveModel* model = nullptr;
  Trajectory traj;
  std::vector<StateAnalysis> states;

  std::size_t size() const { return states.size(); }
  double dt_out() const { return traj.dt_out; }
  std::vector<double> series(const std::string& key) const;
};

AnalyzedTrajectory analyze(const WaveModel& model, const Trajectory& traj, const AnalysisNeeds& needs);

enum class Stencil { Central2, Central4 };

std::string stencil_name(Stencil s);
int stencil_reach(Stencil s);
double first_derivative(const std::vector<double>& y, std::size_t i, double dt, Stencil s);
double second_derivative(const std::vector<double>& y, std::size_t i, double dt, Stencil s = Stencil::Central4);

struct ResidualReport {
  std::string identity;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::string stencil;
  int nx = 0;
  int nz = 0;
  double dt_out = 0.0;
};

ResidualReport make_report(const std::string& identity, double t, double lhs, double rhs);

// Per-index identity checks. Indices must leave room for the stencil.
ResidualReport check_virial(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);
ResidualReport check_second_moment(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);
ResidualReport check_rellich(const AnalyzedTrajectory& a, std::size_t i);
ResidualReport check_mean_psi_drift(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);
ResidualReport check_bottom_pressure(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);
ResidualReport check_bottom_potential(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);
// lhs: bottom pressure residual; rhs: second moment residual plus bottom
// potential residual. rel_residual divides by the larger individual residual.
ResidualReport check_pressure_closure(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);
ResidualReport check_slope_velocity_moment(const AnalyzedTrajectory& a, std::size_t i,
                                           Stencil s = Stencil::Central4);
// Infinite depth only. d/dt int B = sign * (int (a - g) - int B G(eta)B).
// sign = +1 follows from the transport equation for B; sign = -1 is the
// opposite convention, kept for comparison.
ResidualReport check_vertical_velocity_mean(const AnalyzedTrajectory& a, std::size_t i, int sign = +1,
                                            Stencil s = Stencil::Central4);
ResidualReport check_energy_flux(const AnalyzedTrajectory& a, std::size_t i);

// Taylor coefficient g + (d_t + V d_x) B at output index i.
Field taylor_coefficient(const AnalyzedTrajectory& a, std::size_t i, Stencil s = Stencil::Central4);

struct IdentitySeries {
  std::string identity;
  std::vector<ResidualReport> reports;
  double max_abs = 0.0;
  double scale = 0.0;        // largest |lhs| or |rhs| over the series
  double max_rel = 0.0;      // largest per-index relative residual
  double scaled = 0.0;       // max_abs / scale
};

using IndexCheck = std::function<ResidualReport(const AnalyzedTrajectory&, std::size_t)>;
IdentitySeries check_series(const AnalyzedTrajectory& a, int reach, const IndexCheck& check);

struct EquipartitionReport {
  double T = 0.0;
  double mean_defect = 0.0;     // time average of E_k_mod + B_bot - E_p
  double lhs = 0.0;             // |mean_defect|
  double rhs = 0.0;             // (2/T) sup |I|
  double integrated_gap = 0.0;  // T mean_defect - (I(T) - I(0))/2
  double constant = 0.0;        // lhs T / (sup|I| / E) normalised
  bool holds = false;
};
EquipartitionReport check_equipartition_bound(const AnalyzedTrajectory& a);

struct CoerciveAverageReport {
  double lhs = 0.0;  // time average of integral gamma/2 (B^2+V^2)
  double rhs = 0.0;  // 4 sqrt(M) sqrt(E)/T + 4 M
  bool holds = false;
};
CoerciveAverageReport check_coercive_average(const AnalyzedTrajectory& a);

struct RtReport {
  double energy = 0.0;
  double min_growth_slack = 0.0;   // min over t of (dI/dt - |E|) / |E|
  double min_integral_slack = 0.0; // min over t of (I(t) - I(0) - |E| t) / (|E| T)
  double min_kinetic = 0.0;        // min over t of E + |g|/2 |eta|^2 (g < 0)
  double measured_constant = 0.0;  // constant in the amplitude lower bound
  bool holds = false;
};
RtReport check_rt_bounds(const AnalyzedTrajectory& a, double tol = 1e-3, Stencil s = Stencil::Central4);

}  // namespace ww
