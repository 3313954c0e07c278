#include "ww/diagnostics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ww;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

AnalyzedTrajectory standing_wave(const WaveModel& model, double eps, int steps_per_period, int steps,
                                 const AnalysisNeeds& needs) {
  const PeriodicGrid& grid = model.grid();
  const double k = 1.0;
  const double w = std::sqrt(model.g() * k * (model.depth().is_infinite() ? 1.0 : std::tanh(model.depth().h())));
  const double dt = 2.0 * pi / w / steps_per_period;
  const Trajectory t = integrate(model, {eps * grid.nodes().cos(), Field::Zero(grid.size()), 0.0}, dt, 1, steps);
  return analyze(model, t, needs);
}

AnalyzedTrajectory single(const WaveModel& model, const SurfaceState& s, const AnalysisNeeds& needs) {
  Trajectory t;
  t.states.push_back(s);
  t.dt = t.dt_out = 1.0;
  return analyze(model, t, needs);
}
}  // namespace

TEST_CASE("records of simple states") {
  const PeriodicGrid grid(32);
  const WaveModel model(DtnSolver(grid, Depth::finite(1.0), {.nz = 24}), {});
  const Field x = grid.nodes();

  const DiagnosticsRecord r0 = record(model, {Field::Zero(32), Field::Zero(32), 0.0}).record;
  CHECK(r0.E_k == 0.0);
  CHECK(r0.E_p == 0.0);
  CHECK(r0.I_virial == 0.0);
  CHECK(r0.gamma_min == Approx(1.0));

  const DiagnosticsRecord r1 = record(model, {Field::Zero(32), x.cos(), 0.0}).record;
  CHECK(r1.E_k == Approx(pi / 2.0 * std::tanh(1.0)).epsilon(1e-10));
  CHECK(r1.E_p == 0.0);
  CHECK(r1.extra("E_k_volume") == Approx(r1.E_k).epsilon(1e-10));
  CHECK_THROWS(r1.extra("no_such_key"));

  const double eps = 0.1;
  const DiagnosticsRecord r2 = record(model, {eps * x.cos(), Field::Zero(32), 0.0}).record;
  CHECK(r2.E_k == 0.0);
  CHECK(r2.E_p == Approx(pi * eps * eps / 2.0).epsilon(1e-13));
}

TEST_CASE("bottom flux identity closed form") {
  const PeriodicGrid grid(32);
  const WaveModel model(DtnSolver(grid, Depth::finite(1.0), {.nz = 32}), {});
  const Field x = grid.nodes();
  const AnalyzedTrajectory a = single(model, {Field::Zero(32), x.cos(), 0.0}, {});
  const ResidualReport r = check_rellich(a, 0);
  const double expect = pi / (2.0 * std::cosh(1.0) * std::cosh(1.0));
  CHECK(r.lhs == Approx(expect).epsilon(1e-10));
  CHECK(r.rhs == Approx(expect).epsilon(1e-10));

  const AnalyzedTrajectory c = single(model, {0.1 * x.cos(), Field::Constant(32, 2.0), 0.0}, {});
  CHECK(std::abs(check_rellich(c, 0).lhs) <= 1e-18);
  CHECK(std::abs(check_rellich(c, 0).rhs) <= 1e-18);
}

TEST_CASE("bottom flux identity on a wavy surface") {
  const PeriodicGrid grid(128);
  const WaveModel model(DtnSolver(grid, Depth::finite(1.0), {.nz = 64}), {});
  const Field x = grid.nodes();
  const Field eta = 0.1 * (x + 0.4).cos() + 0.02 * (3.0 * x).sin();
  const Field psi = x.sin() + 0.4 * (2.0 * x + 1.0).cos();
  const ResidualReport r = check_rellich(single(model, {eta, psi, 0.0}, {}), 0);
  CHECK(r.rel_residual <= 1e-6);
}

TEST_CASE("rest trajectory satisfies every identity trivially") {
  const PeriodicGrid grid(16);
  const WaveModel model(DtnSolver(grid, Depth::finite(1.0), {.nz = 12}), {});
  const Trajectory t = integrate(model, {Field::Zero(16), Field::Zero(16), 0.0}, 0.05, 1, 6);
  const AnalyzedTrajectory a = analyze(model, t, {.gamma = true, .time_derivative = true, .velocity_dtn = true});
  for (const ResidualReport& r : {check_virial(a, 3), check_second_moment(a, 3), check_mean_psi_drift(a, 3),
                                  check_bottom_pressure(a, 3), check_bottom_potential(a, 3),
                                  check_slope_velocity_moment(a, 3), check_pressure_closure(a, 3)}) {
    CHECK(r.abs_residual == 0.0);
  }
  CHECK(max_abs(taylor_coefficient(a, 3) - 1.0) == 0.0);
  CHECK_THROWS(check_virial(a, 1));
  CHECK_THROWS(check_virial(a, 5));
  CHECK_THROWS(check_rt_bounds(a));
}

TEST_CASE("finite stencils") {
  std::vector<double> cubic, quad;
  const double dt = 0.1;
  for (int i = 0; i < 7; ++i) {
    const double t = i * dt;
    cubic.push_back(t * t * t - 2.0 * t * t * t * t);
    quad.push_back(3.0 * t * t + t);
  }
  const double t3 = 3 * dt;
  CHECK(first_derivative(cubic, 3, dt, Stencil::Central4) == Approx(3 * t3 * t3 - 8 * t3 * t3 * t3).epsilon(1e-12));
  CHECK(first_derivative(quad, 3, dt, Stencil::Central2) == Approx(6.0 * t3 + 1.0).epsilon(1e-12));
  CHECK(second_derivative(quad, 3, dt, Stencil::Central2) == Approx(6.0).epsilon(1e-10));
  CHECK(second_derivative(cubic, 3, dt) == Approx(6 * t3 - 24 * t3 * t3).epsilon(1e-10));
  CHECK(stencil_name(Stencil::Central2) == "central-3pt");
  CHECK(stencil_reach(Stencil::Central4) == 2);
  CHECK_THROWS(first_derivative(quad, 1, dt, Stencil::Central4));
}

TEST_CASE("finite depth identities on the linear standing wave") {
  const PeriodicGrid grid(32);
  const WaveModel model(DtnSolver(grid, Depth::finite(1.0), {.nz = 24}), {});
  const AnalyzedTrajectory a = standing_wave(model, 0.01, 400, 400, {.time_derivative = true});
  const IdentitySeries v = check_series(a, 2, [](const auto& t, std::size_t i) { return check_virial(t, i); });
  CHECK(v.scaled <= 1e-4);
  CHECK(v.reports.size() == 397);
  CHECK(v.reports.front().stencil == "central-5pt");
  const IdentitySeries m = check_series(a, 2, [](const auto& t, std::size_t i) { return check_mean_psi_drift(t, i); });
  CHECK(m.scaled <= 1e-4);
  for (const auto& r : m.reports) CHECK(r.rhs <= 0.0);
  const IdentitySeries s = check_series(a, 2, [](const auto& t, std::size_t i) { return check_second_moment(t, i); });
  CHECK(s.scaled <= 1e-4);
  const IdentitySeries p = check_series(a, 2, [](const auto& t, std::size_t i) { return check_bottom_pressure(t, i); });
  const IdentitySeries b = check_series(a, 2, [](const auto& t, std::size_t i) { return check_bottom_potential(t, i); });
  const IdentitySeries c = check_series(a, 2, [](const auto& t, std::size_t i) { return check_pressure_closure(t, i); });
  CHECK(c.max_abs <= 10.0 * std::max(p.max_abs, s.max_abs));
  CHECK(b.scaled <= 1e-4);
  for (const auto& st : a.states) CHECK(st.record.gamma_min >= -1e-8);

  const EquipartitionReport e = check_equipartition_bound(a);
  CHECK(e.holds);
  CHECK(std::abs(e.integrated_gap) <= 1e-8);
}

TEST_CASE("infinite depth identities on the linear standing wave") {
  const PeriodicGrid grid(32);
  const WaveModel model(DtnSolver(grid, Depth::infinite(), {.nz = 48}), {});
  const AnalyzedTrajectory a = standing_wave(model, 0.01, 400, 100, {.velocity_dtn = true});
  const IdentitySeries v = check_series(a, 2, [](const auto& t, std::size_t i) { return check_virial(t, i); });
  CHECK(v.scaled <= 1e-4);
  const IdentitySeries plus =
      check_series(a, 2, [](const auto& t, std::size_t i) { return check_vertical_velocity_mean(t, i, +1); });
  const IdentitySeries minus =
      check_series(a, 2, [](const auto& t, std::size_t i) { return check_vertical_velocity_mean(t, i, -1); });
  CHECK(plus.scaled <= 1e-6);
  CHECK(minus.scaled > 0.5);
  const IdentitySeries flux = check_series(a, 0, [](const auto& t, std::size_t i) { return check_energy_flux(t, i); });
  for (const auto& r : flux.reports) CHECK(r.lhs <= r.rhs);
  CHECK_THROWS(check_rellich(a, 3));
  CHECK(check_coercive_average(a).holds);
}

TEST_CASE("energy flux vanishes without potential") {
  const PeriodicGrid grid(32);
  const WaveModel model(DtnSolver(grid, Depth::infinite(), {.nz = 24}), {});
  const AnalyzedTrajectory a = single(model, {0.1 * grid.nodes().cos(), Field::Zero(32), 0.0}, {});
  CHECK(check_energy_flux(a, 0).lhs == 0.0);
}
