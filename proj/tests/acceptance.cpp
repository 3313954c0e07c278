// Acceptance run: one PASS/FAIL line per criterion.
#include "ww/inequality_lab.hpp"
#include "ww/scenario.hpp"
#include "ww/standing_waves.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace ww;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

const IdentitySeries& series(const RunResult& r, const std::string& name) {
  for (const auto& s : r.identities)
    if (s.identity == name) return s;
  throw std::runtime_error("identity missing: " + name);
}

SimConfig benchmark(bool infinite, int nx, int nz, int steps_per_period, std::vector<std::string> ids) {
  SimConfig c;
  c.name = infinite ? "benchmark_infinite" : "benchmark_finite";
  c.nx = nx;
  c.nz = nz;
  c.infinite_depth = infinite;
  c.depth = infinite ? 10.0 : 1.0;
  c.g = 1.0;
  c.steps_per_period = steps_per_period;
  c.periods = 1.0;
  c.initial.kind = "linear_standing";
  c.initial.eps = 0.01;
  c.initial.k = 1;
  c.identities = std::move(ids);
  return parse_config(to_json(c));
}

// Shared benchmark runs for the virial family.
struct Benchmarks {
  RunResult finite, infinite;
  ConvergenceResult finite_conv, infinite_conv;
};

const Benchmarks& benchmarks() {
  static const Benchmarks b = [] {
    Benchmarks out;
    out.finite = run_simulation(benchmark(false, 32, 24, 400,
                                          {"virial", "second_moment", "mean_psi_drift", "bottom_pressure",
                                           "bottom_potential", "pressure_closure"}));
    out.infinite = run_simulation(benchmark(true, 32, 48, 400, {"virial", "second_moment"}));
    out.finite_conv =
        convergence_study(benchmark(false, 16, 12, 100, {"virial", "second_moment", "mean_psi_drift"}), 3, 1);
    out.infinite_conv = convergence_study(benchmark(true, 16, 24, 100, {"virial", "second_moment"}), 3, 1);
    return out;
  }();
  return b;
}

AnalyzedTrajectory single_state(const WaveModel& model, const Field& eta, const Field& psi) {
  Trajectory t;
  t.states.push_back({eta, psi, 0.0});
  t.dt = t.dt_out = 1.0;
  return analyze(model, t, {.gamma = false});
}

Outcome flat_dtn() {
  const PeriodicGrid grid(32);
  const Field x = grid.nodes();
  double worst = 0.0;
  for (double h : {0.5, 1.0, 3.0}) {
    const DtnSolver solver(grid, Depth::finite(h), {.nz = 64});
    for (int k = 1; k <= 8; ++k) {
      const Field psi = (double(k) * x).cos();
      const double sym = k * std::tanh(h * k);
      worst = std::max(worst, max_abs(solver.dtn_apply(Field::Zero(32), psi) - sym * psi) / sym);
    }
  }
  return {worst <= 1e-8, "max relative error " + sci(worst) + " (tol 1e-8)"};
}

Outcome dtn_structure() {
  const PeriodicGrid grid(128);
  const DtnSolver solver(grid, Depth::finite(1.0), {.nz = 64});
  SampleSpec spec;
  spec.count = 100;
  spec.slope_cap = 0.5;
  const DtnStructureReport r = check_dtn_structure(solver, spec);
  const bool ok = r.positivity >= -1e-10 && r.symmetry <= 1e-9 && r.mean <= 1e-10 && r.self_flux <= 1.0 + 1e-8;
  return {ok, "positivity " + sci(r.positivity) + ", symmetry " + sci(r.symmetry) + ", mean " + sci(r.mean) +
                  ", sup G(s)s " + fmt("%.4f", r.self_flux) + " over 100 samples"};
}

Outcome shape_derivative() {
  const PeriodicGrid grid(64);
  const DtnSolver solver(grid, Depth::infinite(), {.nz = 48});
  const Field x = grid.nodes();
  const Field eta = Field::Zero(64);
  const Field psi = x.cos();
  const Field zeta = (2.0 * x).cos();
  const Field d = solver.dtn_shape_derivative(eta, psi, zeta);
  const Field g0 = solver.dtn_apply(eta, psi);
  std::vector<double> le, lr;
  for (double e : {1e-2, 5e-3, 2.5e-3}) {
    le.push_back(std::log(e));
    lr.push_back(std::log(std::sqrt(grid.integrate((solver.dtn_apply(e * zeta, psi) - g0 - e * d).square()))));
  }
  const double order = fitted_slope(le, lr);
  const double hand = max_abs(d + x.cos());
  return {order >= 1.9 && hand <= 1e-7,
          "fitted order " + fmt("%.3f", order) + " (need 1.9), derivative vs hand expansion " + sci(hand)};
}

Outcome rellich() {
  const PeriodicGrid grid(128);
  const WaveModel model(DtnSolver(grid, Depth::finite(1.0), {.nz = 64}), {});
  SampleSpec spec;
  double worst = 0.0;
  for (int i = 0; i < spec.count; ++i) {
    std::mt19937_64 rng(sample_seed(spec.seed, i));
    const Field eta = random_surface(grid, rng, spec, 1.0);
    const Field psi = random_potential(grid, rng, spec);
    worst = std::max(worst, check_rellich(single_state(model, eta, psi), 0).rel_residual);
  }
  const Field x = grid.nodes();
  const ResidualReport flat = check_rellich(single_state(model, Field::Zero(128), x.cos()), 0);
  const double expect = pi / (2.0 * std::cosh(1.0) * std::cosh(1.0));
  const double closed = std::max(std::abs(flat.lhs - expect), std::abs(flat.rhs - expect));
  return {worst <= 1e-6 && closed <= 1e-8,
          "ensemble max relative residual " + sci(worst) + " (tol 1e-6), closed form error " + sci(closed) +
              " (tol 1e-8)"};
}

Outcome virial() {
  const Benchmarks& b = benchmarks();
  const double f = series(b.finite, "virial").scaled;
  const double i = series(b.infinite, "virial").scaled;
  const double of = b.finite_conv.order.at("virial");
  const double oi = b.infinite_conv.order.at("virial");
  return {f <= 1e-4 && i <= 1e-4 && of >= 2.0 && oi >= 2.0,
          "residual finite " + sci(f) + ", infinite " + sci(i) + " (tol 1e-4); order finite " + fmt("%.2f", of) +
              ", infinite " + fmt("%.2f", oi) + " (need 2)"};
}

Outcome higher_virial() {
  const Benchmarks& b = benchmarks();
  const double sf = series(b.finite, "second_moment").scaled;
  const double si = series(b.infinite, "second_moment").scaled;
  const double mp = series(b.finite, "mean_psi_drift").scaled;
  const double osf = b.finite_conv.order.at("second_moment");
  const double osi = b.infinite_conv.order.at("second_moment");
  const double omp = b.finite_conv.order.at("mean_psi_drift");
  double gmin = 1.0, rhs_max = -1.0;
  for (const RunResult* r : {&b.finite, &b.infinite})
    for (const auto& s : r->analysis.states) gmin = std::min(gmin, s.record.gamma_min);
  for (const auto& rep : series(b.finite, "mean_psi_drift").reports) rhs_max = std::max(rhs_max, rep.rhs);
  const bool ok = sf <= 1e-4 && si <= 1e-4 && mp <= 1e-4 && osf >= 2.0 && osi >= 2.0 && omp >= 2.0 &&
                  gmin >= -1e-8 && rhs_max <= 0.0;
  return {ok, "second moment " + sci(sf) + "/" + sci(si) + " (order " + fmt("%.2f", osf) + "/" + fmt("%.2f", osi) +
                  "), mean psi drift " + sci(mp) + " (order " + fmt("%.2f", omp) + "), min gamma " +
                  fmt("%.4f", gmin) + ", max drift rhs " + sci(rhs_max)};
}

Outcome closure() {
  const Benchmarks& b = benchmarks();
  const double lh = series(b.finite, "bottom_pressure").max_abs;
  const double vi = series(b.finite, "second_moment").max_abs;
  const double c = series(b.finite, "pressure_closure").max_abs;
  const double ratio = c / std::max(lh, vi);
  return {ratio <= 10.0, "closure residual " + sci(c) + " vs individual " + sci(lh) + ", " + sci(vi) + ", ratio " +
                             fmt("%.3f", ratio) + " (limit 10)"};
}

Outcome standing_wave() {
  const StandingWaveTable t = standing_wave_table({0.05, 0.1, 0.2});
  const StandingWaveTable zero = standing_wave_table({0.0});
  const double intercept =
      std::max(std::abs(zero.rows[0].kinetic - pi * pi / 2.0), std::abs(zero.rows[0].potential - pi * pi / 2.0));
  double sweep = 1e9;
  for (double v : {-1.0, 1.0}) {
    const StandingWaveTable s = standing_wave_table({0.05, 0.1, 0.2}, {.A13 = v, .A33 = -v, .b13 = v, .b33 = v});
    std::vector<double> le, lk, lp;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      le.push_back(std::log(s.rows[i].eps));
      lk.push_back(std::log(std::abs(s.rows[i].kinetic - t.rows[i].kinetic)));
      lp.push_back(std::log(std::abs(s.rows[i].potential - t.rows[i].potential)));
    }
    sweep = std::min({sweep, fitted_slope(le, lk), fitted_slope(le, lp)});
  }
  const bool ok = t.kinetic_slope >= 2.8 && t.potential_slope >= 2.8 && t.equipartition_slope >= 2.8 &&
                  intercept <= 1e-9 && sweep >= 2.8;
  return {ok, "slopes kinetic " + fmt("%.2f", t.kinetic_slope) + ", potential " + fmt("%.2f", t.potential_slope) +
                  ", difference " + fmt("%.2f", t.equipartition_slope) + " (need 2.8), intercept error " +
                  sci(intercept) + ", coefficient sweep slope " + fmt("%.2f", sweep)};
}

SimConfig growth_config(double g) {
  SimConfig c;
  c.name = g == 0.0 ? "rt_zero" : "rt_negative";
  c.nx = 32;
  c.nz = 48;
  c.infinite_depth = true;
  c.depth = 10.0;
  c.g = g;
  c.dt = 0.005;
  c.t_end = 0.5;
  c.initial.kind = "custom";
  const Field x = PeriodicGrid(c.nx).nodes();
  if (g == 0.0) {
    c.initial.eta.assign(c.nx, 0.0);
    c.initial.psi.resize(c.nx);
    for (int j = 0; j < c.nx; ++j) c.initial.psi[j] = std::cos(x[j]);
  } else {
    c.filter.enabled = true;
    c.initial.eta.resize(c.nx);
    c.initial.psi.assign(c.nx, 0.0);
    for (int j = 0; j < c.nx; ++j) c.initial.eta[j] = 0.1 * std::cos(x[j]);
  }
  return parse_config(to_json(c));
}

// min over t > 0 of (I(t) - I(0) - |E| t) / (|E| t)
double integral_slack(const AnalyzedTrajectory& a) {
  const auto I = a.series("I_virial");
  const double e = std::abs(a.states.front().record.E_total);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double t = a.states[i].record.t;
    m = std::min(m, (I[i] - I[0] - e * t) / (e * t));
  }
  return m;
}

Outcome rt_zero_gravity() {
  const RunResult r = run_simulation(growth_config(0.0));
  const RtReport rt = check_rt_bounds(r.analysis);
  const double is = integral_slack(r.analysis);
  return {rt.min_growth_slack >= -1e-3 && is >= -1e-3,
          "E " + fmt("%.4f", rt.energy) + ", min growth slack " + sci(rt.min_growth_slack) +
              ", min integral slack " + sci(is) + " (tol -1e-3)"};
}

Outcome rt_negative_gravity() {
  const RunResult r = run_simulation(growth_config(-1.0));
  const RtReport rt = check_rt_bounds(r.analysis);
  const double is = integral_slack(r.analysis);
  return {rt.min_kinetic >= -1e-10 && rt.min_growth_slack >= -1e-3 && is >= -1e-3 && r.ok(),
          "E " + sci(rt.energy) + ", min kinetic " + sci(rt.min_kinetic) + " (tol -1e-10), min growth slack " +
              sci(rt.min_growth_slack) + ", min integral slack " + sci(is)};
}

Outcome trace_inequalities() {
  const PeriodicGrid grid(128);
  SolverOptions so;
  so.nz = 64;
  const SampleSpec spec;
  const DtnSolver finite(grid, Depth::finite(1.0), so);
  const DtnSolver infinite(grid, Depth::infinite(), so);
  std::vector<BoundReport> rows;
  rows.push_back(check_trace_lower_bound(finite, spec));
  for (const auto& b : check_dtn_quadratic_bounds(finite, spec, 1e-8)) rows.push_back(b);
  rows.push_back(check_dtn_quadratic_bounds(infinite, spec, 1e-8)[2]);
  rows.push_back(check_duality_estimate(finite, spec));
  int violations = 0;
  for (const auto& b : rows) violations += b.violations;
  const Field x = grid.nodes();
  const BottomDecayReport d = check_bottom_decay(grid, {2.0, 4.0, 6.0, 8.0}, 0.2 * x.cos(), x.cos(), so);
  return {violations == 0 && d.slope <= -0.25, std::to_string(violations) + " violations over " +
                                                   std::to_string(rows.size()) + " ensembles, bottom decay slope " +
                                                   fmt("%.3f", d.slope) + " (need -0.25)"};
}

Outcome conservation() {
  std::vector<double> ldt, ldrift;
  double drift400 = 0.0, mass = 0.0;
  for (int spp : {100, 200, 400}) {
    SimConfig c = benchmark(false, 32, 24, spp, {});
    c.periods = 10.0;
    c.output_every = spp / 10;
    const RunResult r = run_simulation(parse_config(to_json(c)));
    ldt.push_back(std::log(r.analysis.traj.dt));
    ldrift.push_back(std::log(r.energy_drift));
    mass = std::max(mass, r.mass_drift);
    if (spp == 400) drift400 = r.energy_drift;
  }
  const double order = fitted_slope(ldt, ldrift);
  return {mass <= 1e-12 && drift400 <= 1e-6 && order >= 3.5,
          "mass drift " + sci(mass) + " (tol 1e-12), energy drift at T/400 " + sci(drift400) +
              " (tol 1e-6), fitted order " + fmt("%.2f", order) + " (need 3.5)"};
}

}  // namespace

int main() {
  std::printf("%s acceptance\n", code_version());
  run(1, "flat DtN multiplier", flat_dtn);
  run(2, "DtN structure", dtn_structure);
  run(3, "shape derivative", shape_derivative);
  run(4, "bottom flux identity", rellich);
  run(5, "virial identity", virial);
  run(6, "second moment and mean potential drift", higher_virial);
  run(7, "bottom pressure closure", closure);
  run(8, "standing wave period integrals", standing_wave);
  run(9, "zero gravity growth", rt_zero_gravity);
  run(10, "negative gravity energy structure", rt_negative_gravity);
  run(11, "trace inequalities", trace_inequalities);
  run(12, "conservation", conservation);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
