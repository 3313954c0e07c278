#include "ww/inequality_lab.hpp"
#include "ww/scenario.hpp"
#include "ww/standing_waves.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

using nlohmann::json;

namespace {

constexpr const char* kScenarioHelp = R"(Initial conditions (config key initial.kind):
  rest                     eta = psi = 0, the equilibrium
  linear_standing          eta = eps cos(k x), psi = 0
  standing_wave_expansion  second-order deep-water standing wave at t = 0,
                           infinite depth and g = 1 only; free coefficients
                           A13, A33, b13, b33 default to 0
  stokes                   third-order deep-water Stokes wave, eps = k a
  custom                   explicit eta and psi arrays of length nx
Identities (config key identities):
  virial, second_moment, rellich, mean_psi_drift, bottom_pressure,
  bottom_potential, pressure_closure, slope_velocity_moment,
  vertical_velocity_mean, energy_flux
Default output directory: $WWLAB_OUT, else ./wwlab-out)";

std::filesystem::path default_out() {
  const char* env = std::getenv("WWLAB_OUT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("wwlab-out");
}

void print_run(const ww::RunResult& r) {
  std::cout << "run " << r.config.name << ": " << r.analysis.size() << " outputs, energy drift "
            << ww::format_double(r.energy_drift) << ", mass drift " << ww::format_double(r.mass_drift) << '\n';
  for (const auto& s : r.identities)
    std::cout << "  " << s.identity << " scaled residual " << ww::format_double(s.scaled) << '\n';
  for (const auto& c : r.invariants)
    std::cout << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << " = " << ww::format_double(c.value)
              << " (limit " << ww::format_double(c.limit) << ")\n";
}

json bound_json(const ww::BoundReport& b) {
  return {{"name", b.name},           {"samples", b.samples}, {"violations", b.violations},
          {"tol", b.tol},             {"min_margin", b.min_margin}, {"constant", b.constant},
          {"worst_seed", b.worst_seed}};
}

std::string bounds_csv(const std::vector<ww::BoundReport>& rows) {
  std::string out = "name,samples,violations,tol,min_margin,constant,worst_seed\n";
  for (const auto& b : rows) {
    out += b.name + ',' + std::to_string(b.samples) + ',' + std::to_string(b.violations) + ',' +
           ww::format_double(b.tol) + ',' + ww::format_double(b.min_margin) + ',' + ww::format_double(b.constant) +
           ',' + std::to_string(b.worst_seed) + '\n';
  }
  return out;
}

int cmd_simulate(const std::string& config, const std::filesystem::path& out, std::optional<std::uint64_t> seed) {
  ww::SimConfig c = ww::load_config(config);
  if (seed) c.seed = *seed;
  const ww::RunResult r = ww::run_simulation(c);
  ww::write_run(r, out);
  print_run(r);
  return r.ok() ? 0 : 1;
}

int cmd_converge(const std::string& config, const std::filesystem::path& out, int levels) {
  const ww::SimConfig c = ww::load_config(config);
  if (levels < 3) throw ww::ConfigError("--levels must be >= 3");
  const ww::ConvergenceResult r = ww::convergence_study(c, levels);
  ww::write_atomic(out / (c.name + "_convergence.json"), ww::convergence_manifest(r).dump(2) + "\n");
  for (const auto& [name, order] : r.order)
    std::cout << name << " fitted order " << ww::format_double(order) << '\n';
  std::cout << "energy drift fitted order " << ww::format_double(r.energy_order) << '\n';
  return 0;
}

int cmd_standing_wave(const std::vector<double>& eps, const std::filesystem::path& out,
                      const ww::StandingWaveCoefficients& coeffs) {
  for (double e : eps)
    if (!(e >= 0.0 && e <= 0.3)) throw ww::ConfigError("--eps values must lie in [0, 0.3]");
  const ww::StandingWaveTable t = ww::standing_wave_table(eps, coeffs);
  std::string csv = "eps,kinetic,potential,reference,kinetic_residual,potential_residual,equipartition\n";
  json rows = json::array();
  for (const auto& r : t.rows) {
    csv += ww::format_double(r.eps) + ',' + ww::format_double(r.kinetic) + ',' + ww::format_double(r.potential) + ',' +
           ww::format_double(r.reference) + ',' + ww::format_double(r.kinetic_residual) + ',' +
           ww::format_double(r.potential_residual) + ',' + ww::format_double(r.equipartition) + '\n';
    rows.push_back({{"eps", r.eps},
                    {"kinetic", r.kinetic},
                    {"potential", r.potential},
                    {"reference", r.reference},
                    {"equipartition", r.equipartition}});
    std::cout << "eps " << ww::format_double(r.eps) << ": kinetic " << ww::format_double(r.kinetic) << ", potential "
              << ww::format_double(r.potential) << ", difference " << ww::format_double(r.equipartition) << '\n';
  }
  json j = {{"code_version", ww::code_version()},
            {"coefficients", {{"A13", coeffs.A13}, {"A33", coeffs.A33}, {"b13", coeffs.b13}, {"b33", coeffs.b33}}},
            {"rows", rows},
            {"kinetic_slope", t.kinetic_slope},
            {"potential_slope", t.potential_slope},
            {"equipartition_slope", t.equipartition_slope}};
  ww::write_atomic(out / "standing_wave.csv", csv);
  ww::write_atomic(out / "standing_wave.json", j.dump(2) + "\n");
  if (t.rows.size() > 1)
    std::cout << "slopes: kinetic " << ww::format_double(t.kinetic_slope) << ", potential "
              << ww::format_double(t.potential_slope) << ", difference " << ww::format_double(t.equipartition_slope)
              << '\n';
  return 0;
}

int cmd_inequalities(const std::filesystem::path& out, std::uint64_t seed, int count, int nx, int nz) {
  if (count < 1) throw ww::ConfigError("--samples must be >= 1");
  if (nx < 32 || nx % 2) throw ww::ConfigError("--nx must be even and >= 32");
  if (nz < 8) throw ww::ConfigError("--nz must be >= 8");
  const ww::PeriodicGrid grid(nx);
  ww::SolverOptions so;
  so.nz = nz;
  ww::SampleSpec spec;
  spec.seed = seed;
  spec.count = count;
  std::vector<ww::BoundReport> rows;
  const ww::DtnSolver finite(grid, ww::Depth::finite(1.0), so);
  const ww::DtnSolver infinite(grid, ww::Depth::infinite(), so);
  rows.push_back(ww::check_trace_lower_bound(finite, spec));
  for (const auto& b : ww::check_dtn_quadratic_bounds(finite, spec)) rows.push_back(b);
  for (const auto& b : ww::check_dtn_quadratic_bounds(infinite, spec))
    if (b.name == "quadratic_upper_infinite") rows.push_back(b);
  rows.push_back(ww::check_duality_estimate(finite, spec));

  const ww::Field x = grid.nodes();
  const ww::BottomDecayReport decay =
      ww::check_bottom_decay(grid, {2.0, 4.0, 6.0, 8.0}, 0.2 * x.cos(), x.cos(), so);
  json j = json::array();
  for (const auto& b : rows) j.push_back(bound_json(b));
  json manifest = {{"code_version", ww::code_version()},
                   {"seed", seed},
                   {"nx", nx},
                   {"nz", nz},
                   {"bounds", j},
                   {"bottom_decay",
                    {{"depths", decay.depths},
                     {"bottom_energy", decay.bottom_energy},
                     {"slope", decay.slope},
                     {"constant", decay.constant}}}};
  ww::write_atomic(out / "inequalities.csv", bounds_csv(rows));
  ww::write_atomic(out / "inequalities.json", manifest.dump(2) + "\n");
  int violations = 0;
  for (const auto& b : rows) {
    std::cout << b.name << ": " << b.violations << " violations, min margin " << ww::format_double(b.min_margin)
              << ", worst seed " << b.worst_seed << '\n';
    violations += b.violations;
  }
  std::cout << "bottom decay slope " << ww::format_double(decay.slope) << '\n';
  return violations == 0 && decay.slope <= -0.25 ? 0 : 1;
}

int cmd_rt_bounds(const std::string& config, const std::filesystem::path& out) {
  ww::SimConfig c;
  if (!config.empty()) {
    c = ww::load_config(config);
  } else {
    c.name = "rt_zero_gravity";
    c.infinite_depth = true;
    c.depth = 10.0;
    c.g = 0.0;
    c.dt = 0.005;
    c.t_end = 0.5;
    c.initial.kind = "custom";
    const ww::Field x = ww::PeriodicGrid(c.nx).nodes();
    c.initial.eta.assign(c.nx, 0.0);
    c.initial.psi.assign(x.data(), x.data() + x.size());
    for (double& v : c.initial.psi) v = std::cos(v);
  }
  if (c.g > 0.0) throw ww::ConfigError("g: rt-bounds needs g <= 0");
  const ww::RunResult r = ww::run_simulation(c);
  const ww::RtReport rt = ww::check_rt_bounds(r.analysis);
  ww::write_run(r, out);
  json j = {{"code_version", ww::code_version()},
            {"config", ww::to_json(c)},
            {"energy", rt.energy},
            {"min_growth_slack", rt.min_growth_slack},
            {"min_integral_slack", rt.min_integral_slack},
            {"min_kinetic", rt.min_kinetic},
            {"measured_constant", rt.measured_constant},
            {"holds", rt.holds}};
  ww::write_atomic(out / (c.name + "_rt.json"), j.dump(2) + "\n");
  print_run(r);
  std::cout << "growth slack " << ww::format_double(rt.min_growth_slack) << ", integral slack "
            << ww::format_double(rt.min_integral_slack) << ", min kinetic " << ww::format_double(rt.min_kinetic)
            << '\n';
  return rt.holds && r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral free-surface water wave simulator and identity checker"};
  app.footer(kScenarioHelp);
  app.require_subcommand(1);

  std::string config;
  std::string out_arg;
  std::uint64_t seed = 1;
  int levels = 3;
  std::vector<double> eps{0.05, 0.1, 0.2};
  ww::StandingWaveCoefficients coeffs;
  int samples = 100;
  int nx = 128;
  int nz = 64;

  auto* sim = app.add_subcommand("simulate", "Run one configured simulation and check its identities");
  sim->add_option("--config", config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_arg, "Output directory");
  auto* sim_seed = sim->add_option("--seed", seed, "Override the config seed");

  auto* conv = app.add_subcommand("converge", "Convergence study with dt and grid spacing halved per level");
  conv->add_option("--config", config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  conv->add_option("--out", out_arg, "Output directory");
  conv->add_option("--levels", levels, "Number of levels (>= 3)");

  auto* sw = app.add_subcommand("standing-wave", "Period integrals of the second-order standing wave");
  sw->add_option("--eps", eps, "Amplitudes in [0, 0.3]")->delimiter(',');
  sw->add_option("--out", out_arg, "Output directory");
  sw->add_option("--A13", coeffs.A13);
  sw->add_option("--A33", coeffs.A33);
  sw->add_option("--b13", coeffs.b13);
  sw->add_option("--b33", coeffs.b33);

  auto* ineq = app.add_subcommand("inequalities", "Seeded ensemble checks of the DtN trace inequalities");
  ineq->add_option("--seed", seed, "Ensemble seed");
  ineq->add_option("--out", out_arg, "Output directory");
  ineq->add_option("--samples", samples, "Samples per ensemble");
  ineq->add_option("--nx", nx, "Periodic nodes");
  ineq->add_option("--nz", nz, "Vertical Chebyshev order");

  auto* rt = app.add_subcommand("rt-bounds", "Growth bounds for g <= 0 (default: g = 0, psi = cos x)");
  rt->add_option("--config", config, "Config file (JSON)")->check(CLI::ExistingFile);
  rt->add_option("--out", out_arg, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::filesystem::path out = out_arg.empty() ? default_out() : std::filesystem::path(out_arg);

  try {
    if (*sim) return cmd_simulate(config, out, sim_seed->count() ? std::optional(seed) : std::nullopt);
    if (*conv) return cmd_converge(config, out, levels);
    if (*sw) return cmd_standing_wave(eps, out, coeffs);
    if (*ineq) return cmd_inequalities(out, seed, samples, nx, nz);
    if (*rt) return cmd_rt_bounds(config, out);
  } catch (const ww::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
