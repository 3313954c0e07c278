#pragma once

#include "ww/diagnostics.hpp"
#include "ww/standing_waves.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ww {

inline constexpr int kSchemaVersion = 1;
const char* code_version();

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct InitialCondition {
  std::string kind = "linear_standing";  // rest, linear_standing, standing_wave_expansion, stokes, custom
  double eps = 0.01;
  int k = 1;
  StandingWaveCoefficients coefficients;
  std::vector<double> eta;  // custom only
  std::vector<double> psi;
};

struct SimConfig {
  std::string name = "run";
  int nx = 32;
  int nz = 24;
  bool infinite_depth = false;
  double depth = 1.0;  // h, or the truncation depth when infinite
  double g = 1.0;
  double dt = 0.0;            // explicit step, or
  int steps_per_period = 0;   // step = linear period / steps_per_period
  double t_end = 0.0;         // explicit end time, or
  double periods = 0.0;       // multiple of the linear period
  int output_every = 1;
  InitialCondition initial;
  FilterOptions filter;
  bool dealias = true;
  std::vector<std::string> identities;
  std::string stencil = "central-5pt";
  double solver_tol = 1e-12;
  int solver_restart = 60;
  std::map<std::string, double> tolerances;  // asserted limits by identity or invariant name
  bool refine_space = true;                  // convergence study refines nx, nz too
  std::uint64_t seed = 1;
};

SimConfig parse_config(const nlohmann::json& j);
SimConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SimConfig& c);
std::uint64_t config_hash(const SimConfig& c);

Depth make_depth(const SimConfig& c);
// 2 pi / omega for the initial wavenumber; zero when g = 0.
double linear_period(const SimConfig& c);
double step_size(const SimConfig& c);
int step_count(const SimConfig& c);
SurfaceState initial_state(const SimConfig& c, const PeriodicGrid& grid);

struct IdentitySpec {
  std::string name;
  int reach = 0;
  AnalysisNeeds needs;
  bool finite_only = false;
  bool infinite_only = false;
  IndexCheck check;
};
IdentitySpec identity_spec(const std::string& name, Stencil stencil);
std::vector<std::string> identity_names();

struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = true;
};

struct RunResult {
  SimConfig config;
  std::shared_ptr<WaveModel> model;
  AnalyzedTrajectory analysis;
  std::vector<IdentitySeries> identities;
  std::vector<InvariantCheck> invariants;
  double energy_drift = 0.0;  // max relative |E(t) - E(0)|
  double mass_drift = 0.0;    // max |int eta(t) - int eta(0)|
  bool ok() const;
};

RunResult run_simulation(const SimConfig& c);

// Shortest round-trip decimal.
std::string format_double(double v);
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string timeseries_csv(const RunResult& r);
nlohmann::json run_manifest(const RunResult& r);
void write_run(const RunResult& r, const std::filesystem::path& dir);

struct ConvergenceLevel {
  int level = 0;
  int nx = 0;
  int nz = 0;
  double dt = 0.0;
  double dt_out = 0.0;
  double energy_drift = 0.0;
  std::map<std::string, double> scaled;  // identity -> scaled residual
};

struct ConvergenceResult {
  SimConfig base;
  std::vector<ConvergenceLevel> levels;
  std::map<std::string, double> order;      // fitted order in dt_out
  std::map<std::string, double> tolerance;  // declared tolerance at the finest level
  double energy_order = 0.0;
};

// Reruns with dt, 1/nx and 1/nz halved per level (space only when
// refine_space is set). Levels run on a worker pool.
ConvergenceResult convergence_study(const SimConfig& c, int levels, int workers = 0);
nlohmann::json convergence_manifest(const ConvergenceResult& r);

}  // namespace ww
