#include "ww/scenario.hpp"

#include "ww/inequality_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace ww {

using nlohmann::json;

#ifndef WW_VERSION
#define WW_VERSION "0.0.0"
#endif

const char* code_version() { return "wwlab " WW_VERSION; }

namespace {

constexpr double pi = std::numbers::pi;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T read(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Stencil parse_stencil(const std::string& s) {
  if (s == "central-3pt") return Stencil::Central2;
  if (s == "central-5pt") return Stencil::Central4;
  throw ConfigError("stencil: unknown stencil '" + s + "'");
}

const std::vector<std::string>& all_identities() {
  static const std::vector<std::string> names = {
      "virial",           "second_moment",         "rellich",        "mean_psi_drift",
      "bottom_pressure",  "bottom_potential",      "pressure_closure", "slope_velocity_moment",
      "vertical_velocity_mean", "energy_flux"};
  return names;
}

}  // namespace

std::vector<std::string> identity_names() { return all_identities(); }

SimConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"schema_version", "name", "nx", "nz", "depth", "g", "dt", "steps_per_period", "t_end", "periods",
                  "output_every", "initial", "filter", "dealias", "identities", "stencil", "solver", "tolerances",
                  "refine_space", "seed"},
                 "config");
  if (!j.contains("schema_version")) throw ConfigError("schema_version: missing");
  if (read<int>(j, "schema_version", 0) != kSchemaVersion)
    throw ConfigError("schema_version: unsupported, expected " + std::to_string(kSchemaVersion));

  SimConfig c;
  c.name = read<std::string>(j, "name", c.name);
  c.nx = read<int>(j, "nx", c.nx);
  c.nz = read<int>(j, "nz", c.nz);
  if (j.contains("depth")) {
    const json& d = j.at("depth");
    reject_unknown(d, {"kind", "h", "truncation"}, "depth");
    const std::string kind = read<std::string>(d, "kind", "finite");
    if (kind == "finite") {
      if (d.contains("truncation")) throw ConfigError("depth.truncation: only applies to infinite depth");
      c.infinite_depth = false;
      c.depth = read<double>(d, "h", 1.0);
    } else if (kind == "infinite") {
      if (d.contains("h")) throw ConfigError("depth.h: only applies to finite depth");
      c.infinite_depth = true;
      c.depth = read<double>(d, "truncation", 10.0);
    } else {
      throw ConfigError("depth.kind: must be finite or infinite");
    }
  }
  c.g = read<double>(j, "g", c.g);
  c.dt = read<double>(j, "dt", 0.0);
  c.steps_per_period = read<int>(j, "steps_per_period", 0);
  c.t_end = read<double>(j, "t_end", 0.0);
  c.periods = read<double>(j, "periods", 0.0);
  c.output_every = read<int>(j, "output_every", 1);
  if (j.contains("initial")) {
    const json& ic = j.at("initial");
    reject_unknown(ic, {"kind", "eps", "k", "A13", "A33", "b13", "b33", "eta", "psi"}, "initial");
    c.initial.kind = read<std::string>(ic, "kind", c.initial.kind);
    c.initial.eps = read<double>(ic, "eps", c.initial.eps);
    c.initial.k = read<int>(ic, "k", c.initial.k);
    c.initial.coefficients.A13 = read<double>(ic, "A13", 0.0);
    c.initial.coefficients.A33 = read<double>(ic, "A33", 0.0);
    c.initial.coefficients.b13 = read<double>(ic, "b13", 0.0);
    c.initial.coefficients.b33 = read<double>(ic, "b33", 0.0);
    c.initial.eta = read<std::vector<double>>(ic, "eta", {});
    c.initial.psi = read<std::vector<double>>(ic, "psi", {});
  }
  if (j.contains("filter")) {
    const json& f = j.at("filter");
    reject_unknown(f, {"enabled", "strength", "order"}, "filter");
    c.filter.enabled = read<bool>(f, "enabled", false);
    c.filter.strength = read<double>(f, "strength", c.filter.strength);
    c.filter.order = read<int>(f, "order", c.filter.order);
  }
  c.dealias = read<bool>(j, "dealias", c.dealias);
  c.identities = read<std::vector<std::string>>(j, "identities", {});
  c.stencil = read<std::string>(j, "stencil", c.stencil);
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, {"tol", "restart"}, "solver");
    c.solver_tol = read<double>(s, "tol", c.solver_tol);
    c.solver_restart = read<int>(s, "restart", c.solver_restart);
  }
  c.tolerances = read<std::map<std::string, double>>(j, "tolerances", {});
  c.refine_space = read<bool>(j, "refine_space", c.refine_space);
  c.seed = read<std::uint64_t>(j, "seed", c.seed);

  // validation
  if (c.nx < 8 || c.nx % 2) throw ConfigError("nx: must be even and >= 8");
  if (c.nz < 4) throw ConfigError("nz: must be >= 4");
  if (c.infinite_depth && c.depth < 6.0) throw ConfigError("depth.truncation: must be >= 6");
  if (!c.infinite_depth && !(c.depth > 0.0)) throw ConfigError("depth.h: must be positive");
  if (!std::isfinite(c.g)) throw ConfigError("g: must be finite");
  if ((c.dt > 0.0) == (c.steps_per_period > 0)) throw ConfigError("dt, steps_per_period: give exactly one");
  if ((c.t_end > 0.0) == (c.periods > 0.0)) throw ConfigError("t_end, periods: give exactly one");
  if ((c.steps_per_period > 0 || c.periods > 0.0) && c.g == 0.0)
    throw ConfigError("steps_per_period, periods: period-based timing needs g != 0");
  if (c.output_every < 1) throw ConfigError("output_every: must be >= 1");
  if (c.g < 0.0) {
    if (!c.filter.enabled) throw ConfigError("filter.enabled: g < 0 requires the spectral filter");
    const double T = c.t_end > 0.0 ? c.t_end : c.periods * linear_period(c);
    if (T > 1.0) throw ConfigError("t_end: g < 0 runs are limited to t_end <= 1");
  }
  parse_stencil(c.stencil);
  for (const auto& name : c.identities) {
    const IdentitySpec spec = identity_spec(name, Stencil::Central4);
    if (spec.finite_only && c.infinite_depth) throw ConfigError("identities: '" + name + "' needs finite depth");
    if (spec.infinite_only && !c.infinite_depth) throw ConfigError("identities: '" + name + "' needs infinite depth");
    if (name == "energy_flux" && c.g < 0.0) throw ConfigError("identities: energy_flux needs g >= 0");
  }
  for (const auto& [key, value] : c.tolerances) {
    const auto& ids = all_identities();
    if (key != "energy_drift" && std::find(ids.begin(), ids.end(), key) == ids.end())
      throw ConfigError("tolerances: unknown key '" + key + "'");
    if (!(value > 0.0)) throw ConfigError("tolerances: values must be positive");
  }
  const std::string& kind = c.initial.kind;
  if (kind == "rest" || kind == "linear_standing") {
  } else if (kind == "standing_wave_expansion") {
    if (!c.infinite_depth || c.g != 1.0) throw ConfigError("initial.kind: standing_wave_expansion needs infinite depth and g = 1");
  } else if (kind == "stokes") {
    if (!c.infinite_depth || !(c.g > 0.0)) throw ConfigError("initial.kind: stokes needs infinite depth and g > 0");
  } else if (kind == "custom") {
    if (int(c.initial.eta.size()) != c.nx || int(c.initial.psi.size()) != c.nx)
      throw ConfigError("initial.eta, initial.psi: custom data must have nx values for eta and psi");
  } else {
    throw ConfigError("initial.kind: unknown initial condition '" + kind + "'");
  }
  if (c.initial.k < 1 || c.initial.k >= c.nx / 2) throw ConfigError("initial.k: wavenumber out of range");
  if (!(c.initial.eps >= 0.0)) throw ConfigError("initial.eps: must be >= 0");
  step_count(c);
  const double limit = ModelOptions{}.cfl / std::sqrt(std::max(std::abs(c.g), 1.0) * (c.nx / 2));
  if (step_size(c) > limit)
    throw ConfigError("dt: step " + format_double(step_size(c)) + " exceeds the stability limit " +
                      format_double(limit));
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

json to_json(const SimConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = c.name;
  j["nx"] = c.nx;
  j["nz"] = c.nz;
  if (c.infinite_depth) j["depth"] = {{"kind", "infinite"}, {"truncation", c.depth}};
  else j["depth"] = {{"kind", "finite"}, {"h", c.depth}};
  j["g"] = c.g;
  if (c.dt > 0.0) j["dt"] = c.dt;
  if (c.steps_per_period > 0) j["steps_per_period"] = c.steps_per_period;
  if (c.t_end > 0.0) j["t_end"] = c.t_end;
  if (c.periods > 0.0) j["periods"] = c.periods;
  j["output_every"] = c.output_every;
  json ic = {{"kind", c.initial.kind}, {"eps", c.initial.eps}, {"k", c.initial.k}};
  if (c.initial.kind == "standing_wave_expansion") {
    ic["A13"] = c.initial.coefficients.A13;
    ic["A33"] = c.initial.coefficients.A33;
    ic["b13"] = c.initial.coefficients.b13;
    ic["b33"] = c.initial.coefficients.b33;
  }
  if (c.initial.kind == "custom") {
    ic["eta"] = c.initial.eta;
    ic["psi"] = c.initial.psi;
  }
  j["initial"] = ic;
  j["filter"] = {{"enabled", c.filter.enabled}, {"strength", c.filter.strength}, {"order", c.filter.order}};
  j["dealias"] = c.dealias;
  j["identities"] = c.identities;
  j["stencil"] = c.stencil;
  j["solver"] = {{"tol", c.solver_tol}, {"restart", c.solver_restart}};
  j["tolerances"] = c.tolerances;
  j["refine_space"] = c.refine_space;
  j["seed"] = c.seed;
  return j;
}

std::uint64_t config_hash(const SimConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

Depth make_depth(const SimConfig& c) {
  return c.infinite_depth ? Depth::infinite(c.depth) : Depth::finite(c.depth);
}

double linear_period(const SimConfig& c) {
  if (c.g == 0.0) return 0.0;
  const double k = c.initial.k;
  const double w2 = std::abs(c.g) * k * (c.infinite_depth ? 1.0 : std::tanh(k * c.depth));
  return 2.0 * pi / std::sqrt(w2);
}

double step_size(const SimConfig& c) {
  return c.dt > 0.0 ? c.dt : linear_period(c) / c.steps_per_period;
}

int step_count(const SimConfig& c) {
  const double t_end = c.t_end > 0.0 ? c.t_end : c.periods * linear_period(c);
  const double dt = step_size(c);
  const double steps = t_end / dt;
  const long n = std::lround(steps);
  if (n < 1 || std::abs(steps - double(n)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("t_end, periods: end time must be a whole number of steps");
  if (n % c.output_every) throw ConfigError("output_every: step count must be a multiple of output_every");
  return int(n);
}

SurfaceState initial_state(const SimConfig& c, const PeriodicGrid& grid) {
  SurfaceState s;
  s.t = 0.0;
  const Field x = grid.nodes();
  const double eps = c.initial.eps;
  const int k = c.initial.k;
  const std::string& kind = c.initial.kind;
  if (kind == "rest") {
    s.eta = Field::Zero(grid.size());
    s.psi = Field::Zero(grid.size());
  } else if (kind == "linear_standing") {
    s.eta = eps * (double(k) * x).cos();
    s.psi = Field::Zero(grid.size());
  } else if (kind == "standing_wave_expansion") {
    const StandingWaveExpansion w(eps, c.initial.coefficients);
    SurfacePair p = eval_surface(w, 0.0, grid);
    s.eta = p.eta;
    s.psi = p.psi;
  } else if (kind == "stokes") {
    // Third-order deep-water progressive wave, eps = k a.
    const double a = eps / k;
    const double w = std::sqrt(c.g * k * (1.0 + eps * eps));
    const Field th = double(k) * x;
    s.eta = a * (th.cos() + 0.5 * eps * (2.0 * th).cos() + 3.0 / 8.0 * eps * eps * (3.0 * th).cos());
    s.psi = (w / k) * a * (double(k) * s.eta).exp() * th.sin();
  } else {
    s.eta = Eigen::Map<const Field>(c.initial.eta.data(), c.nx);
    s.psi = Eigen::Map<const Field>(c.initial.psi.data(), c.nx);
  }
  s.eta -= s.eta.mean();
  return s;
}

IdentitySpec identity_spec(const std::string& name, Stencil stencil) {
  IdentitySpec s;
  s.name = name;
  const int r = stencil_reach(stencil);
  if (name == "virial") {
    s.reach = r;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) { return check_virial(a, i, stencil); };
  } else if (name == "second_moment") {
    s.reach = r;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) { return check_second_moment(a, i, stencil); };
  } else if (name == "rellich") {
    s.finite_only = true;
    s.check = [](const AnalyzedTrajectory& a, std::size_t i) { return check_rellich(a, i); };
  } else if (name == "mean_psi_drift") {
    s.reach = r;
    s.finite_only = true;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) { return check_mean_psi_drift(a, i, stencil); };
  } else if (name == "bottom_pressure") {
    s.reach = r;
    s.finite_only = true;
    s.needs.time_derivative = true;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) { return check_bottom_pressure(a, i, stencil); };
  } else if (name == "bottom_potential") {
    s.reach = r;
    s.finite_only = true;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) { return check_bottom_potential(a, i, stencil); };
  } else if (name == "pressure_closure") {
    s.reach = r;
    s.finite_only = true;
    s.needs.time_derivative = true;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) {
      return check_pressure_closure(a, i, stencil);
    };
  } else if (name == "slope_velocity_moment") {
    s.reach = r;
    s.needs.velocity_dtn = true;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) {
      return check_slope_velocity_moment(a, i, stencil);
    };
  } else if (name == "vertical_velocity_mean") {
    s.reach = r;
    s.infinite_only = true;
    s.needs.velocity_dtn = true;
    s.check = [stencil](const AnalyzedTrajectory& a, std::size_t i) {
      return check_vertical_velocity_mean(a, i, +1, stencil);
    };
  } else if (name == "energy_flux") {
    s.infinite_only = true;
    s.check = [](const AnalyzedTrajectory& a, std::size_t i) { return check_energy_flux(a, i); };
  } else {
    throw ConfigError("unknown identity '" + name + "'");
  }
  return s;
}

bool RunResult::ok() const {
  return std::all_of(invariants.begin(), invariants.end(), [](const InvariantCheck& c) { return c.pass; });
}

RunResult run_simulation(const SimConfig& c) {
  RunResult out;
  out.config = c;
  const PeriodicGrid grid(c.nx);
  SolverOptions so;
  so.nz = c.nz;
  so.tol = c.solver_tol;
  so.restart = c.solver_restart;
  const DtnSolver solver(grid, make_depth(c), so);
  ModelOptions mo;
  mo.g = c.g;
  mo.dealias = c.dealias;
  mo.filter = c.filter;
  out.model = std::make_shared<WaveModel>(solver, mo);

  const Stencil stencil = parse_stencil(c.stencil);
  AnalysisNeeds needs;
  std::vector<IdentitySpec> specs;
  for (const auto& name : c.identities) {
    specs.push_back(identity_spec(name, stencil));
    needs.time_derivative |= specs.back().needs.time_derivative;
    needs.velocity_dtn |= specs.back().needs.velocity_dtn;
  }

  const int steps = step_count(c);
  const Trajectory traj = integrate(*out.model, initial_state(c, grid), step_size(c), c.output_every,
                                    steps / c.output_every);
  out.analysis = analyze(*out.model, traj, needs);
  for (const auto& s : specs) out.identities.push_back(check_series(out.analysis, s.reach, s.check));

  const auto energy = out.analysis.series("E_total");
  const auto mass = out.analysis.series("int_eta");
  const auto gamma = out.analysis.series("gamma_min");
  const double e0 = energy.front();
  for (std::size_t i = 0; i < energy.size(); ++i) {
    out.energy_drift = std::max(out.energy_drift, std::abs(energy[i] - e0) / std::max(std::abs(e0), 1e-300));
    out.mass_drift = std::max(out.mass_drift, std::abs(mass[i] - mass.front()));
  }

  const double mass_scale = std::max(1.0, grid.integrate(traj.states.front().eta.abs()));
  out.invariants.push_back({"mass_drift", out.mass_drift, 1e-12 * mass_scale, out.mass_drift <= 1e-12 * mass_scale});
  const double gmin = *std::min_element(gamma.begin(), gamma.end());
  out.invariants.push_back({"gamma_min", gmin, -1e-8, gmin >= -1e-8});
  if (c.g < 0.0) {
    const auto m2 = out.analysis.series("int_eta2");
    double kin = std::numeric_limits<double>::infinity();
    for (double v : m2) kin = std::min(kin, e0 + 0.5 * std::abs(c.g) * v);
    out.invariants.push_back({"kinetic_lower_bound", kin, -1e-10, kin >= -1e-10});
  }
  for (const auto& [key, limit] : c.tolerances) {
    if (key == "energy_drift") {
      out.invariants.push_back({key, out.energy_drift, limit, out.energy_drift <= limit});
      continue;
    }
    auto it = std::find_if(out.identities.begin(), out.identities.end(),
                           [&](const IdentitySeries& s) { return s.identity == key; });
    if (it == out.identities.end()) throw ConfigError("tolerances: identity not requested: " + key);
    out.invariants.push_back({key, it->scaled, limit, it->scaled <= limit});
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string timeseries_csv(const RunResult& r) {
  std::ostringstream os;
  os << "t,E_k,E_p,E_k_mod,B_bot,I_virial,mean_psi,gamma_min";
  for (const auto& s : r.identities) os << ",res_" << s.identity;
  os << '\n';
  std::vector<std::map<double, double>> by_time(r.identities.size());
  for (std::size_t k = 0; k < r.identities.size(); ++k) {
    for (const auto& rep : r.identities[k].reports) by_time[k][rep.t] = rep.lhs - rep.rhs;
  }
  for (const auto& st : r.analysis.states) {
    const DiagnosticsRecord& d = st.record;
    os << format_double(d.t) << ',' << format_double(d.E_k) << ',' << format_double(d.E_p) << ','
       << format_double(d.E_k_mod) << ',' << format_double(d.B_bot) << ',' << format_double(d.I_virial) << ','
       << format_double(d.mean_psi) << ',' << format_double(d.gamma_min);
    for (const auto& m : by_time) {
      os << ',';
      auto it = m.find(d.t);
      if (it != m.end()) os << format_double(it->second);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

json run_manifest(const RunResult& r) {
  json j;
  j["code_version"] = code_version();
  j["schema_version"] = kSchemaVersion;
  j["config"] = to_json(r.config);
  j["config_hash"] = hex(config_hash(r.config));
  j["seed"] = r.config.seed;
  j["dt"] = r.analysis.traj.dt;
  j["dt_out"] = r.analysis.traj.dt_out;
  j["outputs"] = r.analysis.size();
  j["energy_drift"] = r.energy_drift;
  j["mass_drift"] = r.mass_drift;
  json ids = json::array();
  for (const auto& s : r.identities) {
    ids.push_back({{"identity", s.identity},
                   {"stencil", s.reports.empty() ? "" : s.reports.front().stencil},
                   {"max_abs", s.max_abs},
                   {"scale", s.scale},
                   {"scaled", s.scaled},
                   {"max_rel", s.max_rel}});
  }
  j["identities"] = ids;
  json inv = json::array();
  for (const auto& c : r.invariants) inv.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
  j["invariants"] = inv;
  j["ok"] = r.ok();
  return j;
}

void write_run(const RunResult& r, const std::filesystem::path& dir) {
  write_atomic(dir / (r.config.name + ".csv"), timeseries_csv(r));
  write_atomic(dir / (r.config.name + ".json"), run_manifest(r).dump(2) + "\n");
}

ConvergenceResult convergence_study(const SimConfig& c, int levels, int workers) {
  if (levels < 3) throw ConfigError("levels: convergence study needs at least 3 levels");
  if (workers <= 0) workers = int(std::max(1u, std::thread::hardware_concurrency()));
  ConvergenceResult out;
  out.base = c;
  std::vector<SimConfig> cfgs;
  for (int l = 0; l < levels; ++l) {
    SimConfig lc = c;
    const int f = 1 << l;
    if (lc.steps_per_period > 0) lc.steps_per_period *= f;
    else lc.dt /= f;
    if (c.refine_space) {
      lc.nx *= f;
      lc.nz *= f;
    }
    lc.tolerances.clear();
    lc.name = c.name + "_level" + std::to_string(l);
    cfgs.push_back(lc);
  }
  std::vector<ConvergenceLevel> results(levels);
  auto run_level = [&](int l) {
    const RunResult r = run_simulation(cfgs[l]);
    ConvergenceLevel lv;
    lv.level = l;
    lv.nx = cfgs[l].nx;
    lv.nz = cfgs[l].nz;
    lv.dt = r.analysis.traj.dt;
    lv.dt_out = r.analysis.traj.dt_out;
    lv.energy_drift = r.energy_drift;
    for (const auto& s : r.identities) lv.scaled[s.identity] = s.scaled;
    return lv;
  };
  for (int start = 0; start < levels; start += workers) {
    std::vector<std::future<ConvergenceLevel>> jobs;
    for (int l = start; l < std::min(levels, start + workers); ++l) jobs.push_back(std::async(std::launch::async, run_level, l));
    for (int l = start; l < std::min(levels, start + workers); ++l) results[l] = jobs[l - start].get();
  }
  out.levels = results;

  std::vector<double> logdt;
  for (const auto& lv : results) logdt.push_back(std::log(lv.dt_out));
  auto fit = [&](const std::vector<double>& values) {
    std::vector<double> logs;
    for (double v : values) {
      if (!(v > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      logs.push_back(std::log(v));
    }
    return fitted_slope(logdt, logs);
  };
  for (const auto& name : c.identities) {
    std::vector<double> vals;
    for (const auto& lv : results) vals.push_back(lv.scaled.at(name));
    out.order[name] = fit(vals);
    // Declared tolerance: twice the finest-level residual.
    out.tolerance[name] = 2.0 * vals.back();
  }
  std::vector<double> drift;
  for (const auto& lv : results) drift.push_back(lv.energy_drift);
  out.energy_order = fit(drift);
  return out;
}

json convergence_manifest(const ConvergenceResult& r) {
  json j;
  j["code_version"] = code_version();
  j["schema_version"] = kSchemaVersion;
  j["config"] = to_json(r.base);
  j["config_hash"] = hex(config_hash(r.base));
  json lv = json::array();
  for (const auto& l : r.levels) {
    lv.push_back({{"level", l.level},
                  {"nx", l.nx},
                  {"nz", l.nz},
                  {"dt", l.dt},
                  {"dt_out", l.dt_out},
                  {"energy_drift", l.energy_drift},
                  {"scaled_residuals", l.scaled}});
  }
  j["levels"] = lv;
  j["order"] = r.order;
  j["declared_tolerance"] = r.tolerance;
  j["energy_order"] = r.energy_order;
  return j;
}

}  // namespace ww
