#include "ww/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ww {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

std::uint64_t sample_seed(std::uint64_t base, int index) {
  // splitmix64 step
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * std::uint64_t(index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Field random_profile(const PeriodicGrid& grid, std::mt19937_64& rng, int max_mode) {
  if (max_mode < 1 || max_mode >= grid.k_max()) throw std::invalid_argument("max_mode must be in [1, n/2)");
  std::uniform_real_distribution<double> phase(0.0, two_pi);
  const Field x = grid.nodes();
  Field f = Field::Zero(grid.size());
  for (int k = 1; k <= max_mode; ++k) {
    const double th = phase(rng);
    f += (1.0 / (double(k) * k)) * (k * x + th).cos();
  }
  return f;
}

Field random_surface(const PeriodicGrid& grid, std::mt19937_64& rng, const SampleSpec& spec, double h) {
  Field eta = random_profile(grid, rng, spec.max_mode);
  eta *= spec.slope_cap / max_abs(grid.derivative(eta));
  const double floor = -spec.depth_fraction * h;
  if (eta.minCoeff() < floor) eta *= floor / eta.minCoeff();
  return eta;
}

Field random_potential(const PeriodicGrid& grid, std::mt19937_64& rng, const SampleSpec& spec) {
  Field psi = random_profile(grid, rng, spec.max_mode);
  return psi * (spec.amplitude / max_abs(psi));
}

namespace {

BoundReport start(const std::string& name, const SampleSpec& spec, double tol) {
  BoundReport r;
  r.name = name;
  r.samples = spec.count;
  r.tol = tol;
  r.min_margin = std::numeric_limits<double>::infinity();
  return r;
}

void note(BoundReport& r, double margin, std::uint64_t seed) {
  if (margin < r.min_margin) {
    r.min_margin = margin;
    r.worst_seed = seed;
  }
  if (!(margin >= -r.tol)) ++r.violations;
}

}  // namespace

BoundReport check_trace_lower_bound(const DtnSolver& solver, const SampleSpec& spec) {
  const PeriodicGrid& grid = solver.grid();
  const double h = solver.depth().h();
  const double depth_factor = solver.depth().is_infinite() ? 1.0 : std::tanh(h);
  BoundReport r = start("trace_lower_bound", spec, 0.0);
  r.constant = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = sample_seed(spec.seed, i);
    std::mt19937_64 rng(seed);
    const Field eta = random_surface(grid, rng, spec, h);
    const Field psi = random_potential(grid, rng, spec);
    const double form = grid.integrate(psi, solver.dtn_apply(eta, psi));
    const double norm = grid.homogeneous_norm(psi, 0.5);
    const double ratio = form / (depth_factor / (1.0 + max_abs(grid.derivative(eta))) * norm * norm);
    r.constant = std::min(r.constant, ratio);
    note(r, ratio, seed);
  }
  return r;
}

std::vector<BoundReport> check_dtn_quadratic_bounds(const DtnSolver& solver, const SampleSpec& spec, double tol) {
  const PeriodicGrid& grid = solver.grid();
  const double h = solver.depth().h();
  const bool infinite = solver.depth().is_infinite();
  BoundReport cs = start("cauchy_schwarz", spec, tol);
  BoundReport pos = start("quadratic_nonnegative", spec, tol);
  BoundReport up = start(infinite ? "quadratic_upper_infinite" : "quadratic_upper_finite", spec, tol);
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = sample_seed(spec.seed, i);
    std::mt19937_64 rng(seed);
    const Field eta = random_surface(grid, rng, spec, h);
    const Field psi = random_potential(grid, rng, spec);
    const Field g_eta = solver.dtn_apply(eta, eta);
    const Field g_psi = solver.dtn_apply(eta, psi);
    const double ee = grid.integrate(eta, g_eta);
    const double pp = grid.integrate(psi, g_psi);
    const double ep = grid.integrate(eta, g_psi);
    const double bound = std::sqrt(std::max(ee, 0.0)) * std::sqrt(std::max(pp, 0.0));
    note(cs, (bound - std::abs(ep)) / bound, seed);
    const double hn = grid.homogeneous_norm(eta, 0.5);
    note(pos, ee / (two_pi * hn * hn), seed);
    const double cap = infinite ? two_pi * std::abs(eta.minCoeff()) : two_pi * h;
    note(up, (cap - ee) / cap, seed);
  }
  return {cs, pos, up};
}

BoundReport check_duality_estimate(const DtnSolver& solver, const SampleSpec& spec) {
  const PeriodicGrid& grid = solver.grid();
  const double h = solver.depth().h();
  if (h < 1.0) throw std::invalid_argument("duality estimate needs depth >= 1");
  BoundReport r = start("duality_estimate", spec, 0.0);
  r.constant = 0.0;
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = sample_seed(spec.seed, i);
    std::mt19937_64 rng(seed);
    const Field sigma = random_surface(grid, rng, spec, h);
    const Field f = random_potential(grid, rng, spec);
    const double lhs = std::abs(grid.integrate(sigma, f));
    const double form = grid.integrate(f, solver.dtn_apply(sigma, f));
    const double rhs = grid.homogeneous_norm(sigma, -0.5) * std::sqrt(1.0 + max_abs(grid.derivative(sigma))) *
                       std::sqrt(std::max(form, 0.0));
    const double ratio = lhs / rhs;
    if (ratio > r.constant) r.worst_seed = seed;
    r.constant = std::max(r.constant, ratio);
    // Margin here is finiteness of the ratio.
    const double margin = std::isfinite(ratio) ? 1.0 : -1.0;
    r.min_margin = std::min(r.min_margin, margin);
    if (margin < 0.0) ++r.violations;
  }
  return r;
}

DtnStructureReport check_dtn_structure(const DtnSolver& solver, const SampleSpec& spec) {
  const PeriodicGrid& grid = solver.grid();
  const double h = solver.depth().h();
  DtnStructureReport r;
  r.samples = spec.count;
  r.positivity = std::numeric_limits<double>::infinity();
  r.self_flux = -std::numeric_limits<double>::infinity();
  double worst = -1.0;
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = sample_seed(spec.seed, i);
    std::mt19937_64 rng(seed);
    const Field eta = random_surface(grid, rng, spec, h);
    const Field a = random_potential(grid, rng, spec);
    const Field b = random_potential(grid, rng, spec);
    const Field ga = solver.dtn_apply(eta, a);
    const Field gb = solver.dtn_apply(eta, b);
    const Field ge = solver.dtn_apply(eta, eta);
    const double l2 = std::sqrt(grid.integrate(a.square()) * grid.integrate(gb.square())) +
                      std::sqrt(grid.integrate(b.square()) * grid.integrate(ga.square()));
    const double sym = std::abs(grid.integrate(a, gb) - grid.integrate(b, ga)) / l2;
    if (sym > worst) {
      worst = sym;
      r.worst_seed = seed;
    }
    r.symmetry = std::max(r.symmetry, sym);
    const double hn = grid.homogeneous_norm(a, 0.5);
    r.positivity = std::min(r.positivity, grid.integrate(a, ga) / (two_pi * hn * hn));
    r.mean = std::max({r.mean, std::abs(grid.integrate(ga)) / max_abs(ga), std::abs(grid.integrate(gb)) / max_abs(gb)});
    r.self_flux = std::max(r.self_flux, ge.maxCoeff());
  }
  return r;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BottomDecayReport check_bottom_decay(const PeriodicGrid& grid, const std::vector<double>& depths, const Field& eta,
                                     const Field& psi, SolverOptions options) {
  BottomDecayReport r;
  r.depths = depths;
  const double slope = max_abs(grid.derivative(eta));
  const double hn = grid.sobolev_norm(psi, 0.5);
  std::vector<double> logs;
  for (double h : depths) {
    if (h < 2.0) throw std::invalid_argument("bottom decay needs depth >= 2");
    if (!(eta.minCoeff() > -h / 3.0)) throw GeometryError("surface dips below a third of the depth");
    DtnSolver solver(grid, Depth::finite(h), options);
    const FlattenedField phi = solver.harmonic_extension(eta, psi);
    const double e = grid.integrate(solver.bottom_gradx(phi).square());
    r.bottom_energy.push_back(e);
    logs.push_back(std::log(e));
    r.constant = std::max(r.constant, e / ((1.0 + slope * slope * slope) * std::exp(-h / 4.0) * hn * hn));
  }
  r.slope = fitted_slope(depths, logs);
  return r;
}

}  // namespace ww
