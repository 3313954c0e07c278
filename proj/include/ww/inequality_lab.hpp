#pragma once

#include "ww/dtn_solver.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ww {

struct SampleSpec {
  std::uint64_t seed = 1;
  int count = 100;
  int max_mode = 8;
  double slope_cap = 0.5;
  double amplitude = 1.0;       // sup norm of random potentials
  double depth_fraction = 0.3;  // surfaces stay above -depth_fraction * h
};

// Seed of sample i, so a single sample can be regenerated.
std::uint64_t sample_seed(std::uint64_t base, int index);

// Random mean-zero field with |k|^-2 amplitudes and uniform phases.
Field random_profile(const PeriodicGrid& grid, std::mt19937_64& rng, int max_mode);
// Rescaled so that sup |eta_x| equals the cap, then shrunk if needed to
// keep inf eta above -depth_fraction * h.
Field random_surface(const PeriodicGrid& grid, std::mt19937_64& rng, const SampleSpec& spec, double h);
Field random_potential(const PeriodicGrid& grid, std::mt19937_64& rng, const SampleSpec& spec);

struct BoundReport {
  std::string name;
  int samples = 0;
  int violations = 0;
  double tol = 0.0;
  double min_margin = 0.0;   // smallest normalised slack
  double constant = 0.0;     // measured constant, when the bound has one
  std::uint64_t worst_seed = 0;
};

// Trace lower bound: int psi G psi / (tanh(h)/(1 + sup|eta_x|) |psi|^2_{1/2}).
// The constant is the smallest ratio.
BoundReport check_trace_lower_bound(const DtnSolver& solver, const SampleSpec& spec);

// Cauchy-Schwarz for the DtN quadratic form, nonnegativity of int eta G eta,
// and its upper bound (2 pi h in finite depth, 2 pi |inf eta| in infinite depth).
std::vector<BoundReport> check_dtn_quadratic_bounds(const DtnSolver& solver, const SampleSpec& spec,
                                                    double tol = 1e-8);

// |int s f| <= C |s|_{-1/2} (1 + sup|s_x|)^{1/2} (int f G(s) f)^{1/2}; the
// constant is the largest ratio. Needs h >= 1.
BoundReport check_duality_estimate(const DtnSolver& solver, const SampleSpec& spec);

// Structural properties of the discrete DtN map on random samples.
struct DtnStructureReport {
  int samples = 0;
  double symmetry = 0.0;     // max |<a,Gb> - <b,Ga>| / (|a||Gb| + |b||Ga|)
  double positivity = 0.0;   // min <a,Ga> / |a|^2_{1/2}
  double mean = 0.0;         // max |int G a| / |G a|_inf
  double self_flux = 0.0;    // max of sup G(eta)eta
  std::uint64_t worst_seed = 0;
};
DtnStructureReport check_dtn_structure(const DtnSolver& solver, const SampleSpec& spec);

struct BottomDecayReport {
  std::vector<double> depths;
  std::vector<double> bottom_energy;  // integral of phi_x(x,-h)^2
  double slope = 0.0;                 // of log(bottom_energy) against h
  double constant = 0.0;              // largest bottom_energy / ((1+|eta_x|^3) e^{-h/4} |psi|^2_{H^{1/2}})
};
BottomDecayReport check_bottom_decay(const PeriodicGrid& grid, const std::vector<double>& depths, const Field& eta,
                                     const Field& psi, SolverOptions options = {});

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ww
