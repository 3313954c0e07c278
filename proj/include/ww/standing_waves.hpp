#pragma once

#include "ww/spectral_core.hpp"

#include <vector>

namespace ww {

// Free coefficients of the second-order correction.
struct StandingWaveCoefficients {
  double A13 = 0.0;
  double A33 = 0.0;
  double b13 = 0.0;
  double b33 = 0.0;
};

// Second-order deep-water standing wave in normalized variables:
// x in [0, pi], time period 2 pi, surface y = eps * eta(t, x),
// frequency 1 - eps^2/8. The additive function of time in the
// potential is taken to be zero.
class StandingWaveExpansion {
public:
  explicit StandingWaveExpansion(double eps, StandingWaveCoefficients c = {}, int x_nodes = 128);

  double eps() const { return eps_; }
  double omega() const { return 1.0 - eps_ * eps_ / 8.0; }
  const StandingWaveCoefficients& coefficients() const { return c_; }

  double eta(double t, double x) const;
  double phi(double t, double x, double y) const;

  // Integrals over x in [0, pi] and y below the surface at time t.
  double horizontal_leading(double t) const;     // of (phi0_x)^2
  double horizontal_correction(double t) const;  // of 2 eps^2 phi0_x phi2_x
  double vertical_leading(double t) const;       // of (phi0_y)^2
  double vertical_correction(double t) const;    // of 2 eps^2 phi0_y phi2_y
  double horizontal_full(double t) const;        // of (phi_x)^2
  double vertical_full(double t) const;          // of (phi_y)^2
  double modified_kinetic_density(double t) const;  // of 3/2 phi_y^2 + 1/2 phi_x^2

  // Integrals over x in [0, pi] of eta0^2, 2 eta0 eta1, eta1^2 + 2 eta0 eta2.
  double potential_order(int k, double t) const;
  double potential_density(double t) const;  // of eta^2

private:
  struct Term {
    double amp;
    int rate;
  };
  template <class F>
  double x_integral(F f) const;
  double vertical_integral(const Term* a, int na, const Term* b, int nb, double top) const;
  void gradient_terms(double t, double x, Term* px, Term* py) const;

  double eps_;
  StandingWaveCoefficients c_;
  int x_nodes_;
};

struct SurfacePair {
  Field eta;
  Field psi;
};

// Physical elevation eps*eta and surface potential eps*phi(t, x, eps*eta)
// at normalized time t, for g = 1 and infinite depth. Physical time is
// t / omega.
SurfacePair eval_surface(const StandingWaveExpansion& w, double t, const PeriodicGrid& grid);

// Time integrals over one period [0, 2 pi].
double modified_kinetic_period_integral(const StandingWaveExpansion& w, int t_nodes = 128);
double potential_period_integral(const StandingWaveExpansion& w, int t_nodes = 128);
// kinetic minus potential period integral
double equipartition_residual(const StandingWaveExpansion& w, int t_nodes = 128);

// Leading terms of both period integrals: pi^2/2 + 3 pi^2 eps^2 / 16.
double period_integral_reference(double eps);

struct StandingWaveRow {
  double eps = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double reference = 0.0;
  double kinetic_residual = 0.0;    // kinetic - reference
  double potential_residual = 0.0;  // potential - reference
  double equipartition = 0.0;       // kinetic - potential
};

struct StandingWaveTable {
  std::vector<StandingWaveRow> rows;
  // log-log slopes in eps of the absolute residuals, over rows with eps > 0
  double kinetic_slope = 0.0;
  double potential_slope = 0.0;
  double equipartition_slope = 0.0;
};

StandingWaveTable standing_wave_table(const std::vector<double>& eps, StandingWaveCoefficients c = {},
                                      int t_nodes = 128);

}  // namespace ww
