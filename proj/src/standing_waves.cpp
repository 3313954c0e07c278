#include "ww/standing_waves.hpp"

#include "ww/inequality_lab.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ww {

namespace {
constexpr double pi = std::numbers::pi;
}

StandingWaveExpansion::StandingWaveExpansion(double eps, StandingWaveCoefficients c, int x_nodes)
    : eps_(eps), c_(c), x_nodes_(x_nodes) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("amplitude must be finite and >= 0");
  if (x_nodes < 16 || x_nodes % 2) throw std::invalid_argument("x quadrature needs an even node count >= 16");
}

double StandingWaveExpansion::eta(double t, double x) const {
  const double e0 = std::cos(t) * std::cos(x);
  const double e1 = 0.5 * std::cos(t) * std::cos(t) * std::cos(2 * x);
  const double e2 = 3.0 / 32.0 * std::cos(t) * std::cos(x) + c_.b13 * std::cos(t) * std::cos(3 * x) -
                    1.0 / 16.0 * std::cos(3 * t) * std::cos(x) + c_.b33 * std::cos(3 * t) * std::cos(3 * x);
  return e0 + eps_ * e1 + eps_ * eps_ * e2;
}

double StandingWaveExpansion::phi(double t, double x, double y) const {
  const double p0 = -std::sin(t) * std::cos(x) * std::exp(y);
  const double p2 = c_.A13 * std::sin(t) * std::cos(3 * x) * std::exp(3 * y) +
                    5.0 / 32.0 * std::sin(3 * t) * std::cos(x) * std::exp(y) +
                    c_.A33 * std::sin(3 * t) * std::cos(3 * x) * std::exp(3 * y);
  return p0 + eps_ * eps_ * p2;
}

// Gradient as sums amp * exp(rate y). Entry 0 is the leading order,
// entries 1..3 carry the eps^2 factor.
void StandingWaveExpansion::gradient_terms(double t, double x, Term* px, Term* py) const {
  const double e2 = eps_ * eps_;
  const double st = std::sin(t), s3t = std::sin(3 * t);
  px[0] = {st * std::sin(x), 1};
  px[1] = {-e2 * 3.0 * c_.A13 * st * std::sin(3 * x), 3};
  px[2] = {-e2 * 5.0 / 32.0 * s3t * std::sin(x), 1};
  px[3] = {-e2 * 3.0 * c_.A33 * s3t * std::sin(3 * x), 3};
  py[0] = {-st * std::cos(x), 1};
  py[1] = {e2 * 3.0 * c_.A13 * st * std::cos(3 * x), 3};
  py[2] = {e2 * 5.0 / 32.0 * s3t * std::cos(x), 1};
  py[3] = {e2 * 3.0 * c_.A33 * s3t * std::cos(3 * x), 3};
}

double StandingWaveExpansion::vertical_integral(const Term* a, int na, const Term* b, int nb, double top) const {
  double s = 0.0;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const int r = a[i].rate + b[j].rate;
      s += a[i].amp * b[j].amp * std::exp(r * top) / r;
    }
  }
  return s;
}

// The integrands are even and 2 pi periodic in x, so the integral over
// [0, pi] is half the trapezoid sum over the full period.
template <class F>
double StandingWaveExpansion::x_integral(F f) const {
  double s = 0.0;
  for (int j = 0; j < x_nodes_; ++j) s += f(2.0 * pi * j / x_nodes_);
  return 0.5 * s * (2.0 * pi / x_nodes_);
}

double StandingWaveExpansion::horizontal_leading(double t) const {
  return x_integral([&](double x) {
    Term px[4], py[4];
    gradient_terms(t, x, px, py);
    return vertical_integral(px, 1, px, 1, eps_ * eta(t, x));
  });
}

double StandingWaveExpansion::horizontal_correction(double t) const {
  return x_integral([&](double x) {
    Term px[4], py[4];
    gradient_terms(t, x, px, py);
    return 2.0 * vertical_integral(px, 1, px + 1, 3, eps_ * eta(t, x));
  });
}

double StandingWaveExpansion::vertical_leading(double t) const {
  return x_integral([&](double x) {
    Term px[4], py[4];
    gradient_terms(t, x, px, py);
    return vertical_integral(py, 1, py, 1, eps_ * eta(t, x));
  });
}

double StandingWaveExpansion::vertical_correction(double t) const {
  return x_integral([&](double x) {
    Term px[4], py[4];
    gradient_terms(t, x, px, py);
    return 2.0 * vertical_integral(py, 1, py + 1, 3, eps_ * eta(t, x));
  });
}

double StandingWaveExpansion::horizontal_full(double t) const {
  return x_integral([&](double x) {
    Term px[4], py[4];
    gradient_terms(t, x, px, py);
    return vertical_integral(px, 4, px, 4, eps_ * eta(t, x));
  });
}

double StandingWaveExpansion::vertical_full(double t) const {
  return x_integral([&](double x) {
    Term px[4], py[4];
    gradient_terms(t, x, px, py);
    return vertical_integral(py, 4, py, 4, eps_ * eta(t, x));
  });
}

double StandingWaveExpansion::modified_kinetic_density(double t) const {
  return 1.5 * vertical_full(t) + 0.5 * horizontal_full(t);
}

double StandingWaveExpansion::potential_order(int k, double t) const {
  const double ct = std::cos(t);
  auto e0 = [&](double x) { return ct * std::cos(x); };
  auto e1 = [&](double x) { return 0.5 * ct * ct * std::cos(2 * x); };
  auto e2 = [&](double x) {
    return 3.0 / 32.0 * ct * std::cos(x) + c_.b13 * ct * std::cos(3 * x) - 1.0 / 16.0 * std::cos(3 * t) * std::cos(x) +
           c_.b33 * std::cos(3 * t) * std::cos(3 * x);
  };
  switch (k) {
    case 0: return x_integral([&](double x) { return e0(x) * e0(x); });
    case 1: return x_integral([&](double x) { return 2.0 * e0(x) * e1(x); });
    case 2: return x_integral([&](double x) { return e1(x) * e1(x) + 2.0 * e0(x) * e2(x); });
    default: throw std::invalid_argument("potential order must be 0, 1 or 2");
  }
}

double StandingWaveExpansion::potential_density(double t) const {
  return x_integral([&](double x) {
    const double e = eta(t, x);
    return e * e;
  });
}

SurfacePair eval_surface(const StandingWaveExpansion& w, double t, const PeriodicGrid& grid) {
  SurfacePair out;
  const Field x = grid.nodes();
  out.eta.resize(x.size());
  out.psi.resize(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double e = w.eta(t, x[j]);
    out.eta[j] = w.eps() * e;
    out.psi[j] = w.eps() * w.phi(t, x[j], w.eps() * e);
  }
  return out;
}

namespace {

template <class F>
double period_integral(F f, int t_nodes) {
  if (t_nodes < 64) throw std::invalid_argument("period quadrature needs at least 64 time nodes");
  double s = 0.0;
  for (int i = 0; i < t_nodes; ++i) s += f(2.0 * pi * i / t_nodes);
  return s * (2.0 * pi / t_nodes);
}

}  // namespace

double modified_kinetic_period_integral(const StandingWaveExpansion& w, int t_nodes) {
  return period_integral([&](double t) { return w.modified_kinetic_density(t); }, t_nodes);
}

double potential_period_integral(const StandingWaveExpansion& w, int t_nodes) {
  return period_integral([&](double t) { return w.potential_density(t); }, t_nodes);
}

double equipartition_residual(const StandingWaveExpansion& w, int t_nodes) {
  return modified_kinetic_period_integral(w, t_nodes) - potential_period_integral(w, t_nodes);
}

double period_integral_reference(double eps) { return pi * pi / 2.0 + 3.0 * pi * pi * eps * eps / 16.0; }

StandingWaveTable standing_wave_table(const std::vector<double>& eps, StandingWaveCoefficients c, int t_nodes) {
  StandingWaveTable out;
  std::vector<double> le, lk, lp, lq;
  for (double e : eps) {
    if (!(e >= 0.0 && e <= 0.3)) throw std::invalid_argument("amplitudes must lie in [0, 0.3]");
    const StandingWaveExpansion w(e, c);
    StandingWaveRow r;
    r.eps = e;
    r.kinetic = modified_kinetic_period_integral(w, t_nodes);
    r.potential = potential_period_integral(w, t_nodes);
    r.reference = period_integral_reference(e);
    r.kinetic_residual = r.kinetic - r.reference;
    r.potential_residual = r.potential - r.reference;
    r.equipartition = r.kinetic - r.potential;
    out.rows.push_back(r);
    if (e > 0.0) {
      le.push_back(std::log(e));
      lk.push_back(std::log(std::abs(r.kinetic_residual)));
      lp.push_back(std::log(std::abs(r.potential_residual)));
      lq.push_back(std::log(std::abs(r.equipartition)));
    }
  }
  if (le.size() >= 2) {
    out.kinetic_slope = fitted_slope(le, lk);
    out.potential_slope = fitted_slope(le, lp);
    out.equipartition_slope = fitted_slope(le, lq);
  }
  return out;
}

}  // namespace ww
