#include "ww/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace ww {

namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Planning is not thread safe in FFTW; execution with the new-array
// interface is.
const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> r(n);
  std::vector<fftw_complex> c(n / 2 + 1);
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.r2c = fftw_plan_dft_r2c_1d(n, r.data(), c.data(), flags);
  p.c2r = fftw_plan_dft_c2r_1d(n, c.data(), r.data(), flags | FFTW_DESTROY_INPUT);
  return cache.emplace(n, p).first->second;
}

void r2c(int n, const double* in, Complex* out) {
  fftw_execute_dft_r2c(plans_for(n).r2c, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void c2r(int n, Complex* in, double* out) {
  fftw_execute_dft_c2r(plans_for(n).c2r, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace

PeriodicGrid::PeriodicGrid(int n) : n_(n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("grid size must be even and >= 4");
}

double PeriodicGrid::spacing() const { return 2.0 * std::numbers::pi / n_; }

Field PeriodicGrid::nodes() const {
  Field x(n_);
  for (int j = 0; j < n_; ++j) x[j] = j * spacing();
  return x;
}

Field PeriodicGrid::sample(const std::function<double(double)>& f) const {
  Field x = nodes();
  for (int j = 0; j < n_; ++j) x[j] = f(x[j]);
  return x;
}

void PeriodicGrid::check(const Field& f) const {
  if (f.size() != n_)
    throw GridMismatch("field has " + std::to_string(f.size()) + " nodes, grid has " +
                       std::to_string(n_));
  if (!f.allFinite()) throw std::invalid_argument("field has non-finite values");
}

Spectrum PeriodicGrid::forward(const Field& f) const {
  check(f);
  Spectrum c(n_ / 2 + 1);
  r2c(n_, f.data(), c.data());
  c /= double(n_);
  return c;
}

Field PeriodicGrid::inverse(const Spectrum& c) const {
  if (c.size() != n_ / 2 + 1) throw GridMismatch("spectrum length does not match grid");
  Spectrum tmp = c;
  Field f(n_);
  c2r(n_, tmp.data(), f.data());
  return f;
}

void PeriodicGrid::forward_rows(const double* in, Complex* out, int rows) const {
  const int m = n_ / 2 + 1;
  for (int r = 0; r < rows; ++r) {
    r2c(n_, in + r * n_, out + r * m);
    for (int k = 0; k < m; ++k) out[r * m + k] /= double(n_);
  }
}

void PeriodicGrid::inverse_rows(const Complex* in, double* out, int rows) const {
  const int m = n_ / 2 + 1;
  std::vector<Complex> tmp(m);
  for (int r = 0; r < rows; ++r) {
    std::copy(in + r * m, in + (r + 1) * m, tmp.begin());
    c2r(n_, tmp.data(), out + r * n_);
  }
}

Field PeriodicGrid::apply_multiplier(const Field& f, const std::function<Complex(double)>& m) const {
  Spectrum c = forward(f);
  for (int k = 0; k < n_ / 2; ++k) {
    const Complex v = m(double(k));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("multiplier is not finite at xi = " + std::to_string(k));
    c[k] *= v;
  }
  c[n_ / 2] = 0.0;
  return inverse(c);
}

Field PeriodicGrid::derivative(const Field& f) const {
  check(f);
  Field out(n_);
  derivative_rows(f.data(), out.data(), 1);
  return out;
}

void PeriodicGrid::derivative_rows(const double* in, double* out, int rows) const {
  const int m = n_ / 2 + 1;
  std::vector<Complex> c(m);
  for (int r = 0; r < rows; ++r) {
    r2c(n_, in + r * n_, c.data());
    for (int k = 0; k < m - 1; ++k) c[k] *= Complex(0.0, k / double(n_));
    c[m - 1] = 0.0;
    c2r(n_, c.data(), out + r * n_);
  }
}

double PeriodicGrid::integrate(const Field& f) const {
  check(f);
  return 2.0 * std::numbers::pi * f.mean();
}

double PeriodicGrid::integrate(const Field& f, const Field& g) const {
  check(f);
  check(g);
  return 2.0 * std::numbers::pi * (f * g).mean();
}

double PeriodicGrid::mean(const Field& f) const {
  check(f);
  return f.mean();
}

double PeriodicGrid::homogeneous_norm(const Field& f, double s) const {
  Spectrum c = forward(f);
  if (s < 0.0 && std::abs(c[0]) > 1e-10 * std::max(1.0, max_abs(f)))
    throw std::invalid_argument("negative order norm needs a mean-zero field");
  double sum = 0.0;
  for (int k = 1; k <= n_ / 2; ++k) {
    const double copies = (k == n_ / 2) ? 1.0 : 2.0;
    sum += copies * std::pow(double(k), 2.0 * s) * std::norm(c[k]);
  }
  return std::sqrt(sum);
}

double PeriodicGrid::sobolev_norm(const Field& f, double s) const {
  Spectrum c = forward(f);
  double sum = std::norm(c[0]);
  for (int k = 1; k <= n_ / 2; ++k) {
    const double copies = (k == n_ / 2) ? 1.0 : 2.0;
    sum += copies * std::pow(1.0 + double(k) * k, s) * std::norm(c[k]);
  }
  return std::sqrt(sum);
}

Field PeriodicGrid::dealiased_product(const Field& f, const Field& g) const {
  const int m = 2 * ((3 * n_ + 3) / 4);
  const int half = n_ / 2;
  Spectrum cf = forward(f), cg = forward(g);
  Spectrum pf = Spectrum::Zero(m / 2 + 1), pg = Spectrum::Zero(m / 2 + 1);
  pf.head(half) = cf.head(half);
  pg.head(half) = cg.head(half);
  Field uf(m), ug(m);
  c2r(m, pf.data(), uf.data());
  c2r(m, pg.data(), ug.data());
  Field prod = uf * ug;
  Spectrum cp(m / 2 + 1);
  r2c(m, prod.data(), cp.data());
  Spectrum out = Spectrum::Zero(half + 1);
  out.head(half) = cp.head(half) / double(m);
  return inverse(out);
}

Field PeriodicGrid::filter(const Field& f, double strength, int order) const {
  Spectrum c = forward(f);
  const double kmax = n_ / 2;
  const double kc = 2.0 * kmax / 3.0;
  for (int k = 0; k <= n_ / 2; ++k) {
    if (k > kc) c[k] *= std::exp(-strength * std::pow((k - kc) / (kmax - kc), order));
  }
  c[n_ / 2] = 0.0;
  return inverse(c);
}

double max_abs(const Field& f) { return f.size() ? f.abs().maxCoeff() : 0.0; }

}  // namespace ww
