#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ww {

using Field = Eigen::ArrayXd;
using Complex = std::complex<double>;
using Spectrum = Eigen::ArrayXcd;

class GridMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Uniform grid on the 2*pi periodic torus.
// Coefficients are f_hat(k) = (1/n) sum_j f_j exp(-i k x_j), k = 0..n/2.
class PeriodicGrid {
public:
  explicit PeriodicGrid(int n);

  int size() const { return n_; }
  int k_max() const { return n_ / 2; }
  double spacing() const;
  Field nodes() const;
  Field sample(const std::function<double(double)>& f) const;

  Spectrum forward(const Field& f) const;
  Field inverse(const Spectrum& c) const;

  // Same transforms on contiguous rows, used by the flattened solver.
  void forward_rows(const double* in, Complex* out, int rows) const;
  void inverse_rows(const Complex* in, double* out, int rows) const;

  // Symbol m(xi) evaluated for xi >= 0; the result must be conjugate-even
  // in xi for a real output. The Nyquist mode is always zeroed.
  Field apply_multiplier(const Field& f, const std::function<Complex(double)>& m) const;
  Field derivative(const Field& f) const;
  void derivative_rows(const double* in, double* out, int rows) const;

  double integrate(const Field& f) const;
  double integrate(const Field& f, const Field& g) const;
  double mean(const Field& f) const;

  // (sum over xi != 0 of |xi|^{2s} |f_hat(xi)|^2)^{1/2}
  double homogeneous_norm(const Field& f, double s) const;
  // (sum over xi of (1+xi^2)^s |f_hat(xi)|^2)^{1/2}
  double sobolev_norm(const Field& f, double s) const;

  // Product computed on a 3/2 padded grid and truncated back.
  Field dealiased_product(const Field& f, const Field& g) const;

  // Exponential taper on |k| > (2/3) k_max.
  Field filter(const Field& f, double strength, int order) const;

  void check(const Field& f) const;

private:
  int n_;
};

double max_abs(const Field& f);

}  // namespace ww
