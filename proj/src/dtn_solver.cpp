#include "ww/dtn_solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ww {

Depth Depth::finite(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("finite depth must be positive");
  return Depth(false, h);
}

Depth Depth::infinite(double truncation) {
  if (!(truncation >= 6.0)) throw std::invalid_argument("truncation depth for infinite depth must be >= 6");
  return Depth(true, truncation);
}

Field FlattenedField::bottom() const { return phi.row(phi.rows() - 1).transpose().array(); }
Field FlattenedField::surface() const { return phi.row(0).transpose().array(); }

DtnSolver::DtnSolver(const PeriodicGrid& grid, Depth depth, SolverOptions options)
    : grid_(grid), depth_(depth), options_(options), vgrid_(make_vertical_grid(options.nz, depth.h())) {
  const int rows = options_.nz + 1;
  const int n = grid_.size();
  const Eigen::MatrixXd d2 = vgrid_.dz * vgrid_.dz;
  flat_inverse_.reserve(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    const double kk = (k == n / 2) ? 0.0 : double(k);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, rows);
    a(0, 0) = 1.0;
    for (int i = 1; i < rows - 1; ++i) {
      a.row(i) = d2.row(i);
      a(i, i) -= kk * kk;
    }
    a.row(rows - 1) = vgrid_.dz.row(rows - 1);
    flat_inverse_.push_back(a.partialPivLu().inverse());
  }
}

void DtnSolver::check_geometry(const Field& eta) const {
  grid_.check(eta);
  const double h = depth_.h();
  const double lowest = eta.minCoeff();
  if (!(lowest > -h / 2.0))
    throw GeometryError("surface too deep for the flattening: inf eta = " + std::to_string(lowest) +
                        ", depth = " + std::to_string(h));
}

DtnSolver::Coefficients DtnSolver::coefficients(const Field& eta) const {
  const double h = depth_.h();
  Coefficients c;
  c.inv_jacobian = 1.0 / (1.0 + eta / h);
  c.eta_x = grid_.derivative(eta);
  const int rows = vgrid_.n + 1;
  c.shear.resize(rows, grid_.size());
  for (int i = 0; i < rows; ++i) {
    c.shear.row(i) = ((vgrid_.z[i] + h) / h) * c.eta_x.transpose();
  }
  return c;
}

void DtnSolver::derivatives(const Coefficients& c, const RowMatrix& phi, RowMatrix& d1, RowMatrix& d2) const {
  d1.noalias() = vgrid_.dz * phi;
  d1.array().rowwise() *= c.inv_jacobian.transpose();
  d2.resize(phi.rows(), phi.cols());
  grid_.derivative_rows(phi.data(), d2.data(), int(phi.rows()));
  d2.array() -= c.shear.array() * d1.array();
}

void DtnSolver::apply_operator(const Coefficients& c, const RowMatrix& phi, RowMatrix& out) const {
  RowMatrix u1, u2;
  derivatives(c, phi, u1, u2);
  RowMatrix t1 = vgrid_.dz * u1;
  RowMatrix t2 = vgrid_.dz * u2;
  RowMatrix u2x(phi.rows(), phi.cols());
  grid_.derivative_rows(u2.data(), u2x.data(), int(phi.rows()));
  out = t1;
  out.array() -= c.shear.array() * t2.array();
  out.array().rowwise() *= c.inv_jacobian.transpose();
  out += u2x;
  const int last = int(phi.rows()) - 1;
  out.row(0) = phi.row(0);
  out.row(last) = vgrid_.dz.row(last) * phi;
}

void DtnSolver::apply_flat_inverse(const RowMatrix& r, RowMatrix& out) const {
  const int rows = int(r.rows());
  const int n = grid_.size();
  const int m = n / 2 + 1;
  std::vector<Complex> spec(std::size_t(rows) * m);
  grid_.forward_rows(r.data(), spec.data(), rows);
  Eigen::MatrixXd re(rows, m), im(rows, m);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < m; ++k) {
      re(i, k) = spec[std::size_t(i) * m + k].real();
      im(i, k) = spec[std::size_t(i) * m + k].imag();
    }
  }
  Eigen::VectorXd tmp(rows);
  for (int k = 0; k < m; ++k) {
    tmp.noalias() = flat_inverse_[k] * re.col(k);
    re.col(k) = tmp;
    tmp.noalias() = flat_inverse_[k] * im.col(k);
    im.col(k) = tmp;
  }
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < m; ++k) spec[std::size_t(i) * m + k] = Complex(re(i, k), im(i, k));
  }
  out.resize(rows, n);
  grid_.inverse_rows(spec.data(), out.data(), rows);
}

FlattenedField DtnSolver::harmonic_extension(const Field& eta, const Field& psi) const {
  grid_.check(psi);
  check_geometry(eta);
  const double eta_scale = std::max(1.0, max_abs(eta));
  if (std::abs(eta.mean()) > 1e-8 * eta_scale)
    throw std::invalid_argument("surface elevation must have zero mean");

  const int rows = vgrid_.n + 1;
  const int n = grid_.size();
  const Coefficients coef = coefficients(eta);

  FlattenedField out;
  out.eta = eta;
  const double scale = max_abs(psi);
  if (scale == 0.0) {
    out.phi = RowMatrix::Zero(rows, n);
    out.d_vertical = out.phi;
    out.d_horizontal = out.phi;
    out.dtn = Field::Zero(n);
    return out;
  }

  RowMatrix b = RowMatrix::Zero(rows, n);
  b.row(0) = psi.transpose();
  RowMatrix x;
  apply_flat_inverse(b, x);

  const int mdim = options_.restart;
  std::vector<RowMatrix> basis(mdim + 1);
  Eigen::MatrixXd hess(mdim + 1, mdim);
  Eigen::VectorXd cs(mdim), sn(mdim), gvec(mdim + 1);
  RowMatrix r, ax, w;
  int iterations = 0;
  double residual = 0.0;

  auto preconditioned_residual = [&]() {
    apply_operator(coef, x, ax);
    RowMatrix diff = b - ax;
    apply_flat_inverse(diff, r);
    return r.cwiseAbs().maxCoeff() / scale;
  };

  residual = preconditioned_residual();
  while (residual > options_.tol && iterations < options_.max_iter) {
    const double beta = r.norm();
    basis[0] = r / beta;
    gvec.setZero();
    gvec[0] = beta;
    hess.setZero();
    int used = 0;
    for (int j = 0; j < mdim && iterations < options_.max_iter; ++j) {
      apply_operator(coef, basis[j], ax);
      apply_flat_inverse(ax, w);
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = (w.array() * basis[i].array()).sum();
        w -= hess(i, j) * basis[i];
      }
      hess(j + 1, j) = w.norm();
      ++iterations;
      used = j + 1;
      const bool breakdown = hess(j + 1, j) <= 1e-300;
      if (!breakdown) basis[j + 1] = w / hess(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
        hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double den = std::hypot(hess(j, j), hess(j + 1, j));
      cs[j] = hess(j, j) / den;
      sn[j] = hess(j + 1, j) / den;
      hess(j, j) = den;
      hess(j + 1, j) = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      if (breakdown || std::abs(gvec[j + 1]) <= 0.1 * options_.tol * scale) break;
    }
    Eigen::VectorXd y = hess.topLeftCorner(used, used).triangularView<Eigen::Upper>().solve(gvec.head(used));
    for (int i = 0; i < used; ++i) x += y[i] * basis[i];
    residual = preconditioned_residual();
  }
  if (residual > options_.accept)
    throw ConvergenceError("harmonic extension did not converge: residual " + std::to_string(residual) +
                           " after " + std::to_string(iterations) + " iterations");

  out.phi = std::move(x);
  derivatives(coef, out.phi, out.d_vertical, out.d_horizontal);
  out.dtn = out.d_vertical.row(0).transpose().array() - coef.eta_x * out.d_horizontal.row(0).transpose().array();
  out.iterations = iterations;
  out.residual = residual;
  return out;
}

Field DtnSolver::dtn_apply(const Field& eta, const Field& psi) const {
  return harmonic_extension(eta, psi).dtn;
}

Field DtnSolver::dtn_flat(const Field& psi) const {
  if (depth_.is_infinite()) return grid_.apply_multiplier(psi, [](double k) { return Complex(k, 0.0); });
  const double h = depth_.h();
  return grid_.apply_multiplier(psi, [h](double k) { return Complex(k * std::tanh(h * k), 0.0); });
}

TraceData DtnSolver::surface_traces(const Field& eta, const Field& psi, const Field& g_psi) const {
  grid_.check(g_psi);
  TraceData t;
  t.g_psi = g_psi;
  t.eta_x = grid_.derivative(eta);
  t.psi_x = grid_.derivative(psi);
  t.B = (g_psi + t.eta_x * t.psi_x) / (1.0 + t.eta_x.square());
  t.V = t.psi_x - t.B * t.eta_x;
  return t;
}

Field DtnSolver::dtn_shape_derivative(const Field& eta, const Field& psi, const Field& zeta) const {
  grid_.check(zeta);
  const TraceData t = surface_traces(eta, psi, dtn_apply(eta, psi));
  return -dtn_apply(eta, t.B * zeta) - grid_.derivative(t.V * zeta);
}

Field DtnSolver::bottom_gradx(const FlattenedField& phi) const {
  return phi.d_horizontal.row(phi.d_horizontal.rows() - 1).transpose().array();
}

double DtnSolver::volume_energy(const FlattenedField& phi, double w_vertical, double w_horizontal) const {
  const Field jac = 1.0 + phi.eta / depth_.h();
  const int rows = int(phi.phi.rows());
  double total = 0.0;
  for (int i = 0; i < rows; ++i) {
    const Field v = phi.d_vertical.row(i).transpose().array();
    const Field hz = phi.d_horizontal.row(i).transpose().array();
    total += vgrid_.weights[i] * ((w_vertical * v.square() + w_horizontal * hz.square()) * jac).sum();
  }
  return total * grid_.spacing();
}

}  // namespace ww
