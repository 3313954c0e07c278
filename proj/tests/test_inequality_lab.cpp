#include "ww/inequality_lab.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ww;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("sampler respects its caps") {
  const PeriodicGrid grid(64);
  SampleSpec spec;
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 rng(sample_seed(spec.seed, i));
    const Field eta = random_surface(grid, rng, spec, 1.0);
    const Field psi = random_potential(grid, rng, spec);
    CHECK(std::abs(grid.mean(eta)) <= 1e-15);
    CHECK(max_abs(grid.derivative(eta)) <= spec.slope_cap * (1.0 + 1e-12));
    CHECK(eta.minCoeff() >= -spec.depth_fraction * (1.0 + 1e-12));
    CHECK(max_abs(psi) == Approx(spec.amplitude));
  }
  CHECK(sample_seed(1, 0) != sample_seed(1, 1));
  CHECK(sample_seed(7, 3) == sample_seed(7, 3));
}

TEST_CASE("samples are reproducible from their seed") {
  const PeriodicGrid grid(32);
  std::mt19937_64 a(sample_seed(5, 2)), b(sample_seed(5, 2));
  CHECK(max_abs(random_profile(grid, a, 6) - random_profile(grid, b, 6)) == 0.0);
  std::mt19937_64 c(1);
  CHECK_THROWS(random_profile(grid, c, 16));
}

TEST_CASE("quadratic bounds hold on the ensemble") {
  const PeriodicGrid grid(64);
  SampleSpec spec;
  spec.count = 25;
  const DtnSolver finite(grid, Depth::finite(1.0), {.nz = 32});
  for (const auto& r : check_dtn_quadratic_bounds(finite, spec)) {
    CAPTURE(r.name);
    CHECK(r.violations == 0);
    CHECK(r.samples == 25);
  }
  const DtnSolver deep(grid, Depth::infinite(), {.nz = 48});
  const auto inf = check_dtn_quadratic_bounds(deep, spec);
  CHECK(inf[2].name == "quadratic_upper_infinite");
  CHECK(inf[2].violations == 0);
}

TEST_CASE("Cauchy-Schwarz is an equality when the arguments coincide") {
  const PeriodicGrid grid(32);
  const DtnSolver solver(grid, Depth::finite(1.0), {.nz = 24});
  const Field x = grid.nodes();
  const Field eta = 0.2 * x.cos();
  const Field g = solver.dtn_apply(eta, eta);
  const double ee = grid.integrate(eta, g);
  CHECK(std::abs(ee) == Approx(std::sqrt(ee) * std::sqrt(ee)).epsilon(1e-14));
}

TEST_CASE("trace lower bound and duality estimate") {
  const PeriodicGrid grid(64);
  SampleSpec spec;
  spec.count = 25;
  const DtnSolver solver(grid, Depth::finite(1.0), {.nz = 32});
  const BoundReport t = check_trace_lower_bound(solver, spec);
  CHECK(t.violations == 0);
  CHECK(t.constant > 0.0);
  const BoundReport d = check_duality_estimate(solver, spec);
  CHECK(d.violations == 0);
  CHECK(std::isfinite(d.constant));
  CHECK_THROWS(check_duality_estimate(DtnSolver(grid, Depth::finite(0.5)), spec));
}

TEST_CASE("duality ratio for the flat cosine pair") {
  // Flat-geometry version: G(0) in place of G(sigma), sigma = 0.3 cos x, f = cos x.
  const PeriodicGrid grid(32);
  const Field x = grid.nodes();
  const DtnSolver solver(grid, Depth::finite(3.0), {.nz = 32});
  const Field s = 0.3 * x.cos();
  const Field f = x.cos();
  const double lhs = std::abs(grid.integrate(s, f));
  const double form = grid.integrate(f, solver.dtn_apply(Field::Zero(32), f));
  CHECK(lhs == Approx(0.3 * pi).epsilon(1e-14));
  CHECK(form == Approx(pi * std::tanh(3.0)).epsilon(1e-10));
  const double rhs = grid.homogeneous_norm(s, -0.5) * std::sqrt(1.0 + 0.3) * std::sqrt(form);
  CHECK(grid.homogeneous_norm(s, -0.5) == Approx(0.3 * std::sqrt(0.5)).epsilon(1e-14));
  CHECK(lhs / rhs == Approx(std::sqrt(2.0 * pi / (1.3 * std::tanh(3.0)))).epsilon(1e-9));
}

TEST_CASE("measured constants are stable under refinement") {
  SampleSpec spec;
  spec.count = 15;
  const PeriodicGrid coarse(64), fine(128);
  const DtnSolver a(coarse, Depth::finite(1.0), {.nz = 32});
  const DtnSolver b(fine, Depth::finite(1.0), {.nz = 64});
  const double t1 = check_trace_lower_bound(a, spec).constant;
  const double t2 = check_trace_lower_bound(b, spec).constant;
  CHECK(std::abs(t2 - t1) <= 0.05 * t1);
  const double d1 = check_duality_estimate(a, spec).constant;
  const double d2 = check_duality_estimate(b, spec).constant;
  CHECK(std::abs(d2 - d1) <= 0.05 * d1);
}

TEST_CASE("structural properties") {
  const PeriodicGrid grid(64);
  SampleSpec spec;
  spec.count = 20;
  const DtnSolver solver(grid, Depth::finite(1.0), {.nz = 32});
  const DtnStructureReport r = check_dtn_structure(solver, spec);
  CHECK(r.symmetry <= 1e-9);
  CHECK(r.positivity >= -1e-10);
  CHECK(r.mean <= 1e-10);
  CHECK(r.self_flux <= 1.0 + 1e-8);
}

TEST_CASE("bottom decay") {
  const PeriodicGrid grid(32);
  const Field x = grid.nodes();
  const BottomDecayReport r = check_bottom_decay(grid, {2.0, 4.0, 6.0, 8.0}, 0.2 * x.cos(), x.cos(), {.nz = 32});
  CHECK(r.slope <= -0.25);
  // Flat analogue: bottom energy pi / cosh(h)^2, slope close to -2.
  CHECK(r.slope == Approx(-2.0).epsilon(0.05));
  const BottomDecayReport c =
      check_bottom_decay(grid, {2.0, 4.0}, 0.2 * x.cos(), Field::Constant(32, 1.0), {.nz = 32});
  for (double e : c.bottom_energy) CHECK(e <= 1e-20);
  CHECK_THROWS(check_bottom_decay(grid, {1.0, 4.0}, 0.2 * x.cos(), x.cos()));
}

TEST_CASE("slope fit") {
  CHECK(fitted_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == Approx(2.0));
  CHECK_THROWS(fitted_slope({1.0}, {1.0}));
}
