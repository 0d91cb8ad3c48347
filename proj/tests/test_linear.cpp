#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "vpfp/constants.hpp"
#include "vpfp/dispersion.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/interpolation.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/linear_flow.hpp"
#include "vpfp/penrose.hpp"
#include "vpfp/volterra.hpp"

using namespace vpfp;

namespace {

Grid flow_grid() {
  Grid g;
  g.Kmax = 2;
  g.Neta = 1600;
  g.eta_max = 40.0;
  return g;
}

// 1 + K~(z) for the nu = 0 kernel t e^{-k^2 t^2/2} / (2 pi), by adaptive
// quadrature on [0, inf).
cplx dielectric_oracle(cplx z, int k) {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  auto part = [&](bool imag) {
    return gauss_kronrod<double, 61>::integrate(
        [&](double t) {
          const double env = t * std::exp(-0.5 * k * k * t * t - z.real() * t) / kTwoPi;
          return imag ? -env * std::sin(z.imag() * t) : env * std::cos(z.imag() * t);
        },
        0.0, inf, 15, 1e-14);
  };
  return 1.0 + cplx(part(false), part(true));
}

}  // namespace

TEST_CASE("linear step is free transport at nu = 0") {
  const Grid g = flow_grid();
  SpectralState s(g, 0.0);
  for (int j = 0; j < g.num_eta(); ++j) {
    const double e = g.eta(j);
    s.at(1, j) = std::exp(-0.5 * e * e);
    s.at(-1, j) = std::exp(-0.5 * e * e);
  }
  SpectralState cur = s;
  for (int n = 0; n < 30; ++n) cur = linear_step(cur, 0.1);
  CHECK(cur.time == doctest::Approx(3.0));
  double err = 0.0;
  for (int j = 0; j < g.num_eta(); ++j) {
    const double src = g.eta(j) + 3.0;
    err = std::max(err, std::abs(cur.at(1, j) - std::exp(-0.5 * src * src)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("linear step composes with the exact multiplier at nu > 0") {
  const Grid g = flow_grid();
  const double nu = 1e-2, T = 4.0;
  SpectralState s(g, nu);
  for (int j = 0; j < g.num_eta(); ++j) {
    const double e = g.eta(j);
    s.at(1, j) = std::exp(-0.5 * e * e);
    s.at(-1, j) = std::exp(-0.5 * e * e);
  }
  SpectralState cur = s;
  for (int n = 0; n < 40; ++n) cur = linear_step(cur, T / 40);
  double err = 0.0;
  for (int j = 0; j < g.num_eta(); ++j) {
    const double zeta = g.eta(j);
    const double e0 = std::exp(-nu * T) * zeta + tau_nu(T, nu);
    const double exact = std::exp(-0.5 * e0 * e0) * std::exp(-nu * eta_bar_square_integral(T, 1.0, e0, nu));
    err = std::max(err, std::abs(cur.at(1, j) - exact));
  }
  // Off-node back-maps: cubic interpolation error accumulates over 40 steps.
  CHECK(err < 1e-5);
  CHECK_THROWS_AS(linear_step(s, -0.1), ArgumentError);
}

TEST_CASE("dt_max") {
  const Grid g = flow_grid();
  CHECK(dt_max(g, 0.0) == doctest::Approx(0.1));
  CHECK(dt_max(g, 1e-2) == doctest::Approx(0.1));
  CHECK(dt_max(g, 0.1) == doctest::Approx(0.1 / 8.0));
}

TEST_CASE("Fokker-Planck semigroup") {
  Grid g;
  g.Kmax = 2;
  g.Neta = 2000;
  g.eta_max = 25.0;
  SUBCASE("Gaussian of unit mass relaxes to the Maxwellian image") {
    std::vector<cplx> g0(g.num_eta());
    for (int j = 0; j < g.num_eta(); ++j) g0[j] = std::exp(-0.5 * 4.0 * g.eta(j) * g.eta(j));
    const auto out = fp_semigroup(g0, g, 2000.0, 0.01);
    double err = 0.0;
    for (int j = 0; j < g.num_eta(); ++j) err = std::max(err, std::abs(out[j] - std::exp(-0.5 * g.eta(j) * g.eta(j))));
    CHECK(err < 1e-8);
    CHECK(out[g.zero_index()] == g0[g.zero_index()]);
  }
  SUBCASE("Hermite eigenfunctions decay like e^{-n nu t}") {
    // (i eta)^n e^{-eta^2/2} is the Fourier image of an OU eigenfunction.
    for (int n = 1; n <= 3; ++n) {
      std::vector<cplx> g0(g.num_eta());
      for (int j = 0; j < g.num_eta(); ++j) g0[j] = std::pow(cplx(0.0, g.eta(j)), n) * std::exp(-0.5 * g.eta(j) * g.eta(j));
      for (double t : {1.0, 10.0, 50.0}) {
        const auto out = fp_semigroup(g0, g, t, 0.02);
        double err = 0.0;
        for (int j = 0; j < g.num_eta(); ++j) err = std::max(err, std::abs(out[j] - std::exp(-n * 0.02 * t) * g0[j]));
        CHECK(err < 1e-6);
      }
    }
  }
}

TEST_CASE("<t> / (<nu t> <tau_nu>) inequality") {
  std::vector<double> ts;
  for (int i = 0; i <= 400; ++i) ts.push_back(std::pow(10.0, -2.0 + 8.0 * i / 400.0));
  for (double nu : {1e-6, 1e-3, 5e-2}) {
    const NutReport r = nut_inequality_check(nu, ts);
    CHECK(r.sup_ratio <= r.bound);
  }
  CHECK_THROWS_AS(nut_inequality_check(0.2, ts), ArgumentError);
}

TEST_CASE("kernel K") {
  CHECK(kernel_K(0.0, 1, 0.0) == 0.0);
  CHECK(kernel_K(1.5, 2, 0.0) == doctest::Approx(1.5 * std::exp(-0.5 * 9.0) / kTwoPi));
  const double nu = 1e-3, t = 3.0;
  const double tau = tau_nu(t, nu);
  CHECK(kernel_K(t, 1, nu) == doctest::Approx(tau * mu_hat(tau) * S_shorthand(t, 1, nu)));
  CHECK_THROWS_AS(kernel_K(1.0, 0, 0.0), ArgumentError);
  const KernelTable tab = make_kernel_table(1, nu, 0.01, 100);
  CHECK(tab.size() == 101);
  CHECK(tab.K[50] == doctest::Approx(kernel_K(0.5, 1, nu)));
}

TEST_CASE("Laplace transform of the kernel vs quadrature") {
  for (int k : {1, 2}) {
    for (cplx z : {cplx(0.3, 0.0), cplx(0.05, 2.0), cplx(-0.5, 1.0), cplx(1.0, -7.0)}) {
      const cplx oracle = dielectric_oracle(z, k) - 1.0;
      CHECK(std::abs(laplace_K(z, k, 0.0) - oracle) < 1e-10);
    }
  }
  // nu > 0 against a direct quadrature of the kernel itself.
  const double nu = 1e-3;
  const cplx z(0.1, 1.5);
  using boost::math::quadrature::gauss_kronrod;
  auto part = [&](bool imag) {
    return gauss_kronrod<double, 61>::integrate(
        [&](double t) {
          const cplx v = kernel_K(t, 1, nu) * std::exp(-z * t);
          return imag ? v.imag() : v.real();
        },
        0.0, 40.0, 15, 1e-14);
  };
  CHECK(std::abs(laplace_K(z, 1, nu) - cplx(part(false), part(true))) < 1e-10);
}

TEST_CASE("dispersion roots") {
  const auto roots = dispersion_roots(1, 0.0);
  REQUIRE_FALSE(roots.empty());
  const cplx z0 = roots.front();
  // Independent check: the quadrature dielectric vanishes there.
  CHECK(std::abs(dielectric_oracle(z0, 1)) < 1e-8);
  // Frozen after the argument-principle search and the quadrature check.
  CHECK(z0.real() == doctest::Approx(-1.5886840072).epsilon(1e-9));
  CHECK(std::abs(z0.imag()) == doctest::Approx(1.4888380120).epsilon(1e-9));
  for (const cplx z : roots) CHECK(z.real() < 0.0);
}

TEST_CASE("Penrose margin") {
  const PenroseReport r = penrose_margin(0.0, kLambdaBar);
  CHECK(r.kappa_estimate > 0.0);
  CHECK(r.refinement_change < 0.05);
  CHECK(r.tail_bound > 0.0);
  CHECK_THROWS(penrose_margin(-1.0, kLambdaBar));
}

TEST_CASE("trapezoid convolution") {
  // (1 * t)(t) = t^2/2 is integrated exactly by the trapezoid rule.
  const double dt = 0.01;
  std::vector<double> a(201, 1.0), b(201);
  for (int i = 0; i <= 200; ++i) b[i] = i * dt;
  const auto c = convolve_trapezoid(a, b, dt);
  CHECK(c[200] == doctest::Approx(2.0).epsilon(1e-12));
  const auto gr = convolve_gregory(a, b, dt);
  CHECK(gr[200] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Volterra solve against a closed-form solution") {
  // rho = 1 - a \int rho  =>  rho = e^{-a t}.
  const double a = 0.7, dt = 0.01;
  KernelTable K;
  K.k = 1;
  K.dt = dt;
  for (int i = 0; i <= 500; ++i) {
    K.t.push_back(i * dt);
    K.K.push_back(a);
  }
  const std::vector<cplx> H(K.size(), 1.0);
  const auto rho = solve_volterra(H, dt, K);
  double err = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) err = std::max(err, std::abs(rho[i] - std::exp(-a * K.t[i])));
  CHECK(err < 1e-5);
}

TEST_CASE("resolvent identity and decay") {
  std::vector<double> t;
  for (int i = 0; i <= 2000; ++i) t.push_back(i * 0.01);
  for (int k = 1; k <= 3; ++k) {
    const KernelTable R = resolvent(k, 1e-3, t);
    CHECK(resolvent_identity_residual(R) < 1e-6);
    double early = 0.0, late = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double v = std::abs(R.R[i]) * k * std::exp(kLambdaBar * k * t[i]);
      (t[i] <= 10.0 ? early : late) = std::max(t[i] <= 10.0 ? early : late, v);
    }
    CHECK(late <= early);
  }
}
