#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/gevrey.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/interpolation.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"
#include "vpfp/transform.hpp"

using namespace vpfp;

namespace {

Grid small_grid() {
  Grid g;
  g.Kmax = 3;
  g.Neta = 512;
  g.eta_max = 32.0;
  g.Nv = 512;
  g.Nx = 16;
  g.v_max = 8.0;
  return g;
}

// Band-limited, Gaussian-in-v test field with several modes.
PhysicalField sample_field(const Grid& g) {
  PhysicalField f(g);
  for (int n = 0; n < g.Nx; ++n)
    for (int i = 0; i < g.Nv; ++i) {
      const double x = g.x(n), v = g.v(i);
      f.at(n, i) = std::exp(-0.5 * v * v) * (0.3 * std::cos(x) + 0.1 * v * std::sin(2.0 * x)) +
                   0.05 * std::exp(-0.5 * (v - 1.0) * (v - 1.0)) * std::cos(3.0 * x + 0.4);
    }
  return f;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  Grid g = small_grid();
  CHECK_NOTHROW(g.validate());
  CHECK(g.num_eta() == 513);
  CHECK(g.eta(g.zero_index()) == 0.0);
  CHECK(g.eta(0) == doctest::Approx(-32.0));
  CHECK(g.eta(g.Neta) == doctest::Approx(32.0));
  CHECK(g.v(g.Nv - 1) == doctest::Approx(8.0));

  Grid odd = g;
  odd.Neta = 511;
  CHECK_THROWS_AS(odd.validate(), ConfigError);
  Grid one = g;
  one.Kmax = 1;
  CHECK_THROWS_AS(one.validate(), ConfigError);
}

TEST_CASE("reality projection and mass defect") {
  Grid g = small_grid();
  SpectralState s(g, 0.0);
  s.at(1, 10) = {1.0, 2.0};
  CHECK(s.reality_defect() > 0.1);
  s.enforce_reality();
  CHECK(s.reality_defect() < 1e-15);
  CHECK(s.mass_defect() == 0.0);
}

TEST_CASE("physical -> spectral -> physical round trip") {
  const Grid g = small_grid();
  const PhysicalField f = sample_field(g);
  const SpectralState s = forward_transform(f, g);
  CHECK(s.reality_defect() < 1e-14);
  const PhysicalField back = inverse_transform(s);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    err = std::max(err, std::abs(back.values[i] - f.values[i]));
    scale = std::max(scale, std::abs(f.values[i]));
  }
  CHECK(err / scale < 1e-10);
}

TEST_CASE("Maxwellian transforms to its closed form") {
  // (2 pi)^{-1} \iint mu e^{-i eta v} dx dv at k = 0 is e^{-eta^2/2}/(2 pi).
  const Grid g = small_grid();
  PhysicalField f(g);
  for (int n = 0; n < g.Nx; ++n)
    for (int i = 0; i < g.Nv; ++i) f.at(n, i) = std::pow(kTwoPi, -1.5) * std::exp(-0.5 * g.v(i) * g.v(i));
  const SpectralState s = forward_transform(f, g);
  double err = 0.0;
  for (int j = 0; j < g.num_eta(); ++j) err = std::max(err, std::abs(s.at(0, j) - cplx(mu_hat(g.eta(j)))));
  CHECK(err < 1e-12);
  CHECK(std::abs(s.at(1, g.zero_index())) < 1e-14);
}

TEST_CASE("single-mode eta/v tables are mutually inverse") {
  const Grid g = small_grid();
  const EtaVTransform T(g);
  std::vector<cplx> f(g.num_eta()), v(g.Nv), back(g.num_eta());
  for (int j = 0; j < g.num_eta(); ++j) {
    const double e = g.eta(j);
    f[j] = cplx(1.0, 0.5 * e) * std::exp(-0.25 * (e - 2.0) * (e - 2.0));
  }
  T.to_v(f.data(), v.data());
  T.to_eta(v.data(), back.data());
  double err = 0.0;
  for (int j = 0; j < g.num_eta(); ++j) err = std::max(err, std::abs(back[j] - f[j]));
  CHECK(err < 1e-10);
}

TEST_CASE("window mass is reported") {
  Grid g = small_grid();
  PhysicalField f(g);
  for (int n = 0; n < g.Nx; ++n)
    for (int i = 0; i < g.Nv; ++i) f.at(n, i) = std::exp(-0.02 * g.v(i) * g.v(i));
  WarningSink w;
  forward_transform(f, g, 0.0, 0.0, &w);
  CHECK_FALSE(w.empty());
}

TEST_CASE("tau_nu and eta_bar limits") {
  CHECK(tau_nu(3.0, 0.0) == 3.0);
  CHECK(tau_nu(2.0, 1e-9) == doctest::Approx(2.0 - 2e-9).epsilon(1e-14));
  CHECK(tau_nu(1e4, 1.0) == doctest::Approx(1.0));
  CHECK(eta_bar(2.0, 1.0, 5.0, 0.0) == doctest::Approx(3.0));
  CHECK(eta_bar(0.7, 2.0, 1.0, 0.1) == doctest::Approx(std::exp(0.07) - 2.0 * std::expm1(0.07) / 0.1));
  CHECK_THROWS_AS(expm1_over_nu(1e4, 1.0), HorizonError);
}

TEST_CASE("S_factor closed form vs adaptive quadrature") {
  using boost::math::quadrature::gauss_kronrod;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double nu = std::pow(10.0, -5.0 + 4.0 * U(rng));
    const double t = 30.0 * U(rng);
    const double tau = t * U(rng);
    const double k = 1.0 + std::floor(4.0 * U(rng));
    const double eta = -20.0 + 40.0 * U(rng);
    auto integrand = [&](double s) {
      const double e = std::exp(nu * s) * eta - k * std::expm1(nu * s) / nu;
      return e * e;
    };
    const double I = gauss_kronrod<double, 61>::integrate(integrand, tau, t, 15, 1e-14);
    const double oracle = std::exp(-nu * I);
    worst = std::max(worst, std::abs(S_factor(t, tau, k, eta, nu) - oracle));
  }
  CHECK(worst < 1e-10);
  CHECK(S_factor(5.0, 5.0, 1.0, 2.0, 0.1) == 1.0);
  CHECK_THROWS_AS(S_factor(1.0, 2.0, 1.0, 0.0, 0.1), ArgumentError);
}

TEST_CASE("S shorthand is S_factor along the extraction characteristic") {
  // eta_bar(tau, k, k tau_nu(t)) starts the density characteristic.
  for (double nu : {1e-4, 1e-2}) {
    const double T = 7.0, k = 2.0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double u) { return std::pow(tau_nu(u, nu), 2); }, 0.0, T, 15, 1e-14);
    CHECK(tau_square_integral(T, nu) == doctest::Approx(I).epsilon(1e-12));
    CHECK(S_shorthand(T, k, nu) == doctest::Approx(std::exp(-nu * k * k * I)).epsilon(1e-12));
  }
}

TEST_CASE("Gevrey weight") {
  const GevreyWeight w = GevreyWeight::make(1.0, 0.5, 0.5);
  CHECK(w.b == doctest::Approx(0.5 / 8.0));
  CHECK_THROWS_AS(GevreyWeight::make(0.5, 1.0, 0.5), ConfigError);

  SUBCASE("lambda at t = 0 and equal endpoints") {
    CHECK(gevrey_lambda(0.0, 0.0, w) == doctest::Approx(0.5 + 2.0 * 0.5 / 8.0));
    const GevreyWeight flat = GevreyWeight::make(0.7, 0.7, 0.5);
    CHECK(gevrey_lambda(3.0, 10.0, flat) == doctest::Approx(0.7));
  }
  SUBCASE("lambda decreasing in t") {
    for (double r : {0.0, 3.0, 50.0}) CHECK(gevrey_lambda(10.0, r, w) < gevrey_lambda(1.0, r, w));
  }
  SUBCASE("subadditivity on sampled triples") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int failures = 0;
    for (const double s : {0.2, 0.5, 1.0}) {
      const GevreyWeight ws = GevreyWeight::make(2.0, 0.5, s);
      for (int n = 0; n < 2000; ++n) {
        const double t = std::pow(10.0, -2.0 + 6.0 * U(rng));
        const double x = std::pow(10.0, -2.0 + 5.0 * U(rng));
        const double y = std::pow(10.0, -2.0 + 5.0 * U(rng));
        if (gevrey_lambda(t, x + y, ws) > gevrey_lambda(t, x, ws) + gevrey_lambda(t, y, ws)) ++failures;
      }
    }
    CHECK(failures == 0);
  }
  SUBCASE("multiplier and overflow") {
    const double m = multiplier(0.0, 0.1, 1, 0.0, 0.0, w);
    CHECK(m == doctest::Approx(std::pow(std::sqrt(2.0), 7.0) * std::exp(gevrey_lambda(0.0, 1.0, w))));
    const GevreyWeight big = GevreyWeight::make(100.0, 50.0, 1.0);
    CHECK_THROWS_AS(multiplier(0.0, 0.0, 1, 1e3, 0.0, big), OverflowError);
  }
  SUBCASE("apply_multiplier with flat weight") {
    Grid g = small_grid();
    SpectralState s(g, 0.0);
    s.at(2, 300) = 1.0;
    const GevreyWeight flat = GevreyWeight::make(0.3, 0.3, 0.5);
    const SpectralState out = apply_multiplier(s, -flat.beta, flat, 1.0);
    CHECK(std::abs(out.at(2, 300) - std::exp(0.3)) < 1e-12);
  }
}

TEST_CASE("cubic interpolation") {
  Grid g = small_grid();
  std::vector<double> f(g.num_eta());
  for (int j = 0; j < g.num_eta(); ++j) f[j] = std::sin(0.3 * g.eta(j));
  CHECK(interpolate_eta(f.data(), g, g.eta(100)) == doctest::Approx(f[100]).epsilon(1e-15));
  CHECK(interpolate_eta(f.data(), g, 1.2345) == doctest::Approx(std::sin(0.3 * 1.2345)).epsilon(1e-6));
  CHECK(interpolate_eta(f.data(), g, 40.0) == 0.0);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials") {
  const GaussRule& r = gauss_legendre(8);
  double s0 = 0.0, s14 = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    s0 += r.w[i];
    s14 += r.w[i] * std::pow(r.x[i], 14);
  }
  CHECK(s0 == doctest::Approx(2.0));
  CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("pairwise sum and parallel_for") {
  std::vector<double> x(1001, 0.1);
  CHECK(pairwise_sum(x.data(), x.size()) == doctest::Approx(100.1));
  std::vector<int> hit(257, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
}
