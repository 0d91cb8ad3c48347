#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "vpfp/constants.hpp"
#include "vpfp/echo.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/experiment.hpp"
#include "vpfp/fit.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/gevrey.hpp"
#include "vpfp/io.hpp"
#include "vpfp/kernel_scaling.hpp"
#include "vpfp/svg.hpp"

using namespace vpfp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vpfp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("echo chain product") {
  SUBCASE("psi at k = 1 and domain errors") {
    const double nu = 1e-4, a = 0.2, eta = 100.0;
    CHECK(psi(1, nu, a, eta) == doctest::Approx(std::pow(nu, a) * eta * std::exp(-std::cbrt(nu) * eta)));
    CHECK(psi(2, 1e-30, a, eta) == doctest::Approx(std::pow(1e-30, a) * eta / 8.0).epsilon(1e-8));
    CHECK(log_psi(3, nu, a, eta) == doctest::Approx(std::log(psi(3, nu, a, eta))));
    CHECK_THROWS_AS(psi(0, nu, a, eta), ArgumentError);
    CHECK_THROWS_AS(psi(1, 0.0, a, eta), ArgumentError);
  }
  SUBCASE("maximiser of psi") {
    // nu^{1/3} eta = 30 puts the continuous maximiser on k = 10.
    const double nu = 1e-6, a = 0.2, eta = 30.0 / std::cbrt(nu);
    const double peak = 27.0 * std::exp(-3.0) * std::pow(nu, a - 1.0) / (eta * eta);
    CHECK(psi(10, nu, a, eta) == doctest::Approx(peak).epsilon(1e-12));
    CHECK(psi(9, nu, a, eta) < peak);
    CHECK(psi(11, nu, a, eta) < peak);
  }
  SUBCASE("regime (iii) chains stay below one") {
    const EchoRegimeReport r = max_chain_product(1e-2, 0.0, 1e3, 300);
    CHECK(r.regime == EchoRegime::iii);
    CHECK(r.log_sup <= 0.0);
  }
  SUBCASE("regimes") {
    CHECK(echo_regime(1e-6, 0.2, 10.0) == EchoRegime::i);
    CHECK(echo_regime(1e-6, 0.2, 1e4) == EchoRegime::iii);
  }
  SUBCASE("cap handling") {
    const double nu = 1e-6, a = 0.1, eta = 200.0;
    const int cap = minimal_chain_cap(nu, a, eta);
    CHECK_THROWS_AS(max_chain_product(nu, a, eta, cap - 1), ArgumentError);
    const EchoRegimeReport r = max_chain_product(nu, a, eta, cap + 5);
    CHECK(r.k1 <= r.k2);
    CHECK(r.log_sup <= echo_log_bound(nu, a, eta));
  }
  SUBCASE("brute force agrees with an exhaustive interval search") {
    const double nu = 1e-5, a = 0.25, eta = 3e3;
    const int cap = minimal_chain_cap(nu, a, eta) + 5;
    double best = -INFINITY;
    for (int k1 = 1; k1 <= cap; ++k1) {
      double acc = 0.0;
      for (int k2 = k1; k2 <= cap; ++k2) {
        acc += log_psi(k2, nu, a, eta);
        best = std::max(best, acc);
      }
    }
    CHECK(max_chain_product(nu, a, eta, cap).log_sup == doctest::Approx(best).epsilon(1e-12));
  }
  SUBCASE("growth envelope") {
    const auto e = growth_envelope(1e-4, 0.2, 1e3);
    CHECK(e.first <= e.second);
    CHECK_THROWS_AS(growth_envelope(1e-4, 0.4, 1e3), ArgumentError);
  }
}

TEST_CASE("threshold exponent") {
  CHECK(threshold_exponent(0.2) == doctest::Approx(1.0 / 6.0));
  CHECK(threshold_exponent(0.0 + 1e-12) == doctest::Approx(1.0 / 3.0));
  CHECK(threshold_exponent(0.5) == 0.0);
  CHECK_THROWS_AS(threshold_exponent(0.0), ArgumentError);
  CHECK_THROWS_AS(threshold_exponent(1.5), ArgumentError);
}

TEST_CASE("rate fits on synthetic data") {
  std::vector<double> x, y;
  SUBCASE("exponential") {
    for (int i = 0; i <= 40; ++i) {
      x.push_back(0.5 * i);
      y.push_back(3.0 * std::exp(-0.5 * x.back()));
    }
    const FitResult f = fit_rate(x, y, FitModel::exponential, 0.0, 100.0);
    CHECK(f.rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.points == 41);
    const FitResult w = fit_rate(x, y, FitModel::exponential, 5.0, 10.0);
    CHECK(w.points == 11);
  }
  SUBCASE("power") {
    for (double nu : {1e-3, 1e-4, 1e-5, 1e-6}) {
      x.push_back(nu);
      y.push_back(2.0 * std::pow(nu, -1.0 / 3.0));
    }
    const FitResult f = fit_rate(x, y, FitModel::power, 0.0, 1.0);
    CHECK(-f.rate == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
  }
  SUBCASE("stretched") {
    for (int i = 1; i <= 30; ++i) {
      x.push_back(i);
      y.push_back(std::exp(-0.01 * x.back() * x.back() * x.back()));
    }
    CHECK(fit_rate(x, y, FitModel::stretched, 0.0, 100.0).rate == doctest::Approx(0.01).epsilon(1e-10));
  }
  SUBCASE("errors") {
    x = {1.0, 2.0, 3.0};
    y = {1.0, -1.0, 0.5};
    CHECK_THROWS_AS(fit_rate(x, y, FitModel::exponential, 0.0, 10.0), WindowError);
    CHECK_THROWS_AS(fit_rate(x, {1.0, 1.0, 1.0}, FitModel::exponential, 5.0, 10.0), WindowError);
  }
}

TEST_CASE("local maxima and decay time") {
  const std::vector<double> y{0.0, 2.0, 1.0, 1.0, 3.0, 0.5, 0.7};
  const auto m = local_maxima(y);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == 1);
  CHECK(m[1] == 4);
  std::vector<double> t, v;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    v.push_back(std::exp(-t.back()));
  }
  CHECK(decay_time(t, v, std::exp(3.0)) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::isnan(decay_time(t, v, 1e9)));
}

TEST_CASE("single kernel term") {
  const GevreyWeight w = GevreyWeight::make(1.0, 0.5, 0.5);
  const StabilityConstants c = StabilityConstants::defaults();
  const double nu = 1e-3;
  const double t = 5.0, tau = 2.0;
  const int k = 2, l = 1;
  // Assemble the documented product independently.
  const double tt = tau_nu(t, nu), ts = tau_nu(tau, nu);
  const double r = std::hypot(k, k * tt);
  const double expected = (1.0 / l) * bracket(ts) *
                          std::pow(bracket(k - l, k * tt - l * ts), -w.beta + 1.5) *
                          std::sqrt(S_shorthand(t - tau, k, nu)) *
                          std::exp(0.5 * gevrey_lambda(tt, r, w) - 0.5 * gevrey_lambda(ts, r, w)) *
                          std::exp(-c.delta1 * std::cbrt(nu) * t / 2.0 - nu * t);
  CHECK(kernel_kl(t, tau, k, l, nu, w, c) == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(kernel_kl(t, tau, k, 0, nu, w, c), ArgumentError);
  CHECK(kernel_sum_integral(t, k, nu, w, c, -3, 5) > 0.0);
}

TEST_CASE("kernel-sum supremum caps") {
  const GevreyWeight w = GevreyWeight::make(1001.0, 1.0, 0.5);
  const StabilityConstants c = StabilityConstants::defaults();
  KernelSumOptions o;
  o.n_times = 12;
  const KernelSupremum s = kernel_sum_supremum(1e-2, w, c, o);
  CHECK(s.M > 0.0);
  CHECK(s.cap_change < 0.1);
  CHECK(s.argmax_k >= 1);
}

TEST_CASE("csv, snapshot and json output") {
  const fs::path dir = scratch_dir("io");
  CHECK(format_number(0.1) == "0.10000000000000001");
  write_csv((dir / "a.csv").string(), {"x", "y"}, {{1.0, 2.0}, {3.0, 4.5}});
  std::ifstream in(dir / "a.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y");
  std::getline(in, line);
  CHECK(line == "1,2");

  Grid g;
  g.Kmax = 2;
  g.Neta = 16;
  g.eta_max = 4.0;
  SpectralState s(g, 1e-3, 2.5);
  s.at(1, 3) = cplx(0.25, -1.0 / 3.0);
  s.at(-1, 13) = std::conj(s.at(1, 3));
  write_snapshot((dir / "s.csv").string(), s);
  const SpectralState back = read_snapshot((dir / "s.csv").string());
  CHECK(back.grid == g);
  CHECK(back.time == 2.5);
  CHECK(back.nu == 1e-3);
  CHECK(back.values == s.values);

  EchoRegimeReport rep;
  rep.regime = EchoRegime::ii;
  const auto j = to_json(rep);
  CHECK(j.at("regime") == "ii");
  write_json((dir / "r.json").string(), j);
  CHECK(fs::exists(dir / "r.json"));
  CHECK_THROWS(read_snapshot((dir / "missing.csv").string()));
}

TEST_CASE("svg rendering") {
  Plot p{"title <a&b>", "t", "y", false, true, {}};
  p.series.push_back({"s", {0.0, 1.0, 2.0}, {1.0, 0.1, 0.01}, false});
  p.series.push_back({"m", {0.5}, {0.5}, true});
  const std::string svg = render_svg(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("&lt;a&amp;b&gt;") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("circle") != std::string::npos);
}

TEST_CASE("configuration parsing") {
  const fs::path dir = scratch_dir("cfg");
  {
    std::ofstream f(dir / "c.cfg");
    f << "# comment\n nu = 1e-3 \n\necho.eta0=25\nlinear-run.dt=0.2\nnus = 1e-2, 1e-3\n";
  }
  const Settings s = read_config_file((dir / "c.cfg").string());
  REQUIRE(s.size() == 4);
  CHECK(s[0].first == "nu");
  CHECK(s[0].second == "1e-3");

  Params p("echo", s);
  CHECK(p.real("nu", 0.0) == 1e-3);
  CHECK(p.real("eta0", 30.0) == 25.0);
  CHECK(p.reals("nus", {}) == std::vector<double>{1e-2, 1e-3});
  CHECK_NOTHROW(p.finish());

  Params q("echo", {{"eta0", "30"}, {"bogus", "1"}});
  q.real("eta0", 1.0);
  CHECK_THROWS_AS(q.finish(), ConfigError);
  Params r("echo", {{"eta0", "abc"}});
  CHECK_THROWS_AS(r.real("eta0", 1.0), ConfigError);
  CHECK_THROWS_AS(parse_setting("novalue"), ConfigError);
  CHECK_THROWS_AS(read_config_file((dir / "none.cfg").string()), ConfigError);
}

TEST_CASE("experiment dispatch") {
  CHECK(is_experiment("echo"));
  CHECK_FALSE(is_experiment("nope"));
  CHECK(experiment_names().size() == 9);
  const fs::path dir = scratch_dir("exp");
  ExperimentSpec spec{"penrose", {}, dir.string()};
  const ExperimentResult r = run_experiment(spec);
  CHECK(r.passed());
  CHECK(fs::exists(dir / "checks.json"));
  ExperimentSpec bad{"penrose", {{"bogus", "1"}}, dir.string()};
  CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}
