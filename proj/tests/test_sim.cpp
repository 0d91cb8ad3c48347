#include <doctest.h>

#include <cmath>

#include "vpfp/constants.hpp"
#include "vpfp/diagnostics.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/simulator.hpp"

using namespace vpfp;

namespace {

SimConfig base_config() {
  SimConfig c;
  c.grid.Kmax = 4;
  c.grid.Neta = 800;
  c.grid.eta_max = 40.0;
  c.grid.Nv = 256;
  c.nu = 1e-2;
  c.dt = 0.05;
  c.T_end = 4.0;
  c.epsilon = 1e-2;
  c.initial = {Bump{1, 1.0 / kTwoPi, 0.0, 1.0}, Bump{2, 0.5 / kTwoPi, 0.0, 1.0}};
  return c;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("initial state") {
  const SimConfig c = base_config();
  const SpectralState s = initial_state(c);
  CHECK(s.reality_defect() < 1e-15);
  CHECK(s.mass_defect() == 0.0);
  CHECK(std::abs(s.at(1, s.grid.zero_index()) - cplx(c.epsilon / kTwoPi)) < 1e-15);
  SimConfig bad = c;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("density and field") {
  std::vector<cplx> rho{cplx(1.0, -2.0), 0.0, cplx(0.0, 3.0), 0.0, cplx(1.0, 2.0)};
  const auto E = efield(rho, 2);
  CHECK(E[2] == cplx(0.0));
  CHECK(std::abs(E[3]) == 0.0);
  CHECK(std::abs(E[4] - cplx(0.0, -0.5) * rho[4]) < 1e-15);
  CHECK(std::abs(E[0] - std::conj(E[4])) < 1e-15);
}

TEST_CASE("right-hand side of the zero state vanishes") {
  const SimConfig c = base_config();
  const SpectralState z(c.grid, c.nu);
  const SpectralState r = nonlinear_rhs(z);
  CHECK(r.max_abs() == 0.0);
}

TEST_CASE("short nonlinear run keeps mass and reality") {
  SimConfig c = base_config();
  const RunResult r = run(c);
  CHECK_FALSE(r.blew_up);
  CHECK(r.max_mass_defect < 1e-12);
  CHECK(r.max_reality_defect < 1e-12);
  CHECK(r.trace.times.back() == doctest::Approx(c.T_end));
  CHECK(r.trace.times.size() == static_cast<std::size_t>(c.steps() + 1));
}

TEST_CASE("amplitude scaling in the linear regime") {
  SimConfig c = base_config();
  c.nonlinear = false;
  c.T_end = 6.0;
  const auto full = run(c).trace.rho_series(1);
  c.epsilon *= 0.5;
  const auto half = run(c).trace.rho_series(1);
  std::vector<cplx> twice(half.size());
  for (std::size_t i = 0; i < half.size(); ++i) twice[i] = 2.0 * half[i];
  double scale = 0.0;
  for (cplx z : full) scale = std::max(scale, std::abs(z));
  CHECK(max_abs_diff(full, twice) / scale < 1e-13);

  SimConfig n = base_config();
  n.T_end = 6.0;
  const auto nl_full = run(n).trace.rho_series(1);
  n.epsilon *= 0.5;
  const auto nl_half = run(n).trace.rho_series(1);
  for (std::size_t i = 0; i < nl_half.size(); ++i) twice[i] = 2.0 * nl_half[i];
  CHECK(max_abs_diff(nl_full, twice) / scale < base_config().epsilon);
}

TEST_CASE("linear simulation satisfies the Volterra equation") {
  SimConfig c = base_config();
  c.nonlinear = false;
  c.T_end = 10.0;
  c.grid.Neta = 1600;  // residual is set by the eta interpolation error
  c.dt = 0.025;
  c.history_stride = 1;
  const RunResult r = run(c);
  const auto H = volterra_forcing_from_history(r.snapshots, r.trace, false);
  for (int k = 1; k <= 2; ++k) {
    std::vector<cplx> rho;
    for (const auto& s : r.snapshots) rho.push_back(s.at(k, s.grid.zero_index()));
    const auto res = volterra_residual(rho, H[k + c.grid.Kmax], c.dt, k, c.nu);
    double rm = 0.0, pm = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
      rm = std::max(rm, std::abs(res[i]));
      pm = std::max(pm, std::abs(rho[i]));
    }
    CHECK(rm / pm < 1e-4);
  }
}

TEST_CASE("shifted unknown is frozen under free transport") {
  SimConfig c = base_config();
  c.nu = 0.0;
  c.nonlinear = false;
  c.linear_field = false;
  c.grid.Neta = 1600;
  // Half-step shifts k dt/2 are whole grid steps, so the back-maps are exact.
  const SpectralState s = initial_state(c);
  SpectralState cur = s;
  for (int n = 0; n < 20; ++n) cur = step(cur, 0.1, c);
  for (double eta : {-3.0, 0.0, 1.3}) CHECK(std::abs(shifted_value(cur, 1, eta) - shifted_value(s, 1, eta)) < 1e-12);
  const SpectralState f = shifted_unknown(cur);
  const int j = f.grid.zero_index() + 7;
  CHECK(std::abs(f.at(2, j) - s.at(2, j)) < 1e-12);
}

TEST_CASE("energy-entropy") {
  SimConfig c = base_config();
  const SpectralState zero(c.grid, c.nu);
  CHECK(entropy_energy(zero) == 0.0);
  const SpectralState s = initial_state(c);
  CHECK(entropy_energy(s) > 0.0);
  SimConfig big = c;
  big.epsilon = 50.0;
  CHECK_THROWS_AS(entropy_energy(initial_state(big)), PositivityError);
}

TEST_CASE("bootstrap monitors") {
  SimConfig c = base_config();
  const GevreyWeight w = GevreyWeight::make(1.0, 0.5, 0.5);
  const StabilityConstants k = StabilityConstants::defaults();
  DensityTrace trace;
  const SpectralState zero(c.grid, c.nu);
  trace.append(zero);
  const BootstrapRecord z = bootstrap_functionals(zero, trace, w, k);
  CHECK(z.E_T == 0.0);
  CHECK(z.E_ED == 0.0);
  CHECK(z.H_rho == 0.0);
  CHECK(z.H_sh == 0.0);

  const SpectralState s = initial_state(c);
  DensityTrace t2;
  t2.append(s);
  const BootstrapRecord r = bootstrap_functionals(s, t2, w, k);
  CHECK(r.E_T > 0.0);
  CHECK(r.E_ED > 0.0);
  CHECK(r.H_sh == 0.0);  // no zero mode in the data
  CHECK(BootstrapMonitor::moment_weight(2) == 1e4);
}

TEST_CASE("stable small-amplitude run keeps the monitors bounded") {
  SimConfig c = base_config();
  c.T_end = 6.0;
  c.epsilon = 1e-3;
  c.bootstrap = true;
  c.diagnostic_stride = 20;
  c.weight = GevreyWeight::make(1.0, 0.5, 0.5);
  const RunResult r = run(c);
  REQUIRE(r.diagnostics.size() >= 2);
  const BootstrapRecord& first = r.diagnostics.front().bootstrap;
  for (const auto& d : r.diagnostics) {
    CHECK(d.bootstrap.E_T <= 10.0 * first.E_T);
    CHECK(d.bootstrap.E_ED <= 10.0 * first.E_ED);
  }
}
