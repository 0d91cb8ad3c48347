#include "vpfp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vpfp/constants.hpp"
#include "vpfp/diagnostics.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/linear_flow.hpp"
#include "vpfp/parallel.hpp"

namespace vpfp {

void SimConfig::validate() const {
  grid.validate();
  if (nu < 0.0) throw ConfigError("sim: nu must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("sim: dt must be > 0");
  if (dt > dt_max(grid, nu) * (1.0 + 1e-12))
    throw ConfigError("sim: dt exceeds dt_max = " + std::to_string(dt_max(grid, nu)));
  if (!(T_end >= 0.0)) throw ConfigError("sim: T_end must be >= 0");
  if (!(epsilon >= 0.0)) throw ConfigError("sim: epsilon must be >= 0");
  if (history_stride < 0 || diagnostic_stride < 0) throw ConfigError("sim: strides must be >= 0");
  for (const auto& b : initial) {
    if (b.k == 0 || std::abs(b.k) > grid.Kmax) throw ConfigError("sim: bump mode must satisfy 0 < |k| <= Kmax");
    if (!(b.sigma > 0.0)) throw ConfigError("sim: bump width must be > 0");
  }
  weight.validate(grid.d);
}

int SimConfig::steps() const { return static_cast<int>(std::llround(T_end / dt)); }

void DensityTrace::append(const SpectralState& state) {
  Kmax = state.grid.Kmax;
  times.push_back(state.time);
  auto r = density(state);
  efield.push_back(vpfp::efield(r, Kmax));
  rho.push_back(std::move(r));
  std::vector<double> norms(static_cast<std::size_t>(state.grid.num_modes()));
  for (int k = -Kmax; k <= Kmax; ++k) norms[k + Kmax] = state.mode_norm(k);
  mode_norm.push_back(std::move(norms));
}

std::vector<cplx> DensityTrace::rho_series(int k) const {
  std::vector<cplx> out;
  out.reserve(rho.size());
  for (const auto& r : rho) out.push_back(r[static_cast<std::size_t>(k + Kmax)]);
  return out;
}

std::vector<double> DensityTrace::mode_norm_series(int k) const {
  std::vector<double> out;
  out.reserve(mode_norm.size());
  for (const auto& r : mode_norm) out.push_back(r[static_cast<std::size_t>(k + Kmax)]);
  return out;
}

void RunResult::rethrow_if_failed() const {
  if (blew_up) throw BlowUpError(failure, blowup_time);
}

SpectralState initial_state(const SimConfig& config) {
  SpectralState s(config.grid, config.nu, 0.0);
  const Grid& g = config.grid;
  for (const auto& b : config.initial) {
    for (int j = 0; j < g.num_eta(); ++j) {
      const double eta = g.eta(j);
      const double up = std::exp(-0.5 * (eta - b.eta0) * (eta - b.eta0) / (b.sigma * b.sigma));
      const double down = std::exp(-0.5 * (eta + b.eta0) * (eta + b.eta0) / (b.sigma * b.sigma));
      s.at(b.k, j) += config.epsilon * b.amplitude * up;
      s.at(-b.k, j) += config.epsilon * std::conj(b.amplitude) * down;
    }
  }
  return s;
}

std::vector<cplx> density(const SpectralState& state) {
  std::vector<cplx> r(static_cast<std::size_t>(state.grid.num_modes()));
  for (int k = -state.grid.Kmax; k <= state.grid.Kmax; ++k) r[k + state.grid.Kmax] = state.at(k, state.grid.zero_index());
  return r;
}

std::vector<cplx> efield(const std::vector<cplx>& rho, int Kmax) {
  std::vector<cplx> e(rho.size(), 0.0);
  for (int k = -Kmax; k <= Kmax; ++k)
    if (k != 0) e[k + Kmax] = cplx(0.0, -1.0 / k) * rho[k + Kmax];
  return e;
}

SpectralState nonlinear_rhs(const SpectralState& state, bool nonlinear, bool linear_field) {
  const Grid& g = state.grid;
  const int K = g.Kmax, ne = g.num_eta();
  SpectralState out(g, state.nu, state.time);
  const auto rho = density(state);
  std::vector<double> eta(static_cast<std::size_t>(ne)), mu(static_cast<std::size_t>(ne));
  for (int j = 0; j < ne; ++j) {
    eta[j] = g.eta(j);
    mu[j] = mu_hat(eta[j]);
  }
  parallel_for(static_cast<std::size_t>(g.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - K;
    cplx* dst = out.mode(k);
    if (linear_field && k != 0) {
      const cplx c = -rho[k + K] / static_cast<double>(k);
      for (int j = 0; j < ne; ++j) dst[j] += c * eta[j] * mu[j];
    }
    if (nonlinear) {
      for (int l = -K; l <= K; ++l) {
        if (l == 0 || std::abs(k - l) > K) continue;
        const cplx c = -rho[l + K] / static_cast<double>(l);
        if (c == cplx(0.0)) continue;
        const cplx* src = state.mode(k - l);
        for (int j = 0; j < ne; ++j) dst[j] += c * eta[j] * src[j];
      }
    }
  });
  return out;
}

namespace {

void merge_warnings(std::vector<Warning>& into, const WarningSink& from) {
  for (const auto& w : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](const Warning& m) { return m.what == w.what; });
    if (it == into.end())
      into.push_back(w);
    else
      it->residual = std::max(it->residual, w.residual);
  }
}

void axpy(SpectralState& y, double a, const SpectralState& x) {
  for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
}

}  // namespace

SpectralState step(const SpectralState& state, double dt, const SimConfig& config, WarningSink* warnings) {
  SpectralState h = linear_step(state, 0.5 * dt, warnings);
  if (config.nonlinear || config.linear_field) {
    const SpectralState k1 = nonlinear_rhs(h, config.nonlinear, config.linear_field);
    SpectralState stage = h;
    axpy(stage, dt, k1);
    const SpectralState k2 = nonlinear_rhs(stage, config.nonlinear, config.linear_field);
    axpy(h, 0.5 * dt, k1);
    axpy(h, 0.5 * dt, k2);
  }
  h = linear_step(h, 0.5 * dt, warnings);
  if (!h.all_finite()) throw BlowUpError("non-finite values in the state", h.time);
  return h;
}

RunResult run(const SimConfig& config) {
  config.validate();
  RunResult res;
  SpectralState h = initial_state(config);
  const int n = config.steps();
  BootstrapMonitor monitor(config.weight, config.constants);

  auto record = [&](const SpectralState& s, int index) {
    res.trace.append(s);
    res.max_mass_defect = std::max(res.max_mass_defect, s.mass_defect());
    if (config.history_stride > 0 && index % config.history_stride == 0) res.snapshots.push_back(s);
    if (config.diagnostic_stride > 0 && index % config.diagnostic_stride == 0) {
      DiagnosticSample d;
      d.time = s.time;
      d.entropy = std::numeric_limits<double>::quiet_NaN();
      if (config.entropy) {
        try {
          d.entropy = entropy_energy(s);
          d.entropy_available = true;
        } catch (const PositivityError&) {
        }
      }
      if (config.bootstrap) d.bootstrap = monitor.sample(s, res.trace);
      res.diagnostics.push_back(d);
    }
  };

  record(h, 0);
  for (int i = 1; i <= n; ++i) {
    WarningSink sink;
    try {
      h = step(h, config.dt, config, &sink);
      merge_warnings(res.warnings, sink);
    } catch (const BlowUpError& e) {
      res.blew_up = true;
      res.blowup_time = e.time();
      res.failure = e.what();
      return res;
    } catch (const NumericalError& e) {
      res.blew_up = true;
      res.blowup_time = h.time + config.dt;
      res.failure = e.what();
      return res;
    }
    h.time = i * config.dt;
    res.max_reality_defect = std::max(res.max_reality_defect, h.reality_defect());
    h.enforce_reality();
    record(h, i);
  }
  return res;
}

}  // namespace vpfp
