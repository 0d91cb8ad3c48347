#include "vpfp/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/interpolation.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/volterra.hpp"

namespace vpfp {

namespace {

// (1 + r) log(1 + r) - r without cancellation for small r.
double relative_entropy_density(double r) {
  if (std::abs(r) < 1e-4) {
    double s = 0.0, p = r * r;
    for (int n = 2; n < 8; ++n) {
      s += ((n % 2 == 0) ? 1.0 : -1.0) * p / (n * (n - 1.0));
      p *= r;
    }
    return s;
  }
  return (1.0 + r) * std::log1p(r) - r;
}

// out = i d/d eta of f, the image of multiplication by v. Sixth-order
// centred differences with zero data outside the window. A round trip
// through the truncated v grid would instead spread the interpolation noise
// floor over all eta, where the Gevrey weights reach 1e30.
void eta_moment(const std::vector<cplx>& f, double de, std::vector<cplx>& out) {
  const int n = static_cast<int>(f.size());
  auto at = [&](int j) { return (j < 0 || j >= n) ? cplx(0.0) : f[j]; };
  const cplx scale(0.0, 1.0 / (60.0 * de));
  for (int j = 0; j < n; ++j)
    out[j] = scale * (45.0 * (at(j + 1) - at(j - 1)) - 9.0 * (at(j + 2) - at(j - 2)) + (at(j + 3) - at(j - 3)));
}

}  // namespace

double entropy_energy(const SpectralState& state) {
  const Grid& g = state.grid;
  const PhysicalField h = inverse_transform(state);
  const auto wv = v_weights(g);
  const double norm = std::pow(kTwoPi, -1.5);
  std::vector<double> rows(static_cast<std::size_t>(g.Nx));
  for (int n = 0; n < g.Nx; ++n) {
    std::vector<double> terms(static_cast<std::size_t>(g.Nv));
    for (int i = 0; i < g.Nv; ++i) {
      const double v = g.v(i);
      const double mu = norm * std::exp(-0.5 * v * v);
      const double F = mu + h.at(n, i);
      if (!(F > 0.0)) throw PositivityError("entropy_energy: F = mu + h is not positive");
      terms[i] = wv[i] * mu * relative_entropy_density(h.at(n, i) / mu);
    }
    rows[n] = pairwise_sum(terms.data(), terms.size());
  }
  const double kinetic = pairwise_sum(rows.data(), rows.size()) * kTwoPi / g.Nx;
  const auto rho = density(state);
  std::vector<double> field;
  for (int k = -g.Kmax; k <= g.Kmax; ++k)
    if (k != 0) field.push_back(std::norm(rho[k + g.Kmax]) / (double(k) * k));
  // \int E^2 dx = 2 pi sum_k |E^(k)|^2.
  return kinetic + 0.5 * kTwoPi * pairwise_sum(field.data(), field.size());
}

cplx shifted_value(const SpectralState& state, int k, double eta) {
  return interpolate_eta(state.mode(k), state.grid, eta_bar(state.time, k, eta, state.nu));
}

SpectralState shifted_unknown(const SpectralState& state) {
  SpectralState f(state.grid, state.nu, state.time);
  const Grid& g = state.grid;
  for (int k = -g.Kmax; k <= g.Kmax; ++k)
    for (int j = 0; j < g.num_eta(); ++j) f.at(k, j) = shifted_value(state, k, g.eta(j));
  return f;
}

BootstrapMonitor::BootstrapMonitor(const GevreyWeight& w, const StabilityConstants& c, double b_hypo)
    : w_(w), c_(c), b_hypo_(b_hypo) {}

BootstrapRecord BootstrapMonitor::sample(const SpectralState& state, const DensityTrace& trace) const {
  const Grid& g = state.grid;
  const double t = state.time, nu = state.nu;
  const double tau = tau_nu(t, nu);
  const double nu13 = std::cbrt(nu);
  BootstrapRecord rec;
  rec.time = t;

  // H_rho: L^2 in time of |k|^{1/2} A_{1/2}(s, k, k tau(s)) rho^ e^{delta nu^{1/3} s} <tau(s)>^4.
  {
    std::vector<double> ts, vals;
    for (std::size_t i = 0; i < trace.times.size() && trace.times[i] <= t + 1e-12; ++i) {
      const double s = trace.times[i];
      const double ts_tau = tau_nu(s, nu);
      double sum = 0.0;
      for (int k = -trace.Kmax; k <= trace.Kmax; ++k) {
        if (k == 0) continue;
        const double a = multiplier(s, nu, k, k * ts_tau, 0.5, w_);
        sum += std::abs(k) * a * a * std::norm(trace.rho[i][static_cast<std::size_t>(k + trace.Kmax)]);
      }
      ts.push_back(s);
      vals.push_back(kTwoPi * sum * std::exp(2.0 * c_.delta * nu13 * s) * std::pow(bracket(ts_tau), 8));
    }
    double integral = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) integral += 0.5 * (ts[i] - ts[i - 1]) * (vals[i] + vals[i - 1]);
    rec.H_rho = std::sqrt(integral);
  }

  const SpectralState f = shifted_unknown(state);
  const int ne = g.num_eta();
  const double de = g.deta();
  std::vector<double> we(static_cast<std::size_t>(ne), de);
  we.front() *= 0.5;
  we.back() *= 0.5;

  std::vector<double> eT(static_cast<std::size_t>(g.num_modes()), 0.0), eED(eT.size(), 0.0);
  parallel_for(static_cast<std::size_t>(g.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - g.Kmax;
    if (k == 0) return;
    std::vector<cplx> moment(f.mode(k), f.mode(k) + ne), next(moment.size());
    for (int alpha = 0; alpha <= w_.m; ++alpha) {
      if (alpha > 0) {
        eta_moment(moment, de, next);
        moment.swap(next);
      }
      double top = 0.0, ed = 0.0;
      for (int j = 0; j < ne; ++j) {
        const double eta = g.eta(j);
        const double a2 = multiplier(t, nu, k, eta, 2.0, w_);
        const double a0 = multiplier(t, nu, k, eta, 0.0, w_);
        const double mag = std::norm(moment[j]);
        const double eb = eta_bar(t, k, eta, nu);
        const double kk = k;
        top += we[j] * a2 * a2 * mag;
        ed += we[j] * a0 * a0 * mag *
              (kk * kk * kk * kk + b_hypo_ * nu13 * nu13 * kk * kk * eb * eb + b_hypo_ * nu13 * kk * kk * kk * eb);
      }
      const double decay = std::exp(-2.0 * (alpha + 1) * nu * t) / moment_weight(alpha);
      eT[m] += decay * top;
      eED[m] += decay * ed * std::exp(2.0 * c_.delta1 * nu13 * t);
    }
  });
  rec.E_T = pairwise_sum(eT.data(), eT.size());
  rec.E_ED = pairwise_sum(eED.data(), eED.size());

  // H_sh: zero mode with e^{lambda(tau, e^{-nu t}|eta|)}, measured in H^{beta+1} with <v>^{2m}.
  {
    std::vector<double> mult(static_cast<std::size_t>(ne));
    const double contraction = std::exp(-nu * t);
    for (int j = 0; j < ne; ++j) {
      const double eta = g.eta(j);
      const double log_value = gevrey_lambda(tau, contraction * std::abs(eta), w_) + (w_.beta + 1.0) * std::log(bracket(eta));
      if (log_value > kMaxExponent) throw OverflowError("H_sh multiplier overflows", 0, eta);
      mult[j] = std::exp(log_value);
    }
    const EtaVTransform tr(g);
    const int nv = g.Nv;
    std::vector<cplx> prof(static_cast<std::size_t>(nv));
    tr.to_v(state.mode(0), prof.data(), mult.data());
    const auto wv = v_weights(g);
    std::vector<double> terms(static_cast<std::size_t>(nv));
    for (int i = 0; i < nv; ++i) terms[i] = wv[i] * std::pow(bracket(g.v(i)), 2 * w_.m) * std::norm(prof[i]);
    rec.H_sh = std::sqrt(kTwoPi * pairwise_sum(terms.data(), terms.size()));
  }
  return rec;
}

BootstrapRecord bootstrap_functionals(const SpectralState& state, const DensityTrace& trace, const GevreyWeight& w,
                                      const StabilityConstants& c) {
  return BootstrapMonitor(w, c).sample(state, trace);
}

std::vector<std::vector<cplx>> volterra_forcing_from_history(const std::vector<SpectralState>& snapshots,
                                                             const DensityTrace& trace, bool include_nonlinear) {
  if (snapshots.empty()) throw ArgumentError("volterra_forcing_from_history: empty history");
  const Grid& g = snapshots.front().grid;
  const double nu = snapshots.front().nu;
  const int K = g.Kmax;
  const std::size_t n = snapshots.size();
  const double dt = n > 1 ? snapshots[1].time - snapshots[0].time : 0.0;
  if (std::abs(snapshots[0].time) > 1e-12) throw ArgumentError("volterra_forcing_from_history: history must start at t = 0");

  // Density samples at the snapshot times.
  std::vector<const std::vector<cplx>*> rho(n, nullptr);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(snapshots[i].grid == g)) throw ArgumentError("volterra_forcing_from_history: grids differ");
    if (std::abs(snapshots[i].time - i * dt) > 1e-9 * std::max(1.0, snapshots[i].time))
      throw ArgumentError("volterra_forcing_from_history: snapshots not on a uniform grid");
    while (cursor < trace.times.size() && trace.times[cursor] < snapshots[i].time - 1e-9) ++cursor;
    if (cursor == trace.times.size() || std::abs(trace.times[cursor] - snapshots[i].time) > 1e-9)
      throw ArgumentError("volterra_forcing_from_history: density trace misses a snapshot time");
    rho[i] = &trace.rho[cursor];
  }

  std::vector<double> taus(n);
  for (std::size_t i = 0; i < n; ++i) taus[i] = tau_nu(i * dt, nu);

  std::vector<std::vector<cplx>> H(static_cast<std::size_t>(g.num_modes()), std::vector<cplx>(n, 0.0));
  parallel_for(static_cast<std::size_t>(g.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - K;
    if (k == 0) return;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = i * dt;
      cplx value = interpolate_eta(snapshots[0].mode(k), g, k * taus[i]) * S_shorthand(t, k, nu);
      if (include_nonlinear && i > 0) {
        cplx integral = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
          const double s = j * dt;
          const double lag_tau = tau_nu(t - s, nu);
          const double damp = S_shorthand(t - s, k, nu);
          cplx sum = 0.0;
          for (int l = -K; l <= K; ++l) {
            if (l == 0 || std::abs(k - l) > K) continue;
            const cplx r = (*rho[j])[static_cast<std::size_t>(l + K)];
            if (r == cplx(0.0)) continue;
            const double freq = k * taus[i] - l * taus[j];
            sum += r * (double(k) / l) * shifted_value(snapshots[j], k - l, freq);
          }
          const double weight = (j == 0 || j == i) ? 0.5 : 1.0;
          integral += weight * sum * lag_tau * damp;
        }
        value -= integral * dt;
      }
      H[m][i] = value;
    }
  });
  return H;
}

std::vector<cplx> volterra_residual(const std::vector<cplx>& rho, const std::vector<cplx>& H, double dt, int k,
                                    double nu) {
  if (rho.size() != H.size()) throw ArgumentError("volterra_residual: length mismatch");
  if (rho.empty()) return {};
  const KernelTable K = make_kernel_table(k, nu, dt, static_cast<int>(rho.size()) - 1 > 0 ? static_cast<int>(rho.size()) - 1 : 1);
  const auto conv = convolve_trapezoid(rho, K.K, dt);
  std::vector<cplx> r(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) r[i] = rho[i] - H[i] + conv[i];
  return r;
}

}  // namespace vpfp
