#include "vpfp/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/transform.hpp"

namespace vpfp {

GevreyWeight GevreyWeight::make(double lambda1, double lambda_inf, double s, int m, double beta) {
  GevreyWeight w;
  w.lambda1 = lambda1;
  w.lambda_inf = lambda_inf;
  w.s = s;
  w.b = s / 8.0;
  w.m = m;
  w.beta = beta;
  w.validate();
  return w;
}

void GevreyWeight::validate(int d) const {
  if (!(lambda_inf > 0.0)) throw ConfigError("gevrey: lambda_inf must be > 0");
  if (!(lambda1 >= lambda_inf)) throw ConfigError("gevrey: lambda1 must be >= lambda_inf");
  if (!(s > 0.0 && s <= 1.0)) throw ConfigError("gevrey: s must lie in (0, 1]");
  if (b != s / 8.0) throw ConfigError("gevrey: b must equal s/8");
  if (2 * m < d + 4) throw ConfigError("gevrey: m must be >= d/2 + 2");
  if (beta < std::max(d / 2.0 + m + 3.0, 5.0)) throw ConfigError("gevrey: beta must be >= max(d/2 + m + 3, 5)");
}

StabilityConstants StabilityConstants::defaults(double kappa) {
  StabilityConstants c;
  c.delta_prime = kDeltaPrime;
  c.delta = kDeltaPrime / 4.0;
  c.delta1 = c.delta / 2.0;
  c.delta2 = c.delta1 / 2.0;
  c.lambda_bar = kLambdaBar;
  c.kappa = kappa;
  return c;
}

void StabilityConstants::validate() const {
  if (!(delta > delta1 && delta1 > delta2 && delta2 > 0.0))
    throw ConfigError("stability constants: need delta > delta1 > delta2 > 0");
  if (!(lambda_bar > 0.0 && kappa > 0.0 && delta_prime > 0.0))
    throw ConfigError("stability constants: lambda_bar, kappa, delta' must be > 0");
}

double gevrey_lambda(double t, double r, const GevreyWeight& w) {
  const double br = bracket(r);
  const double rs = std::pow(br, w.s);
  const double amp = (w.lambda1 - w.lambda_inf) / 8.0;
  return w.lambda_inf + amp * std::pow(1.0 + t, -w.b) * rs +
         amp * std::pow(1.0 + t * std::pow(br, w.s - 1.0), -w.b) * rs;
}

double multiplier(double t, double nu, int k, double eta, double c, const GevreyWeight& w) {
  const double r = std::hypot(static_cast<double>(k), eta);
  const double lam = gevrey_lambda(tau_nu(t, nu), r, w);
  const double log_value = (w.beta + c) * std::log(bracket(k, eta)) + lam;
  if (log_value > kMaxExponent)
    throw OverflowError("multiplier overflows at k=" + std::to_string(k) + ", eta=" + std::to_string(eta), k, eta);
  return std::exp(log_value);
}

SpectralState apply_multiplier(const SpectralState& state, double c, const GevreyWeight& w, double t) {
  if (c < -w.beta) throw ArgumentError("apply_multiplier: requires c >= -beta");
  SpectralState out = state;
  const Grid& g = state.grid;
  parallel_for(static_cast<std::size_t>(g.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - g.Kmax;
    cplx* dst = out.mode(k);
    for (int j = 0; j < g.num_eta(); ++j) dst[j] *= multiplier(t, state.nu, k, g.eta(j), c, w);
  });
  return out;
}

double weighted_norm(const SpectralState& state, double sigma, int q, int moment_order) {
  if (q > 2 * moment_order)
    throw CapabilityError("weighted_norm: velocity weight q=" + std::to_string(q) + " exceeds 2m=" +
                          std::to_string(2 * moment_order));
  if (q < 0) throw ArgumentError("weighted_norm: q must be >= 0");
  const Grid& g = state.grid;
  const int ne = g.num_eta(), nv = g.Nv;
  std::vector<double> freq(static_cast<std::size_t>(g.num_modes()) * ne);
  for (int k = -g.Kmax; k <= g.Kmax; ++k)
    for (int j = 0; j < ne; ++j)
      freq[static_cast<std::size_t>(k + g.Kmax) * ne + j] = std::pow(bracket(k, g.eta(j)), sigma);
  const auto profiles = eta_to_v(state, &freq);
  const auto wv = v_weights(g);
  std::vector<double> per_mode(static_cast<std::size_t>(g.num_modes()));
  for (int m = 0; m < g.num_modes(); ++m) {
    std::vector<double> terms(static_cast<std::size_t>(nv));
    for (int i = 0; i < nv; ++i)
      terms[i] = wv[i] * std::pow(bracket(g.v(i)), q) * std::norm(profiles[static_cast<std::size_t>(m) * nv + i]);
    per_mode[m] = pairwise_sum(terms.data(), terms.size());
  }
  // \int |f|^2 dx = 2 pi sum_k |f_k|^2 for f = sum_k f_k e^{ikx}.
  return std::sqrt(kTwoPi * pairwise_sum(per_mode.data(), per_mode.size()));
}

}  // namespace vpfp
