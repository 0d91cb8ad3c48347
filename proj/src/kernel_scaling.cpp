#include "vpfp/kernel_scaling.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/constants.hpp"
#include "vpfp/echo.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/fit.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

double kernel_kl(double t, double tau, int k, int ell, double nu, const GevreyWeight& w, const StabilityConstants& c) {
  if (tau < 0.0 || tau > t) throw ArgumentError("kernel_kl: need 0 <= tau <= t");
  if (k == 0 || ell == 0 || ell == k) throw ArgumentError("kernel_kl: need k, l nonzero and l != k");
  const double Tt = tau_nu(t, nu), Tq = tau_nu(tau, nu);
  const double r = std::hypot(double(k), k * Tt);
  const double log_value = -std::log(std::abs(double(ell))) + std::log(bracket(Tq)) +
                           (1.5 - w.beta) * std::log(bracket(double(k - ell), k * Tt - ell * Tq)) -
                           0.5 * nu * k * k * tau_square_integral(t - tau, nu) +
                           0.5 * (gevrey_lambda(Tt, r, w) - gevrey_lambda(Tq, r, w)) -
                           0.5 * c.delta1 * std::cbrt(nu) * t - nu * t;
  if (log_value > kMaxExponent) throw OverflowError("kernel_kl: value not representable", k, k * Tt);
  return std::exp(log_value);
}

namespace {

constexpr int kPanelOrder = 8;

// Panels grow geometrically away from the point x0 until they reach h_max.
void graded_panels(double a, double b, double x0, double h0, double h_max, std::vector<double>& edges) {
  edges.clear();
  std::vector<double> left, right;
  double h = h0;
  for (double x = x0; x > a;) {
    x = std::max(a, x - h);
    left.push_back(x);
    h = std::min(1.5 * h, h_max);
  }
  h = h0;
  for (double x = x0; x < b;) {
    x = std::min(b, x + h);
    right.push_back(x);
    h = std::min(1.5 * h, h_max);
  }
  edges.assign(left.rbegin(), left.rend());
  if (x0 > a && x0 < b) edges.push_back(x0);
  if (x0 <= a) edges.push_back(a);
  for (double x : right) edges.push_back(x);
  if (x0 >= b) edges.push_back(b);
}

}  // namespace

double kernel_sum_integral(double t, int k, double nu, const GevreyWeight& w, const StabilityConstants& c,
                           int ell_lo, int ell_hi) {
  if (t <= 0.0) return 0.0;
  const GaussRule& gl = gauss_legendre(kPanelOrder);
  const double Tt = tau_nu(t, nu);
  const double h_max = std::max(0.05, std::min(0.25 * t, (nu > 0.0 ? 0.125 / std::cbrt(nu) : 0.25 * t)));
  std::vector<double> edges;
  double total = 0.0;
  for (int ell = ell_lo; ell <= ell_hi; ++ell) {
    if (ell == 0 || ell == k) continue;
    // Resonance l tau(tau*) = k tau(t), when it lies in (0, t).
    double x0 = t;
    const double target = double(k) * Tt / ell;
    if (target > 0.0 && target < Tt) {
      x0 = nu > 0.0 ? -std::log1p(-nu * target) / nu : target;
    }
    const double h0 = std::min(0.25 / std::abs(double(ell)), 0.25 * t);
    graded_panels(0.0, t, x0, h0, h_max, edges);
    double sum = 0.0;
    for (std::size_t p = 1; p < edges.size(); ++p) {
      const double lo = edges[p - 1], hi = edges[p];
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      double panel = 0.0;
      for (int q = 0; q < kPanelOrder; ++q) {
        const double tau = std::clamp(mid + half * gl.x[q], 0.0, t);
        panel += gl.w[q] * kernel_kl(t, tau, k, ell, nu, w, c);
      }
      sum += half * panel;
    }
    total += sum;
  }
  return total;
}

namespace {

KernelSupremum supremum_once(double nu, const GevreyWeight& w, const StabilityConstants& c, int k_cap, int band,
                             double t_cap, int n_times) {
  std::vector<double> times(static_cast<std::size_t>(n_times));
  const double t0 = 0.25;
  for (int i = 0; i < n_times; ++i) times[i] = t0 * std::pow(t_cap / t0, double(i) / (n_times - 1));
  const std::size_t nk = static_cast<std::size_t>(k_cap);
  std::vector<double> best(nk, 0.0), best_t(nk, 0.0);
  parallel_for(nk, [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    for (double t : times) {
      const double v = kernel_sum_integral(t, k, nu, w, c, k - band, k + band);
      if (v > best[i]) {
        best[i] = v;
        best_t[i] = t;
      }
    }
  });
  KernelSupremum out;
  out.nu = nu;
  for (std::size_t i = 0; i < nk; ++i)
    if (best[i] > out.M) {
      out.M = best[i];
      out.argmax_k = static_cast<int>(i) + 1;
      out.argmax_t = best_t[i];
    }
  return out;
}

}  // namespace

KernelSupremum kernel_sum_supremum(double nu, const GevreyWeight& w, const StabilityConstants& c,
                                   const KernelSumOptions& opts) {
  if (!(nu > 0.0)) throw ArgumentError("kernel_sum_supremum: nu must be positive");
  if (opts.k_cap < 1 || opts.ell_band < 1 || opts.n_times < 2 || !(opts.t_cap_factor > 0.0))
    throw ArgumentError("kernel_sum_supremum: invalid truncation options");
  const double t_cap = opts.t_cap_factor / std::cbrt(nu);
  KernelSupremum out = supremum_once(nu, w, c, opts.k_cap, opts.ell_band, t_cap, opts.n_times);
  if (opts.check_caps) {
    const KernelSupremum wide =
        supremum_once(nu, w, c, 2 * opts.k_cap, 2 * opts.ell_band, 2 * t_cap, 2 * opts.n_times);
    out.cap_change = std::abs(wide.M - out.M) / wide.M;
    if (out.cap_change > 0.1)
      throw CapError("kernel_sum_supremum: doubling k_cap, the l band and T_cap changes M by more than 10%");
  }
  return out;
}

KernelScalingResult kernel_sum_scaling(double s, const std::vector<double>& nu_list, const GevreyWeight& w,
                                       const StabilityConstants& c, const KernelSumOptions& opts) {
  if (nu_list.size() < 2) throw ArgumentError("kernel_sum_scaling: need at least two viscosities");
  GevreyWeight ws = GevreyWeight::make(w.lambda1, w.lambda_inf, s, w.m, w.beta);
  KernelScalingResult res;
  res.s = s;
  res.exponent = threshold_exponent(s);
  std::vector<double> inv_nu, Ms;
  for (double nu : nu_list) {
    res.points.push_back(kernel_sum_supremum(nu, ws, c, opts));
    inv_nu.push_back(1.0 / nu);
    Ms.push_back(res.points.back().M);
  }
  // M = C (1/nu)^{slope}: the power model fits y = C x^{-p}, so slope = -p.
  const FitResult fit = fit_rate(inv_nu, Ms, FitModel::power, 0.0, INFINITY);
  res.slope = -fit.rate;
  res.slope_stderr = fit.rate_stderr;
  res.max_min_ratio = *std::max_element(Ms.begin(), Ms.end()) / *std::min_element(Ms.begin(), Ms.end());
  const std::size_t top = static_cast<std::size_t>(std::max_element(nu_list.begin(), nu_list.end()) - nu_list.begin());
  res.constant = Ms[top] * std::pow(nu_list[top], res.exponent);
  res.bound_holds = true;
  for (std::size_t i = 0; i < Ms.size(); ++i)
    if (Ms[i] > 1.5 * res.constant * std::pow(nu_list[i], -res.exponent)) res.bound_holds = false;
  return res;
}

}  // namespace vpfp
