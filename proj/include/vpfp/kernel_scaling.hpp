#pragma once

#include <vector>

#include "vpfp/gevrey.hpp"

namespace vpfp {

/// K^nu_{k,l}(t, tau) = |l|^{-1} <tau(tau)> <k - l, k tau(t) - l tau(tau)>^{-beta + 3/2}
///   * S(t - tau, k)^{1/2} exp(lambda(tau(t), |k, k tau(t)|)/2 - lambda(tau(tau), |k, k tau(t)|)/2)
///   * exp(-delta1 nu^{1/3} t / 2 - nu t),
/// with tau(.) = (1 - e^{-nu .})/nu. Requires 0 <= tau <= t, k, l != 0, l != k.
double kernel_kl(double t, double tau, int k, int ell, double nu, const GevreyWeight& w, const StabilityConstants& c);

struct KernelSumOptions {
  int k_cap = 8;            // 1 <= k <= k_cap
  int ell_band = 8;         // l in [k - ell_band, k + ell_band] minus {0, k}
  double t_cap_factor = 5;  // T_cap = t_cap_factor nu^{-1/3}
  int n_times = 48;         // geometric t grid on [0.25, T_cap]
  bool check_caps = true;   // rerun with doubled caps, CapError above 10% change
};

/// \int_0^t sum_l K_{k,l}(t, tau) dtau by graded Gauss-Legendre panels
/// clustered at the resonances l tau(tau) = k tau(t).
double kernel_sum_integral(double t, int k, double nu, const GevreyWeight& w, const StabilityConstants& c,
                           int ell_lo, int ell_hi);

struct KernelSupremum {
  double nu = 0.0;
  double M = 0.0;
  int argmax_k = 0;
  double argmax_t = 0.0;
  double cap_change = 0.0;  // relative change under doubled caps
};

/// M(nu) = sup_{k, t <= T_cap} \int_0^t sum_l K_{k,l}(t, tau) dtau.
KernelSupremum kernel_sum_supremum(double nu, const GevreyWeight& w, const StabilityConstants& c,
                                   const KernelSumOptions& opts = {});

struct KernelScalingResult {
  double s = 0.0;
  double exponent = 0.0;     // threshold_exponent(s)
  std::vector<KernelSupremum> points;
  double slope = 0.0;        // of log M against log(1/nu)
  double slope_stderr = 0.0;
  double max_min_ratio = 0.0;
  double constant = 0.0;     // M nu^{exponent} at the largest nu
  bool bound_holds = false;  // M <= 1.5 constant nu^{-exponent} everywhere
};

/// Evaluates M over nu_list with the weight's s replaced by s and fits the
/// slope. Throws CapError from kernel_sum_supremum.
KernelScalingResult kernel_sum_scaling(double s, const std::vector<double>& nu_list, const GevreyWeight& w,
                                       const StabilityConstants& c, const KernelSumOptions& opts = {});

}  // namespace vpfp
