#pragma once

#include <cmath>
#include <vector>

#include "vpfp/gevrey.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/simulator.hpp"
#include "vpfp/transform.hpp"

namespace vpfp {

/// \iint (F log(F/mu) - F + mu) dx dv + 1/2 \int E^2 dx for F = mu + h,
/// mu = (2 pi)^{-3/2} e^{-v^2/2}, by quadrature on the physical grid.
/// Throws PositivityError if F <= 0 at a grid point.
double entropy_energy(const SpectralState& state);

/// Shifted unknown f^(t, k, eta) = h^(t, k, eta_bar(t, k, eta)) on the eta
/// grid (zero where the characteristic leaves the window).
SpectralState shifted_unknown(const SpectralState& state);

/// f^(t, k, eta) at a single frequency.
cplx shifted_value(const SpectralState& state, int k, double eta);

/// Computes the four monitored quantities. H_rho integrates the density
/// trace up to the state's time; the others are instantaneous. Velocity
/// moments v^alpha f are formed as (i d/d eta)^alpha f^ on the eta grid and
/// the transport-adapted derivative d_v^t acts as i eta_bar(t, k, eta).
class BootstrapMonitor {
 public:
  BootstrapMonitor(const GevreyWeight& w, const StabilityConstants& c, double b_hypo = 0.01);
  BootstrapRecord sample(const SpectralState& state, const DensityTrace& trace) const;

  /// Conventional weights K_j = 100^j for the moment sums.
  static double moment_weight(int j) { return std::pow(100.0, j); }

 private:
  GevreyWeight w_;
  StabilityConstants c_;
  double b_hypo_;
};

BootstrapRecord bootstrap_functionals(const SpectralState& state, const DensityTrace& trace, const GevreyWeight& w,
                                      const StabilityConstants& c);

/// H^nu(t_n, k) = I(t_n, k) + N_0(t_n, k) + N_!=(t_n, k) from a stored
/// history with a common uniform time grid (snapshots[n].time = n dt):
///   I   = h_in(k, k tau(t)) S(t, k),
///   N   = -sum_{l != 0} \int_0^t rho^(s, l) (k/l) tau(t - s)
///               f^(s, k - l, k tau(t) - l tau(s)) S(t - s, k) ds,
/// where the l = k term is the zero-mode part N_0. The s-integral uses the
/// trapezoidal rule. Result index [k + Kmax][n].
std::vector<std::vector<cplx>> volterra_forcing_from_history(const std::vector<SpectralState>& snapshots,
                                                             const DensityTrace& trace,
                                                             bool include_nonlinear = true);

/// Residual rho(t) - H(t) + \int_0^t rho K of the density equation for mode
/// k (trapezoid), sampled on the snapshot grid.
std::vector<cplx> volterra_residual(const std::vector<cplx>& rho, const std::vector<cplx>& H, double dt, int k,
                                    double nu);

}  // namespace vpfp
