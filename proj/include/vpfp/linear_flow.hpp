#pragma once

#include <vector>

#include "vpfp/grid.hpp"

namespace vpfp {

/// Largest step allowed by the back-map window rule:
/// 0.1 / max(1, nu * eta_max * Kmax).
double dt_max(const Grid& grid, double nu);

/// Exact free transport + Fokker-Planck flow over dt for every mode:
///   h(t+dt, k, zeta) = h(t, k, eta0) exp(-nu \int_0^dt |eta_bar(u, k, eta0)|^2 du),
///   eta0 = e^{-nu dt} zeta + k (1 - e^{-nu dt})/nu,
/// with eta0 evaluated by cubic interpolation. Back-maps leaving the window
/// are reported to `warnings` when the field there is not negligible.
SpectralState linear_step(const SpectralState& state, double dt, WarningSink* warnings = nullptr);

/// Homogeneous Fokker-Planck (Ornstein-Uhlenbeck) semigroup on eta samples:
///   g(t, eta) = g(0, e^{-nu t} eta) exp(-eta^2 (1 - e^{-2 nu t}) / 2).
std::vector<cplx> fp_semigroup(const std::vector<cplx>& g_hat, const Grid& grid, double t, double nu);

struct NutReport {
  double nu = 0.0;
  double sup_ratio = 0.0;  // sup of <t> / (<nu t> <(1 - e^{-nu t})/nu>)
  double argmax_t = 0.0;
  double bound = 2.0;
};

/// Evaluates <t> <nu t>^{-1} <(1 - e^{-nu t})/nu>^{-1} on t_grid. Requires
/// nu < nu0.
NutReport nut_inequality_check(double nu, const std::vector<double>& t_grid, double nu0 = 0.1);

}  // namespace vpfp
