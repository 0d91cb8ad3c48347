#include "vpfp/linear_flow.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/interpolation.hpp"
#include "vpfp/parallel.hpp"

namespace vpfp {

double dt_max(const Grid& grid, double nu) {
  return 0.1 / std::max(1.0, nu * grid.eta_max * grid.Kmax);
}

SpectralState linear_step(const SpectralState& state, double dt, WarningSink* warnings) {
  if (dt < 0.0) throw ArgumentError("linear_step: dt must be >= 0");
  SpectralState out = state;
  out.time = state.time + dt;
  if (dt == 0.0) return out;

  const Grid& grid = state.grid;
  const double nu = state.nu;
  const double contraction = std::exp(-nu * dt);
  const double shift = tau_nu(dt, nu);
  const int ne = grid.num_eta();
  std::vector<double> lost(static_cast<std::size_t>(grid.num_modes()), 0.0);

  parallel_for(static_cast<std::size_t>(grid.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - grid.Kmax;
    const cplx* src = state.mode(k);
    cplx* dst = out.mode(k);
    for (int j = 0; j < ne; ++j) {
      const double eta0 = contraction * grid.eta(j) + k * shift;
      if (std::abs(eta0) > grid.eta_max + grid.deta()) {
        dst[j] = 0.0;
        continue;
      }
      const cplx v = interpolate_eta(src, grid, eta0);
      const double damp = nu == 0.0 ? 1.0 : std::exp(-nu * eta_bar_square_integral(dt, k, eta0, nu));
      dst[j] = v * damp;
    }
    // Mass entering from outside the window is unknown; report what sat at
    // the edge the flow pulls from.
    if (k != 0) lost[m] = std::abs(k > 0 ? src[ne - 1] : src[0]);
  });
  if (warnings) {
    const double edge = *std::max_element(lost.begin(), lost.end());
    const double peak = state.max_abs();
    if (peak > 0.0 && edge > 1e-10 * peak)
      warnings->push_back({"linear_step: back-map reaches a non-negligible window edge", edge / peak});
  }
  return out;
}

std::vector<cplx> fp_semigroup(const std::vector<cplx>& g_hat, const Grid& grid, double t, double nu) {
  if (g_hat.size() != static_cast<std::size_t>(grid.num_eta()))
    throw ConfigError("fp_semigroup: sample count does not match the eta grid");
  if (t < 0.0) throw ArgumentError("fp_semigroup: t must be >= 0");
  if (t == 0.0 || nu == 0.0) return g_hat;
  const double contraction = std::exp(-nu * t);
  const double spread = -std::expm1(-2.0 * nu * t);
  std::vector<cplx> out(g_hat.size());
  for (int j = 0; j < grid.num_eta(); ++j) {
    const double eta = grid.eta(j);
    out[j] = interpolate_eta(g_hat.data(), grid, contraction * eta) * std::exp(-0.5 * eta * eta * spread);
  }
  return out;
}

NutReport nut_inequality_check(double nu, const std::vector<double>& t_grid, double nu0) {
  if (!(nu >= 0.0) || nu >= nu0) throw ArgumentError("nut_inequality_check: requires 0 <= nu < nu0");
  NutReport r;
  r.nu = nu;
  for (double t : t_grid) {
    if (t < 0.0) throw ArgumentError("nut_inequality_check: t must be >= 0");
    const double ratio = bracket(t) / (bracket(nu * t) * bracket(tau_nu(t, nu)));
    if (ratio > r.sup_ratio) {
      r.sup_ratio = ratio;
      r.argmax_t = t;
    }
  }
  return r;
}

}  // namespace vpfp
