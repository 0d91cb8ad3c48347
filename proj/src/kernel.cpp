#include "vpfp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/flow_maps.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

double kernel_K(double t, int k, double nu) {
  if (k == 0) throw ArgumentError("kernel_K: k = 0 carries no field");
  if (t < 0.0) throw ArgumentError("kernel_K: t must be >= 0");
  const double tau = tau_nu(t, nu);
  return tau * mu_hat(k * tau) * S_shorthand(t, k, nu);
}

KernelTable make_kernel_table(int k, double nu, double dt, int n_steps) {
  if (!(dt > 0.0) || n_steps < 1) throw ArgumentError("make_kernel_table: need dt > 0 and n_steps >= 1");
  KernelTable table;
  table.k = k;
  table.nu = nu;
  table.dt = dt;
  table.t.resize(static_cast<std::size_t>(n_steps) + 1);
  table.K.resize(table.t.size());
  for (int i = 0; i <= n_steps; ++i) {
    table.t[i] = i * dt;
    table.K[i] = kernel_K(table.t[i], k, nu);
  }
  return table;
}

KernelLaplace::KernelLaplace(int k, double nu, double re_min) : k_(k), nu_(nu), re_min_(re_min) {
  if (k == 0) throw ArgumentError("laplace_K: k = 0 carries no field");
  const double kk = std::abs(static_cast<double>(k));
  // For nu > 0 the kernel tail behaves like exp(-k^2 t / nu); the integral
  // diverges at and left of that abscissa.
  if (nu > 0.0) {
    const double abscissa = -kk * kk / nu;
    if (re_min <= abscissa)
      throw ConvergenceError("laplace_K: Re z must exceed " + std::to_string(abscissa), abscissa);
  }
  const double step = std::min(0.1, 0.25 / kk);
  double peak = 0.0, t = 0.0;
  int quiet = 0;
  const int quiet_needed = static_cast<int>(std::ceil(2.0 / step));
  for (;; t += step) {
    if (t > 1e4)
      throw ConvergenceError("laplace_K: kernel does not decay at Re z = " + std::to_string(re_min), re_min);
    const double g = std::abs(kernel_K(t, k, nu)) * std::exp(-re_min * t);
    if (!std::isfinite(g))
      throw ConvergenceError("laplace_K: integrand overflows at Re z = " + std::to_string(re_min), re_min);
    peak = std::max(peak, g);
    if (t > 0.0 && g <= 1e-17 * peak) {
      if (++quiet >= quiet_needed) break;
    } else {
      quiet = 0;
    }
  }
  t_trunc_ = t;
  h0_ = std::min(0.5, 0.5 / kk);
}

const KernelLaplace::Level& KernelLaplace::level_for(cplx z) const {
  const double need = std::min(h0_, 4.0 / std::max(1.0, std::abs(z)));
  const int index = std::max(0, static_cast<int>(std::ceil(std::log2(h0_ / need) - 1e-12)));
  std::lock_guard<std::mutex> lock(mutex_);
  if (static_cast<int>(levels_.size()) <= index) levels_.resize(static_cast<std::size_t>(index) + 1);
  auto& slot = levels_[static_cast<std::size_t>(index)];
  if (!slot) {
    auto level = std::make_unique<Level>();
    const double h = std::ldexp(h0_, -index);
    const int panels = std::max(1, static_cast<int>(std::ceil(t_trunc_ / h)));
    const double width = t_trunc_ / panels;
    const GaussRule& rule = gauss_legendre(20);
    level->t.reserve(static_cast<std::size_t>(panels) * 20);
    level->wK.reserve(level->t.capacity());
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * width;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double ti = mid + 0.5 * width * rule.x[i];
        level->t.push_back(ti);
        level->wK.push_back(0.5 * width * rule.w[i] * kernel_K(ti, k_, nu_));
      }
    }
    slot = std::move(level);
  }
  return *slot;
}

cplx KernelLaplace::operator()(cplx z) const {
  if (z.real() < re_min_ - 1e-12)
    throw ArgumentError("laplace_K: Re z below the prepared half plane");
  const Level& lv = level_for(z);
  cplx s = 0.0;
  for (std::size_t i = 0; i < lv.t.size(); ++i) s += lv.wK[i] * std::exp(-z * lv.t[i]);
  return s;
}

cplx KernelLaplace::derivative(cplx z) const {
  if (z.real() < re_min_ - 1e-12)
    throw ArgumentError("laplace_K: Re z below the prepared half plane");
  const Level& lv = level_for(z);
  cplx s = 0.0;
  for (std::size_t i = 0; i < lv.t.size(); ++i) s -= lv.t[i] * lv.wK[i] * std::exp(-z * lv.t[i]);
  return s;
}

cplx laplace_K(cplx z, int k, double nu) { return KernelLaplace(k, nu, z.real())(z); }

}  // namespace vpfp
