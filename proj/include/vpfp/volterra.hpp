#pragma once

#include <vector>

#include "vpfp/constants.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/kernel.hpp"

namespace vpfp {

/// (a * b)(t_n) = \int_0^{t_n} a(tau) b(t_n - tau) d tau by the trapezoidal rule.
std::vector<cplx> convolve_trapezoid(const std::vector<cplx>& a, const std::vector<double>& b, double dt);
std::vector<double> convolve_trapezoid(const std::vector<double>& a, const std::vector<double>& b, double dt);

/// Same convolution with fourth-order Gregory end corrections
/// (weights 3/8, 7/6, 23/24, 1, ..., 1, 23/24, 7/6, 3/8; Simpson-type
/// rules for the first few points).
std::vector<double> convolve_gregory(const std::vector<double>& a, const std::vector<double>& b, double dt);

/// rho(t) = H(t) - \int_0^t rho(tau) K(t - tau) d tau, marched with
/// trapezoidal product integration (second order). H must be sampled with
/// spacing dt equal to the kernel table's and must not be longer than it.
std::vector<cplx> solve_volterra(const std::vector<cplx>& H, double dt, const KernelTable& K);

/// rho = H - H * R, the resolvent form of the same equation (trapezoid).
std::vector<cplx> resolvent_density(const std::vector<cplx>& H, double dt, const KernelTable& R);

struct ResolventOptions {
  double lambda_bar = kLambdaBar;
  double tolerance = 1e-9;     // bound on the neglected frequency tail
  double omega_start = 0.0;    // 0 selects 64 |k|
  double omega_limit = 4096.0;
};

struct ResolventInfo {
  double omega_max = 0.0;        // truncation frequency actually used
  double tail_estimate = 0.0;    // bound on the neglected tail
  double min_distance = 0.0;     // min |1 + K~| over the contour samples
  std::size_t evaluations = 0;   // number of transform evaluations
};

/// R(t, k) = (1/2 pi) \int [K~/(1 + K~)](-lambda_bar |k| + i w) e^{(-lambda_bar |k| + i w) t} dw
/// on a uniform grid starting at 0. The two leading large-|z| terms of the
/// integrand are subtracted and inverted exactly; the remainder decays like
/// w^{-4} and is integrated panel-wise (interpolated transform values times
/// the exact oscillatory factor on a finer Gauss grid). The cutoff is doubled
/// until the tail estimate is below tolerance (else TruncationError).
/// Throws StabilityError if 1 + K~ vanishes on the contour.
KernelTable resolvent(int k, double nu, const std::vector<double>& t_grid, const ResolventOptions& options = {},
                      ResolventInfo* info = nullptr);

/// max_n |R_n - K_n + (R * K)_n| with the fourth-order convolution.
double resolvent_identity_residual(const KernelTable& table);

}  // namespace vpfp
