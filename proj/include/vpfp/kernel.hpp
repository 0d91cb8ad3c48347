#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "vpfp/grid.hpp"

namespace vpfp {

/// K^nu(t, k) = tau mu^(k tau) S(t, k) with tau = (1 - e^{-nu t})/nu.
double kernel_K(double t, int k, double nu);

/// Sampled kernel (and optionally its resolvent) on a uniform time grid.
struct KernelTable {
  int k = 1;
  double nu = 0.0;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> K;
  std::vector<double> R;  // empty unless filled by the resolvent

  std::size_t size() const { return t.size(); }
};

/// K^nu(t_i, k) for t_i = i dt, i = 0..n_steps.
KernelTable make_kernel_table(int k, double nu, double dt, int n_steps);

/// Laplace transform of K^nu(., k) on the half plane Re z >= re_min.
///
/// The integral is truncated where |K(t)| e^{-re_min t} drops below 1e-17
/// of its peak and evaluated with composite 20-point Gauss-Legendre panels.
/// The panel width is min(0.5/|k|, 4/max(1, |z|)); kernel samples are cached
/// per panel width, so repeated evaluations along a contour are cheap.
class KernelLaplace {
 public:
  KernelLaplace(int k, double nu, double re_min);

  cplx operator()(cplx z) const;
  /// d/dz of the transform, -\int t K(t) e^{-zt} dt.
  cplx derivative(cplx z) const;

  int k() const { return k_; }
  double nu() const { return nu_; }
  double re_min() const { return re_min_; }
  double truncation_time() const { return t_trunc_; }

 private:
  struct Level {
    std::vector<double> t;
    std::vector<double> wK;  // weight * K(t)
  };
  const Level& level_for(cplx z) const;

  int k_;
  double nu_;
  double re_min_;
  double t_trunc_ = 0.0;
  double h0_ = 0.0;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

/// One-off evaluation of the Laplace transform at z.
cplx laplace_K(cplx z, int k, double nu);

}  // namespace vpfp
