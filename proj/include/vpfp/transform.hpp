#pragma once

#include <vector>

#include "vpfp/grid.hpp"

namespace vpfp {

/// Real samples h(x_n, v_i) on the physical grid of `grid`, index n*Nv + i.
struct PhysicalField {
  Grid grid;
  std::vector<double> values;

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g)
      : grid(g), values(static_cast<std::size_t>(g.Nx) * static_cast<std::size_t>(g.Nv)) {}
  double& at(int n, int i) { return values[static_cast<std::size_t>(n) * grid.Nv + i]; }
  double at(int n, int i) const { return values[static_cast<std::size_t>(n) * grid.Nv + i]; }
};

/// Trapezoid weights on the inclusive v grid.
std::vector<double> v_weights(const Grid& grid);

/// f^(k, eta) = (2 pi)^{-1} \iint f e^{-ikx - i eta v} dx dv by the
/// trapezoidal rule in x (exact for |k| <= Kmax band-limited data) and in v.
/// Mass at |v| = v_max above 1e-10 of the peak is reported to `warnings`.
SpectralState forward_transform(const PhysicalField& h, const Grid& grid, double nu = 0.0,
                                double time = 0.0, WarningSink* warnings = nullptr);

/// f(x, v) = (2 pi)^{-1} sum_k \int f^(k, eta) e^{ikx + i eta v} d eta (trapezoid in eta).
PhysicalField inverse_transform(const SpectralState& state);

/// Precomputed phase tables for moving single modes between eta and v.
class EtaVTransform {
 public:
  explicit EtaVTransform(const Grid& grid);
  /// g(v_i) = (2 pi)^{-1} \int f(eta) e^{i eta v_i} d eta (trapezoid),
  /// optionally with a real eta-multiplier applied first.
  void to_v(const cplx* f_eta, cplx* g_v, const double* multiplier = nullptr) const;
  /// f(eta_j) = \int g(v) e^{-i eta_j v} dv (trapezoid).
  void to_eta(const cplx* g_v, cplx* f_eta) const;
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  std::vector<cplx> phase_;  // e^{i eta_j v_i}, row j
  std::vector<double> weta_, wv_;
};

/// Velocity profiles g_k(v) = (2 pi)^{-1} \int m(k,eta) f^(k, eta) e^{i eta v} d eta for
/// every mode, where m is an optional real eta-multiplier (nullptr = 1).
/// Result index (k + Kmax) * Nv + i.
std::vector<cplx> eta_to_v(const SpectralState& state,
                           const std::vector<double>* multiplier = nullptr);

/// Inverse of eta_to_v for a single mode: \int g(v) e^{-i eta v} dv
/// sampled on the eta grid.
std::vector<cplx> v_to_eta(const Grid& grid, const cplx* g);

}  // namespace vpfp
