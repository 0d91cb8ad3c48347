#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace vpfp {

using cplx = std::complex<double>;

/// Truncated (k, eta) index space plus the physical (x, v) sampling used by
/// quadrature-based diagnostics.
///
/// The eta grid holds Neta + 1 points eta_j = (j - Neta/2) * deta with
/// deta = 2 eta_max / Neta, so it is symmetric, contains eta = 0 at index
/// Neta/2 and both window edges. The v grid has Nv points covering
/// [-v_max, v_max] inclusively; the x grid is x_n = 2 pi n / Nx.
struct Grid {
  int d = 1;
  int Kmax = 4;
  int Neta = 512;
  double eta_max = 32.0;
  int Nv = 512;
  int Nx = 16;
  double v_max = 8.0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  int num_modes() const { return 2 * Kmax + 1; }
  int num_eta() const { return Neta + 1; }
  int zero_index() const { return Neta / 2; }
  double deta() const { return 2.0 * eta_max / Neta; }
  double eta(int j) const { return (j - Neta / 2) * deta(); }
  double dv() const { return 2.0 * v_max / (Nv - 1); }
  double v(int i) const { return -v_max + i * dv(); }
  double x(int n) const;

  bool operator==(const Grid&) const = default;
};

/// Spectral unknown h^(t, k, eta) on a Grid, stored mode-major.
struct SpectralState {
  Grid grid;
  double time = 0.0;
  double nu = 0.0;
  std::vector<cplx> values;

  SpectralState() = default;
  SpectralState(const Grid& g, double nu_, double time_ = 0.0);

  std::size_t offset(int k) const {
    return static_cast<std::size_t>(k + grid.Kmax) * static_cast<std::size_t>(grid.num_eta());
  }
  cplx& at(int k, int j) { return values[offset(k) + static_cast<std::size_t>(j)]; }
  const cplx& at(int k, int j) const { return values[offset(k) + static_cast<std::size_t>(j)]; }
  cplx* mode(int k) { return values.data() + offset(k); }
  const cplx* mode(int k) const { return values.data() + offset(k); }

  /// max |h(-k,-eta) - conj h(k,eta)|.
  double reality_defect() const;
  /// Replaces each (k,eta),(-k,-eta) pair by its conjugate-symmetric part.
  void enforce_reality();
  /// |h(0,0)|.
  double mass_defect() const { return std::abs(at(0, grid.zero_index())); }
  double max_abs() const;
  bool all_finite() const;
  /// Largest |h| on the first and last eta sample over all modes.
  double boundary_residual() const;
  /// L^2 norm in eta of mode k: (sum_j |h(k,eta_j)|^2 deta)^{1/2}.
  double mode_norm(int k) const;
};

/// Non-fatal issue reported by an operation (truncation at a window edge).
struct Warning {
  std::string what;
  double residual = 0.0;
};

using WarningSink = std::vector<Warning>;

}  // namespace vpfp
