#pragma once

#include <string>
#include <vector>

#include "vpfp/gevrey.hpp"
#include "vpfp/grid.hpp"

namespace vpfp {

/// Gaussian bump h_in(k, eta) += eps * amplitude * exp(-(eta - eta0)^2 / (2 sigma^2));
/// the conjugate bump at (-k, -eta0) is added automatically.
struct Bump {
  int k = 1;
  cplx amplitude = 1.0;
  double eta0 = 0.0;
  double sigma = 1.0;
};

struct SimConfig {
  Grid grid;
  double nu = 0.0;
  double dt = 0.05;
  double T_end = 10.0;
  double epsilon = 1e-3;
  std::vector<Bump> initial;
  bool nonlinear = true;
  bool linear_field = true;
  int history_stride = 0;      // snapshot every n steps (0: none)
  int diagnostic_stride = 0;   // entropy / bootstrap every n steps (0: none)
  bool entropy = false;
  bool bootstrap = false;
  GevreyWeight weight;
  StabilityConstants constants = StabilityConstants::defaults();

  /// Throws ConfigError on an invalid configuration (dt above dt_max, eps < 0, ...).
  void validate() const;
  int steps() const;
};

/// rho^(t, k) and E^(t, k) = -i k / |k|^2 rho^(t, k) sampled in time;
/// mode_norm holds ||h^(t, k, .)||_{L^2_eta} per mode.
struct DensityTrace {
  int Kmax = 0;
  std::vector<double> times;
  std::vector<std::vector<cplx>> rho;    // [time][k + Kmax]
  std::vector<std::vector<cplx>> efield; // [time][k + Kmax]
  std::vector<std::vector<double>> mode_norm;

  void append(const SpectralState& state);
  /// Time series of rho^(., k).
  std::vector<cplx> rho_series(int k) const;
  std::vector<double> mode_norm_series(int k) const;
};

struct BootstrapRecord {
  double time = 0.0;
  double H_rho = 0.0;
  double E_T = 0.0;
  double E_ED = 0.0;
  double H_sh = 0.0;
};

struct DiagnosticSample {
  double time = 0.0;
  double entropy = 0.0;        // NaN when F = mu + h is not positive
  bool entropy_available = false;
  BootstrapRecord bootstrap;
};

struct RunResult {
  DensityTrace trace;
  std::vector<SpectralState> snapshots;
  std::vector<DiagnosticSample> diagnostics;
  double max_mass_defect = 0.0;
  double max_reality_defect = 0.0;  // before the per-step projection
  std::vector<Warning> warnings;
  bool blew_up = false;
  double blowup_time = 0.0;
  std::string failure;

  /// Throws BlowUpError if the run stopped early.
  void rethrow_if_failed() const;
};

/// Initial state eps * sum of bumps (and their conjugates), time 0.
SpectralState initial_state(const SimConfig& config);

/// rho^(k) = h^(k, eta = 0) per mode, index k + Kmax.
std::vector<cplx> density(const SpectralState& state);

/// Electric field E^(k) = -i k/|k|^2 rho^(k), E^(0) = 0.
std::vector<cplx> efield(const std::vector<cplx>& rho, int Kmax);

/// Right-hand side of the field terms:
///   -rho^(k) (eta/k) mu^(eta)  -  sum_{l != 0} rho^(l) (eta/l) h^(k - l, eta),
/// restricted to |l|, |k - l| <= Kmax. Either term can be switched off.
SpectralState nonlinear_rhs(const SpectralState& state, bool nonlinear = true, bool linear_field = true);

/// One Strang step: linear_step(dt/2), Heun substep of the field terms with
/// rho re-evaluated per stage, linear_step(dt/2). Throws BlowUpError on
/// non-finite values.
SpectralState step(const SpectralState& state, double dt, const SimConfig& config, WarningSink* warnings = nullptr);

/// Marches to T_end recording the trace every step, snapshots and
/// diagnostics at their strides. A blow-up stops the march and is reported
/// in the result with everything recorded so far.
RunResult run(const SimConfig& config);

}  // namespace vpfp
