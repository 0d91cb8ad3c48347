#pragma once

#include "vpfp/grid.hpp"

namespace vpfp {

/// Parameters of the time-dependent Gevrey weight lambda(t, r).
struct GevreyWeight {
  double lambda1 = 1.0;
  double lambda_inf = 0.5;
  double s = 1.0 / 3.0;
  double b = 1.0 / 24.0;  // always s / 8
  double beta = 7.0;
  int m = 3;

  /// Builds a weight with b = s/8 and validates it.
  static GevreyWeight make(double lambda1, double lambda_inf, double s, int m = 3, double beta = 7.0);
  /// Throws ConfigError if an invariant fails (for spatial dimension d).
  void validate(int d = 1) const;
};

/// Rates delta > delta1 > delta2 > 0, contour abscissa and Penrose margin.
struct StabilityConstants {
  double delta = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double lambda_bar = 0.0;
  double kappa = 0.0;
  double delta_prime = 0.0;

  /// delta = delta'/4, delta1 = delta/2, delta2 = delta1/2, lambda_bar = delta'/2.
  static StabilityConstants defaults(double kappa = 1.0);
  void validate() const;
};

/// lambda(t,r) = l_inf + (l1 - l_inf)/8 (1+t)^{-b} <r>^s
///                     + (l1 - l_inf)/8 (1 + t <r>^{s-1})^{-b} <r>^s.
double gevrey_lambda(double t, double r, const GevreyWeight& w);

/// A^nu_c(t, k, eta) = <k, eta>^{beta + c} exp(lambda((1 - e^{-nu t})/nu, |k, eta|)).
/// Throws OverflowError naming (k, eta) when the value is not representable.
double multiplier(double t, double nu, int k, double eta, double c, const GevreyWeight& w);

/// Pointwise product of the state with A^nu_c(t, ., .). Requires c >= -beta.
SpectralState apply_multiplier(const SpectralState& state, double c, const GevreyWeight& w, double t);

/// H^sigma_q norm (\iint <v>^q |<nabla_{x,v}>^sigma f|^2 dx dv)^{1/2}: the
/// frequency weight <k, eta>^sigma is applied in (k, eta), the transform to
/// (k, v) is taken, and <v>^q is applied there. Requires q <= 2 moment_order.
double weighted_norm(const SpectralState& state, double sigma, int q, int moment_order = 3);

}  // namespace vpfp
