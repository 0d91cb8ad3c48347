#pragma once

namespace vpfp {

/// (1 - e^{-nu t}) / nu, with the limit t at nu = 0 and a three-term Taylor
/// expansion when nu t < 1e-6.
double tau_nu(double t, double nu);

/// (e^{nu t} - 1) / nu with the same small-argument handling. Throws
/// HorizonError when nu t > 700.
double expm1_over_nu(double t, double nu);

/// Frequency-space characteristic e^{nu t} eta - k (e^{nu t} - 1)/nu.
double eta_bar(double t, double k, double eta, double nu);

/// \int_0^T |e^{nu u} eta0 - k (e^{nu u} - 1)/nu|^2 du in closed form
/// (series for nu T < 1). Returns +inf when nu T is too large to represent.
double eta_bar_square_integral(double T, double k, double eta0, double nu);

/// J(T) = \int_0^T ((1 - e^{-nu u})/nu)^2 du.
double tau_square_integral(double T, double nu);

/// S(t, tau, k, eta) = exp(-nu \int_tau^t |eta_bar(s, k, eta)|^2 ds).
/// Throws ArgumentError when tau > t or tau < 0.
double S_factor(double t, double tau, double k, double eta, double nu);

/// Shorthand S(T, k) = exp(-nu k^2 J(T)), the damping along the
/// density-extraction characteristic over an interval of length T.
double S_shorthand(double T, double k, double nu);

/// Cached ingredients of the linear flow for one mode and time.
struct LinearFlowParams {
  double nu = 0.0;
  int k = 0;
  double t = 0.0;
  double exp_minus_nu_t = 1.0;  // e^{-nu t}
  double tau = 0.0;             // (1 - e^{-nu t}) / nu

  static LinearFlowParams make(double nu, int k, double t);
};

}  // namespace vpfp
