#include "vpfp/flow_maps.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"

namespace vpfp {

namespace {

constexpr double kTaylorSwitch = 1e-6;
constexpr double kSeriesSwitch = 1.0;

// sum_{n >= n0} c(n) x^{n - n0} / (n + 1)!, summed until terms are negligible.
template <class Coef>
double factorial_series(double x, int n0, Coef coef) {
  double fact = 1.0;
  for (int i = 2; i <= n0 + 1; ++i) fact *= i;
  double xp = 1.0, sum = 0.0;
  for (int n = n0; n < n0 + 80; ++n) {
    const double term = coef(n) * xp / fact;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && n > n0 + 2) break;
    xp *= x;
    fact *= (n + 2);
  }
  return sum;
}

}  // namespace

double tau_nu(double t, double nu) {
  if (nu == 0.0) return t;
  const double x = nu * t;
  if (x < kTaylorSwitch) return t * (1.0 - x / 2.0 + x * x / 6.0);
  return -std::expm1(-x) / nu;
}

double expm1_over_nu(double t, double nu) {
  if (nu == 0.0) return t;
  const double x = nu * t;
  if (x > kMaxExponent)
    throw HorizonError("exp(nu t) overflows; admissible horizon is t <= " + std::to_string(kMaxExponent / nu),
                       kMaxExponent / nu);
  if (x < kTaylorSwitch) return t * (1.0 + x / 2.0 + x * x / 6.0);
  return std::expm1(x) / nu;
}

double eta_bar(double t, double k, double eta, double nu) {
  if (t < 0.0) throw ArgumentError("eta_bar: t must be >= 0");
  const double e = expm1_over_nu(t, nu);
  return (1.0 + nu * e) * eta - k * e;
}

double eta_bar_square_integral(double T, double k, double eta0, double nu) {
  if (T <= 0.0) return 0.0;
  const double x = nu * T;
  if (2.0 * x > kMaxExponent) return std::numeric_limits<double>::infinity();
  double A, B, C;
  if (x < kSeriesSwitch) {
    A = T * factorial_series(2.0 * x, 0, [](int) { return 1.0; });
    B = T * T * factorial_series(x, 1, [](int n) { return std::ldexp(1.0, n) - 1.0; });
    C = T * T * T * factorial_series(x, 2, [](int n) { return std::ldexp(1.0, n) - 2.0; });
  } else {
    const double E1 = std::expm1(x) / nu;
    A = std::expm1(2.0 * x) / (2.0 * nu);
    B = (A - E1) / nu;
    C = (A - 2.0 * E1 + T) / (nu * nu);
  }
  const double g = eta0 * eta0 * A - 2.0 * k * eta0 * B + k * k * C;
  return g > 0.0 ? g : 0.0;
}

double tau_square_integral(double T, double nu) {
  if (T <= 0.0) return 0.0;
  const double x = nu * T;
  if (x < kSeriesSwitch)
    return T * T * T * factorial_series(-x, 2, [](int n) { return std::ldexp(1.0, n) - 2.0; });
  return (T - (3.0 - 4.0 * std::exp(-x) + std::exp(-2.0 * x)) / (2.0 * nu)) / (nu * nu);
}

double S_factor(double t, double tau, double k, double eta, double nu) {
  if (tau < 0.0 || tau > t) throw ArgumentError("S_factor: requires 0 <= tau <= t");
  if (tau == t) return 1.0;
  const double start = eta_bar(tau, k, eta, nu);
  return std::exp(-nu * eta_bar_square_integral(t - tau, k, start, nu));
}

double S_shorthand(double T, double k, double nu) {
  if (T < 0.0) throw ArgumentError("S_shorthand: T must be >= 0");
  return std::exp(-nu * k * k * tau_square_integral(T, nu));
}

LinearFlowParams LinearFlowParams::make(double nu, int k, double t) {
  LinearFlowParams p;
  p.nu = nu;
  p.k = k;
  p.t = t;
  p.exp_minus_nu_t = std::exp(-nu * t);
  p.tau = tau_nu(t, nu);
  return p;
}

}  // namespace vpfp
