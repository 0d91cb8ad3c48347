#pragma once

#include <cmath>
#include <numbers>

namespace vpfp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Admissible exponent in S(t,k) <= exp(-delta' min{nu k^2 t^3, k^2 t / nu}).
// Lattice minimum of the ratio is ~0.168 (near nu t = 1), so 1/12 leaves a
// factor-two margin.
inline constexpr double kDeltaPrime = 1.0 / 12.0;

// Contour abscissa lambda_bar = delta'/2 and the Penrose mode cutoff k0.
inline constexpr double kLambdaBar = kDeltaPrime / 2.0;
inline constexpr int kPenroseK0 = 16;

// Upper end of the nu range treated as "small" (nut check precondition).
inline constexpr double kNu0 = 0.1;

// Largest nu*t for which exp(nu*t) is still comfortably representable.
inline constexpr double kMaxExponent = 700.0;

/// Fourier transform of the d=1 Maxwellian with the (2 pi)^{-1} convention.
inline double mu_hat(double eta) { return std::exp(-0.5 * eta * eta) / kTwoPi; }

/// Japanese bracket <x> = sqrt(1 + x^2), and <x, y> = sqrt(1 + x^2 + y^2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }
inline double bracket(double x, double y) { return std::sqrt(1.0 + x * x + y * y); }

}  // namespace vpfp
