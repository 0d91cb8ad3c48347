#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vpfp/simulator.hpp"

namespace vpfp {

enum class EchoRegime { i, ii, iii };

std::string to_string(EchoRegime regime);

/// Additive constants of the log bounds on the chain supremum in regimes
/// (i) and (ii). Calibrated once; see README.
inline constexpr double kEchoConstantI = -2.65;
inline constexpr double kEchoConstantII = -2.25;

/// psi(k) = (nu^a eta / k^3) exp(-nu^{1/3} eta / k). Requires k >= 1, eta > 0.
double psi(int k, double nu, double a, double eta);
double log_psi(int k, double nu, double a, double eta);

/// (i) eta <= 3 nu^{-1/3}; (ii) up to (3/e)^{3/2} nu^{-(1-a)/2}; (iii) beyond.
EchoRegime echo_regime(double nu, double a, double eta);

/// Smallest admissible k_cap: ceil((nu^a eta)^{1/3}) + ceil(nu^{1/3} eta).
int minimal_chain_cap(double nu, double a, double eta);

struct EchoRegimeReport {
  double nu = 0.0;
  double a = 0.0;
  double eta = 0.0;
  EchoRegime regime = EchoRegime::i;
  double sup_product = 0.0;  // exp(log_sup), may overflow to inf
  int k1 = 1;
  int k2 = 1;
  double log_sup = 0.0;
  double envelope1 = 0.0;
  double envelope2 = 0.0;
};

/// sup over 1 <= k1 <= k2 <= k_cap of prod_{k1..k2} psi(k), by a single
/// pass over the log-sums. Throws ArgumentError below minimal_chain_cap and
/// CapError when the maximizing chain ends at k_cap.
EchoRegimeReport max_chain_product(double nu, double a, double eta, int k_cap);

/// Log bound on the supremum for the regime of (nu, a, eta):
///   (i)   3 X^{1/3} - 1/2 log X + C_i,               X = nu^a eta
///   (ii)  1/2 log(nu^{1-a} eta^2) + 3 X^{1/3} - 2 nu^{1/3} eta + C_ii
///   (iii) 0
double echo_log_bound(double nu, double a, double eta);

/// Exponents (3 (nu^a eta)^{1/3} - 2 nu^{1/3} eta, 3 eta^{(1-3a)/(3-3a)}).
/// Requires a < 1/3.
std::pair<double, double> growth_envelope(double nu, double a, double eta);

/// (1 - 3s)/(3 - 3s) for 0 < s < 1/3 and 0 for 1/3 <= s <= 1.
double threshold_exponent(double s);

struct EchoPeakReport {
  double eta0 = 0.0;
  bool echo_found = false;
  double t_peak = 0.0;
  double peak_amplitude = 0.0;
  double noise_floor = 0.0;
  std::vector<double> times;
  std::vector<double> abs_rho1;  // |rho^(t, 1)|
  RunResult run;
};

/// Runs the simulator and looks for the secondary maximum of |rho^(t, 1)|
/// near t = eta0. The floor is the largest |rho^(t, 1)| on
/// [0.5 eta0, 0.7 eta0] (at least 1e-14 of the overall maximum); the peak
/// is the largest interior local maximum on [0.8 eta0, 1.2 eta0], and it
/// counts only when it exceeds three times the floor.
/// Requires 1.2 eta0 <= eta_max and T_end >= 1.2 eta0.
EchoPeakReport echo_experiment(const SimConfig& config, double eta0);

}  // namespace vpfp
