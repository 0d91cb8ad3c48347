#include "vpfp/echo.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/errors.hpp"

namespace vpfp {

std::string to_string(EchoRegime regime) {
  switch (regime) {
    case EchoRegime::i: return "i";
    case EchoRegime::ii: return "ii";
    case EchoRegime::iii: return "iii";
  }
  return "?";
}

double log_psi(int k, double nu, double a, double eta) {
  if (k < 1) throw ArgumentError("psi: k must be >= 1");
  if (!(eta > 0.0)) throw ArgumentError("psi: eta must be positive");
  if (!(nu > 0.0)) throw ArgumentError("psi: nu must be positive");
  return a * std::log(nu) + std::log(eta) - 3.0 * std::log(double(k)) - std::cbrt(nu) * eta / k;
}

double psi(int k, double nu, double a, double eta) { return std::exp(log_psi(k, nu, a, eta)); }

EchoRegime echo_regime(double nu, double a, double eta) {
  if (eta <= 3.0 / std::cbrt(nu)) return EchoRegime::i;
  if (eta <= std::pow(3.0 / std::exp(1.0), 1.5) * std::pow(nu, -(1.0 - a) / 2.0)) return EchoRegime::ii;
  return EchoRegime::iii;
}

int minimal_chain_cap(double nu, double a, double eta) {
  const double X = std::pow(nu, a) * eta;
  return static_cast<int>(std::ceil(std::cbrt(X)) + std::ceil(std::cbrt(nu) * eta));
}

EchoRegimeReport max_chain_product(double nu, double a, double eta, int k_cap) {
  if (k_cap < std::max(1, minimal_chain_cap(nu, a, eta)))
    throw ArgumentError("max_chain_product: k_cap below both critical scales");
  EchoRegimeReport rep;
  rep.nu = nu;
  rep.a = a;
  rep.eta = eta;
  rep.regime = echo_regime(nu, a, eta);
  // Best chain ending at k is either psi(k) alone or the best chain ending
  // at k - 1 extended by psi(k).
  double best = -INFINITY, run = 0.0;
  int start = 1;
  for (int k = 1; k <= k_cap; ++k) {
    const double lp = log_psi(k, nu, a, eta);
    if (k == 1 || run <= 0.0) {
      run = lp;
      start = k;
    } else {
      run += lp;
    }
    if (run > best) {
      best = run;
      rep.k1 = start;
      rep.k2 = k;
    }
  }
  if (rep.k2 == k_cap && k_cap > 1) throw CapError("max_chain_product: maximizing chain reaches k_cap");
  rep.log_sup = best;
  rep.sup_product = std::exp(best);
  const auto env = growth_envelope(nu, a, eta);
  rep.envelope1 = env.first;
  rep.envelope2 = env.second;
  return rep;
}

double echo_log_bound(double nu, double a, double eta) {
  const double X = std::pow(nu, a) * eta;
  switch (echo_regime(nu, a, eta)) {
    case EchoRegime::i: return 3.0 * std::cbrt(X) - 0.5 * std::log(X) + kEchoConstantI;
    case EchoRegime::ii:
      return 0.5 * std::log(std::pow(nu, 1.0 - a) * eta * eta) + 3.0 * std::cbrt(X) - 2.0 * std::cbrt(nu) * eta +
             kEchoConstantII;
    case EchoRegime::iii: return 0.0;
  }
  return 0.0;
}

std::pair<double, double> growth_envelope(double nu, double a, double eta) {
  if (!(a < 1.0 / 3.0)) throw ArgumentError("growth_envelope: a must be below 1/3");
  const double X = std::pow(nu, a) * eta;
  const double e1 = 3.0 * std::cbrt(X) - 2.0 * std::cbrt(nu) * eta;
  const double e2 = 3.0 * std::pow(eta, (1.0 - 3.0 * a) / (3.0 - 3.0 * a));
  return {e1, e2};
}

double threshold_exponent(double s) {
  if (!(s > 0.0) || s > 1.0) throw ArgumentError("threshold_exponent: s outside (0, 1]");
  if (s >= 1.0 / 3.0) return 0.0;
  return (1.0 - 3.0 * s) / (3.0 - 3.0 * s);
}

EchoPeakReport echo_experiment(const SimConfig& config, double eta0) {
  if (!(eta0 > 0.0) || 1.2 * eta0 > config.grid.eta_max)
    throw ArgumentError("echo_experiment: eta0 must sit inside the eta window with a 20% margin");
  if (config.T_end < 1.2 * eta0) throw ArgumentError("echo_experiment: T_end must cover 1.2 eta0");
  EchoPeakReport rep;
  rep.eta0 = eta0;
  rep.run = run(config);
  rep.run.rethrow_if_failed();
  const DensityTrace& tr = rep.run.trace;
  rep.times = tr.times;
  for (const cplx& r : tr.rho_series(1)) rep.abs_rho1.push_back(std::abs(r));

  const double overall = *std::max_element(rep.abs_rho1.begin(), rep.abs_rho1.end());
  double floor = 1e-14 * overall;
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    if (rep.times[i] >= 0.5 * eta0 && rep.times[i] <= 0.7 * eta0) floor = std::max(floor, rep.abs_rho1[i]);
  rep.noise_floor = floor;

  for (std::size_t i = 1; i + 1 < rep.times.size(); ++i) {
    const double t = rep.times[i];
    if (t < 0.8 * eta0 || t > 1.2 * eta0) continue;
    const double y = rep.abs_rho1[i];
    if (y > rep.abs_rho1[i - 1] && y >= rep.abs_rho1[i + 1] && y > rep.peak_amplitude) {
      rep.peak_amplitude = y;
      rep.t_peak = t;
    }
  }
  rep.echo_found = rep.peak_amplitude > 3.0 * floor;
  return rep;
}

}  // namespace vpfp
