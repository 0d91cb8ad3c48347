#include "vpfp/penrose.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vpfp/errors.hpp"
#include "vpfp/kernel.hpp"
#include "vpfp/parallel.hpp"

namespace vpfp {

std::vector<double> PenroseScan::frequencies() const {
  std::vector<double> pos;
  if (n_omega == 1) {
    pos.push_back(omega_min);
  } else {
    const double ratio = std::log(omega_max / omega_min) / (n_omega - 1);
    for (int i = 0; i < n_omega; ++i) pos.push_back(omega_min * std::exp(ratio * i));
  }
  std::vector<double> all;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) all.push_back(-*it);
  all.push_back(0.0);
  all.insert(all.end(), pos.begin(), pos.end());
  return all;
}

PenroseScan PenroseScan::refined() const {
  PenroseScan r = *this;
  r.n_omega = 2 * n_omega - 1;
  return r;
}

namespace {

struct ScanResult {
  double kappa = std::numeric_limits<double>::infinity();
  int k = 0;
  cplx z = 0.0;
  double tail_constant = 0.0;
};

ScanResult scan_once(double nu, double lambda_bar, const PenroseScan& scan) {
  const auto omegas = scan.frequencies();
  const int nk = scan.k_max - scan.k_min + 1;
  std::vector<ScanResult> per_k(static_cast<std::size_t>(nk));
  parallel_for(static_cast<std::size_t>(nk), [&](std::size_t i) {
    const int k = scan.k_min + static_cast<int>(i);
    const double re = -lambda_bar * k;
    KernelLaplace lap(k, nu, re);
    ScanResult r;
    for (double w : omegas) {
      const cplx z(re, w);
      const cplx kt = lap(z);
      const double val = std::abs(kt + 1.0);
      if (val < r.kappa) {
        r.kappa = val;
        r.k = k;
        r.z = z;
      }
      r.tail_constant = std::max(r.tail_constant, std::abs(kt) * (double(k) * k + w * w));
    }
    per_k[i] = r;
  });
  ScanResult best;
  for (const auto& r : per_k) {
    if (r.kappa < best.kappa) {
      best.kappa = r.kappa;
      best.k = r.k;
      best.z = r.z;
    }
    best.tail_constant = std::max(best.tail_constant, r.tail_constant);
  }
  return best;
}

}  // namespace

PenroseReport penrose_margin(double nu, double lambda_bar, const PenroseScan& scan, double delta_prime) {
  if (scan.k_min < 1 || scan.k_max < scan.k_min) throw ArgumentError("penrose_margin: empty k range");
  if (!(lambda_bar >= 0.0) || !(lambda_bar < delta_prime))
    throw ArgumentError("penrose_margin: requires 0 <= lambda_bar < delta'");
  if (!(scan.omega_min > 0.0) || !(scan.omega_max > scan.omega_min) || scan.n_omega < 2)
    throw ArgumentError("penrose_margin: invalid frequency grid");

  const ScanResult coarse = scan_once(nu, lambda_bar, scan);
  const ScanResult fine = scan_once(nu, lambda_bar, scan.refined());

  PenroseReport rep;
  rep.nu = nu;
  rep.lambda_bar = lambda_bar;
  rep.scan = scan;
  rep.kappa_coarse = coarse.kappa;
  rep.kappa_estimate = fine.kappa;
  rep.argmin_k = fine.k;
  rep.argmin_z = fine.z;
  rep.refinement_change = coarse.kappa > 0.0 ? (coarse.kappa - fine.kappa) / coarse.kappa : 0.0;
  rep.tail_constant = std::max(coarse.tail_constant, fine.tail_constant);
  rep.tail_bound = 1.0 - rep.tail_constant / ((scan.k_max + 1.0) * (scan.k_max + 1.0));
  if (rep.refinement_change > 0.10)
    throw ResolutionError("penrose_margin: kappa changed by " + std::to_string(100.0 * rep.refinement_change) +
                          "% under refinement");
  return rep;
}

}  // namespace vpfp
