#pragma once

#include <vector>

#include "vpfp/constants.hpp"
#include "vpfp/grid.hpp"

namespace vpfp {

/// Contour scan descriptor: modes k_min..k_max and a symmetric,
/// logarithmically dense frequency grid {0} U {+-omega_min r^i}, i < n_omega.
struct PenroseScan {
  int k_min = 1;
  int k_max = kPenroseK0;
  double omega_min = 1e-3;
  double omega_max = 40.0;
  int n_omega = 96;

  /// Frequencies of the symmetric grid (ascending).
  std::vector<double> frequencies() const;
  /// Same descriptor with n_omega -> 2 n_omega - 1; the new grid contains the old.
  PenroseScan refined() const;
};

struct PenroseReport {
  double nu = 0.0;
  double lambda_bar = 0.0;
  double kappa_estimate = 0.0;  // minimum on the refined scan
  double kappa_coarse = 0.0;    // minimum on the scan as given
  double refinement_change = 0.0;
  PenroseScan scan;
  int argmin_k = 0;
  cplx argmin_z = 0.0;
  /// max |K~| (k^2 + (Im z)^2) seen on the scan; bounds |K~| for k > k_max.
  double tail_constant = 0.0;
  /// 1 - tail_constant / (k_max + 1)^2, a lower bound of |K~ + 1| beyond k_max.
  double tail_bound = 0.0;
};

/// kappa = min over k in [k_min, k_max] and z = -lambda_bar k + i omega of
/// |K~(z, k) + 1|. Requires lambda_bar < delta_prime and a nonempty k range.
/// The scan is repeated on the refined grid; a relative change above 10%
/// throws ResolutionError.
PenroseReport penrose_margin(double nu, double lambda_bar, const PenroseScan& scan = {},
                             double delta_prime = kDeltaPrime);

}  // namespace vpfp
