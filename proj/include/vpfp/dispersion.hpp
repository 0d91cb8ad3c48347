#pragma once

#include <vector>

#include "vpfp/grid.hpp"

namespace vpfp {

struct DispersionOptions {
  double z_cut = 0.0;    // search Re z > -z_cut; 0 selects 3|k|
  double re_max = 0.5;   // right edge of the search rectangle
  double im_max = 0.0;   // |Im z| <= im_max; 0 selects 3|k| + 3
  double max_arg_step = 0.3;
};

/// Zeros of 1 + K~(z, k) inside the search rectangle, sorted by decreasing
/// real part (then increasing imaginary part). The zeros are counted with
/// the argument principle along the rectangle boundary (adaptive edge
/// sampling), isolated by bisection, and polished by Newton's method to
/// |1 + K~| < 1e-10. Counts that change with the edge resolution or with a
/// small enlargement of the rectangle throw ResolutionError.
std::vector<cplx> dispersion_roots(int k, double nu, const DispersionOptions& options = {});

}  // namespace vpfp
