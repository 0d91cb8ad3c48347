#pragma once

#include "vpfp/grid.hpp"

namespace vpfp {

/// Four-point (cubic Lagrange) interpolation of samples f on the eta grid at
/// an arbitrary frequency. Points within 1e-9 cells of a node return the node
/// value; the field is taken to vanish outside the window. The stencil is
/// mirror symmetric, so interpolating at -eta from reflected data is the
/// reflection of interpolating at eta.
cplx interpolate_eta(const cplx* f, const Grid& grid, double eta);

/// Same, for real samples.
double interpolate_eta(const double* f, const Grid& grid, double eta);

}  // namespace vpfp
