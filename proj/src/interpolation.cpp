#include "vpfp/interpolation.hpp"

#include <cmath>

namespace vpfp {

namespace {

template <class T>
T cubic(const T* f, const Grid& grid, double eta) {
  const double u = (eta + grid.eta_max) / grid.deta();
  const int n = grid.Neta;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-9) {
    const int j = static_cast<int>(nearest);
    return (j >= 0 && j <= n) ? f[j] : T(0.0);
  }
  if (u < -2.0 || u > n + 2.0) return T(0.0);
  const int j = static_cast<int>(std::floor(u));
  const double s = u - j;  // in (0, 1)
  // Lagrange weights for nodes j-1, j, j+1, j+2.
  const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
  auto val = [&](int i) { return (i >= 0 && i <= n) ? f[i] : T(0.0); };
  return w0 * val(j - 1) + w1 * val(j) + w2 * val(j + 1) + w3 * val(j + 2);
}

}  // namespace

cplx interpolate_eta(const cplx* f, const Grid& grid, double eta) { return cubic(f, grid, eta); }

double interpolate_eta(const double* f, const Grid& grid, double eta) { return cubic(f, grid, eta); }

}  // namespace vpfp
