#include "vpfp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"

namespace vpfp {

double Grid::x(int n) const { return kTwoPi * n / Nx; }

void Grid::validate() const {
  if (d != 1) throw ConfigError("grid: only d = 1 is supported");
  if (Kmax < 2) throw ConfigError("grid: Kmax must be >= 2");
  if (Neta <= 0 || Neta % 2 != 0) throw ConfigError("grid: Neta must be positive and even");
  if (!(eta_max > 0.0)) throw ConfigError("grid: eta_max must be positive");
  if (Nv < 3) throw ConfigError("grid: Nv must be >= 3");
  if (!(v_max > 0.0)) throw ConfigError("grid: v_max must be positive");
  if (Nx < 2 * Kmax + 1) throw ConfigError("grid: Nx must be >= 2 Kmax + 1");
}

SpectralState::SpectralState(const Grid& g, double nu_, double time_)
    : grid(g), time(time_), nu(nu_),
      values(static_cast<std::size_t>(g.num_modes()) * static_cast<std::size_t>(g.num_eta())) {
  grid.validate();
  if (nu_ < 0.0) throw ArgumentError("nu must be >= 0");
}

double SpectralState::reality_defect() const {
  const int n = grid.num_eta();
  double worst = 0.0;
  for (int k = 0; k <= grid.Kmax; ++k)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(at(-k, n - 1 - j) - std::conj(at(k, j))));
  return worst;
}

void SpectralState::enforce_reality() {
  const int n = grid.num_eta();
  for (int k = 0; k <= grid.Kmax; ++k) {
    for (int j = 0; j < n; ++j) {
      if (k == 0 && j > n - 1 - j) break;
      cplx& a = at(k, j);
      cplx& b = at(-k, n - 1 - j);
      const cplx sym = 0.5 * (a + std::conj(b));
      a = sym;
      b = std::conj(sym);
    }
  }
}

double SpectralState::max_abs() const {
  double m = 0.0;
  for (const auto& c : values) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralState::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double SpectralState::boundary_residual() const {
  double m = 0.0;
  for (int k = -grid.Kmax; k <= grid.Kmax; ++k)
    m = std::max({m, std::abs(at(k, 0)), std::abs(at(k, grid.Neta))});
  return m;
}

double SpectralState::mode_norm(int k) const {
  const cplx* h = mode(k);
  double s = 0.0;
  for (int j = 0; j < grid.num_eta(); ++j) s += std::norm(h[j]);
  return std::sqrt(s * grid.deta());
}

}  // namespace vpfp
