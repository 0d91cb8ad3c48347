#include "vpfp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/parallel.hpp"

namespace vpfp {

std::vector<double> v_weights(const Grid& grid) {
  std::vector<double> w(static_cast<std::size_t>(grid.Nv), grid.dv());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

// Phase table e^{-i eta_j v_i}, row j.
std::vector<cplx> phase_table(const Grid& grid) {
  const int ne = grid.num_eta();
  const int nv = grid.Nv;
  std::vector<cplx> table(static_cast<std::size_t>(ne) * nv);
  for (int j = 0; j < ne; ++j) {
    const double eta = grid.eta(j);
    for (int i = 0; i < nv; ++i) table[static_cast<std::size_t>(j) * nv + i] = std::polar(1.0, -eta * grid.v(i));
  }
  return table;
}

}  // namespace

SpectralState forward_transform(const PhysicalField& h, const Grid& grid, double nu, double time,
                                WarningSink* warnings) {
  grid.validate();
  if (!(h.grid == grid) || h.values.size() != static_cast<std::size_t>(grid.Nx) * grid.Nv)
    throw ConfigError("forward_transform: field sampled on a different grid");

  const int nx = grid.Nx, nv = grid.Nv, ne = grid.num_eta();
  // x-DFT: c_k(v_i) = (1/Nx) sum_n h(x_n, v_i) e^{-ik x_n}; the (2 pi)^{-1}
  // prefactor cancels against dx = 2 pi / Nx.
  std::vector<cplx> ck(static_cast<std::size_t>(grid.num_modes()) * nv);
  double peak = 0.0, edge = 0.0;
  for (int n = 0; n < nx; ++n)
    for (int i = 0; i < nv; ++i) {
      const double a = std::abs(h.at(n, i));
      peak = std::max(peak, a);
      if (i == 0 || i == nv - 1) edge = std::max(edge, a);
    }
  if (warnings && peak > 0.0 && edge > 1e-10 * peak)
    warnings->push_back({"forward_transform: non-negligible mass at |v| = v_max", edge / peak});

  parallel_for(static_cast<std::size_t>(grid.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - grid.Kmax;
    std::vector<cplx> tw(static_cast<std::size_t>(nx));
    for (int n = 0; n < nx; ++n) tw[n] = std::polar(1.0 / nx, -k * grid.x(n));
    for (int i = 0; i < nv; ++i) {
      cplx s = 0.0;
      for (int n = 0; n < nx; ++n) s += h.at(n, i) * tw[n];
      ck[m * nv + i] = s;
    }
  });

  const auto w = v_weights(grid);
  const auto phase = phase_table(grid);
  SpectralState out(grid, nu, time);
  parallel_for(static_cast<std::size_t>(grid.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - grid.Kmax;
    cplx* dst = out.mode(k);
    const cplx* src = ck.data() + m * nv;
    for (int j = 0; j < ne; ++j) {
      const cplx* ph = phase.data() + static_cast<std::size_t>(j) * nv;
      cplx s = 0.0;
      for (int i = 0; i < nv; ++i) s += src[i] * w[i] * ph[i];
      dst[j] = s;
    }
  });
  return out;
}

EtaVTransform::EtaVTransform(const Grid& grid) : grid_(grid), wv_(v_weights(grid)) {
  const int ne = grid.num_eta(), nv = grid.Nv;
  weta_.assign(static_cast<std::size_t>(ne), grid.deta() / kTwoPi);
  weta_.front() *= 0.5;
  weta_.back() *= 0.5;
  phase_.resize(static_cast<std::size_t>(ne) * nv);
  for (int j = 0; j < ne; ++j)
    for (int i = 0; i < nv; ++i) phase_[static_cast<std::size_t>(j) * nv + i] = std::polar(1.0, grid.eta(j) * grid.v(i));
}

void EtaVTransform::to_v(const cplx* f_eta, cplx* g_v, const double* multiplier) const {
  const int ne = grid_.num_eta(), nv = grid_.Nv;
  std::fill(g_v, g_v + nv, cplx(0.0));
  for (int j = 0; j < ne; ++j) {
    double w = weta_[j];
    if (multiplier) w *= multiplier[j];
    const cplx a = f_eta[j] * w;
    if (a == cplx(0.0)) continue;
    const cplx* ph = phase_.data() + static_cast<std::size_t>(j) * nv;
    for (int i = 0; i < nv; ++i) g_v[i] += a * ph[i];
  }
}

void EtaVTransform::to_eta(const cplx* g_v, cplx* f_eta) const {
  const int ne = grid_.num_eta(), nv = grid_.Nv;
  std::vector<cplx> gw(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) gw[i] = g_v[i] * wv_[i];
  for (int j = 0; j < ne; ++j) {
    const cplx* ph = phase_.data() + static_cast<std::size_t>(j) * nv;
    cplx s = 0.0;
    for (int i = 0; i < nv; ++i) s += gw[i] * std::conj(ph[i]);
    f_eta[j] = s;
  }
}

std::vector<cplx> eta_to_v(const SpectralState& state, const std::vector<double>* multiplier) {
  const Grid& grid = state.grid;
  const EtaVTransform tr(grid);
  const int nv = grid.Nv, ne = grid.num_eta();
  std::vector<cplx> out(static_cast<std::size_t>(grid.num_modes()) * nv);
  parallel_for(static_cast<std::size_t>(grid.num_modes()), [&](std::size_t m) {
    const int k = static_cast<int>(m) - grid.Kmax;
    tr.to_v(state.mode(k), out.data() + m * nv, multiplier ? multiplier->data() + m * ne : nullptr);
  });
  return out;
}

std::vector<cplx> v_to_eta(const Grid& grid, const cplx* g) {
  std::vector<cplx> out(static_cast<std::size_t>(grid.num_eta()));
  EtaVTransform(grid).to_eta(g, out.data());
  return out;
}

PhysicalField inverse_transform(const SpectralState& state) {
  const Grid& grid = state.grid;
  const auto g = eta_to_v(state);
  PhysicalField out(grid);
  const int nv = grid.Nv;
  parallel_for(static_cast<std::size_t>(grid.Nx), [&](std::size_t n) {
    std::vector<cplx> tw(static_cast<std::size_t>(grid.num_modes()));
    for (int k = -grid.Kmax; k <= grid.Kmax; ++k)
      tw[k + grid.Kmax] = std::polar(1.0, k * grid.x(static_cast<int>(n)));
    for (int i = 0; i < nv; ++i) {
      double s = 0.0;
      for (int m = 0; m < grid.num_modes(); ++m) s += (g[static_cast<std::size_t>(m) * nv + i] * tw[m]).real();
      out.at(static_cast<int>(n), i) = s;
    }
  });
  return out;
}

}  // namespace vpfp
