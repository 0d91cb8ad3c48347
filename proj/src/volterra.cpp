#include "vpfp/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/errors.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

namespace {

template <class A>
std::vector<A> trapezoid_conv(const std::vector<A>& a, const std::vector<double>& b, double dt) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<A> out(n, A(0.0));
  for (std::size_t i = 1; i < n; ++i) {
    A s = 0.5 * (a[0] * b[i] + a[i] * b[0]);
    for (std::size_t j = 1; j < i; ++j) s += a[j] * b[i - j];
    out[i] = s * dt;
  }
  return out;
}

void check_uniform(const std::vector<double>& t, double dt) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - i * dt) > 1e-9 * std::max(1.0, t[i]))
      throw ArgumentError("time grid must be uniform and start at 0");
}

}  // namespace

std::vector<cplx> convolve_trapezoid(const std::vector<cplx>& a, const std::vector<double>& b, double dt) {
  return trapezoid_conv(a, b, dt);
}

std::vector<double> convolve_trapezoid(const std::vector<double>& a, const std::vector<double>& b, double dt) {
  return trapezoid_conv(a, b, dt);
}

std::vector<double> convolve_gregory(const std::vector<double>& a, const std::vector<double>& b, double dt) {
  const std::size_t n = std::min(a.size(), b.size());
  std::vector<double> out(n, 0.0);
  std::vector<double> w;
  for (std::size_t i = 1; i < n; ++i) {
    w.assign(i + 1, 1.0);
    if (i == 1) {
      w = {0.5, 0.5};
    } else if (i == 2) {
      w = {1.0 / 3, 4.0 / 3, 1.0 / 3};
    } else if (i == 3) {
      w = {3.0 / 8, 9.0 / 8, 9.0 / 8, 3.0 / 8};
    } else if (i == 4) {
      w = {14.0 / 45, 64.0 / 45, 24.0 / 45, 64.0 / 45, 14.0 / 45};
    } else {
      const double ends[3] = {3.0 / 8, 7.0 / 6, 23.0 / 24};
      for (int e = 0; e < 3; ++e) {
        w[e] = ends[e];
        w[i - e] = ends[e];
      }
    }
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += w[j] * a[j] * b[i - j];
    out[i] = s * dt;
  }
  return out;
}

std::vector<cplx> solve_volterra(const std::vector<cplx>& H, double dt, const KernelTable& K) {
  if (std::abs(dt - K.dt) > 1e-12 * K.dt) throw ArgumentError("solve_volterra: dt does not match the kernel table");
  if (H.size() > K.size()) throw ArgumentError("solve_volterra: forcing longer than the kernel table");
  const std::size_t n = H.size();
  std::vector<cplx> rho(n);
  if (n == 0) return rho;
  const double diag = 1.0 + 0.5 * dt * K.K[0];
  rho[0] = H[0];
  for (std::size_t i = 1; i < n; ++i) {
    cplx s = 0.5 * rho[0] * K.K[i];
    for (std::size_t j = 1; j < i; ++j) s += rho[j] * K.K[i - j];
    rho[i] = (H[i] - dt * s) / diag;
  }
  return rho;
}

std::vector<cplx> resolvent_density(const std::vector<cplx>& H, double dt, const KernelTable& R) {
  if (std::abs(dt - R.dt) > 1e-12 * R.dt) throw ArgumentError("resolvent_density: dt does not match the table");
  if (R.R.size() < H.size()) throw ArgumentError("resolvent_density: resolvent table too short");
  const auto conv = convolve_trapezoid(H, R.R, dt);
  std::vector<cplx> rho(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) rho[i] = H[i] - conv[i];
  return rho;
}

KernelTable resolvent(int k, double nu, const std::vector<double>& t_grid, const ResolventOptions& opt,
                      ResolventInfo* info) {
  if (k == 0) throw ArgumentError("resolvent: k = 0 carries no field");
  if (t_grid.size() < 2) throw ArgumentError("resolvent: time grid needs at least two points");
  const double dt = t_grid[1] - t_grid[0];
  if (!(dt > 0.0)) throw ArgumentError("resolvent: time grid must increase");
  check_uniform(t_grid, dt);

  KernelTable table = make_kernel_table(k, nu, dt, static_cast<int>(t_grid.size()) - 1);
  const double kk = std::abs(static_cast<double>(k));
  const double gamma = -opt.lambda_bar * kk;
  const double pole = gamma - kk;
  const double c = 1.0 / kTwoPi;
  const double d = -nu / kTwoPi;
  const double e = d - 2.0 * c * pole;
  const double t_max = t_grid.back();

  KernelLaplace lap(k, nu, gamma);
  double min_distance = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  auto remainder = [&](double w) {
    const cplx z(gamma, w);
    const cplx kt = lap(z);
    ++evaluations;
    const cplx one_plus = 1.0 + kt;
    min_distance = std::min(min_distance, std::abs(one_plus));
    if (std::abs(one_plus) < 1e-12) throw StabilityError("resolvent: 1 + K~ vanishes on the contour");
    const cplx s = z - pole;
    return kt / one_plus - c / (s * s) - e / (s * s * s);
  };

  const GaussRule& coarse = gauss_legendre(16);
  const GaussRule& fine = gauss_legendre(48);
  const std::vector<double> to_fine = Barycentric(coarse.x).matrix(fine.x);
  std::vector<double> nodes;   // fine frequencies
  std::vector<cplx> weighted;  // fine weight * interpolated remainder

  auto add_panels = [&](double from, double to) {
    double a = from;
    while (a < to - 1e-12) {
      double width = a < 8.0 * kk + 4.0 ? 0.5 : 1.0;
      width = std::min({width, 30.0 / std::max(t_max, 1.0), to - a});
      const double mid = a + 0.5 * width, half = 0.5 * width;
      std::vector<cplx> fc(coarse.x.size());
      for (std::size_t i = 0; i < coarse.x.size(); ++i) fc[i] = remainder(mid + half * coarse.x[i]);
      for (std::size_t i = 0; i < fine.x.size(); ++i) {
        cplx v = 0.0;
        for (std::size_t j = 0; j < coarse.x.size(); ++j) v += to_fine[i * coarse.x.size() + j] * fc[j];
        nodes.push_back(mid + half * fine.x[i]);
        weighted.push_back(half * fine.w[i] * v);
      }
      a += width;
    }
  };

  double omega = opt.omega_start > 0.0 ? opt.omega_start : 64.0 * kk;
  add_panels(0.0, omega);
  double tail = 0.0;
  for (;;) {
    tail = std::abs(remainder(omega)) * omega / (3.0 * kPi);
    if (tail <= opt.tolerance) break;
    if (2.0 * omega > opt.omega_limit)
      throw TruncationError("resolvent: frequency tail " + std::to_string(tail) + " above tolerance at omega " +
                            std::to_string(omega));
    add_panels(omega, 2.0 * omega);
    omega *= 2.0;
  }

  // acc[n] = sum_f weighted_f e^{i w_f t_n}, phases advanced by rotation and
  // re-synchronised periodically.
  const std::size_t nt = t_grid.size();
  std::vector<cplx> acc(nt, 0.0);
  for (std::size_t f = 0; f < nodes.size(); ++f) {
    const cplx step = std::polar(1.0, nodes[f] * dt);
    cplx ph = 1.0;
    for (std::size_t n = 0; n < nt; ++n) {
      if (n % 128 == 0) ph = std::polar(1.0, nodes[f] * (n * dt));
      acc[n] += weighted[f] * ph;
      ph *= step;
    }
  }
  table.R.resize(nt);
  for (std::size_t n = 0; n < nt; ++n) {
    const double t = n * dt;
    const double ep = std::exp(pole * t);
    table.R[n] = c * t * ep + 0.5 * e * t * t * ep + std::exp(gamma * t) / kPi * acc[n].real();
  }
  if (info) {
    info->omega_max = omega;
    info->tail_estimate = tail;
    info->min_distance = min_distance;
    info->evaluations = evaluations;
  }
  return table;
}

double resolvent_identity_residual(const KernelTable& table) {
  if (table.R.size() != table.K.size()) throw ArgumentError("resolvent_identity_residual: table has no resolvent");
  const auto conv = convolve_gregory(table.R, table.K, table.dt);
  double worst = 0.0;
  for (std::size_t i = 0; i < table.K.size(); ++i)
    worst = std::max(worst, std::abs(table.R[i] - table.K[i] + conv[i]));
  return worst;
}

}  // namespace vpfp
