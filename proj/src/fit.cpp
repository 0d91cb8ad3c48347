#include "vpfp/fit.hpp"

#include <cmath>
#include <limits>

#include "vpfp/errors.hpp"

namespace vpfp {

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::exponential: return "exponential";
    case FitModel::power: return "power";
    case FitModel::stretched: return "stretched";
  }
  return "unknown";
}

FitResult fit_rate(const std::vector<double>& x, const std::vector<double>& y, FitModel model, double lo,
                   double hi) {
  if (x.size() != y.size()) throw ArgumentError("fit_rate: x and y differ in length");
  std::vector<double> u, w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo || x[i] > hi) continue;
    if (!(y[i] > 0.0) || !std::isfinite(y[i]))
      throw WindowError("fit_rate: nonpositive sample at x = " + std::to_string(x[i]));
    double feature = x[i];
    if (model == FitModel::power) {
      if (!(x[i] > 0.0)) throw WindowError("fit_rate: power model needs positive abscissae");
      feature = std::log(x[i]);
    } else if (model == FitModel::stretched) {
      feature = x[i] * x[i] * x[i];
    }
    u.push_back(feature);
    w.push_back(std::log(y[i]));
  }
  const std::size_t n = u.size();
  if (n < 2) throw WindowError("fit_rate: fewer than two samples in the window");

  double ubar = 0.0, wbar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ubar += u[i];
    wbar += w[i];
  }
  ubar /= n;
  wbar /= n;
  double suu = 0.0, suw = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - ubar) * (u[i] - ubar);
    suw += (u[i] - ubar) * (w[i] - wbar);
    scale += u[i] * u[i];
  }
  if (!(suu > 1e-14 * scale) || !(suu > 0.0)) throw FitError("fit_rate: degenerate abscissae");
  const double slope = suw / suu;
  const double intercept = wbar - slope * ubar;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = w[i] - intercept - slope * u[i];
    rss += r * r;
  }
  FitResult fit;
  fit.model = model;
  fit.rate = -slope;
  fit.prefactor = std::exp(intercept);
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.points = n;
  fit.residual_norm = std::sqrt(rss);
  if (!std::isfinite(fit.residual_norm)) throw FitError("fit_rate: non-finite residual");
  if (n > 2) {
    const double sigma2 = rss / (n - 2);
    fit.rate_stderr = std::sqrt(sigma2 / suu);
    fit.prefactor_stderr = std::sqrt(sigma2 * (1.0 / n + ubar * ubar / suu));
  }
  return fit;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
  return out;
}

double decay_time(const std::vector<double>& x, const std::vector<double>& y, double factor) {
  if (x.empty() || x.size() != y.size()) throw ArgumentError("decay_time: bad series");
  const double target = std::log(y.front()) - std::log(factor);
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double b = std::log(y[i]);
    if (b <= target) {
      const double a = std::log(y[i - 1]);
      const double f = (a - target) / (a - b);
      return x[i - 1] + f * (x[i] - x[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace vpfp
