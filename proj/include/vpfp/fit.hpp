#pragma once

#include <string>
#include <vector>

namespace vpfp {

/// exponential: y = A e^{-gamma t}; power: y = C x^{-p}; stretched: y = A e^{-c t^3}.
enum class FitModel { exponential, power, stretched };

std::string to_string(FitModel model);

/// Least squares on log y. params = {rate, prefactor} where rate is gamma,
/// p or c; stderr holds the matching standard errors from the normal
/// equations (zero when only two points are fitted).
struct FitResult {
  FitModel model = FitModel::exponential;
  double rate = 0.0;
  double rate_stderr = 0.0;
  double prefactor = 0.0;
  double prefactor_stderr = 0.0;  // of log(prefactor)
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
  double residual_norm = 0.0;  // of the log residuals
};

/// Fits the samples with x in [lo, hi]. Throws WindowError if fewer than two
/// samples fall in the window or one of them is not positive, FitError if
/// the abscissae are degenerate.
FitResult fit_rate(const std::vector<double>& x, const std::vector<double>& y, FitModel model, double lo,
                   double hi);

/// Indices of strict interior local maxima of y.
std::vector<std::size_t> local_maxima(const std::vector<double>& y);

/// First x where y drops to y_start * factor^{-1}, by linear interpolation
/// of log y. Returns NaN if it never does.
double decay_time(const std::vector<double>& x, const std::vector<double>& y, double factor);

}  // namespace vpfp
