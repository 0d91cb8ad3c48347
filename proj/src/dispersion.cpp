#include "vpfp/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "vpfp/constants.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/kernel.hpp"

namespace vpfp {

namespace {

struct Rect {
  double x0, x1, y0, y1;
  cplx centre() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(cplx z) const { return z.real() > x0 && z.real() < x1 && z.imag() > y0 && z.imag() < y1; }
};

class RootFinder {
 public:
  RootFinder(const KernelLaplace& lap, double max_step) : lap_(lap), max_step_(max_step) {}

  cplx f(cplx z) const { return 1.0 + lap_(z); }

  // Total change of arg f along the segment a -> b.
  double arg_change(cplx a, cplx b, cplx fa, cplx fb, double step, int depth) const {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= step) return d;
    if (depth > 40) throw ResolutionError("dispersion_roots: argument tracking does not resolve an edge");
    const cplx m = 0.5 * (a + b);
    const cplx fm = f(m);
    if (std::abs(fm) < 1e-9) throw ResolutionError("dispersion_roots: zero on the contour");
    return arg_change(a, m, fa, fm, step, depth + 1) + arg_change(m, b, fm, fb, step, depth + 1);
  }

  int winding(const Rect& r, double step) const {
    const cplx c[5] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}, {r.x0, r.y0}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
      // Start from a modest number of samples so that no full turn hides
      // between two end points.
      const int pieces = 16;
      for (int p = 0; p < pieces; ++p) {
        const cplx a = c[e] + (c[e + 1] - c[e]) * (double(p) / pieces);
        const cplx b = c[e] + (c[e + 1] - c[e]) * (double(p + 1) / pieces);
        const cplx fa = f(a), fb = f(b);
        if (std::abs(fa) < 1e-9 || std::abs(fb) < 1e-9)
          throw ResolutionError("dispersion_roots: zero on the contour");
        total += arg_change(a, b, fa, fb, step, 0);
      }
    }
    const double turns = total / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.05)
      throw ResolutionError("dispersion_roots: non-integer winding number " + std::to_string(turns));
    return static_cast<int>(rounded);
  }

  int checked_winding(const Rect& r) const {
    const int coarse = winding(r, max_step_);
    const int fine = winding(r, 0.5 * max_step_);
    if (coarse != fine)
      throw ResolutionError("dispersion_roots: root count " + std::to_string(coarse) + " vs " +
                            std::to_string(fine) + " under edge refinement");
    return fine;
  }

  bool newton(cplx& z, const Rect& r) const {
    for (int it = 0; it < 60; ++it) {
      const cplx fz = f(z);
      const cplx dz = fz / lap_.derivative(z);
      z -= dz;
      if (!r.contains(z) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
      if (std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) return std::abs(f(z)) < 1e-10;
    }
    return std::abs(f(z)) < 1e-10;
  }

  void isolate(const Rect& r, int count, std::vector<cplx>& roots, int depth) const {
    if (count == 0) return;
    if (count == 1) {
      cplx z = r.centre();
      if (newton(z, r)) {
        roots.push_back(z);
        return;
      }
    }
    if (depth > 60) throw ResolutionError("dispersion_roots: cannot separate clustered roots");
    // Split the longer side slightly off centre to avoid symmetric roots on the cut.
    const double frac = 0.5 + 0.0137;
    Rect a = r, b = r;
    if (r.x1 - r.x0 >= r.y1 - r.y0) {
      const double xm = r.x0 + frac * (r.x1 - r.x0);
      a.x1 = xm;
      b.x0 = xm;
    } else {
      const double ym = r.y0 + frac * (r.y1 - r.y0);
      a.y1 = ym;
      b.y0 = ym;
    }
    const int ca = checked_winding(a);
    const int cb = checked_winding(b);
    if (ca + cb != count)
      throw ResolutionError("dispersion_roots: sub-rectangle counts do not add up");
    isolate(a, ca, roots, depth + 1);
    isolate(b, cb, roots, depth + 1);
  }

 private:
  const KernelLaplace& lap_;
  double max_step_;
};

}  // namespace

std::vector<cplx> dispersion_roots(int k, double nu, const DispersionOptions& options) {
  if (k == 0) throw ArgumentError("dispersion_roots: k = 0 carries no field");
  const double kk = std::abs(static_cast<double>(k));
  const double z_cut = options.z_cut > 0.0 ? options.z_cut : 3.0 * kk;
  const double im_max = options.im_max > 0.0 ? options.im_max : 3.0 * kk + 3.0;
  const Rect rect{-z_cut, options.re_max, -im_max, im_max};
  const double pad = 0.01 * std::max(z_cut + options.re_max, 2.0 * im_max);
  const Rect bigger{rect.x0 - pad, rect.x1 + pad, rect.y0 - pad, rect.y1 + pad};

  KernelLaplace lap(k, nu, bigger.x0);
  RootFinder finder(lap, options.max_arg_step);
  const int count = finder.checked_winding(rect);
  if (finder.checked_winding(bigger) != count)
    throw ResolutionError("dispersion_roots: root count unstable under rectangle perturbation");

  std::vector<cplx> roots;
  finder.isolate(rect, count, roots, 0);
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace vpfp
