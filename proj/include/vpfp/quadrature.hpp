#pragma once

#include <vector>

namespace vpfp {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached n-point rule (node tables from Boost.Math).
const GaussRule& gauss_legendre(int n);

/// Barycentric Lagrange interpolation through fixed nodes.
class Barycentric {
 public:
  explicit Barycentric(std::vector<double> nodes);
  /// Row-major matrix M with M[i][j] = l_j(target_i), so that
  /// f(target_i) = sum_j M[i][j] f(node_j).
  std::vector<double> matrix(const std::vector<double>& targets) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace vpfp
