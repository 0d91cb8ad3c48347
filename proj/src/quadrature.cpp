#include "vpfp/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "vpfp/errors.hpp"

namespace vpfp {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  if (n < 1) throw ArgumentError("gauss_legendre: n must be >= 1");
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto rule = std::make_unique<GaussRule>();
    // legendre_p_zeros returns the non-negative zeros in ascending order.
    const auto half = boost::math::legendre_p_zeros<double>(n);
    for (double z : half) {
      const double dp = boost::math::legendre_p_prime(n, z);
      const double w = 2.0 / ((1.0 - z * z) * dp * dp);
      if (z == 0.0) {
        rule->x.push_back(0.0);
        rule->w.push_back(w);
      } else {
        rule->x.push_back(z);
        rule->w.push_back(w);
        rule->x.push_back(-z);
        rule->w.push_back(w);
      }
    }
    std::vector<std::size_t> idx(rule->x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rule->x[a] < rule->x[b]; });
    GaussRule sorted;
    for (auto i : idx) {
      sorted.x.push_back(rule->x[i]);
      sorted.w.push_back(rule->w[i]);
    }
    *rule = std::move(sorted);
    slot = std::move(rule);
  }
  return *slot;
}

Barycentric::Barycentric(std::vector<double> nodes) : nodes_(std::move(nodes)), weights_(nodes_.size(), 1.0) {
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (i != j) weights_[j] /= (nodes_[j] - nodes_[i]);
}

std::vector<double> Barycentric::matrix(const std::vector<double>& targets) const {
  const std::size_t n = nodes_.size();
  std::vector<double> m(targets.size() * n, 0.0);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double* row = m.data() + i * n;
    bool exact = false;
    for (std::size_t j = 0; j < n; ++j)
      if (targets[i] == nodes_[j]) {
        row[j] = 1.0;
        exact = true;
      }
    if (exact) continue;
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = weights_[j] / (targets[i] - nodes_[j]);
      denom += row[j];
    }
    for (std::size_t j = 0; j < n; ++j) row[j] /= denom;
  }
  return m;
}

}  // namespace vpfp
