#pragma once

// Test-side oracles, independent of the library's evaluation paths.

#include <functional>
#include <vector>

#include "plrs/problem.hpp"

namespace oracles {

/// Central finite-difference gradient.
inline plrs::Vector fd_gradient(const std::function<double(const plrs::Vector&)>& f,
                                const plrs::Vector& x, double h = 1e-6) {
  plrs::Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    plrs::Vector hi = x;
    plrs::Vector lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

/// Dense fourth-order symmetric tensor sum_i a_i (x) a_i (x) a_i (x) a_i,
/// materialized entry by entry. Only viable for small dimensions.
class DenseQuartic {
 public:
  explicit DenseQuartic(const std::vector<plrs::Vector>& components)
      : dim_(components.empty() ? 0 : components.front().size()),
        entries_(static_cast<std::size_t>(dim_ * dim_ * dim_ * dim_), 0.0) {
    for (const auto& a : components) {
      for (Eigen::Index p = 0; p < dim_; ++p)
        for (Eigen::Index q = 0; q < dim_; ++q)
          for (Eigen::Index r = 0; r < dim_; ++r)
            for (Eigen::Index s = 0; s < dim_; ++s)
              at(p, q, r, s) += a[p] * a[q] * a[r] * a[s];
    }
  }

  double operator()(const plrs::Vector& a, const plrs::Vector& b, const plrs::Vector& c,
                    const plrs::Vector& d) const {
    double total = 0.0;
    for (Eigen::Index p = 0; p < dim_; ++p)
      for (Eigen::Index q = 0; q < dim_; ++q)
        for (Eigen::Index r = 0; r < dim_; ++r)
          for (Eigen::Index s = 0; s < dim_; ++s)
            total += at(p, q, r, s) * a[p] * b[q] * c[r] * d[s];
    return total;
  }

  /// Squared Frobenius distance to another dense tensor.
  double squared_distance(const DenseQuartic& other) const {
    double total = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const double diff = entries_[i] - other.entries_[i];
      total += diff * diff;
    }
    return total;
  }

  double squared_norm() const {
    double total = 0.0;
    for (const double e : entries_) total += e * e;
    return total;
  }

 private:
  double& at(Eigen::Index p, Eigen::Index q, Eigen::Index r, Eigen::Index s) {
    return entries_[static_cast<std::size_t>(((p * dim_ + q) * dim_ + r) * dim_ + s)];
  }
  double at(Eigen::Index p, Eigen::Index q, Eigen::Index r, Eigen::Index s) const {
    return entries_[static_cast<std::size_t>(((p * dim_ + q) * dim_ + r) * dim_ + s)];
  }

  Eigen::Index dim_;
  std::vector<double> entries_;
};

}  // namespace oracles
