#pragma once

#include <cstdint>
#include <variant>

#include "plrs/problem.hpp"
#include "plrs/rng.hpp"

namespace plrs {

/// Stochastic-gradient deviation models: every draw n satisfies
/// ||n|| <= q_bound() and E[n] = 0 by construction.
struct NoNoise {};

/// Uniform on the sphere of the given radius; ||n|| = radius exactly, so the
/// second moment equals radius^2.
struct SphereUniformNoise {
  double radius = 0.0;
};

/// Uniform in the closed ball; E||n||^2 = radius^2 * d / (d + 2).
struct BallUniformNoise {
  double radius = 0.0;
};

/// Minibatch-style noise: `components` fixed offsets (seeded sphere points,
/// re-centered to mean zero, rescaled to max norm `radius`), averaged over a
/// with-replacement batch.
struct FiniteSumMinibatchNoise {
  std::uint64_t components = 0;
  std::uint64_t batch = 1;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

class NoiseModel {
 public:
  using Variant =
      std::variant<NoNoise, SphereUniformNoise, BallUniformNoise, FiniteSumMinibatchNoise>;

  NoiseModel() : v_(NoNoise{}) {}
  explicit NoiseModel(Variant v);

  const Variant& variant() const { return v_; }
  std::string kind() const;

  /// Almost-sure bound Q on the draw norm.
  double q_bound() const;
  /// Exact E||n||^2 for draws in dimension `dim`.
  double sigma2(Eigen::Index dim) const;

 private:
  Variant v_;
};

/// One realization of g(x) - grad f(x). The draw does not depend on x for
/// these models; the argument is part of the oracle interface.
Vector draw_noise(const NoiseModel& model, RngStream& rng, const Vector& at_x);

/// A bound noise source: repeated draws in a fixed dimension. Used by the
/// verification harness so test fixtures can substitute deliberately broken
/// sources.
using NoiseDrawer = std::function<Vector(RngStream&)>;

NoiseDrawer make_noise_drawer(const NoiseModel& model, Eigen::Index dim);

}  // namespace plrs
