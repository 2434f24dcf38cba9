#include "plrs/noise.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "plrs/error.hpp"

namespace plrs {
namespace {

Vector unit_sphere_point(RngStream& rng, Eigen::Index dim) {
  Vector z(dim);
  double norm2;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.next_gaussian();
    norm2 = z.squaredNorm();
  } while (norm2 == 0.0);
  return z / std::sqrt(norm2);
}

/// Fixed offsets of the minibatch model: seeded sphere points, re-centered
/// to mean zero, rescaled so the largest norm is exactly `radius`.
std::vector<Vector> minibatch_offsets(const FiniteSumMinibatchNoise& m, Eigen::Index dim) {
  RngStream rng = make_stream(m.seed, StreamPurpose::Misc, 1);
  std::vector<Vector> vs(m.components);
  Vector mean = Vector::Zero(dim);
  for (auto& v : vs) {
    v = m.radius * unit_sphere_point(rng, dim);
    mean += v;
  }
  mean /= static_cast<double>(m.components);
  double max_norm = 0.0;
  for (auto& v : vs) {
    v -= mean;
    max_norm = std::max(max_norm, v.norm());
  }
  if (max_norm > 0.0) {
    for (auto& v : vs) v *= m.radius / max_norm;
  }
  return vs;
}

}  // namespace

NoiseModel::NoiseModel(Variant v) : v_(std::move(v)) {
  std::vector<std::string> issues;
  if (const auto* s = std::get_if<SphereUniformNoise>(&v_)) {
    if (!(s->radius > 0.0)) issues.push_back("noise: sphere radius must be > 0");
  } else if (const auto* b = std::get_if<BallUniformNoise>(&v_)) {
    if (!(b->radius > 0.0)) issues.push_back("noise: ball radius must be > 0");
  } else if (const auto* f = std::get_if<FiniteSumMinibatchNoise>(&v_)) {
    if (f->components < 2) issues.push_back("noise: minibatch needs >= 2 components");
    if (f->batch < 1) issues.push_back("noise: minibatch batch must be >= 1");
    if (!(f->radius > 0.0)) issues.push_back("noise: minibatch radius must be > 0");
  }
  if (!issues.empty()) throw ConfigError(issues);
}

std::string NoiseModel::kind() const {
  struct Kind {
    std::string operator()(const NoNoise&) const { return "none"; }
    std::string operator()(const SphereUniformNoise&) const { return "sphere"; }
    std::string operator()(const BallUniformNoise&) const { return "ball"; }
    std::string operator()(const FiniteSumMinibatchNoise&) const { return "minibatch"; }
  };
  return std::visit(Kind{}, v_);
}

double NoiseModel::q_bound() const {
  struct Q {
    double operator()(const NoNoise&) const { return 0.0; }
    double operator()(const SphereUniformNoise& s) const { return s.radius; }
    double operator()(const BallUniformNoise& b) const { return b.radius; }
    double operator()(const FiniteSumMinibatchNoise& f) const { return f.radius; }
  };
  return std::visit(Q{}, v_);
}

double NoiseModel::sigma2(Eigen::Index dim) const {
  struct S {
    Eigen::Index dim;
    double operator()(const NoNoise&) const { return 0.0; }
    double operator()(const SphereUniformNoise& s) const { return s.radius * s.radius; }
    double operator()(const BallUniformNoise& b) const {
      const double d = static_cast<double>(dim);
      return b.radius * b.radius * d / (d + 2.0);
    }
    double operator()(const FiniteSumMinibatchNoise& f) const {
      // iid with-replacement average of b zero-mean offsets.
      const auto vs = minibatch_offsets(f, dim);
      double mean_sq = 0.0;
      for (const auto& v : vs) mean_sq += v.squaredNorm();
      mean_sq /= static_cast<double>(vs.size());
      return mean_sq / static_cast<double>(f.batch);
    }
  };
  return std::visit(S{dim}, v_);
}

Vector draw_noise(const NoiseModel& model, RngStream& rng, const Vector& at_x) {
  struct Draw {
    RngStream& rng;
    Eigen::Index dim;
    Vector operator()(const NoNoise&) const { return Vector::Zero(dim); }
    Vector operator()(const SphereUniformNoise& s) const {
      return s.radius * unit_sphere_point(rng, dim);
    }
    Vector operator()(const BallUniformNoise& b) const {
      const double r =
          b.radius * std::pow(rng.next_u01(), 1.0 / static_cast<double>(dim));
      return r * unit_sphere_point(rng, dim);
    }
    Vector operator()(const FiniteSumMinibatchNoise& f) const {
      // Offsets are rebuilt per draw only in the fallback path; the cached
      // drawer from make_noise_drawer is what runs in loops.
      const auto vs = minibatch_offsets(f, dim);
      return draw_from(vs, f.batch, rng, dim);
    }
    static Vector draw_from(const std::vector<Vector>& vs, std::uint64_t batch,
                            RngStream& rng, Eigen::Index dim) {
      Vector sum = Vector::Zero(dim);
      for (std::uint64_t k = 0; k < batch; ++k) {
        const auto idx = static_cast<std::size_t>(rng.next_u01() *
                                                  static_cast<double>(vs.size()));
        sum += vs[std::min(idx, vs.size() - 1)];
      }
      return sum / static_cast<double>(batch);
    }
  };
  return std::visit(Draw{rng, at_x.size()}, model.variant());
}

NoiseDrawer make_noise_drawer(const NoiseModel& model, Eigen::Index dim) {
  if (const auto* f = std::get_if<FiniteSumMinibatchNoise>(&model.variant())) {
    auto vs = std::make_shared<std::vector<Vector>>(minibatch_offsets(*f, dim));
    const std::uint64_t batch = f->batch;
    return [vs, batch, dim](RngStream& rng) {
      Vector sum = Vector::Zero(dim);
      for (std::uint64_t k = 0; k < batch; ++k) {
        const auto idx = static_cast<std::size_t>(rng.next_u01() *
                                                  static_cast<double>(vs->size()));
        sum += (*vs)[std::min(idx, vs->size() - 1)];
      }
      return Vector(sum / static_cast<double>(batch));
    };
  }
  return [model, dim](RngStream& rng) {
    const Vector probe = Vector::Zero(dim);
    return draw_noise(model, rng, probe);
  };
}

}  // namespace plrs
