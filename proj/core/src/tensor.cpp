#include "plrs/tensor.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "plrs/csv.hpp"
#include "plrs/error.hpp"
#include "plrs/noise.hpp"

namespace plrs {
namespace tensor {
namespace {

void check_orthonormal(const std::vector<Vector>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (std::abs(vs[i].norm() - 1.0) > 1e-12) {
      throw ContractViolation("tensor instance: component norm off unit");
    }
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (std::abs(vs[i].dot(vs[j])) > 1e-10) {
        throw ContractViolation("tensor instance: components not orthogonal");
      }
    }
  }
}

/// Correlation matrix c(k, i) = <a_k, u_i>.
Matrix correlations(const OrthoTensorInstance& instance, const ComponentEstimate& est) {
  const auto k_count = instance.count();
  const auto i_count = static_cast<Eigen::Index>(est.u.size());
  Matrix c(k_count, i_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (Eigen::Index i = 0; i < i_count; ++i) {
      c(k, i) = instance.components[k].dot(est.u[i]);
    }
  }
  return c;
}

}  // namespace

OrthoTensorInstance random_instance(Eigen::Index dim, std::uint64_t seed,
                                    Eigen::Index count) {
  if (count < 0) count = dim;
  if (count > dim) throw ContractViolation("tensor instance: count exceeds dim");
  RngStream rng = make_stream(seed, StreamPurpose::Misc, 2);
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.next_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();

  OrthoTensorInstance instance;
  instance.dim = dim;
  instance.seed = seed;
  instance.components.reserve(count);
  for (Eigen::Index i = 0; i < count; ++i) instance.components.push_back(q.col(i));
  check_orthonormal(instance.components);
  return instance;
}

OrthoTensorInstance canonical_instance(Eigen::Index dim, Eigen::Index count) {
  if (count < 0) count = dim;
  if (count > dim) throw ContractViolation("tensor instance: count exceeds dim");
  OrthoTensorInstance instance;
  instance.dim = dim;
  instance.components.reserve(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    Vector e = Vector::Zero(dim);
    e[i] = 1.0;
    instance.components.push_back(std::move(e));
  }
  return instance;
}

ComponentEstimate random_estimate(const OrthoTensorInstance& instance, RngStream& rng) {
  ComponentEstimate est;
  est.u.reserve(instance.count());
  for (Eigen::Index i = 0; i < instance.count(); ++i) {
    Vector v(instance.dim);
    double norm2;
    do {
      for (Eigen::Index j = 0; j < instance.dim; ++j) v[j] = rng.next_gaussian();
      norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    est.u.push_back(v / std::sqrt(norm2));
  }
  return est;
}

double objective(const OrthoTensorInstance& instance, const ComponentEstimate& est) {
  if (static_cast<Eigen::Index>(est.u.size()) != instance.count()) {
    throw ContractViolation("objective: estimate count mismatch");
  }
  const Matrix c = correlations(instance, est);
  // sum_k [ (sum_i c_ki^2)^2 - sum_i c_ki^4 ] covers the ordered pairs i != j.
  double total = 0.0;
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    double lin = 0.0;
    double quad = 0.0;
    for (Eigen::Index i = 0; i < c.cols(); ++i) {
      const double sq = c(k, i) * c(k, i);
      lin += sq;
      quad += sq * sq;
    }
    total += lin * lin - quad;
  }
  return total;
}

Vector gradient(const OrthoTensorInstance& instance, const ComponentEstimate& est,
                Eigen::Index i) {
  if (i < 0 || i >= static_cast<Eigen::Index>(est.u.size())) {
    throw ContractViolation("gradient: component index out of range");
  }
  const Matrix c = correlations(instance, est);
  Vector g = Vector::Zero(instance.dim);
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    double others = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (j != i) others += c(k, j) * c(k, j);
    }
    g += 4.0 * c(k, i) * others * instance.components[k];
  }
  return g;
}

double reconstruction_error(const OrthoTensorInstance& instance,
                            const ComponentEstimate& est) {
  const auto count = instance.count();
  if (static_cast<Eigen::Index>(est.u.size()) != count) {
    throw ContractViolation("reconstruction_error: estimate count mismatch");
  }
  auto fourth_power_gram = [](const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double total = 0.0;
    for (const auto& x : a) {
      for (const auto& y : b) {
        const double dot = x.dot(y);
        const double sq = dot * dot;
        total += sq * sq;
      }
    }
    return total;
  };
  const double target = fourth_power_gram(instance.components, instance.components);
  const double estimate = fourth_power_gram(est.u, est.u);
  const double cross = fourth_power_gram(instance.components, est.u);
  return (target + estimate - 2.0 * cross) / static_cast<double>(count);
}

ErrorTrace run_decomposition(const OrthoTensorInstance& instance,
                             const ScheduleSpec& schedule, ComponentEstimate estimate,
                             const DecompositionOptions& options) {
  if (options.steps < 1) throw ContractViolation("run_decomposition: steps must be >= 1");
  if (options.record_stride < 1) {
    throw ContractViolation("run_decomposition: record_stride must be >= 1");
  }
  const auto count = instance.count();
  if (static_cast<Eigen::Index>(estimate.u.size()) != count) {
    throw ContractViolation("run_decomposition: estimate count mismatch");
  }

  const RngStream lr_stream =
      make_stream(options.seed, StreamPurpose::LearningRate, 0);
  RngStream noise_stream = make_stream(options.seed, StreamPurpose::GradientNoise, 0);
  const NoiseModel noise =
      options.noise_scale > 0.0
          ? NoiseModel{NoiseModel::Variant{SphereUniformNoise{options.noise_scale}}}
          : NoiseModel{};
  const NoiseDrawer drawer = make_noise_drawer(noise, instance.dim);

  ErrorTrace trace;
  trace.steps.reserve(options.steps / options.record_stride + 1);

  std::vector<Vector> gradients(count);
  for (std::uint64_t t = 0; t < options.steps; ++t) {
    if (t % options.record_stride == 0) {
      trace.steps.push_back(t);
      trace.errors.push_back(reconstruction_error(instance, estimate));
      trace.objectives.push_back(objective(instance, estimate));
    }
    // One rate draw per step, shared by all components.
    const double lr = lr_at(schedule, t, t, lr_stream).rate;

    if (options.order == UpdateOrder::Simultaneous) {
      for (Eigen::Index i = 0; i < count; ++i) {
        gradients[i] = gradient(instance, estimate, i) + drawer(noise_stream);
      }
      for (Eigen::Index i = 0; i < count; ++i) {
        estimate.u[i] -= lr * gradients[i];
      }
    } else {
      for (Eigen::Index i = 0; i < count; ++i) {
        estimate.u[i] -= lr * (gradient(instance, estimate, i) + drawer(noise_stream));
        estimate.u[i] /= estimate.u[i].norm();
      }
    }
    // Renormalize after the full sweep.
    for (Eigen::Index i = 0; i < count; ++i) {
      const double norm = estimate.u[i].norm();
      if (!(norm > 0.0) || !std::isfinite(norm) || norm > options.divergence_bound) {
        throw NumericError("run_decomposition: component diverged", t);
      }
      estimate.u[i] /= norm;
    }
  }
  trace.steps.push_back(options.steps);
  trace.errors.push_back(reconstruction_error(instance, estimate));
  trace.objectives.push_back(objective(instance, estimate));
  trace.final_estimate = std::move(estimate);
  return trace;
}

ErrorTrace run_decomposition(const OrthoTensorInstance& instance,
                             const ScheduleSpec& schedule,
                             const DecompositionOptions& options) {
  RngStream init_stream = make_stream(options.seed, StreamPurpose::Init, 0);
  return run_decomposition(instance, schedule,
                           random_estimate(instance, init_stream), options);
}

void write_trace_csv(const ErrorTrace& trace, std::ostream& out) {
  out << "step,error,objective\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    out << trace.steps[i] << ',' << format_double(trace.errors[i]) << ','
        << format_double(trace.objectives[i]) << '\n';
  }
}

}  // namespace tensor
}  // namespace plrs
