#pragma once

#include <cstdint>
#include <vector>

#include "plrs/problem.hpp"
#include "plrs/schedule.hpp"

namespace plrs {
namespace tensor {

/// A fourth-order symmetric tensor with an exact orthogonal decomposition,
/// represented by its components only; the d^4 entries are never stored.
struct OrthoTensorInstance {
  Eigen::Index dim = 0;
  std::vector<Vector> components;  ///< orthonormal, count <= dim
  std::uint64_t seed = 0;

  Eigen::Index count() const { return static_cast<Eigen::Index>(components.size()); }
};

/// Components from orthonormalizing a seeded random matrix. Orthonormality
/// is checked to 1e-10 off-diagonal, 1e-12 on norms.
OrthoTensorInstance random_instance(Eigen::Index dim, std::uint64_t seed,
                                    Eigen::Index count = -1);

/// Components equal to the canonical basis vectors: exactly orthonormal.
OrthoTensorInstance canonical_instance(Eigen::Index dim, Eigen::Index count = -1);

/// Estimated components; unit norm is re-established after every update.
struct ComponentEstimate {
  std::vector<Vector> u;
};

/// Uniform random unit vectors as a starting estimate.
ComponentEstimate random_estimate(const OrthoTensorInstance& instance, RngStream& rng);

/// Cross-correlation objective: sum over ordered pairs i != j of
/// T(u_i, u_i, u_j, u_j), evaluated through the rank-d structure.
double objective(const OrthoTensorInstance& instance, const ComponentEstimate& estimate);

/// Partial derivative of the objective with respect to component i:
/// 4 * sum_{j != i} sum_k <a_k, u_i> <a_k, u_j>^2 a_k.
Vector gradient(const OrthoTensorInstance& instance, const ComponentEstimate& estimate,
                Eigen::Index i);

/// Normalized squared Frobenius distance between the target tensor and the
/// estimate's tensor, via Gram identities:
///   (sum <a_i,a_j>^4 + sum <u_i,u_j>^4 - 2 sum <a_i,u_j>^4) / count.
double reconstruction_error(const OrthoTensorInstance& instance,
                            const ComponentEstimate& estimate);

enum class UpdateOrder { Simultaneous, Cyclic };

struct DecompositionOptions {
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  double noise_scale = 0.01;  ///< sphere radius of the per-component noise
  UpdateOrder order = UpdateOrder::Simultaneous;
  double divergence_bound = 1e12;
  std::uint64_t record_stride = 1;
};

struct ErrorTrace {
  std::vector<std::uint64_t> steps;
  std::vector<double> errors;
  std::vector<double> objectives;
  ComponentEstimate final_estimate;
};

/// Projected SGD on the objective: every step updates the components with
/// the rate drawn from `schedule`, adds sphere-bounded noise, and
/// renormalizes each component to the unit sphere.
ErrorTrace run_decomposition(const OrthoTensorInstance& instance,
                             const ScheduleSpec& schedule, ComponentEstimate estimate,
                             const DecompositionOptions& options);

/// As above from a seeded random unit-vector initialization.
ErrorTrace run_decomposition(const OrthoTensorInstance& instance,
                             const ScheduleSpec& schedule,
                             const DecompositionOptions& options);

/// CSV rows `step,error,objective`.
void write_trace_csv(const ErrorTrace& trace, std::ostream& out);

}  // namespace tensor
}  // namespace plrs
