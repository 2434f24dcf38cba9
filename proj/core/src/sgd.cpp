#include "plrs/sgd.hpp"

#include <cmath>
#include <ostream>

#include "plrs/csv.hpp"
#include "plrs/error.hpp"

namespace plrs {
namespace {

std::uint64_t effective_stride(const RunOptions& options, Eigen::Index dim) {
  if (options.snapshot_stride > 0) return options.snapshot_stride;
  return dim <= 100 ? 1 : 100;
}

}  // namespace

StepRecord step(SgdState& state, const ProblemSpec& problem, const NoiseDrawer& noise,
                const ScheduleSpec& schedule, const RunOptions& options) {
  const Vector gf = problem.grad(state.x);
  if (!gf.allFinite()) throw NumericError("non-finite gradient", state.step);

  const Vector n = noise(state.noise_stream);
  const std::uint64_t epoch =
      options.steps_per_epoch > 0 ? state.step / options.steps_per_epoch : state.step;
  const RateSample rate = lr_at(schedule, state.step, epoch, state.lr_stream);

  double center = rate.rate;
  double u = 0.0;
  if (const PlrsSpec* plrs = schedule.plrs()) {
    const CenterDecomposition d = decompose(rate.rate, *plrs);
    center = d.eta_c;
    u = d.u;
  }

  StepRecord record;
  record.step = state.step;
  record.lr = rate.rate;
  record.lr_clamped = rate.clamped;
  record.f_value = problem.f(state.x);
  record.grad_norm = gf.norm();

  for (Eigen::Index i = 0; i < state.x.size(); ++i) {
    const double g = gf[i] + n[i];
    const double w = detail::noise_component(center, u, g, gf[i]);
    state.x[i] = (state.x[i] - center * gf[i]) - w;
  }
  state.step += 1;

  if (!state.x.allFinite()) throw NumericError("non-finite iterate", state.step);
  if (state.x.norm() > options.divergence_bound) {
    throw NumericError("divergence guard tripped", state.step);
  }
  return record;
}

Vector noise_term(const Vector& x, const ProblemSpec& problem, const PlrsSpec& plrs,
                  const Vector& grad_noise, double u) {
  if (grad_noise.size() != x.size()) {
    throw ContractViolation("noise_term: draw dimension mismatch");
  }
  const double center = eta_c(plrs);
  const double off_lo = plrs.l_min - center;
  const double off_hi = plrs.l_max - center;
  if (!(u >= off_lo && u <= off_hi)) {
    throw ContractViolation("noise_term: fluctuation outside the offset interval");
  }
  const Vector gf = problem.grad(x);
  Vector w(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    w[i] = detail::noise_component(center, u, gf[i] + grad_noise[i], gf[i]);
  }
  return w;
}

Trajectory run(const ProblemSpec& problem, const NoiseModel& noise,
               const ScheduleSpec& schedule, const Vector& init,
               const RunOptions& options) {
  if (options.steps < 1) throw ContractViolation("run: steps must be >= 1");
  if (init.size() != problem.dim) {
    throw ContractViolation("run: init dimension does not match the problem");
  }

  Trajectory trajectory;
  trajectory.seed = options.seed;
  trajectory.config_digest = options.config_digest;
  trajectory.records.reserve(options.steps);

  if (const PlrsSpec* plrs = schedule.plrs()) {
    const double beta = problem.constants.beta;
    if (beta > 0.0 && plrs->l_max >= 1.0 / beta) {
      trajectory.warnings.push_back("l_max >= 1/beta for the declared beta");
    }
  }

  SgdState state{
      init,
      0,
      make_stream(options.seed, StreamPurpose::LearningRate, options.trial),
      make_stream(options.seed, StreamPurpose::GradientNoise, options.trial),
  };
  const NoiseDrawer drawer = make_noise_drawer(noise, problem.dim);
  const std::uint64_t stride = effective_stride(options, problem.dim);

  for (std::uint64_t t = 0; t < options.steps; ++t) {
    // Snapshots are the pre-update iterate, consistent with f and grad_norm.
    std::optional<Vector> snapshot;
    if (t % stride == 0) snapshot = state.x;
    StepRecord record = step(state, problem, drawer, schedule, options);
    record.x_snapshot = std::move(snapshot);
    trajectory.records.push_back(std::move(record));
  }
  trajectory.final_x = state.x;
  trajectory.final_f = problem.f(state.x);
  return trajectory;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
  const bool snapshots =
      !trajectory.records.empty() && trajectory.records.front().x_snapshot.has_value();
  out << "step,lr,f,grad_norm";
  if (snapshots) {
    const auto dim = trajectory.records.front().x_snapshot->size();
    for (Eigen::Index i = 0; i < dim; ++i) out << ",x" << i;
  }
  out << '\n';
  for (const auto& r : trajectory.records) {
    out << r.step << ',' << format_double(r.lr) << ',' << format_double(r.f_value)
        << ',' << format_double(r.grad_norm);
    if (snapshots) {
      if (r.x_snapshot.has_value()) {
        for (Eigen::Index i = 0; i < r.x_snapshot->size(); ++i) {
          out << ',' << format_double((*r.x_snapshot)[i]);
        }
      } else {
        for (Eigen::Index i = 0; i < trajectory.records.front().x_snapshot->size(); ++i) {
          out << ',';
        }
      }
    }
    out << '\n';
  }
}

}  // namespace plrs
