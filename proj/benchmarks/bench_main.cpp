#include <benchmark/benchmark.h>

#include "plrs/rng.hpp"
#include "plrs/schedule.hpp"
#include "plrs/sgd.hpp"
#include "plrs/tensor.hpp"

namespace {

void BM_PhiloxBlock(benchmark::State& state) {
  plrs::Philox4x32::Counter ctr{1, 2, 3, 4};
  const plrs::Philox4x32::Key key{5, 6};
  for (auto _ : state) {
    ctr = plrs::Philox4x32::block(ctr, key);
    benchmark::DoNotOptimize(ctr);
  }
}
BENCHMARK(BM_PhiloxBlock);

void BM_PlrsSample(benchmark::State& state) {
  const plrs::PlrsSpec spec = plrs::PlrsSpec::make(0.07, 0.1);
  plrs::RngStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plrs::sample_plrs(spec, rng));
  }
}
BENCHMARK(BM_PlrsSample);

void BM_SgdStep(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  plrs::Vector eig = plrs::Vector::Ones(dim);
  eig[dim - 1] = -0.5;
  const plrs::ProblemSpec problem = plrs::quadratic(dim, eig, 3);
  const plrs::ScheduleSpec schedule{
      plrs::ScheduleSpec::Variant{plrs::PlrsSpec::make(0.07, 0.1)}};
  const plrs::NoiseModel noise{
      plrs::NoiseModel::Variant{plrs::SphereUniformNoise{0.1}}};
  const plrs::NoiseDrawer drawer = plrs::make_noise_drawer(noise, dim);
  plrs::RunOptions options;
  plrs::SgdState sgd{plrs::Vector::Constant(dim, 0.1), 0,
                     plrs::make_stream(1, plrs::StreamPurpose::LearningRate, 0),
                     plrs::make_stream(1, plrs::StreamPurpose::GradientNoise, 0)};
  for (auto _ : state) {
    plrs::step(sgd, problem, drawer, schedule, options);
    if (sgd.x.norm() > 1e6) sgd.x.setConstant(0.1);  // keep the loop bounded
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SgdStep)->Arg(10)->Arg(50)->Arg(200);

void BM_TensorGradient(benchmark::State& state) {
  const auto instance = plrs::tensor::random_instance(10, 7);
  plrs::RngStream rng(9, 0);
  const auto estimate = plrs::tensor::random_estimate(instance, rng);
  Eigen::Index i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(plrs::tensor::gradient(instance, estimate, i));
    i = (i + 1) % instance.count();
  }
}
BENCHMARK(BM_TensorGradient);

void BM_ReconstructionError(benchmark::State& state) {
  const auto instance = plrs::tensor::random_instance(10, 7);
  plrs::RngStream rng(9, 0);
  const auto estimate = plrs::tensor::random_estimate(instance, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plrs::tensor::reconstruction_error(instance, estimate));
  }
}
BENCHMARK(BM_ReconstructionError);

}  // namespace

BENCHMARK_MAIN();
