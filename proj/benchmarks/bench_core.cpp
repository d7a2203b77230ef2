#include <numbers>

#include <benchmark/benchmark.h>

#include "qmelab/classify.hpp"
#include "qmelab/dynamics.hpp"
#include "qmelab/spinmagnet.hpp"

using namespace qmelab;

namespace {

const AdditionParams kSin2t{2.0, 1.0};

MagnetModel two_magnets(const Vec3& second, double omega) {
  MagnetModel m;
  m.system.omega = omega;
  Magnet a, b;
  a.coupling = 2.0;
  b.coupling = 2.0;
  b.axis = second;
  m.magnets = {a, b};
  return m;
}

}  // namespace

static void BM_CjEigenvalues(benchmark::State& state) {
  const SuperOp map = closed_form_addition_case(AdditionCase::A, 1, 1, kSin2t, 1.0).map;
  for (auto _ : state) benchmark::DoNotOptimize(cj_matrix(map).eigenvalues());
}
BENCHMARK(BM_CjEigenvalues);

static void BM_MatrixLog(benchmark::State& state) {
  const SuperOp map = closed_form_addition_case(AdditionCase::A, 1, 1, kSin2t, 0.7).map;
  for (auto _ : state) benchmark::DoNotOptimize(matrix_log(map));
}
BENCHMARK(BM_MatrixLog);

static void BM_IntegrateAddition(benchmark::State& state) {
  const auto fam = addition_case_family(AdditionCase::A, 1, 1, kSin2t);
  const auto grid = linspace(0.0, 4 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_qme(fam, grid));
}
BENCHMARK(BM_IntegrateAddition)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& state) {
  const auto fam = ru_generator(RateFunction::constant(0.5), RateFunction::constant(0.5), RateFunction(rate::EternalNMZ{}));
  const auto grid = linspace(0.0, 5.0, 501);
  for (auto _ : state) benchmark::DoNotOptimize(classify(fam, grid, true));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

static void BM_AveragedAffine(benchmark::State& state) {
  const bool zz = state.range(0) == 1;
  const auto model = zz ? two_magnets(Vec3::UnitZ(), 2.0) : two_magnets(Vec3::UnitX(), 0.0);
  QuadratureSpec q;
  q.hermite_order = static_cast<int>(state.range(1));
  q.verify = false;
  for (auto _ : state) benchmark::DoNotOptimize(averaged_affine(model, Presence::Both, q, 0.5));
  state.SetLabel(zz ? "z-z with field" : "z-x");
}
BENCHMARK(BM_AveragedAffine)->Args({0, 40})->Args({0, 80})->Args({1, 80})->Unit(benchmark::kMillisecond);

static void BM_AdditivityGap(benchmark::State& state) {
  const auto model = two_magnets(Vec3::UnitX(), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(additivity_gap(model, {}, 0.5, Picture::Schrodinger));
}
BENCHMARK(BM_AdditivityGap)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
