// Serial reference kernels versus their OpenMP counterparts.
// Argument: number of measurements m; subspace dimension fixed at 12.

#include <benchmark/benchmark.h>

#include "bdpr/admm.hpp"
#include "bdpr/kernels.hpp"
#include "bdpr/measurements.hpp"
#include "bdpr/rng.hpp"

namespace {

constexpr Eigen::Index kDim = 12;

struct Fixture {
  bdpr::CMatrix rows;
  bdpr::HermitianMatrix x;
  bdpr::HermitianVecBasis basis{kDim};
  bdpr::RVector xi1, xi2, delta;

  explicit Fixture(Eigen::Index m) {
    bdpr::Rng rng(1);
    rows.resize(m, kDim);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < kDim; ++j) rows(i, j) = {rng.normal(), rng.normal()};
    bdpr::CMatrix a = bdpr::CMatrix::Zero(kDim, kDim);
    for (Eigen::Index i = 0; i < kDim; ++i) a(i, i) = 1.0 + rng.uniform();
    x = bdpr::HermitianMatrix(a);
    xi1.resize(m);
    xi2.resize(m);
    delta.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      xi1(i) = 4.0 * rng.uniform() - 2.0;
      xi2(i) = 4.0 * rng.uniform() - 2.0;
      delta(i) = 3.0 * rng.uniform();
    }
  }
};

template <bool Parallel>
void BM_QuadraticForms(benchmark::State& st) {
  const Fixture f(st.range(0));
  bdpr::RVector out;
  for (auto _ : st) {
    if constexpr (Parallel) {
      bdpr::kernels::omp::quadratic_forms(f.rows, f.x, out);
    } else {
      bdpr::kernels::serial::quadratic_forms(f.rows, f.x, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_LiftOperator(benchmark::State& st) {
  const Fixture f(st.range(0));
  bdpr::RMatrix out;
  for (auto _ : st) {
    if constexpr (Parallel) {
      bdpr::kernels::omp::lift_operator(f.rows, f.basis, out);
    } else {
      bdpr::kernels::serial::lift_operator(f.rows, f.basis, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_ProjectBatch(benchmark::State& st) {
  const Fixture f(st.range(0));
  bdpr::RVector u1, u2;
  for (auto _ : st) {
    if constexpr (Parallel) {
      bdpr::kernels::omp::project_batch(f.xi1, f.xi2, f.delta, u1, u2);
    } else {
      bdpr::kernels::serial::project_batch(f.xi1, f.xi2, f.delta, u1, u2);
    }
    benchmark::DoNotOptimize(u1.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void BM_Solve(benchmark::State& st) {
  const auto inst = bdpr::gen_instance(st.range(0), 4, 4, bdpr::SubspaceKind::Gaussian,
                                       bdpr::SubspaceKind::Gaussian,
                                       bdpr::EnsembleModel::DirectGaussian, 3);
  bdpr::SolverConfig cfg;
  cfg.parallel_kernels = Parallel;
  for (auto _ : st) benchmark::DoNotOptimize(bdpr::solve(inst, cfg).objective);
}

}  // namespace

BENCHMARK(BM_QuadraticForms<false>)->Name("quadratic_forms/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_QuadraticForms<true>)->Name("quadratic_forms/omp")->Arg(256)->Arg(4096);
BENCHMARK(BM_LiftOperator<false>)->Name("lift_operator/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_LiftOperator<true>)->Name("lift_operator/omp")->Arg(256)->Arg(4096);
BENCHMARK(BM_ProjectBatch<false>)->Name("project_batch/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_ProjectBatch<true>)->Name("project_batch/omp")->Arg(256)->Arg(4096);
BENCHMARK(BM_Solve<false>)->Name("solve/serial")->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve<true>)->Name("solve/omp")->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
