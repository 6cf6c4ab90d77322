// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "dynbc/coupling.hpp"
#include "dynbc/discretize.hpp"
#include "dynbc/stability.hpp"

namespace {

void BM_MatrixExponential(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  dynbc::CMat a = dynbc::CMat::Random(n, n);
  a *= 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynbc::matrix_exponential(a, 1.0));
  }
}
BENCHMARK(BM_MatrixExponential)->Arg(32)->Arg(128)->Arg(256);

void BM_Eigenvalues(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const dynbc::CMat a = dynbc::CMat::Random(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynbc::eigenvalues(a));
  }
}
BENCHMARK(BM_Eigenvalues)->Arg(64)->Arg(256);

void BM_AssemblePlate(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto p = dynbc::build_interval_plate(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynbc::assemble_G_underline(p, 1.0));
  }
}
BENCHMARK(BM_AssemblePlate)->Arg(16)->Arg(64);

void BM_DysonPhillips(benchmark::State& state) {
  dynbc::BlockSystem2x2 sys;
  sys.H = dynbc::CMat::Constant(1, 1, -1.0);
  sys.Lb = dynbc::CMat::Constant(1, 1, -2.0);
  sys.J = dynbc::CMat::Constant(1, 1, 1.0);
  sys.K = dynbc::CMat::Constant(1, 1, 1.0);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynbc::dyson_phillips(sys, 5.0, steps, 12));
  }
}
BENCHMARK(BM_DysonPhillips)->Arg(250)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
