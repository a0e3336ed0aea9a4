#include <benchmark/benchmark.h>

#include <cmath>

#include "sect/gp.hpp"
#include "sect/ingest.hpp"
#include "sect/sect_transform.hpp"
#include "sect/stats.hpp"

namespace {

// Disk with one hole on a 64x64 canvas: a mid-sized realistic mask.
sect::SimplicialComplex bench_complex() {
    sect::BinaryImage img;
    img.width = img.height = 64;
    img.mask.assign(64 * 64, 0);
    for (int r = 0; r < 64; ++r) {
        for (int c = 0; c < 64; ++c) {
            const double dx = c - 31.5, dy = r - 31.5;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d <= 28.0 && d > 9.0) img.mask[r * 64 + c] = 1;
        }
    }
    return sect::mask_to_complex(img);
}

Eigen::MatrixXd bench_features(int n, int p) {
    sect::Rng rng(42);
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) X(i, j) = rng.next_gaussian();
    }
    return X;
}

void BM_SectProfileSerial(benchmark::State& state) {
    const sect::SimplicialComplex K = bench_complex();
    const auto dirs = sect::direction_set(72, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sect::sect_profile_serial(K, dirs, 100));
    }
}
BENCHMARK(BM_SectProfileSerial)->Unit(benchmark::kMillisecond);

void BM_SectProfileParallel(benchmark::State& state) {
    const sect::SimplicialComplex K = bench_complex();
    const auto dirs = sect::direction_set(72, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sect::sect_profile(K, dirs, 100));
    }
}
BENCHMARK(BM_SectProfileParallel)->Unit(benchmark::kMillisecond);

void BM_GramSerial(benchmark::State& state) {
    const Eigen::MatrixXd X = bench_features(200, 2000);
    const sect::KernelSpec spec{sect::KernelFamily::gaussian, 2.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sect::gram_matrix_serial(spec, X));
    }
}
BENCHMARK(BM_GramSerial)->Unit(benchmark::kMillisecond);

void BM_GramParallel(benchmark::State& state) {
    const Eigen::MatrixXd X = bench_features(200, 2000);
    const sect::KernelSpec spec{sect::KernelFamily::gaussian, 2.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sect::gram_matrix(spec, X));
    }
}
BENCHMARK(BM_GramParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
