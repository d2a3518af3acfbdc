// Serial reference vs OpenMP kernel for the three hot loops.
#include "support.hpp"

#include <benchmark/benchmark.h>

using namespace potsynth;

namespace {

Bitmap bench_bitmap() {
    Rng rng(1);
    return testsupport::random_bitmap(rng, 1024, 1024, 0.5);
}

struct FractureCase {
    mesh::VesselMesh mesh;
    fracture::FractureEvent event;
};

FractureCase bench_fracture() {
    Rng rng(2);
    profile::ProfileCurve c;
    for (int k = 0; k < 400; ++k) c.points.push_back({1.0 + k * 0.01, k * 0.02});
    FractureCase f{mesh::revolve(c, 256), {}};
    f.event = testsupport::random_event(rng, mesh::mesh_bbox(f.mesh));
    return f;
}

std::vector<detect::FeatureRow> bench_points() {
    Rng rng(3);
    std::vector<detect::FeatureRow> pts;
    while (pts.size() < 900) {
        auto more = testsupport::random_feature_set(rng, 900);
        pts.insert(pts.end(), more.begin(), more.end());
    }
    pts.resize(900);
    return pts;
}

void BM_border_serial(benchmark::State& s) {
    const auto bm = bench_bitmap();
    for (auto _ : s) benchmark::DoNotOptimize(profile::serial::detect_border(bm));
}
void BM_border_omp(benchmark::State& s) {
    const auto bm = bench_bitmap();
    for (auto _ : s) benchmark::DoNotOptimize(profile::detect_border(bm));
}

void BM_fracture_serial(benchmark::State& s) {
    auto f = bench_fracture();
    for (auto _ : s) {
        auto m = f.mesh;
        fracture::serial::apply_fracture(m, f.event);
        benchmark::DoNotOptimize(m.removed.data());
    }
}
void BM_fracture_omp(benchmark::State& s) {
    auto f = bench_fracture();
    for (auto _ : s) {
        auto m = f.mesh;
        fracture::apply_fracture(m, f.event);
        benchmark::DoNotOptimize(m.removed.data());
    }
}

void BM_dbscan_serial(benchmark::State& s) {
    const auto pts = bench_points();
    for (auto _ : s) benchmark::DoNotOptimize(detect::serial::dbscan(pts));
}
void BM_dbscan_omp(benchmark::State& s) {
    const auto pts = bench_points();
    for (auto _ : s) benchmark::DoNotOptimize(detect::dbscan(pts));
}

}  // namespace

BENCHMARK(BM_border_serial);
BENCHMARK(BM_border_omp);
BENCHMARK(BM_fracture_serial);
BENCHMARK(BM_fracture_omp);
BENCHMARK(BM_dbscan_serial);
BENCHMARK(BM_dbscan_omp);

BENCHMARK_MAIN();
