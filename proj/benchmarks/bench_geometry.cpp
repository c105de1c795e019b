#include <benchmark/benchmark.h>

#include "morphkit/common/rng.hpp"
#include "morphkit/geometry/warp.hpp"

using namespace morphkit;

namespace {

geom::LandmarkSet random_landmarks(int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<geom::Vec2> pts;
    for (int i = 0; i < k; ++i) pts.push_back({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});
    return geom::LandmarkSet(pts);
}

geom::FaceImage noise_image(int size, std::uint64_t seed) {
    Rng rng(seed);
    geom::FaceImage img(size, size);
    for (double& v : img.data()) v = rng.uniform();
    return img;
}

}  // namespace

static void BM_DelaunayTriangulate(benchmark::State& state) {
    const auto lms = random_landmarks(static_cast<int>(state.range(0)), 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geom::build_face_mesh(lms));
    }
}
BENCHMARK(BM_DelaunayTriangulate)->Arg(32)->Arg(106)->Arg(256);

static void BM_PiecewiseAffineWarp(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto img = noise_image(size, 7);
    const auto src = random_landmarks(106, 42);
    auto dst_pts = src.points();
    Rng rng(43);
    for (auto& p : dst_pts) {
        p.x += rng.uniform(-0.02, 0.02);
        p.y += rng.uniform(-0.02, 0.02);
    }
    const geom::LandmarkSet dst(dst_pts);
    const auto mesh = geom::build_face_mesh(dst);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geom::piecewise_affine_warp(img, src, dst, mesh));
    }
}
BENCHMARK(BM_PiecewiseAffineWarp)->Arg(64)->Arg(128)->Arg(256);

static void BM_ClassicalMorph(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto i1 = noise_image(size, 7);
    const auto i2 = noise_image(size, 8);
    const auto l1 = random_landmarks(106, 42);
    const auto l2 = random_landmarks(106, 44);
    const auto lt = geom::average_landmarks(l1, l2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(geom::classical_morph(i1, i2, l1, l2, lt, 0.5));
    }
}
BENCHMARK(BM_ClassicalMorph)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
