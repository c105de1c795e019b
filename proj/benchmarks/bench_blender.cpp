#include <benchmark/benchmark.h>

#include "morphkit/common/rng.hpp"
#include "morphkit/gib/generator.hpp"
#include "morphkit/gib/heatmap.hpp"
#include "morphkit/lmb/blender.hpp"

using namespace morphkit;

namespace {

geom::LandmarkSet random_landmarks(int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<geom::Vec2> pts;
    for (int i = 0; i < k; ++i) pts.push_back({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});
    return geom::LandmarkSet(pts);
}

}  // namespace

static void BM_PredictShifts(benchmark::State& state) {
    lmb::BlenderNetConfig cfg;
    const lmb::LandmarkBlender blender(cfg);
    const auto l1 = random_landmarks(cfg.landmark_count, 1);
    const auto l2 = random_landmarks(cfg.landmark_count, 2);
    for (auto _ : state) benchmark::DoNotOptimize(blender.predict_shifts(l1, l2));
}
BENCHMARK(BM_PredictShifts);

static void BM_RenderHeatmaps(benchmark::State& state) {
    const auto lms = random_landmarks(106, 3);
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gib::render_heatmaps(lms, res, 1.5 * res / 64.0));
}
BENCHMARK(BM_RenderHeatmaps)->Arg(64)->Arg(128);

static void BM_GenerateIntermediate(benchmark::State& state) {
    gib::BlendGeneratorConfig cfg;
    cfg.resolution = 64;
    cfg.iterations = static_cast<int>(state.range(0));
    const gib::Generator gen(cfg);
    Rng rng(5);
    geom::FaceImage img(64, 64);
    for (double& v : img.data()) v = rng.uniform();
    const auto l = random_landmarks(cfg.landmark_count, 6);
    const auto lm = random_landmarks(cfg.landmark_count, 7);
    for (auto _ : state) benchmark::DoNotOptimize(gen.generate_intermediate(img, l, lm));
}
BENCHMARK(BM_GenerateIntermediate)->Arg(1)->Arg(9);

BENCHMARK_MAIN();
