#include <benchmark/benchmark.h>

#include "morphkit/common/rng.hpp"
#include "morphkit/eval/matcher.hpp"
#include "morphkit/eval/metrics.hpp"
#include "morphkit/eval/quality.hpp"

using namespace morphkit;

namespace {

geom::FaceImage noise_image(int size, std::uint64_t seed) {
    Rng rng(seed);
    geom::FaceImage img(size, size);
    for (double& v : img.data()) v = rng.uniform();
    return img;
}

}  // namespace

static void BM_Ssim(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto a = noise_image(size, 1);
    const auto b = noise_image(size, 2);
    for (auto _ : state) benchmark::DoNotOptimize(eval::ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(128)->Arg(256);

static void BM_MsSsim(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const auto a = noise_image(size, 1);
    const auto b = noise_image(size, 2);
    for (auto _ : state) benchmark::DoNotOptimize(eval::ms_ssim(a, b));
}
BENCHMARK(BM_MsSsim)->Arg(64)->Arg(256);

static void BM_DetCurve(benchmark::State& state) {
    Rng rng(3);
    std::vector<double> attack, bona;
    for (int i = 0; i < state.range(0); ++i) {
        attack.push_back(rng.uniform());
        bona.push_back(rng.uniform());
    }
    for (auto _ : state) benchmark::DoNotOptimize(eval::det_curve(attack, bona));
}
BENCHMARK(BM_DetCurve)->Arg(100)->Arg(1000);

static void BM_ToyMatcherEmbed(benchmark::State& state) {
    const auto matcher = eval::toy_matcher(7);
    const auto img = noise_image(64, 4);
    for (auto _ : state) benchmark::DoNotOptimize(matcher->embed(img));
}
BENCHMARK(BM_ToyMatcherEmbed);

BENCHMARK_MAIN();
