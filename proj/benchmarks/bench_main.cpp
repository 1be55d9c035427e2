#include <benchmark/benchmark.h>

#include "lerw/curve.hpp"
#include "lerw/loewner.hpp"
#include "lerw/measure.hpp"
#include "lerw/walk.hpp"

using namespace lerw;

namespace {

void BM_SrwToRadius(benchmark::State& state) {
    int32_t n = int32_t(state.range(0));
    LerwSampler sampler;
    uint64_t stream = 0;
    uint64_t steps = 0;
    for (auto _ : state) {
        RngStream rng(1, stream++);
        const auto& walk = sampler.sample_walk_ball(n, rng);
        steps += walk.size() - 1;
        benchmark::DoNotOptimize(walk.data());
    }
    state.SetItemsProcessed(int64_t(steps));
}
BENCHMARK(BM_SrwToRadius)->Arg(64)->Arg(128);

void BM_LerwSample(benchmark::State& state) {
    int32_t n = int32_t(state.range(0));
    LerwSampler sampler;
    uint64_t stream = 0;
    for (auto _ : state) {
        RngStream rng(1, stream++);
        const auto& path = sampler.sample_ball(n, rng);
        benchmark::DoNotOptimize(path.data());
    }
}
BENCHMARK(BM_LerwSample)->Arg(32)->Arg(128)->Arg(256);

void BM_LoopErase(benchmark::State& state) {
    RngStream rng(3, 0);
    LatticePath path;
    LatticePoint p{0, 0};
    path.points.push_back(p);
    for (int i = 0; i < 20000; ++i) {
        auto d = kSteps[rng.next_direction()];
        p.x += d[0];
        p.y += d[1];
        path.points.push_back(p);
    }
    for (auto _ : state) {
        LatticePath erased = loop_erase(path);
        benchmark::DoNotOptimize(erased.points.data());
    }
}
BENCHMARK(BM_LoopErase);

void BM_LoewnerSolve(benchmark::State& state) {
    RngStream rng(5, 0);
    DrivingFunction d = sample_driving(2.0, 1.0, 1e-3, rng, true);
    LoewnerChain chain(d);
    for (auto _ : state) {
        RadialTrajectory traj = chain.solve({0.5, 0.1});
        benchmark::DoNotOptimize(traj.values.data());
    }
}
BENCHMARK(BM_LoewnerSolve);

void BM_SleTrace(benchmark::State& state) {
    uint64_t stream = 0;
    TraceOptions opt;
    opt.stride = 16;
    for (auto _ : state) {
        RngStream rng(7, stream++);
        TraceApprox trace = sample_sle_trace(2.0, 1.0, 2e-3, rng, opt);
        benchmark::DoNotOptimize(trace.curve.vertices.data());
    }
}
BENCHMARK(BM_SleTrace);

void BM_DistRho(benchmark::State& state) {
    RngStream rng(9, 0);
    auto make = [&](uint64_t stream) {
        RngStream r(9, stream);
        LerwSample s = sample_lerw(48, r);
        return embed_lerw(s, 48, SpeedFunction{std::pow(48.0, 1.25)});
    };
    Curve a = make(1), b = make(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist_rho(a, b));
    }
}
BENCHMARK(BM_DistRho);

void BM_LevyProkhorov(benchmark::State& state) {
    RngStream r1(11, 1), r2(11, 2);
    LerwSample s1 = sample_lerw(24, r1);
    LerwSample s2 = sample_lerw(24, r2);
    double c = std::pow(24.0, 1.25);
    OccupationMeasure m1 = occupation_from_edges(s1, 24, c);
    OccupationMeasure m2 = occupation_from_edges(s2, 24, c);
    TestFamily family = TestFamily::dyadic(7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(levy_prokhorov(m1, m2, family));
    }
}
BENCHMARK(BM_LevyProkhorov);

} // namespace

BENCHMARK_MAIN();
