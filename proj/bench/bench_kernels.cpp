// Serial reference vs OpenMP kernels on synthetic assessments.
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "attackscore/score_kernels.hpp"

namespace {

using namespace attackscore;

std::vector<kernels::ScoreInput> make_inputs(std::size_t n)
{
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> level(0, 2), status(0, 1);
    std::vector<kernels::ScoreInput> in(n);
    for (auto& s : in) {
        s = {static_cast<SeverityLevel>(level(gen)), static_cast<SeverityLevel>(level(gen)),
             static_cast<Status>(status(gen))};
    }
    return in;
}

template <bool Parallel>
void BM_ScoreBatch(benchmark::State& state)
{
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)));
    std::vector<ProtectionScore> out(in.size());
    const ScoringConstants consts;
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::score_batch(in, out, consts);
        } else {
            kernels::serial::score_batch(in, out, consts);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_WeightedSum(benchmark::State& state)
{
    const auto in = make_inputs(static_cast<std::size_t>(state.range(0)));
    std::vector<ProtectionScore> scores(in.size());
    const ScoringConstants consts;
    kernels::serial::score_batch(in, scores, consts);
    for (auto _ : state) {
        auto sum = Parallel ? kernels::weighted_sum(scores, consts)
                            : kernels::serial::weighted_sum(scores, consts);
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ScoreBatch<false>)->Name("score_batch/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_ScoreBatch<true>)->Name("score_batch/omp")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_WeightedSum<false>)->Name("weighted_sum/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_WeightedSum<true>)->Name("weighted_sum/omp")->Range(1 << 10, 1 << 20);

BENCHMARK_MAIN();
