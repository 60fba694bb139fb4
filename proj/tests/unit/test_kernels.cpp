#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "attackscore/score_kernels.hpp"

using namespace attackscore;

namespace {

std::vector<kernels::ScoreInput> random_inputs(std::size_t n, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> level(0, 2), status(0, 1);
    std::vector<kernels::ScoreInput> in(n);
    for (auto& s : in) {
        s = {static_cast<SeverityLevel>(level(gen)), static_cast<SeverityLevel>(level(gen)),
             static_cast<Status>(status(gen))};
    }
    return in;
}

}  // namespace

TEST(Kernels, ParallelBatchMatchesSerial)
{
    const ScoringConstants consts;
    for (std::size_t n : {0u, 1u, 7u, 1024u, 5000u}) {
        const auto in = random_inputs(n, static_cast<unsigned>(n));
        std::vector<ProtectionScore> par(n), ser(n);
        kernels::score_batch(in, par, consts);
        kernels::serial::score_batch(in, ser, consts);
        EXPECT_EQ(par, ser);
    }
}

TEST(Kernels, BatchRejectsSizeMismatch)
{
    const auto in = random_inputs(3, 1);
    std::vector<ProtectionScore> out(2);
    EXPECT_ANY_THROW(kernels::score_batch(in, out, ScoringConstants{}));
}

TEST(Kernels, WeightedSumMatchesSerial)
{
    const ScoringConstants consts;
    for (std::size_t n : {1u, 1024u, 1025u, 100000u}) {
        const auto in = random_inputs(n, 99);
        std::vector<ProtectionScore> scores(n);
        kernels::serial::score_batch(in, scores, consts);
        const auto par = kernels::weighted_sum(scores, consts);
        const auto ser = kernels::serial::weighted_sum(scores, consts);
        EXPECT_EQ(par.count, ser.count);
        EXPECT_NEAR(par.weighted, ser.weighted, 1e-12 * ser.weighted);
        EXPECT_NEAR(par.weights, ser.weights, 1e-12 * ser.weights);
        if (n <= kernels::kReductionBlock) {
            EXPECT_EQ(par.weighted, ser.weighted);
        }
    }
}

TEST(Kernels, WeightedSumIsDeterministic)
{
    const ScoringConstants consts;
    const auto in = random_inputs(50000, 4);
    std::vector<ProtectionScore> scores(in.size());
    kernels::score_batch(in, scores, consts);
    const auto first = kernels::weighted_sum(scores, consts);
    for (int k = 0; k < 5; ++k) {
        const auto again = kernels::weighted_sum(scores, consts);
        EXPECT_EQ(again.weighted, first.weighted);
        EXPECT_EQ(again.weights, first.weights);
    }
}
