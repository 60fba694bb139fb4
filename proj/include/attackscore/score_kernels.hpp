#pragma once

// Batch kernels behind score_core. The default entry points are OpenMP
// parallel; `serial::` holds the straightforward loops they are tested against.

#include <cstddef>
#include <span>

#include "attackscore/score_core.hpp"

namespace attackscore::kernels {

struct ScoreInput {
    SeverityLevel exploitability;
    SeverityLevel impact;
    Status status;
};

struct WeightedSum {
    double weighted = 0.0;  // sum of percent * category weight
    double weights = 0.0;   // sum of category weights
    std::size_t count = 0;
};

// Reduction block size. Partial sums are formed per block and then combined in
// block order, so the result does not depend on the thread count.
inline constexpr std::size_t kReductionBlock = 1024;

// out.size() must equal in.size().
void score_batch(std::span<const ScoreInput> in, std::span<ProtectionScore> out,
                 const ScoringConstants& consts);

WeightedSum weighted_sum(std::span<const ProtectionScore> scores, const ScoringConstants& consts);

namespace serial {

void score_batch(std::span<const ScoreInput> in, std::span<ProtectionScore> out,
                 const ScoringConstants& consts);

WeightedSum weighted_sum(std::span<const ProtectionScore> scores, const ScoringConstants& consts);

}  // namespace serial

}  // namespace attackscore::kernels
