#include "attackscore/score_kernels.hpp"

#include <algorithm>
#include <vector>

#include "attackscore/error.hpp"

namespace attackscore::kernels {

namespace {

void check_sizes(std::span<const ScoreInput> in, std::span<ProtectionScore> out)
{
    if (in.size() != out.size()) {
        throw Error(ErrorCode::InvalidArgument, "score_batch: output size mismatch");
    }
}

}  // namespace

void score_batch(std::span<const ScoreInput> in, std::span<ProtectionScore> out,
                 const ScoringConstants& consts)
{
    check_sizes(in, out);
    const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto& s = in[k];
        out[k] = protection_score(s.exploitability, s.impact, s.status, consts);
    }
}

WeightedSum weighted_sum(std::span<const ProtectionScore> scores, const ScoringConstants& consts)
{
    const std::size_t n = scores.size();
    if (n <= kReductionBlock) return serial::weighted_sum(scores, consts);

    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<WeightedSum> partial(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t len = std::min(kReductionBlock, n - begin);
        partial[b] = serial::weighted_sum(scores.subspan(begin, len), consts);
    }

    WeightedSum total;
    for (const auto& p : partial) {
        total.weighted += p.weighted;
        total.weights += p.weights;
        total.count += p.count;
    }
    return total;
}

namespace serial {

void score_batch(std::span<const ScoreInput> in, std::span<ProtectionScore> out,
                 const ScoringConstants& consts)
{
    check_sizes(in, out);
    for (std::size_t k = 0; k < in.size(); ++k) {
        out[k] = protection_score(in[k].exploitability, in[k].impact, in[k].status, consts);
    }
}

WeightedSum weighted_sum(std::span<const ProtectionScore> scores, const ScoringConstants& consts)
{
    WeightedSum sum;
    for (const auto& s : scores) {
        const double w = consts.category_weight(protection_category(s.percent, consts));
        sum.weighted += s.percent * w;
        sum.weights += w;
        ++sum.count;
    }
    return sum;
}

}  // namespace serial

}  // namespace attackscore::kernels
