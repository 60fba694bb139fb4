#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "attackscore/assessment.hpp"
#include "attackscore/assessment_io.hpp"
#include "attackscore/error.hpp"
#include "attackscore/io.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace attackscore;

namespace {

Timestamp at(int minutes) { return Timestamp{std::chrono::minutes{27'000'000 + minutes}}; }

TechniqueExecution exec(std::string id, std::string tactic, Status s, int minute)
{
    return TechniqueExecution{std::move(id), std::move(tactic), s, at(minute), ""};
}

class AssessmentTest : public ::testing::Test {
protected:
    LabeledCatalog catalog = fixtures::sample_catalog();
    ScoringConstants consts;
};

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_F(AssessmentTest, RecordAppends)
{
    auto a = new_assessment("target", at(0), "a1");
    a = record(std::move(a), exec("T1190", "initial-access", Status::Success, 1), catalog);
    EXPECT_EQ(a.executions.size(), 1u);
    EXPECT_EQ(a.id, "a1");
}

TEST_F(AssessmentTest, RecordRejectsUnknownTechnique)
{
    const auto a = new_assessment("target", at(0), "a1");
    EXPECT_EQ(code_of([&] { record(a, exec("T9999", "execution", Status::Success, 1), catalog); }),
              ErrorCode::NotInCatalog);
}

TEST_F(AssessmentTest, RecordRejectsTacticMismatch)
{
    const auto a = new_assessment("target", at(0), "a1");
    EXPECT_EQ(code_of([&] { record(a, exec("T1106", "collection", Status::Success, 1), catalog); }),
              ErrorCode::TacticMismatch);
}

TEST_F(AssessmentTest, RecordRejectsOutOfOrder)
{
    auto a = new_assessment("target", at(0), "a1");
    a = record(std::move(a), exec("T1190", "initial-access", Status::Success, 10), catalog);
    EXPECT_EQ(code_of([&] { record(a, exec("T1135", "discovery", Status::Success, 5), catalog); }),
              ErrorCode::OutOfOrder);
}

TEST_F(AssessmentTest, EffectiveResultsLatestWins)
{
    auto a = new_assessment("target", at(0), "a1");
    a = record(std::move(a), exec("T1547.004", "persistence", Status::Failure, 1), catalog);
    a = record(std::move(a), exec("T1190", "initial-access", Status::Success, 2), catalog);
    a = record(std::move(a), exec("T1547.004", "persistence", Status::Success, 3), catalog);
    const auto r = effective_results(a);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], (EffectiveResult{"T1547.004", "persistence", Status::Success}));
    EXPECT_EQ(r[1].technique_id, "T1190");
}

TEST_F(AssessmentTest, EffectiveResultsKeepDistinctTactics)
{
    auto a = new_assessment("target", at(0), "a1");
    a = record(std::move(a), exec("T1547.004", "persistence", Status::Failure, 1), catalog);
    a = record(std::move(a), exec("T1547.004", "privilege-escalation", Status::Success, 2), catalog);
    EXPECT_EQ(effective_results(a).size(), 2u);
}

TEST_F(AssessmentTest, ReferenceAssessmentScores)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    ASSERT_EQ(a.executions.size(), 8u);
    EXPECT_EQ(effective_results(a).size(), 8u);

    const auto card = compute_scorecard(a, catalog, consts);
    std::vector<long> rounded;
    for (const auto& t : card.per_technique) rounded.push_back(display_percent(t.score.percent));
    EXPECT_EQ(rounded, (std::vector<long>{50, 34, 34, 50, 26, 16, 50, 34}));

    EXPECT_NEAR(card.total.percent, oracle::to_double(oracle::reference_total()), 1e-9);
    EXPECT_EQ(card.verdict.band, ProtectionCategory::Medium);
    EXPECT_EQ(card.tested_techniques, 8u);
    EXPECT_EQ(card.catalog_techniques, 28u);
    EXPECT_EQ(card.per_tactic.size(), 8u);
    EXPECT_EQ(card.computed_at, a.executions.back().observed_at);
    EXPECT_EQ(card.constants_fingerprint, consts.fingerprint());
}

TEST_F(AssessmentTest, SingleExecutionCoverage)
{
    // T1190 relabeled High/Low gives a saturated score.
    auto base = load_stix_bundle(fixtures::sample_bundle());
    const std::vector<TechniqueLabel> labels{
        {"T1190", SeverityLevel::Low, SeverityLevel::High, "", LabelSource::Curated}};
    const auto lc = resolve(base, labels);
    auto a = new_assessment("t", at(0), "single");
    a = record(std::move(a), exec("T1190", "initial-access", Status::Success, 1), lc);
    const auto card = compute_scorecard(a, lc, consts);
    EXPECT_EQ(card.total.percent, 100.0);
    EXPECT_DOUBLE_EQ(card.coverage_percent, 100.0 / 28.0);
}

TEST_F(AssessmentTest, EmptyAssessmentCannotBeScored)
{
    const auto a = new_assessment("t", at(0), "empty");
    try {
        compute_scorecard(a, catalog, consts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoResults);
        EXPECT_STREQ(e.what(), "no results to score");
    }
}

TEST_F(AssessmentTest, CoverageAgainstEightHundred)
{
    const auto big = fixtures::padded_catalog(800);
    ASSERT_EQ(big.stats().total, 800u);
    const auto card = compute_scorecard(read_assessment(fixtures::reference_assessment()), big, consts);
    EXPECT_EQ(card.coverage_percent, 1.0);
}

TEST_F(AssessmentTest, ScorecardIsPure)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    EXPECT_EQ(compute_scorecard(a, catalog, consts), compute_scorecard(a, catalog, consts));
}

TEST_F(AssessmentTest, PerTacticWithinBounds)
{
    std::mt19937_64 gen(17);
    for (int n = 0; n < 100; ++n) {
        const auto a = generators::random_assessment(gen, catalog);
        if (a.executions.empty()) continue;
        const auto card = compute_scorecard(a, catalog, consts);
        for (const auto& tactic : card.per_tactic) {
            double lo = 100.0, hi = 0.0;
            for (const auto& t : card.per_technique) {
                if (t.tactic != tactic.tactic) continue;
                lo = std::min(lo, t.score.percent);
                hi = std::max(hi, t.score.percent);
            }
            EXPECT_GE(tactic.score.percent, lo);
            EXPECT_LE(tactic.score.percent, hi);
        }
        double lo = 100.0, hi = 0.0;
        for (const auto& t : card.per_technique) {
            lo = std::min(lo, t.score.percent);
            hi = std::max(hi, t.score.percent);
        }
        EXPECT_GE(card.total.percent, lo);
        EXPECT_LE(card.total.percent, hi);
        EXPECT_GE(card.coverage_percent, 0.0);
        EXPECT_LE(card.coverage_percent, 100.0);
    }
}

TEST_F(AssessmentTest, CoverageMonotone)
{
    auto a = new_assessment("t", at(0), "grow");
    double prev = 0.0;
    int minute = 1;
    for (const auto& lt : catalog.techniques()) {
        a = record(std::move(a), exec(lt.technique.id, lt.technique.tactic_refs[0], Status::Success, minute++),
                   catalog);
        const double cov = compute_scorecard(a, catalog, consts).coverage_percent;
        EXPECT_GT(cov, prev);
        prev = cov;
    }
    EXPECT_DOUBLE_EQ(prev, 100.0);
}

TEST_F(AssessmentTest, WhatIfFlipMatchesOracle)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    const auto before = assessment_fingerprint(a);
    const auto base = compute_scorecard(a, catalog, consts);
    const std::vector<ResultOverride> flip{{"T1547.004", "privilege-escalation", Status::Success}};
    const auto changed = what_if(a, flip, catalog, consts);
    EXPECT_EQ(assessment_fingerprint(a), before);

    // Oracle: recompute with the flipped row.
    std::vector<oracle::Q> percents;
    for (auto r : oracle::reference_rows()) {
        if (r.id == "T1547.004") r.status = 'S';
        percents.push_back(oracle::clamp_percent(oracle::raw_score(r.e, r.i, r.status)));
    }
    EXPECT_NEAR(changed.total.percent, oracle::to_double(oracle::weighted_mean(percents)), 1e-9);
    // The flipped cell drops from 25.96 into the VeryLow band; its weight
    // halves, so the weighted total rises even though the cell fell.
    EXPECT_GT(changed.total.percent, base.total.percent);
    EXPECT_LT(changed.per_technique[4].score.percent, base.per_technique[4].score.percent);
}

TEST_F(AssessmentTest, WhatIfEmptyIsIdentity)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    EXPECT_EQ(what_if(a, {}, catalog, consts), compute_scorecard(a, catalog, consts));
}

TEST_F(AssessmentTest, WhatIfExtends)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    const std::vector<ResultOverride> extra{{"T1123", "collection", Status::Failure}};
    const auto card = what_if(a, extra, catalog, consts);
    EXPECT_EQ(card.per_technique.size(), 9u);
    EXPECT_EQ(card.tested_techniques, 9u);
}

TEST_F(AssessmentTest, WhatIfUnknownTechnique)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    const std::vector<ResultOverride> bad{{"T9999", "execution", Status::Success}};
    EXPECT_EQ(code_of([&] { what_if(a, bad, catalog, consts); }), ErrorCode::NotInCatalog);
}

TEST(AssessmentIo, RoundTripRandom)
{
    const auto catalog = fixtures::sample_catalog();
    std::mt19937_64 gen(2024);
    for (int n = 0; n < 200; ++n) {
        const auto a = generators::random_assessment(gen, catalog);
        EXPECT_EQ(load_assessment(save_assessment(a)), a);
    }
}

TEST(AssessmentIo, TruncatedDocument)
{
    const auto text = io::read_file(fixtures::reference_assessment());
    try {
        load_assessment(text.substr(0, text.size() / 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse);
    }
}

TEST(AssessmentIo, SchemaViolationsNameTheField)
{
    auto field_of = [](const std::string& doc) {
        try {
            load_assessment(doc);
        } catch (const Error& e) {
            return e.field();
        }
        return std::string("<no error>");
    };
    EXPECT_EQ(field_of(R"({"version":1,"target_name":"x","created_at":"2022-01-01T00:00:00Z","executions":[]})"), "id");
    EXPECT_EQ(field_of(R"({"version":1,"id":"a","target_name":"x","created_at":"yesterday","executions":[]})"),
              "created_at");
    EXPECT_EQ(field_of(R"({"version":1,"id":"a","target_name":"x","created_at":"2022-01-01T00:00:00Z",
        "executions":[{"technique_id":"T1135","tactic":"discovery","status":"blocked","observed_at":"2022-01-01T00:00:00Z"}]})"),
              "executions[0].status");
    EXPECT_EQ(field_of(R"({"version":1,"id":"a","target_name":"x","created_at":"2022-01-01T00:00:00Z",
        "executions":[{"technique_id":"T1135","status":"success","observed_at":"2022-01-01T00:00:00Z"}]})"),
              "executions[0].tactic");
}

TEST(AssessmentIo, VersionMismatch)
{
    try {
        load_assessment(R"({"version":2,"id":"a","target_name":"x","created_at":"2022-01-01T00:00:00Z","executions":[]})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Version);
        EXPECT_NE(std::string(e.what()).find("supported: 1"), std::string::npos);
    }
}

TEST(AssessmentIo, ReferenceFixture)
{
    const auto a = read_assessment(fixtures::reference_assessment());
    EXPECT_EQ(a.executions.size(), 8u);
    EXPECT_EQ(a.id, "reference");
    EXPECT_EQ(a.executions[4].status, Status::Failure);
}

TEST(AssessmentIo, AtomicWriteReplaces)
{
    fixtures::TempDir dir;
    const auto path = dir / "x.assessment";
    auto a = new_assessment("one", Timestamp{}, "x");
    write_assessment(path, a);
    a.target_name = "two";
    write_assessment(path, a);
    EXPECT_EQ(read_assessment(path).target_name, "two");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir.path())) ++files;
    EXPECT_EQ(files, 1u);  // no temporaries left behind
}

TEST(AssessmentIo, LockIsExclusive)
{
    fixtures::TempDir dir;
    const auto path = dir / "x.assessment";
    io::FileLock first(path);
    try {
        io::FileLock second(path);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Locked);
        EXPECT_STREQ(e.what(), "assessment locked");
    }
}

TEST(Timestamps, FormatAndParse)
{
    const auto t = parse_utc("2022-06-01T09:05:00Z");
    ASSERT_TRUE(t);
    EXPECT_EQ(format_utc(*t), "2022-06-01T09:05:00Z");
    EXPECT_FALSE(parse_utc("2022-02-30T00:00:00Z"));
    EXPECT_FALSE(parse_utc("2022-06-01 09:05:00"));
    EXPECT_FALSE(parse_utc("2022-06-01T25:00:00Z"));
}

TEST(AssessmentIds, Validation)
{
    EXPECT_TRUE(is_assessment_id("reference"));
    EXPECT_TRUE(is_assessment_id(generate_assessment_id()));
    EXPECT_FALSE(is_assessment_id("../etc"));
    EXPECT_FALSE(is_assessment_id(""));
    EXPECT_FALSE(is_assessment_id(".hidden"));
    EXPECT_NE(generate_assessment_id(), generate_assessment_id());
}
