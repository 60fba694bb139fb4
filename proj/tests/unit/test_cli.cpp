#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "attackscore/assessment_io.hpp"
#include "attackscore/cli.hpp"
#include "attackscore/io.hpp"
#include "fixtures.hpp"

using namespace attackscore;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args, bool with_inputs = true)
{
    if (with_inputs) {
        args.insert(args.begin(), {"--catalog", fixtures::sample_bundle().string(), "--labels",
                                   fixtures::seed_labels().string()});
    }
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string copy_fixture(const fixtures::TempDir& dir)
{
    const auto path = dir / "t.assessment";
    std::filesystem::copy_file(fixtures::reference_assessment(), path);
    return path.string();
}

}  // namespace

TEST(Cli, CatalogMinimal)
{
    const auto r = cli({"--catalog", fixtures::minimal_bundle().string(), "catalog"}, false);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("1 technique, 1 tactic"), std::string::npos) << r.out;
}

TEST(Cli, CatalogSample)
{
    const auto r = cli({"catalog"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("28 techniques, 14 tactics"), std::string::npos) << r.out;
}

TEST(Cli, MissingCatalogIsUsageError)
{
    const auto r = cli({"--catalog", "/nonexistent/bundle.json", "catalog"}, false);
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError)
{
    EXPECT_EQ(cli({"score", "--bogus"}).code, kExitUsage);
    EXPECT_EQ(cli({}).code, kExitUsage);
}

TEST(Cli, ScoreMatchesGolden)
{
    const auto r = cli({"score", fixtures::reference_assessment().string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, io::read_file(fixtures::golden("reference_scorecard.txt")));
}

TEST(Cli, ScoreStructuredAndLayer)
{
    const auto s = cli({"--format", "structured", "score", fixtures::reference_assessment().string()});
    EXPECT_EQ(s.code, kExitOk);
    EXPECT_NE(s.out.find("\"schema\": \"attackscore.scorecard/1\""), std::string::npos);
    const auto l = cli({"--format", "layer", "score", fixtures::reference_assessment().string()});
    EXPECT_EQ(l.code, kExitOk);
    EXPECT_NE(l.out.find("\"techniqueID\": \"T1190\""), std::string::npos);
    EXPECT_EQ(cli({"--format", "xml", "score", fixtures::reference_assessment().string()}).code, kExitUsage);
}

TEST(Cli, ConstantsOverrideChangesFingerprint)
{
    const auto base = cli({"catalog"});
    const auto tuned = cli({"--a", "1.2", "catalog"});
    EXPECT_EQ(tuned.code, kExitOk);
    EXPECT_NE(base.out, tuned.out);
    EXPECT_EQ(cli({"--a", "0", "catalog"}).code, kExitDomain);
}

TEST(Cli, RecordAppends)
{
    fixtures::TempDir dir;
    const auto path = copy_fixture(dir);
    const auto r = cli({"record", path, "--technique", "T1123", "--tactic", "collection", "--status", "success",
                        "--at", "2022-06-01T12:00:00Z"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(read_assessment(path).executions.size(), 9u);
}

TEST(Cli, RecordCreatesFile)
{
    fixtures::TempDir dir;
    const auto path = (dir / "new.assessment").string();
    const auto r = cli({"record", path, "--technique", "T1135", "--tactic", "discovery", "--status", "failure",
                        "--target", "lab"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    const auto a = read_assessment(path);
    EXPECT_EQ(a.target_name, "lab");
    EXPECT_EQ(a.executions.size(), 1u);
}

TEST(Cli, RecordInvalidTacticLeavesFileUnchanged)
{
    fixtures::TempDir dir;
    const auto path = copy_fixture(dir);
    const auto before = io::read_file(path);
    const auto r = cli({"record", path, "--technique", "T1106", "--tactic", "collection", "--status", "success"});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_NE(r.err.find("collection"), std::string::npos) << r.err;
    EXPECT_EQ(io::read_file(path), before);
}

TEST(Cli, RecordInvalidStatus)
{
    fixtures::TempDir dir;
    const auto path = copy_fixture(dir);
    EXPECT_EQ(cli({"record", path, "--technique", "T1135", "--tactic", "discovery", "--status", "blocked"}).code,
              kExitDomain);
}

TEST(Cli, RecordWhileLocked)
{
    fixtures::TempDir dir;
    const auto path = copy_fixture(dir);
    io::FileLock held(path);
    const auto r = cli({"record", path, "--technique", "T1135", "--tactic", "discovery", "--status", "success",
                        "--at", "2022-06-01T12:00:00Z"});
    EXPECT_NE(r.code, kExitOk);
    EXPECT_NE(r.err.find("assessment locked"), std::string::npos) << r.err;
}

TEST(Cli, ScoreEmptyAssessment)
{
    fixtures::TempDir dir;
    const auto path = dir / "empty.assessment";
    write_assessment(path, new_assessment("empty", Timestamp{}, "empty"));
    const auto r = cli({"score", path.string()});
    EXPECT_EQ(r.code, kExitDomain);
    EXPECT_NE(r.err.find("no results to score"), std::string::npos);
}

TEST(Cli, LabelsLint)
{
    const auto r = cli({"labels-lint"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("labels ok"), std::string::npos);

    fixtures::TempDir dir;
    const auto bad = dir / "bad.tsv";
    std::ofstream(bad) << "T1190\tHigh\tHigh\nT1106\tSevere\tLow\n";
    const auto b = cli({"--labels", bad.string(), "labels-lint"}, false);
    EXPECT_EQ(b.code, kExitDomain);
    EXPECT_NE(b.err.find("line 2"), std::string::npos) << b.err;
}

TEST(Cli, ConfigFile)
{
    fixtures::TempDir dir;
    const auto cfg = dir / "config.json";
    std::ofstream(cfg) << R"({"catalog": ")" << fixtures::sample_bundle().string() << R"(", "labels": ")"
                       << fixtures::seed_labels().string() << R"(", "constants": {"a": 1.1}})";
    const auto r = cli({"--config", cfg.string(), "score", fixtures::reference_assessment().string()}, false);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, io::read_file(fixtures::golden("reference_scorecard.txt")));
}
