#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "../tools/cli.hpp"
#include "fairprice/ingest.hpp"
#include "fairprice/mrr.hpp"

namespace fs = std::filesystem;
using fairprice::cli::run;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fairprice_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines;
}

std::string simulate(const std::string& name, const std::string& n, const std::string& seed) {
    const auto path = scratch(name).string();
    const CliRun r = invoke({"simulate", "--rho", "0.5", "--theta", "1", "--n", n, "--seed", seed, "-o", path});
    EXPECT_EQ(r.code, 0) << r.err;
    return path;
}

} // namespace

TEST(CliSimulate, RejectsRhoAboveOne) {
    const CliRun r = invoke({"simulate", "--rho", "1.5", "--n", "10", "-o", scratch("bad.csv").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("rho"), std::string::npos);
}

TEST(CliSimulate, SameSeedGivesIdenticalFiles) {
    const auto a = simulate("same_a.csv", "2000", "42");
    const auto b = simulate("same_b.csv", "2000", "42");
    const auto c = simulate("same_c.csv", "2000", "43");
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(slurp(a), slurp(c));
    EXPECT_TRUE(fs::exists(a + ".config"));
    EXPECT_TRUE(fs::exists(a + ".manifest"));
}

TEST(CliSimulate, UnknownFlagIsUsageError) {
    EXPECT_EQ(invoke({"simulate", "--bogus", "1", "-o", "x.csv"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
}

TEST(CliResponse, ExplicitDeltasGiveOneRowPerLag) {
    const auto csv = simulate("resp.csv", "3000", "5");
    const auto prefix = scratch("resp_out").string();
    const CliRun r = invoke({"response", csv, "--deltas", "1,10,100", "--out", prefix});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* side : {"_ask.csv", "_bid.csv"}) {
        const auto lines = split_lines(slurp(prefix + side));
        ASSERT_EQ(lines.size(), 4u) << side;
        EXPECT_EQ(lines[0], "delta_s,value,count,stderr,asset");
        EXPECT_EQ(lines[1].substr(0, 2), "1,");
        EXPECT_EQ(lines[3].substr(0, 4), "100,");
    }
}

TEST(CliResponse, BadDeltasAreUsageErrors) {
    const auto csv = simulate("resp_bad.csv", "100", "5");
    EXPECT_EQ(invoke({"response", csv, "--deltas", "1,x"}).code, 2);
    EXPECT_EQ(invoke({"response", csv, "--deltas", "-1"}).code, 2);
}

TEST(CliFairtest, MrrStreamPasses) {
    const auto csv = simulate("fair.csv", "50000", "11");
    const auto out = scratch("fair_table.csv").string();
    const CliRun r = invoke({"fairtest", csv, "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = split_lines(slurp(out));
    ASSERT_EQ(lines.size(), 4u);
    for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_EQ(lines[i].substr(lines[i].rfind(',') + 1), "PASS");
    EXPECT_NE(r.out.find("summary: PASS"), std::string::npos);
    EXPECT_TRUE(fs::exists(out + ".sessions.csv"));
}

TEST(CliFairtest, ShiftedAsksAreFlagged) {
    using namespace fairprice;
    const mrr::MrrParams params{0.5, 1.0, 100.0, 0.0, 3};
    const auto path = mrr::simulate(params, 50000);
    const auto shifted = with_shifted_trades(path.stream, Side::Ask, path.stream.tick_steps());
    const auto csv = scratch("shifted.csv");
    save_session(csv, shifted);
    save_asset_config(csv.string() + ".config", config_for(shifted, GridSpec::untrimmed(10 * kNanosPerSecond)));
    const auto out = scratch("shifted_table.csv").string();
    const CliRun r = invoke({"fairtest", csv.string(), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = split_lines(slurp(out));
    ASSERT_GE(lines.size(), 2u);
    EXPECT_EQ(lines[1].substr(0, lines[1].find(',', lines[1].find(',') + 1)), "MRR,Delta");
    EXPECT_EQ(lines[1].substr(lines[1].rfind(',') + 1), "FAIL");
    EXPECT_NE(r.out.find("summary: FAIL"), std::string::npos);
}

TEST(CliFairtest, EmptyStreamReportsNotAvailable) {
    const auto csv = scratch("empty.csv");
    std::ofstream(csv) << fairprice::kCsvHeader << "\n";
    const auto out = scratch("empty_table.csv").string();
    const CliRun r = invoke({"fairtest", csv.string(), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(slurp(out).find("NA"), std::string::npos);
}

TEST(CliFairtest, MissingInputIsDataError) {
    EXPECT_EQ(invoke({"fairtest", scratch("nope.csv").string()}).code, 1);
}

TEST(CliVerify, PassesForModerateRho) {
    const CliRun r = invoke({"verify-mrr", "--rho", "0.5", "--theta", "1", "--depth", "60"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("verify-mrr: PASS"), std::string::npos);
    EXPECT_EQ(invoke({"verify-mrr", "--rho", "0.01"}).code, 0);
}

TEST(CliVerify, ShallowDepthForStickySignsFails) {
    const CliRun r = invoke({"verify-mrr", "--rho", "0.99", "--depth", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("DepthTooSmall"), std::string::npos);
}

TEST(CliReplay, ReproducesSimulationBitExactly) {
    const auto csv = simulate("replay.csv", "1500", "9");
    const std::string first = slurp(csv);
    fs::remove(csv);
    const CliRun r = invoke({"replay", csv + ".manifest"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(csv), first);
}

TEST(CliReplay, ReproducesFairtestTable) {
    const auto csv = simulate("replay_ft.csv", "5000", "9");
    const auto out = scratch("replay_ft_table.csv").string();
    ASSERT_EQ(invoke({"fairtest", csv, "--out", out}).code, 0);
    const std::string first = slurp(out);
    fs::remove(out);
    ASSERT_EQ(invoke({"replay", out + ".manifest"}).code, 0);
    EXPECT_EQ(slurp(out), first);
}

TEST(Manifest, RoundTrips) {
    fairprice::cli::Manifest m;
    m.add("argv", "simulate");
    m.add("argv", "--n");
    m.add("seed", "7");
    const auto back = fairprice::cli::Manifest::parse(m.str());
    EXPECT_EQ(back.entries(), m.entries());
    EXPECT_EQ(back.values("argv"), (std::vector<std::string>{"simulate", "--n"}));
}
