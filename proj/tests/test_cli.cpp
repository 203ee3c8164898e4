#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ktuple/cli.hpp"

using namespace ktuple;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ktuple");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ktuple_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

double value_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    if (pos == std::string::npos) return std::nan("");
    return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST(Find, PeriodDoubling) {
    const auto dir = scratch("find");
    const auto r = run({"--out", dir.string(), "find", "--k", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(value_after(r.out, "A/Delta0 = "), 0.5042, 5e-4);
    EXPECT_TRUE(fs::exists(dir / "ktupling.csv"));
}

TEST(Find, FiveTuplingNearRotatingWaveEstimate) {
    const auto r = run({"--out", scratch("find5").string(), "find", "--k", "5", "--certify"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(value_after(r.out, "A/Delta0 = ") / 0.2, 1.0, 0.05);
    EXPECT_GE(value_after(r.out, "fidelity (min over 10 states) = "), 1.0 - 1e-7);
}

TEST(Find, ExitCodes) {
    const auto dir = scratch("codes").string();
    const auto nf = run({"--out", dir, "find", "--k", "2", "--scan-max", "0.1"});
    EXPECT_EQ(nf.code, 3);
    EXPECT_NE(nf.err.find("no bracket"), std::string::npos);
    EXPECT_EQ(run({"--out", dir, "find", "--j", "2", "--k", "4"}).code, 2);
    EXPECT_EQ(run({"--out", dir, "find", "--k", "2", "--bogus"}).code, 2);
    EXPECT_EQ(run({"--out", dir, "find"}).code, 2);
    EXPECT_EQ(run({"--out", dir}).code, 2);
    EXPECT_EQ(run({"--out", dir, "find", "--k", "2", "--model", "qubit"}).code, 2);
}

TEST(Config, FileValuesAndCommandLinePrecedence) {
    const auto dir = scratch("config");
    const auto ini = (dir / "run.ini").string();
    io::write_file(ini, "[find]\nk = 3\nscan_max = 0.1\n");
    // Config narrows the scan, so the 3-tupling root is not bracketed.
    EXPECT_EQ(run({"--config", ini, "--out", dir.string(), "find"}).code, 3);
    const auto ok = run({"--config", ini, "--out", dir.string(), "find", "--scan-max", "1.2"});
    ASSERT_EQ(ok.code, 0) << ok.err;
    EXPECT_NE(ok.out.find("A_P3"), std::string::npos);

    io::write_file(ini, "[find]\nk = 2\nunknown_key = 1\n");
    EXPECT_EQ(run({"--config", ini, "--out", dir.string(), "find"}).code, 2);
}

TEST(Config, PrintConfigEchoesResolvedValues) {
    const auto r = run({"--print-config", "find", "--k", "4", "--grid-points", "512"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("[find]"), std::string::npos);
    EXPECT_NE(r.out.find("512"), std::string::npos);
}

TEST(Trajectory, ClosesAfterTwoPeriodsAtPeriodDoubling) {
    const auto dir = scratch("traj");
    const auto r = run({"--out", dir.string(), "trajectory"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LT(value_after(r.out, "endpoint distance = "), 1e-6);
    EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
    EXPECT_TRUE(fs::exists(dir / "trajectory.ppm"));
}

TEST(Sweep, WritesSeriesMetadataAndImage) {
    const auto dir = scratch("sweep");
    const auto r = run({"--out", dir.string(), "sweep", "--a-points", "5", "--periods", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto series = io::read_series_csv((dir / "sweep.csv").string());
    ASSERT_EQ(series.size(), 5u);
    EXPECT_EQ(series[0].size(), 20u);
    EXPECT_EQ(io::read_file((dir / "sweep.ppm").string()).substr(0, 9), "P6\n20 5\n2");
    EXPECT_TRUE(fs::exists(dir / "sweep.meta"));
}

TEST(Spectrum, ReadsSeriesFile) {
    const auto dir = scratch("spectrum");
    ASSERT_EQ(run({"--out", dir.string(), "sweep", "--a-points", "3", "--periods", "40"}).code, 0);
    const auto r = run({"--out", dir.string(), "spectrum", "--in", (dir / "sweep.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "amplitude,dominant_frequency,peaks");
    EXPECT_TRUE(fs::exists(dir / "spectrum.ppm"));
    EXPECT_EQ(run({"--out", dir.string(), "spectrum", "--in", (dir / "missing.csv").string()}).code, 1);
}

TEST(Analyze, MalformedInputReportsLine) {
    const auto dir = scratch("bad");
    const auto csv = (dir / "bad.csv").string();
    io::write_file(csv, "amplitude,n,value,sigma\n1,1,0.5,\n1,2,oops,\n");
    const auto r = run({"--out", dir.string(), "analyze", "--in", csv});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Analyze, TooFewAmplitudes) {
    const auto dir = scratch("few");
    ASSERT_EQ(run({"--out", dir.string(), "sweep", "--a-points", "1", "--periods", "40"}).code, 0);
    EXPECT_EQ(run({"--out", dir.string(), "analyze", "--in", (dir / "sweep.csv").string()}).code, 3);
}

TEST(Analyze, RecoversThreeTuplingFromTwoLevelSweep) {
    const auto dir = scratch("analyze");
    const auto sw = run({"--out", dir.string(), "sweep", "--a-min", "0.31", "--a-max", "0.36", "--a-points", "12",
                         "--periods", "200"});
    ASSERT_EQ(sw.code, 0) << sw.err;
    const auto r = run({"--out", dir.string(), "analyze", "--in", (dir / "sweep.csv").string(), "--k", "3", "--unit",
                        "MHz"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find("disagree"), std::string::npos);
    const auto rows = signal::parse_report(io::read_file((dir / "report.txt").string()));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].k, 3);
    EXPECT_NEAR(rows[0].a_pk / 0.334530440, 1.0, 0.005);
    EXPECT_TRUE(fs::exists(dir / "fits.csv"));
    EXPECT_TRUE(fs::exists(dir / "hyperbola.csv"));
}

TEST(Calibrate, PrintsFixtureSection) {
    const auto r = run({"calibrate"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("[paper-sim]"), std::string::npos);
    EXPECT_NEAR(value_after(r.out, "delta0_selected_mhz = "), 7.50, 7.5e-3);
    EXPECT_NEAR(value_after(r.out, "alpha_sq = "), 0.9044, 1e-3);
}
