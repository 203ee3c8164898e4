#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ktuple/io.hpp"

using namespace ktuple;
using namespace ktuple::io;

namespace {

std::size_t parse_error_line(const std::string& csv) {
    std::istringstream in(csv);
    try {
        read_series_csv(in);
    } catch (const ParseError& e) {
        return e.line;
    }
    return 0;
}

HeatmapGrid small_grid() {
    HeatmapGrid g;
    g.x = {0.0, 1.0, 2.0};
    g.y = {10.0, 20.0};
    g.cells = {0.0, 0.5, 1.0, 0.25, 0.75, 1.0};
    g.vmin = 0.0;
    g.vmax = 1.0;
    return g;
}

}  // namespace

TEST(Numbers, ShortestExactRoundTrip) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng) * std::pow(10.0, (i % 40) - 20);
        EXPECT_EQ(parse_double(fmt(x), 1), x);
    }
    EXPECT_EQ(parse_double(fmt(0.1), 1), 0.1);
    EXPECT_EQ(parse_double("+2.5", 1), 2.5);
    EXPECT_THROW(parse_double("2.5x", 4), ParseError);
    EXPECT_THROW(parse_long("3.0", 4), ParseError);
}

TEST(SeriesCsv, ExactRoundTrip) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    std::vector<signal::StroboscopicSeries> in(3);
    for (int a = 0; a < 3; ++a) {
        in[a].amplitude = 30.0 + a / 3.0;
        for (long n = 1; n <= 50; ++n) {
            in[a].times.push_back(n);
            in[a].values.push_back(nd(rng));
        }
        if (a != 1) {
            in[a].sigma.emplace();
            for (int n = 0; n < 50; ++n) in[a].sigma->push_back(std::abs(nd(rng)));
        }
    }
    const std::string csv = series_csv(in);
    std::istringstream is(csv);
    const auto out = read_series_csv(is);
    ASSERT_EQ(out.size(), 3u);
    for (int a = 0; a < 3; ++a) {
        EXPECT_EQ(out[a].amplitude, in[a].amplitude);
        EXPECT_EQ(out[a].times, in[a].times);
        EXPECT_EQ(out[a].values, in[a].values);
        EXPECT_EQ(out[a].sigma, in[a].sigma);
    }
    EXPECT_EQ(series_csv(out), csv);
}

TEST(SeriesCsv, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("amplitude,n,value,sigma\n1,1,0.5,\n1,2,abc,\n"), 3u);
    EXPECT_EQ(parse_error_line("amplitude,n,value,sigma\n1,1,0.5,\n1,2,0.5\n"), 3u);
    EXPECT_EQ(parse_error_line("amplitude,n,value\n"), 1u);
    EXPECT_EQ(parse_error_line(""), 1u);
    EXPECT_EQ(parse_error_line("amplitude,n,value,sigma\n1,2,0.5,\n1,1,0.5,\n"), 3u);
    EXPECT_EQ(parse_error_line("amplitude,n,value,sigma\n1,1,0.5,0.1\n\n1,2,0.5,\n"), 4u);
    try {
        std::istringstream in("amplitude,n,value,sigma\n1,1,x,\n");
        read_series_csv(in);
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(SeriesCsv, AcceptsCrlf) {
    std::istringstream in("amplitude,n,value,sigma\r\n1,1,0.5,\r\n1,2,0.25,\r\n");
    const auto s = read_series_csv(in);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].values, (std::vector<double>{0.5, 0.25}));
}

TEST(KTuplingCsv, RoundTrip) {
    ktupling::KTuplingPoint a{1, 2, 0.504223639, 7.5, 3e-12, 0, std::numeric_limits<double>::quiet_NaN()};
    ktupling::KTuplingPoint b{2, 5, 0.4, 1.0, -1e-11, 0, 0.999999999};
    std::istringstream in(ktupling_csv({a, b}));
    const auto out = read_ktupling_csv(in);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].amplitude, a.amplitude);
    EXPECT_EQ(out[0].residual, a.residual);
    EXPECT_TRUE(std::isnan(out[0].certificate_fidelity));
    EXPECT_EQ(out[1].j, 2);
    EXPECT_EQ(out[1].k, 5);
    EXPECT_EQ(out[1].certificate_fidelity, b.certificate_fidelity);
}

TEST(Metadata, RoundTrip) {
    const Metadata m{{"seed", "7"}, {"fixture", "paper-sim"}, {"note", "a = b"}};
    EXPECT_EQ(parse_metadata(metadata_text(m)), m);
    EXPECT_THROW(parse_metadata("ok = 1\nbroken\n"), ParseError);
}

TEST(Ppm, HeaderAndPixels) {
    const auto img = ppm(small_grid());
    const std::string header = "P6\n3 2\n255\n";
    ASSERT_EQ(img.size(), header.size() + 3 * 2 * 3);
    EXPECT_EQ(img.substr(0, header.size()), header);
    auto px = [&](int row, int col) { return static_cast<unsigned char>(img[header.size() + 3 * (row * 3 + col)]); };
    // First image row is y = 20.
    EXPECT_EQ(px(0, 0), 63);
    EXPECT_EQ(px(0, 1), 191);
    EXPECT_EQ(px(0, 2), 255);
    EXPECT_EQ(px(1, 0), 0);
    EXPECT_EQ(px(1, 1), 127);
    EXPECT_EQ(px(1, 2), 255);
    for (int i = 0; i < 6; ++i) {
        const std::size_t o = header.size() + 3 * i;
        EXPECT_EQ(img[o], img[o + 1]);
        EXPECT_EQ(img[o], img[o + 2]);
    }
}

TEST(Ppm, ConstantGridIsBlackAndDeterministic) {
    auto g = small_grid();
    g.vmin = g.vmax = 0.5;
    const auto img = ppm(g);
    for (std::size_t i = std::string("P6\n3 2\n255\n").size(); i < img.size(); ++i) EXPECT_EQ(img[i], '\0');
    EXPECT_EQ(ppm(small_grid()), ppm(small_grid()));
}

TEST(GridCsv, LongFormat) {
    const auto csv = grid_csv(small_grid());
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y,value");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
    EXPECT_NE(csv.find("\n2,20,1\n"), std::string::npos);
}

TEST(Trajectory, CsvAndRaster) {
    std::vector<floquet::TrajectoryPoint> traj;
    for (int i = 0; i <= 8; ++i) {
        const double th = std::numbers::pi * i / 8.0;
        linalg::StateVector s(2);
        s << std::cos(th / 2), std::sin(th / 2);
        traj.push_back({i / 8.0, s});
    }
    const auto csv = trajectory_csv(traj);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,y,z");
    EXPECT_NE(csv.find("\n0,0,0,1\n"), std::string::npos);
    const auto g = trajectory_grid(traj, 32);
    EXPECT_EQ(g.x.size(), 32u);
    double lit = 0.0;
    for (double c : g.cells) lit += c;
    EXPECT_GE(lit, 32.0);  // half circle from the north to the south pole
    EXPECT_EQ(g.at(31, 16), 1.0);
    EXPECT_EQ(g.at(0, 16), 1.0);
}
