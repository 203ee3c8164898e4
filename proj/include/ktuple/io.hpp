// io.hpp: CSV tables, metadata sidecars and binary PPM rasters
//
// Numbers are written with 17 significant digits so that every writer/reader
// pair round-trips bit-exactly. CSV: comma separated, mandatory header, LF.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ktuple/errors.hpp"
#include "ktuple/floquet.hpp"
#include "ktuple/heatmap.hpp"
#include "ktuple/ktupling.hpp"
#include "ktuple/signal.hpp"

namespace ktuple::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// ------------------------------------------------------------------ numbers

inline std::string fmt(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline std::string fmt(long x) { return std::to_string(x); }

inline double parse_double(std::string_view s, std::size_t line_no) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ParseError("not a number: '" + std::string(s) + "'", line_no);
    return v;
}

inline long parse_long(std::string_view s, std::size_t line_no) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ParseError("not an integer: '" + std::string(s) + "'", line_no);
    return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// Reads all lines; checks the header and the column count of every row.
inline std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view header) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty file, expected header '" + std::string(header) + "'", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw ParseError("expected header '" + std::string(header) + "', got '" + line + "'", 1);
    const std::size_t ncol = split_csv(header).size();
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != ncol)
            throw ParseError("expected " + std::to_string(ncol) + " columns, got " + std::to_string(cols.size()), line_no);
        std::vector<std::string> row(cols.begin(), cols.end());
        row.push_back(std::to_string(line_no));  // trailing line number for error reporting
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::size_t row_line(const std::vector<std::string>& row) { return std::stoul(row.back()); }

// ------------------------------------------------------------------ files

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// ------------------------------------------------------------------ series

inline constexpr std::string_view kSeriesHeader = "amplitude,n,value,sigma";

inline std::string series_csv(const std::vector<signal::StroboscopicSeries>& series) {
    std::string s(kSeriesHeader);
    s += '\n';
    for (const auto& ser : series) {
        ser.validate();
        for (std::size_t i = 0; i < ser.size(); ++i) {
            s += fmt(ser.amplitude) + ',' + fmt(ser.times[i]) + ',' + fmt(ser.values[i]) + ',';
            if (ser.sigma) s += fmt((*ser.sigma)[i]);
            s += '\n';
        }
    }
    return s;
}

// Rows are grouped by amplitude in order of first appearance; an empty sigma
// column means no uncertainty for that series.
inline std::vector<signal::StroboscopicSeries> read_series_csv(std::istream& in) {
    const auto rows = read_table(in, kSeriesHeader);
    std::vector<signal::StroboscopicSeries> out;
    std::map<double, std::size_t> index;
    for (const auto& r : rows) {
        const std::size_t ln = row_line(r);
        const double a = parse_double(r[0], ln);
        const long n = parse_long(r[1], ln);
        const double v = parse_double(r[2], ln);
        const bool has_sigma = !r[3].empty();
        auto it = index.find(a);
        if (it == index.end()) {
            it = index.emplace(a, out.size()).first;
            out.emplace_back();
            out.back().amplitude = a;
            if (has_sigma) out.back().sigma.emplace();
        }
        auto& s = out[it->second];
        if (!s.times.empty() && n <= s.times.back())
            throw ParseError("n must increase within amplitude " + fmt(a), ln);
        if (has_sigma != s.sigma.has_value()) throw ParseError("sigma present on some rows of a series only", ln);
        s.times.push_back(n);
        s.values.push_back(v);
        if (has_sigma) s.sigma->push_back(parse_double(r[3], ln));
    }
    return out;
}

inline std::vector<signal::StroboscopicSeries> read_series_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return read_series_csv(f);
}

// ------------------------------------------------------------------ k-tupling points

inline constexpr std::string_view kKTuplingHeader = "j,k,nu_d_MHz,A_root,residual,certificate_fidelity";

inline std::string ktupling_csv(const std::vector<ktupling::KTuplingPoint>& pts) {
    std::string s(kKTuplingHeader);
    s += '\n';
    for (const auto& p : pts) {
        s += std::to_string(p.j) + ',' + std::to_string(p.k) + ',' + fmt(p.nu_d_mhz) + ',' + fmt(p.amplitude) + ',' +
             fmt(p.residual) + ',' + (std::isnan(p.certificate_fidelity) ? "" : fmt(p.certificate_fidelity)) + '\n';
    }
    return s;
}

inline std::vector<ktupling::KTuplingPoint> read_ktupling_csv(std::istream& in) {
    std::vector<ktupling::KTuplingPoint> out;
    for (const auto& r : read_table(in, kKTuplingHeader)) {
        const std::size_t ln = row_line(r);
        ktupling::KTuplingPoint p;
        p.j = static_cast<int>(parse_long(r[0], ln));
        p.k = static_cast<int>(parse_long(r[1], ln));
        p.nu_d_mhz = parse_double(r[2], ln);
        p.amplitude = parse_double(r[3], ln);
        p.residual = parse_double(r[4], ln);
        if (!r[5].empty()) p.certificate_fidelity = parse_double(r[5], ln);
        out.push_back(p);
    }
    return out;
}

// ------------------------------------------------------------------ metadata

inline std::string metadata_text(const Metadata& meta) {
    std::string s;
    for (const auto& [k, v] : meta) s += k + " = " + v + '\n';
    return s;
}

inline Metadata parse_metadata(const std::string& text) {
    Metadata out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return out;
}

// ------------------------------------------------------------------ grids

inline constexpr std::string_view kGridHeader = "x,y,value";

// Long format, row by row.
inline std::string grid_csv(const HeatmapGrid& g) {
    g.validate();
    std::string s(kGridHeader);
    s += '\n';
    for (std::size_t iy = 0; iy < g.y.size(); ++iy)
        for (std::size_t ix = 0; ix < g.x.size(); ++ix)
            s += fmt(g.x[ix]) + ',' + fmt(g.y[iy]) + ',' + fmt(g.at(iy, ix)) + '\n';
    return s;
}

// Binary P6, gray = floor(255 (v - vmin) / (vmax - vmin)), first image row is
// the largest y.
inline std::string ppm(const HeatmapGrid& g) {
    g.validate();
    const std::size_t w = g.x.size(), h = g.y.size();
    std::vector<std::size_t> rows(h);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) { return g.y[a] > g.y[b]; });

    std::string s = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    const double span = g.vmax - g.vmin;
    for (std::size_t r : rows) {
        for (std::size_t ix = 0; ix < w; ++ix) {
            int p = 0;
            if (span > 0.0) {
                const double t = std::clamp((g.at(r, ix) - g.vmin) / span, 0.0, 1.0);
                p = std::min(255, static_cast<int>(std::floor(255.0 * t)));
            }
            s.append(3, static_cast<char>(static_cast<unsigned char>(p)));
        }
    }
    return s;
}

// ------------------------------------------------------------------ trajectories

inline constexpr std::string_view kTrajectoryHeader = "t,x,y,z";

inline std::string trajectory_csv(const std::vector<floquet::TrajectoryPoint>& traj) {
    std::string s(kTrajectoryHeader);
    s += '\n';
    for (const auto& p : traj) {
        const auto b = linalg::bloch_vector(p.state);
        s += fmt(p.t) + ',' + fmt(b.x()) + ',' + fmt(b.y()) + ',' + fmt(b.z()) + '\n';
    }
    return s;
}

// Path rasterized onto the Bloch x-z plane (x right, z up), 1 on visited
// pixels. Consecutive samples are joined by straight segments.
inline HeatmapGrid trajectory_grid(const std::vector<floquet::TrajectoryPoint>& traj, int size = 256) {
    HeatmapGrid g;
    for (int i = 0; i < size; ++i) {
        const double c = -1.0 + 2.0 * (i + 0.5) / size;
        g.x.push_back(c);
        g.y.push_back(c);
    }
    g.cells.assign(static_cast<std::size_t>(size) * size, 0.0);
    auto pix = [&](double v) { return std::clamp(static_cast<int>(std::floor((v + 1.0) * 0.5 * size)), 0, size - 1); };
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto b = linalg::bloch_vector(traj[i].state);
        const auto a = i ? linalg::bloch_vector(traj[i - 1].state) : b;
        const int steps = 1 + 2 * static_cast<int>(std::ceil(std::hypot(b.x() - a.x(), b.z() - a.z()) * size));
        for (int s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            const double x = a.x() + t * (b.x() - a.x());
            const double z = a.z() + t * (b.z() - a.z());
            g.cells[static_cast<std::size_t>(pix(z)) * size + pix(x)] = 1.0;
        }
    }
    g.vmin = 0.0;
    g.vmax = 1.0;
    return g;
}

// ------------------------------------------------------------------ analysis tables

inline constexpr std::string_view kFitHeader = "k,l,amplitude,tau,tau_sigma,decay_time,converged,used";

inline std::string fits_csv(const signal::KTuplingAnalysis& an) {
    std::string s(kFitHeader);
    s += '\n';
    for (const auto& sub : an.subsequences)
        for (const auto& af : sub.fits)
            s += std::to_string(an.k) + ',' + std::to_string(sub.l) + ',' + fmt(af.amplitude) + ',' + fmt(af.fit.tau) +
                 ',' + fmt(af.fit.tau_sigma) + ',' + fmt(af.fit.decay_time) + ',' + (af.fit.converged ? "1" : "0") +
                 ',' + (af.used ? "1" : "0") + '\n';
    return s;
}

inline constexpr std::string_view kHyperbolaHeader =
    "k,l,A_P,sigma_A_P,C_minus,sigma_C_minus,C_plus,sigma_C_plus,rms_residual";

inline std::string hyperbola_csv(const std::vector<signal::KTuplingAnalysis>& all) {
    std::string s(kHyperbolaHeader);
    s += '\n';
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    for (const auto& an : all) {
        for (const auto& sub : an.subsequences) {
            const auto& h = sub.hyperbola;
            s += std::to_string(an.k) + ',' + std::to_string(sub.l) + ',' + fmt(h.a_p) + ',' + fmt(h.sigma_a_p) + ',' +
                 opt(h.c_minus) + ',' + (h.c_minus ? fmt(h.sigma_c_minus) : "") + ',' + opt(h.c_plus) + ',' +
                 (h.c_plus ? fmt(h.sigma_c_plus) : "") + ',' + fmt(h.rms_residual) + '\n';
        }
        s += std::to_string(an.k) + ",0," + fmt(an.a_pk) + ',' + fmt(an.sigma_a_pk) + ',' + fmt(an.c_k) + ',' +
             fmt(an.sigma_c_k) + ",,," + '\n';
    }
    return s;
}

}  // namespace ktuple::io
