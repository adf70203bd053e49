#ifndef VACRAD_IO_HPP
#define VACRAD_IO_HPP

// Flat-file I/O: CSV tables at 17 significant digits, two-column sample
// files, JSON sidecars, and simple SVG line charts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vacrad/errors.hpp"
#include "vacrad/jost.hpp"
#include "vacrad/profiles.hpp"

namespace vacrad::io {

using json = nlohmann::json;

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("file", "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void ensure_parent(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

/// Comma-separated table with a header row; cells are numbers or text.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    class Row {
    public:
        Row& operator<<(double v) {
            cells_.push_back(format_number(v));
            return *this;
        }
        Row& operator<<(const std::string& s) {
            cells_.push_back(s);
            return *this;
        }
        Row& operator<<(const char* s) { return *this << std::string(s); }

    private:
        friend class CsvTable;
        std::vector<std::string> cells_;
    };

    void add(const Row& r) {
        if (r.cells_.size() != header_.size()) throw Error("CSV row width does not match the header");
        rows_.push_back(r.cells_);
    }

    std::size_t size() const { return rows_.size(); }

    std::string str() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return out;
    }

    void write(const std::filesystem::path& p) const {
        ensure_parent(p);
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error("cannot write " + p.string());
        f << str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// A finite number filling the whole cell. Subnormal values are kept.
inline std::optional<double> parse_cell(const std::string& cell) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || !std::isfinite(v)) return std::nullopt;
    while (*end == ' ' || *end == '\t') ++end;
    if (*end != '\0') return std::nullopt;
    return v;
}

/// Two-column (t, value) samples; a non-numeric first line is a header.
inline std::vector<Sample> parse_samples(const std::string& text, const std::string& origin = "samples") {
    std::vector<Sample> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (lineno == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError(origin, "line " + std::to_string(lineno) + " has no comma");
        const auto t = parse_cell(line.substr(0, comma));
        const auto v = parse_cell(line.substr(comma + 1));
        if (!t || !v) {
            if (out.empty() && lineno == 1) continue; // header
            throw ConfigError(origin, "line " + std::to_string(lineno) + " is not numeric");
        }
        out.push_back({*t, *v});
    }
    if (out.size() < 2) throw ConfigError(origin, "need at least two samples");
    return out;
}

inline std::vector<Sample> load_samples(const std::filesystem::path& p) {
    return parse_samples(read_file(p), p.string());
}

inline json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

/// t, Re xi, Im xi, Re xi', Im xi' at every grid node.
inline CsvTable jost_table(const JostSolution& sol, const std::string& config_hash) {
    CsvTable tab({"t", "re_xi", "im_xi", "re_xi_dot", "im_xi_dot", "config_hash"});
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        CsvTable::Row r;
        r << sol.grid.at(i) << sol.xi[i].real() << sol.xi[i].imag() << sol.xi_dot[i].real() << sol.xi_dot[i].imag()
          << config_hash;
        tab.add(r);
    }
    return tab;
}

inline json jost_sidecar(const JostSolution& sol) {
    return json{{"A", complex_json(sol.A)},
                {"B", complex_json(sol.B)},
                {"flux_defect", scattering_flux_defect(sol)},
                {"wronskian_drift", sol.wronskian_drift},
                {"grid", {{"t_min", sol.grid.t_min}, {"t_max", sol.grid.t_max}, {"n_steps", sol.grid.n_steps}}}};
}

inline void write_json(const std::filesystem::path& p, const json& j) {
    ensure_parent(p);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << j.dump(2) << '\n';
}

/// Polyline chart of y against x.
inline std::string svg_line_chart(const std::vector<double>& x, const std::vector<double>& y, const std::string& title,
                                  const std::string& xlabel, const std::string& ylabel) {
    const double W = 800, H = 450, L = 70, R = 20, Tm = 40, Bm = 50;
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (x.empty()) return s.str() + "</svg>\n";
    const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    const double x0 = *xlo, x1 = *xhi > *xlo ? *xhi : *xlo + 1.0;
    const double y0 = std::min(0.0, *ylo), y1 = *yhi > y0 ? *yhi * 1.05 : y0 + 1.0;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - Bm - (v - y0) / (y1 - y0) * (H - Tm - Bm); };
    s << "<line x1=\"" << L << "\" y1=\"" << H - Bm << "\" x2=\"" << W - R << "\" y2=\"" << H - Bm
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << Tm << "\" x2=\"" << L << "\" y2=\"" << H - Bm << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        s << "<text x=\"" << px(xv) << "\" y=\"" << H - Bm + 18 << "\" font-size=\"12\" text-anchor=\"middle\">"
          << format_number(std::round(xv * 1000.0) / 1000.0) << "</text>\n";
        s << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" font-size=\"12\" text-anchor=\"end\">"
          << format_number(std::round(yv * 1000.0) / 1000.0) << "</text>\n";
    }
    s << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) s << px(x[i]) << ',' << py(y[i]) << ' ';
    s << "\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" << title << "</text>\n"
      << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel
      << "</text>\n"
      << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << H / 2 << ")\">" << ylabel << "</text>\n"
      << "</svg>\n";
    return s.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    ensure_parent(p);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << text;
}

} // namespace vacrad::io

#endif // VACRAD_IO_HPP
