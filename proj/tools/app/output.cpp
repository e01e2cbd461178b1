#include "output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace tzone::app {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc{}) throw std::runtime_error("to_chars failed");
    return {buf.data(), res.ptr};
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::cell(std::size_t v) { return cell(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::cell(std::string_view s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

namespace {

// Perceptually ordered blue -> yellow ramp (viridis anchors).
std::string color(double u) {
    static constexpr std::array<std::array<double, 3>, 5> anchors{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
    }};
    u = std::clamp(u, 0.0, 1.0) * (anchors.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), anchors.size() - 2);
    const double w = u - static_cast<double>(i);
    std::ostringstream s;
    s << "rgb(";
    for (int k = 0; k < 3; ++k) {
        s << (k ? "," : "")
          << static_cast<int>(std::lround(anchors[i][k] + w * (anchors[i + 1][k] - anchors[i][k])));
    }
    s << ")";
    return s.str();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

}  // namespace

void write_heatmap_svg(std::ostream& out, const Surface& surface, const HeatmapOptions& o) {
    const Grid1D& g = surface.grid();
    const std::size_t nt = std::min<std::size_t>(surface.rows(), o.max_cells);
    const std::size_t nz = std::min<std::size_t>(surface.cols(), o.max_cells);
    auto row_of = [&](std::size_t i) { return i * (surface.rows() - 1) / std::max<std::size_t>(nt - 1, 1); };
    auto col_of = [&](std::size_t j) { return j * (surface.cols() - 1) / std::max<std::size_t>(nz - 1, 1); };

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : surface.values()) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo <= hi)) lo = hi = 0.0;
    const double span = hi > lo ? hi - lo : 1.0;

    const double left = 70, top = 40, bar = 60;
    const double plot_w = o.width - left - bar - 20;
    const double plot_h = o.height - top - 60;
    const double cw = plot_w / static_cast<double>(nz);
    const double ch = plot_h / static_cast<double>(nt);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << o.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << o.title
        << "</text>\n";

    // cells; time increases upward
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < nz; ++j) {
            const double v = surface.at(row_of(i), col_of(j));
            out << "<rect x=\"" << fmt(left + j * cw, 6) << "\" y=\"" << fmt(top + plot_h - (i + 1) * ch, 6)
                << "\" width=\"" << fmt(cw + 0.3, 4) << "\" height=\"" << fmt(ch + 0.3, 4) << "\" fill=\""
                << (std::isfinite(v) ? color((v - lo) / span) : std::string("rgb(200,200,200)")) << "\"/>\n";
        }
    }

    // contours by marching squares on the subsampled lattice
    auto px = [&](double j) { return left + (j + 0.5) * cw; };
    auto py = [&](double i) { return top + plot_h - (i + 0.5) * ch; };
    for (int level_index = 1; level_index <= o.contours; ++level_index) {
        const double level = lo + span * level_index / (o.contours + 1);
        out << "<path fill=\"none\" stroke=\"white\" stroke-width=\"0.8\" stroke-opacity=\"0.8\" d=\"";
        for (std::size_t i = 0; i + 1 < nt; ++i) {
            for (std::size_t j = 0; j + 1 < nz; ++j) {
                const double v[4] = {surface.at(row_of(i), col_of(j)), surface.at(row_of(i), col_of(j + 1)),
                                     surface.at(row_of(i + 1), col_of(j + 1)),
                                     surface.at(row_of(i + 1), col_of(j))};
                if (!std::all_of(v, v + 4, [](double x) { return std::isfinite(x); })) continue;
                const double ci[4] = {0, 0, 1, 1};
                const double cj[4] = {0, 1, 1, 0};
                std::vector<std::pair<double, double>> hits;
                for (int e = 0; e < 4; ++e) {
                    const int f = (e + 1) % 4;
                    if ((v[e] < level) != (v[f] < level)) {
                        const double w = (level - v[e]) / (v[f] - v[e]);
                        hits.emplace_back(i + ci[e] + w * (ci[f] - ci[e]), j + cj[e] + w * (cj[f] - cj[e]));
                    }
                }
                for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
                    out << "M" << fmt(px(hits[h].second), 6) << " " << fmt(py(hits[h].first), 6) << "L"
                        << fmt(px(hits[h + 1].second), 6) << " " << fmt(py(hits[h + 1].first), 6);
                }
            }
        }
        out << "\"/>\n";
    }

    // axes
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << fmt(plot_w) << "\" height=\""
        << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double f = tick / 4.0;
        const double zv = g.z_min + f * (g.z_max - g.z_min);
        const double tv = g.t0 + f * (g.t_max - g.t0);
        out << "<text x=\"" << fmt(left + f * plot_w) << "\" y=\"" << fmt(top + plot_h + 16)
            << "\" text-anchor=\"middle\">" << fmt(zv, 3) << "</text>\n";
        out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(top + plot_h - f * plot_h + 4)
            << "\" text-anchor=\"end\">" << fmt(tv, 3) << "</text>\n";
    }
    out << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(top + plot_h + 36)
        << "\" text-anchor=\"middle\">" << o.x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt(top + plot_h / 2) << ")\">" << o.y_label << "</text>\n";

    // color bar
    const double bx = left + plot_w + 15;
    for (int k = 0; k < 50; ++k) {
        out << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(top + plot_h - (k + 1) * plot_h / 50) << "\" width=\"14\" height=\""
            << fmt(plot_h / 50 + 0.3) << "\" fill=\"" << color(k / 49.0) << "\"/>\n";
    }
    out << "<text x=\"" << fmt(bx + 18) << "\" y=\"" << fmt(top + 4) << "\">" << fmt(hi, 3) << "</text>\n";
    out << "<text x=\"" << fmt(bx + 18) << "\" y=\"" << fmt(top + plot_h) << "\">" << fmt(lo, 3) << "</text>\n";
    out << "<text x=\"" << fmt(bx) << "\" y=\"" << fmt(top - 6) << "\">" << o.value_label << "</text>\n";
    out << "</svg>\n";
}

std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    const auto path = dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path.string());
    return path;
}

}  // namespace tzone::app
