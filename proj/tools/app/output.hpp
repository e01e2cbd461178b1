#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tzone/surface.hpp"

namespace tzone::app {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Minimal CSV writer: header once, then rows of doubles or strings.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::string_view s);
    CsvWriter& cell(std::size_t v);
    void end_row();

private:
    std::ostream& out_;
    bool first_ = true;
};

struct HeatmapOptions {
    std::string title;
    std::string x_label = "z";
    std::string y_label = "t";
    std::string value_label;
    int width = 640;
    int height = 480;
    int max_cells = 120;  ///< per axis; larger surfaces are subsampled
    int contours = 8;     ///< iso-lines drawn over the heatmap (0 = none)
};

/// Self-contained SVG heatmap of a surface (z across, t up) with
/// marching-squares contour lines and a color bar.
void write_heatmap_svg(std::ostream& out, const Surface& surface, const HeatmapOptions& options);

/// Writes `content` to dir/name, creating dir. Throws std::runtime_error on failure.
std::filesystem::path write_text_file(const std::filesystem::path& dir, const std::string& name,
                                      const std::string& content);

}  // namespace tzone::app
