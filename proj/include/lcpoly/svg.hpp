#pragma once

#include <span>
#include <string>
#include <vector>

namespace lcpoly {

inline constexpr int kSvgWidth = 800;
inline constexpr int kSvgHeight = 500;

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Log-log scatter with one circle marker per point with x, y > 0, decade
/// ticks and a legend. Throws std::invalid_argument when nothing is plottable.
[[nodiscard]] std::string svg_loglog(std::span<const SvgSeries> series, const std::string& title,
                                     const std::string& x_label, const std::string& y_label);

struct SvgSample {
    std::string label;
    std::vector<double> values;
};

/// Overlaid outline histograms (probability per bin) on shared equal-width
/// bins over the pooled range. Throws std::invalid_argument on empty input.
[[nodiscard]] std::string svg_histograms(std::span<const SvgSample> samples, std::size_t bins,
                                         const std::string& title, const std::string& x_label);

/// Writes `content` to `path`; throws IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace lcpoly
