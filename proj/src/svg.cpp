#include "lcpoly/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lcpoly/error.hpp"

namespace lcpoly {
namespace {

constexpr double kLeft = 80.0;
constexpr double kRight = 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr double kPlotW = kSvgWidth - kLeft - kRight;
constexpr double kPlotH = kSvgHeight - kTop - kBottom;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string num(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string header(const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kSvgWidth) + "\" height=\"" +
                    std::to_string(kSvgHeight) + "\" viewBox=\"0 0 " + std::to_string(kSvgWidth) + " " +
                    std::to_string(kSvgHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kSvgWidth) + "\" height=\"" + std::to_string(kSvgHeight) +
         "\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(kSvgWidth / 2.0) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" + escape(title) +
         "</text>\n";
    s += "<rect class=\"frame\" x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kPlotW) +
         "\" height=\"" + num(kPlotH) + "\" fill=\"none\" stroke=\"black\"/>\n";
    return s;
}

std::string axis_labels(const std::string& x_label, const std::string& y_label) {
    std::string s = "<text x=\"" + num(kLeft + kPlotW / 2) + "\" y=\"" + num(kSvgHeight - 15.0) +
                    "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
    if (!y_label.empty()) {
        s += "<text x=\"20\" y=\"" + num(kTop + kPlotH / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
             num(kTop + kPlotH / 2) + ")\">" + escape(y_label) + "</text>\n";
    }
    return s;
}

std::string legend_entry(std::size_t k, const std::string& label) {
    const double y = kTop + 15.0 + 20.0 * static_cast<double>(k);
    const double x = kLeft + kPlotW + 15.0;
    const char* colour = kPalette[k % std::size(kPalette)];
    return "<rect x=\"" + num(x) + "\" y=\"" + num(y - 9.0) + "\" width=\"12\" height=\"12\" fill=\"" + colour +
           "\"/>\n<text x=\"" + num(x + 18.0) + "\" y=\"" + num(y + 1.0) + "\">" + escape(label) + "</text>\n";
}

struct LogRange {
    int lo;
    int hi;
};

LogRange decades(double min_v, double max_v) {
    int lo = static_cast<int>(std::floor(std::log10(min_v)));
    int hi = static_cast<int>(std::ceil(std::log10(max_v)));
    if (hi <= lo) {
        hi = lo + 1;
    }
    return {lo, hi};
}

}  // namespace

std::string svg_loglog(std::span<const SvgSeries> series, const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = 0.0;
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = 0.0;
    std::size_t plottable = 0;
    for (const SvgSeries& s : series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("svg series: x and y differ in length");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
                ++plottable;
            }
        }
    }
    if (plottable == 0) {
        throw std::invalid_argument("svg: empty series");
    }
    const LogRange xr = decades(x_min, x_max);
    const LogRange yr = decades(y_min, y_max);
    const auto px = [&](double x) { return kLeft + (std::log10(x) - xr.lo) / (xr.hi - xr.lo) * kPlotW; };
    const auto py = [&](double y) { return kTop + kPlotH - (std::log10(y) - yr.lo) / (yr.hi - yr.lo) * kPlotH; };

    std::string out = header(title);
    out += "<g class=\"axes\" data-scale=\"log-log\" stroke=\"#cccccc\">\n";
    for (int k = xr.lo; k <= xr.hi; ++k) {
        const double x = px(std::pow(10.0, k));
        out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x) + "\" y2=\"" + num(kTop + kPlotH) +
               "\"/>\n";
    }
    for (int k = yr.lo; k <= yr.hi; ++k) {
        const double y = py(std::pow(10.0, k));
        out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + kPlotW) + "\" y2=\"" +
               num(y) + "\"/>\n";
    }
    out += "</g>\n";
    for (int k = xr.lo; k <= xr.hi; ++k) {
        out += "<text x=\"" + num(px(std::pow(10.0, k))) + "\" y=\"" + num(kTop + kPlotH + 18.0) +
               "\" text-anchor=\"middle\">1e" + std::to_string(k) + "</text>\n";
    }
    for (int k = yr.lo; k <= yr.hi; ++k) {
        out += "<text x=\"" + num(kLeft - 8.0) + "\" y=\"" + num(py(std::pow(10.0, k)) + 4.0) +
               "\" text-anchor=\"end\">1e" + std::to_string(k) + "</text>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const SvgSeries& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        out += "<g class=\"series\" fill=\"" + std::string(colour) + "\">\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"4\"/>\n";
            }
        }
        out += "</g>\n";
        out += legend_entry(k, s.label);
    }
    out += axis_labels(x_label, y_label);
    out += "</svg>\n";
    return out;
}

std::string svg_histograms(std::span<const SvgSample> samples, std::size_t bins, const std::string& title,
                           const std::string& x_label) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const SvgSample& s : samples) {
        for (double v : s.values) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (bins == 0 || !(hi >= lo)) {
        throw std::invalid_argument("svg: empty histogram input");
    }
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::vector<double>> probs;
    double p_max = 0.0;
    for (const SvgSample& s : samples) {
        std::vector<double> counts(bins, 0.0);
        double total = 0.0;
        for (double v : s.values) {
            if (std::isfinite(v)) {
                const auto b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
                counts[b] += 1.0;
                total += 1.0;
            }
        }
        for (double& c : counts) {
            c = total > 0.0 ? c / total : 0.0;
            p_max = std::max(p_max, c);
        }
        probs.push_back(std::move(counts));
    }
    const auto px = [&](double x) { return kLeft + (x - lo) / (hi - lo) * kPlotW; };
    const auto py = [&](double p) { return kTop + kPlotH - p / p_max * kPlotH; };

    std::string out = header(title);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const char* colour = kPalette[k % std::size(kPalette)];
        std::string path = "M" + num(px(lo)) + " " + num(py(0.0));
        for (std::size_t b = 0; b < bins; ++b) {
            const double y = py(probs[k][b]);
            path += " L" + num(px(lo + b * width)) + " " + num(y) + " L" + num(px(lo + (b + 1) * width)) + " " + num(y);
        }
        path += " L" + num(px(hi)) + " " + num(py(0.0));
        out += "<path class=\"histogram\" d=\"" + path + "\" fill=\"none\" stroke=\"" + colour +
               "\" stroke-width=\"1.5\"/>\n";
        out += legend_entry(k, samples[k].label);
    }
    for (int t = 0; t <= 4; ++t) {
        const double x = lo + (hi - lo) * t / 4.0;
        out += "<text x=\"" + num(px(x)) + "\" y=\"" + num(kTop + kPlotH + 18.0) + "\" text-anchor=\"middle\">" +
               fmt("%.4g", x) + "</text>\n";
    }
    out += "<text x=\"" + num(kLeft - 8.0) + "\" y=\"" + num(kTop + 4.0) + "\" text-anchor=\"end\">" +
           fmt("%.3g", p_max) + "</text>\n";
    out += axis_labels(x_label, "probability per bin");
    out += "</svg>\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file << content;
    file.flush();
    if (!file) {
        throw IoError("failed writing '" + path + "'");
    }
}

}  // namespace lcpoly
