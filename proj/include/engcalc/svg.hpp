#pragma once

// Minimal SVG 1.1 line charts: one panel per channel group, polylines with
// axes, min/max tick labels and a legend. Output depends only on the data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "engcalc/error.hpp"
#include "engcalc/signal.hpp"

namespace engcalc::svg {

struct Panel {
    std::string title;
    std::vector<std::size_t> channels;
};

namespace detail {

inline constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
inline constexpr double kWidth = 640.0;
inline constexpr double kPanelHeight = 240.0;
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 120.0;
inline constexpr double kTop = 30.0;
inline constexpr double kBottom = 30.0;

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

inline std::string coord(double v) { return fmt::format("{:.2f}", v); }

} // namespace detail

inline void write_svg(std::ostream& os, const SampledSignal& sig, const std::vector<Panel>& panels) {
    using namespace detail;
    if (sig.size() < 2) throw DomainError("svg: need at least two samples");
    for (const Panel& p : panels)
        for (std::size_t c : p.channels) sig.check_channel(c);

    const double height = kPanelHeight * static_cast<double>(panels.size());
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kPanelHeight - kTop - kBottom;
    const double t0 = sig.times().front();
    const double t1 = sig.times().back();

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\">\n",
                      coord(kWidth), coord(height));
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const Panel& panel = panels[pi];
        const double y_off = kPanelHeight * static_cast<double>(pi) + kTop;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t c : panel.channels) {
            for (std::size_t k = 0; k < sig.size(); ++k) {
                lo = std::min(lo, sig.value(k, c));
                hi = std::max(hi, sig.value(k, c));
            }
        }
        if (!(hi > lo)) {
            const double pad = std::max(1.0, std::abs(lo)) * 0.5;
            lo -= pad;
            hi += pad;
        }
        const auto px = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * plot_w; };
        const auto py = [&](double y) { return y_off + (hi - y) / (hi - lo) * plot_h; };

        os << fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
                          coord(kLeft), coord(y_off - 10.0), escape(panel.title));
        os << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                          coord(kLeft), coord(y_off), coord(plot_w), coord(plot_h));
        if (lo < 0.0 && hi > 0.0) {
            os << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\" "
                              "stroke-dasharray=\"4,3\"/>\n",
                              coord(kLeft), coord(py(0.0)), coord(kLeft + plot_w), coord(py(0.0)));
        }
        const auto label = [&](double x, double y, const std::string& anchor, const std::string& text) {
            os << fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                              "text-anchor=\"{}\">{}</text>\n",
                              coord(x), coord(y), anchor, escape(text));
        };
        label(kLeft - 6.0, y_off + 4.0, "end", fmt::format("{:.4g}", hi));
        label(kLeft - 6.0, y_off + plot_h, "end", fmt::format("{:.4g}", lo));
        label(kLeft, y_off + plot_h + 16.0, "middle", fmt::format("{:.4g}", t0));
        label(kLeft + plot_w, y_off + plot_h + 16.0, "middle", fmt::format("{:.4g}", t1));

        for (std::size_t ci = 0; ci < panel.channels.size(); ++ci) {
            const std::size_t c = panel.channels[ci];
            const char* color = kColors[ci % std::size(kColors)];
            os << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
            for (std::size_t k = 0; k < sig.size(); ++k) {
                if (k) os << ' ';
                os << coord(px(sig.time(k))) << ',' << coord(py(sig.value(k, c)));
            }
            os << "\"/>\n";
            const double ly = y_off + 12.0 + 16.0 * static_cast<double>(ci);
            os << fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                              coord(kLeft + plot_w + 10.0), coord(ly - 4.0), coord(kLeft + plot_w + 30.0),
                              coord(ly - 4.0), color);
            label(kLeft + plot_w + 36.0, ly, "start", sig.names()[c]);
        }
    }
    os << "</svg>\n";
}

inline void write_svg(const std::string& path, const SampledSignal& sig, const std::vector<Panel>& panels) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    write_svg(out, sig, panels);
}

} // namespace engcalc::svg
