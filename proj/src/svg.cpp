#include "tendeval/svg.hpp"

#include "tendeval/error.hpp"
#include "tendeval/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace tendeval {

namespace {

std::string fmt(double v, int precision = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    std::string s = buf;
    if (s == "-0.00" || s == "-0.0000")
        s.erase(0, 1);
    return s;
}

std::string escape(const std::string& text)
{
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

struct Rgb {
    double r, g, b;
};

// Light to dark blue; darker means stronger agreement.
constexpr Rgb kLow{247, 251, 255};
constexpr Rgb kHigh{8, 48, 107};
constexpr const char* kInvalid = "#bfbfbf";

constexpr const char* kClusterPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                           "#bcbd22", "#17becf"};

std::string svg_open(int width, int height)
{
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
    return s.str();
}

} // namespace

std::string sequential_color(double v)
{
    v = std::clamp(v, 0.0, 1.0);
    auto channel = [&](double lo, double hi) {
        return static_cast<int>(std::lround(lo + (hi - lo) * v));
    };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(kLow.r, kHigh.r),
                  channel(kLow.g, kHigh.g), channel(kLow.b, kHigh.b));
    return buf;
}

std::string heatmap_svg(const MaskedMatrix& m, const std::vector<std::string>& labels,
                        const std::string& title)
{
    const int n = static_cast<int>(m.size());
    if (labels.size() != m.size())
        throw InputError("heatmap: " + std::to_string(labels.size()) + " labels for a " +
                         std::to_string(n) + "x" + std::to_string(n) + " matrix");
    const int cell = 28;
    const int left = 90, top = 90;
    const int grid = n * cell;
    const int bar_x = left + grid + 30, bar_w = 16, bar_steps = 20;
    const int width = bar_x + bar_w + 60;
    const int height = top + grid + 30;

    std::ostringstream s;
    s << svg_open(width, height);
    s << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(title) << "</text>\n";

    for (int i = 0; i < n; ++i) {
        const int y = top + i * cell + cell / 2 + 4;
        s << "<text x=\"" << left - 6 << "\" y=\"" << y
          << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
          << escape(labels[static_cast<std::size_t>(i)]) << "</text>\n";
        const int x = left + i * cell + cell / 2 + 4;
        s << "<text x=\"" << x << "\" y=\"" << top - 6
          << "\" font-family=\"sans-serif\" font-size=\"10\" transform=\"rotate(-90 " << x
          << ' ' << top - 6 << ")\">" << escape(labels[static_cast<std::size_t>(i)])
          << "</text>\n";
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto iu = static_cast<std::size_t>(i), ju = static_cast<std::size_t>(j);
            const int x = left + j * cell, y = top + i * cell;
            s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
              << cell << "\" stroke=\"#ffffff\" stroke-width=\"1\" fill=\"";
            if (!m.valid(iu, ju)) {
                s << kInvalid << "\"><title>" << escape(labels[iu]) << " / " << escape(labels[ju])
                  << ": n/a</title></rect>\n";
                continue;
            }
            const double v = m.value(iu, ju);
            s << sequential_color(v) << "\"><title>" << escape(labels[iu]) << " / "
              << escape(labels[ju]) << ": " << fmt(v, 4) << "</title></rect>\n";
            if (v < 0.0) {
                s << "<line x1=\"" << x << "\" y1=\"" << y + cell << "\" x2=\"" << x + cell
                  << "\" y2=\"" << y << "\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
                s << "<line x1=\"" << x << "\" y1=\"" << y + cell / 2 << "\" x2=\""
                  << x + cell / 2 << "\" y2=\"" << y << "\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
                s << "<line x1=\"" << x + cell / 2 << "\" y1=\"" << y + cell << "\" x2=\""
                  << x + cell << "\" y2=\"" << y + cell / 2
                  << "\" stroke=\"#d62728\" stroke-width=\"1\"/>\n";
            }
        }

    // Colour bar, 1 at the top.
    const double step_h = static_cast<double>(grid) / bar_steps;
    for (int k = 0; k < bar_steps; ++k) {
        const double v = 1.0 - (k + 0.5) / bar_steps;
        s << "<rect x=\"" << bar_x << "\" y=\"" << fmt(top + k * step_h) << "\" width=\""
          << bar_w << "\" height=\"" << fmt(step_h) << "\" fill=\"" << sequential_color(v)
          << "\"/>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double v = 1.0 - k * 0.25;
        const double y = top + k * grid / 4.0;
        s << "<line x1=\"" << bar_x + bar_w << "\" y1=\"" << fmt(y) << "\" x2=\""
          << bar_x + bar_w + 4 << "\" y2=\"" << fmt(y) << "\" stroke=\"#000000\"/>\n";
        s << "<text x=\"" << bar_x + bar_w + 7 << "\" y=\"" << fmt(y + 3)
          << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(v) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string scatter_svg(const Embedding2D& e, const AgreementClusters& clusters,
                        const std::string& title)
{
    const std::size_t n = e.coords.size();
    if (clusters.assignment.size() != n || e.annotators.size() != n)
        throw InputError("scatter: cluster assignment covers " +
                         std::to_string(clusters.assignment.size()) + " annotators, embedding has " +
                         std::to_string(n));
    const int plot = 480, margin = 60, legend = 120;
    const int width = margin * 2 + plot + legend, height = margin * 2 + plot;

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = e.coords[i];
        min_x = i == 0 ? p[0] : std::min(min_x, p[0]);
        max_x = i == 0 ? p[0] : std::max(max_x, p[0]);
        min_y = i == 0 ? p[1] : std::min(min_y, p[1]);
        max_y = i == 0 ? p[1] : std::max(max_y, p[1]);
    }
    // Same scale on both axes.
    double span = std::max(max_x - min_x, max_y - min_y);
    if (!(span > 0.0))
        span = 1.0;
    span *= 1.1;
    const double cx = (min_x + max_x) / 2.0, cy = (min_y + max_y) / 2.0;
    auto px = [&](double x) { return margin + plot / 2.0 + (x - cx) / span * plot; };
    auto py = [&](double y) { return margin + plot / 2.0 - (y - cy) / span * plot; };

    std::ostringstream s;
    s << svg_open(width, height);
    s << "<text x=\"" << margin << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(title) << "</text>\n";
    s << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << plot << "\" height=\""
      << plot << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    if (0.0 >= cx - span / 2 && 0.0 <= cx + span / 2)
        s << "<line x1=\"" << fmt(px(0.0)) << "\" y1=\"" << margin << "\" x2=\"" << fmt(px(0.0))
          << "\" y2=\"" << margin + plot << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    if (0.0 >= cy - span / 2 && 0.0 <= cy + span / 2)
        s << "<line x1=\"" << margin << "\" y1=\"" << fmt(py(0.0)) << "\" x2=\"" << margin + plot
          << "\" y2=\"" << fmt(py(0.0)) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";

    const double coincide = 1e-9 * span;
    for (std::size_t i = 0; i < n; ++i) {
        double x = px(e.coords[i][0]), y = py(e.coords[i][1]);
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(e.coords[i][0] - e.coords[j][0]) <= coincide &&
                std::abs(e.coords[i][1] - e.coords[j][1]) <= coincide) {
                const auto h = fnv1a64(e.annotators[i]);
                const double angle = static_cast<double>(h % 360) * std::numbers::pi / 180.0;
                const double radius = 6.0 + static_cast<double>((h >> 16) % 5);
                x += radius * std::cos(angle);
                y += radius * std::sin(angle);
                break;
            }
        const int cluster = clusters.assignment[i];
        const char* colour = kClusterPalette[static_cast<std::size_t>(cluster) % 10];
        s << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"5\" fill=\"" << colour
          << "\" stroke=\"#000000\" stroke-width=\"0.5\"><title>" << escape(e.annotators[i])
          << " (" << fmt(e.coords[i][0], 4) << ", " << fmt(e.coords[i][1], 4)
          << ")</title></circle>\n";
        s << "<text x=\"" << fmt(x + 7) << "\" y=\"" << fmt(y - 5)
          << "\" font-family=\"sans-serif\" font-size=\"10\">" << escape(e.annotators[i])
          << "</text>\n";
    }

    const int lx = margin * 2 + plot - 30;
    s << "<text x=\"" << lx << "\" y=\"" << margin << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">clusters (&gt; " << fmt(clusters.threshold) << ")</text>\n";
    for (int c = 0; c < clusters.cluster_count; ++c) {
        const int y = margin + 18 + c * 16;
        s << "<circle cx=\"" << lx + 5 << "\" cy=\"" << y - 4 << "\" r=\"5\" fill=\""
          << kClusterPalette[static_cast<std::size_t>(c) % 10] << "\"/>\n";
        s << "<text x=\"" << lx + 14 << "\" y=\"" << y
          << "\" font-family=\"sans-serif\" font-size=\"10\">cluster " << c << "</text>\n";
    }
    s << "<text x=\"" << margin << "\" y=\"" << height - 20
      << "\" font-family=\"sans-serif\" font-size=\"10\">stress " << fmt(e.stress, 4)
      << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

} // namespace tendeval
