#include "shadow/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "shadow/errors.hpp"

namespace shadow {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

double tick_step(const std::vector<double>& ticks) {
    return ticks.size() > 1 ? ticks[1] - ticks[0] : 1.0;
}

std::string tick_label(double value, double step) {
    const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    if (std::abs(value) < step * 1e-9) value = 0.0;
    return fmt::format("{:.{}f}", value, decimals);
}

struct Axis {
    double lo;
    double hi;
    std::vector<double> ticks;
};

Axis make_axis(double lo, double hi) {
    if (lo == hi) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        lo -= pad;
        hi += pad;
    }
    auto ticks = nice_ticks(lo, hi);
    return Axis{ticks.front(), ticks.back(), std::move(ticks)};
}

std::string_view class_of(Highlight h) {
    switch (h) {
        case Highlight::leader: return "leader";
        case Highlight::outsider: return "outsider";
        case Highlight::none: break;
    }
    return "point";
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target_count) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / std::max(1, target_count);
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double normalized = raw / magnitude;
    double step = 10.0 * magnitude;
    if (normalized <= 1.0) {
        step = magnitude;
    } else if (normalized <= 2.0) {
        step = 2.0 * magnitude;
    } else if (normalized <= 5.0) {
        step = 5.0 * magnitude;
    }
    const auto first = static_cast<long long>(std::floor(lo / step + 1e-9));
    const auto last = static_cast<long long>(std::ceil(hi / step - 1e-9));
    std::vector<double> ticks;
    for (long long i = first; i <= last; ++i) ticks.push_back(static_cast<double>(i) * step);
    if (ticks.size() < 2) ticks.push_back(ticks.back() + step);
    return ticks;
}

std::string render_scatter(const ScatterSpec& spec) {
    if (spec.points.empty()) throw DomainError("scatter: no points");
    double xmin = spec.points.front().x;
    double xmax = xmin;
    double ymin = spec.points.front().y;
    double ymax = ymin;
    for (const auto& p : spec.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw DomainError(fmt::format("scatter: point '{}' has a non-finite coordinate", p.label));
        }
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const Axis xa = make_axis(xmin, xmax);
    const Axis ya = make_axis(ymin, ymax);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xa.lo) / (xa.hi - xa.lo) * plot_w; };
    auto py = [&](double y) { return kTop + plot_h - (y - ya.lo) / (ya.hi - ya.lo) * plot_h; };

    std::string svg;
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
        "viewBox=\"0 0 {0:.0f} {1:.0f}\">\n",
        kWidth, kHeight);
    svg +=
        "<style>\n"
        "text{font-family:sans-serif;font-size:12px;fill:#222}\n"
        ".title{font-size:16px;font-weight:bold}\n"
        ".axis{stroke:#222;stroke-width:1}\n"
        ".grid{stroke:#ddd;stroke-width:1}\n"
        ".point{fill:#7f8c9a;fill-opacity:0.8}\n"
        ".leader{fill:#1f77b4;stroke:#0b3c63;stroke-width:1}\n"
        ".outsider{fill:#d62728;stroke:#6b1010;stroke-width:1}\n"
        ".label{font-size:10px}\n"
        "</style>\n";
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#fff\"/>\n",
                       kWidth, kHeight);
    svg += fmt::format("<text class=\"title\" x=\"{:.2f}\" y=\"28\" text-anchor=\"middle\">{}</text>\n",
                       kWidth / 2.0, escape(spec.title));

    const double xstep = tick_step(xa.ticks);
    for (double t : xa.ticks) {
        const double x = px(t);
        svg += fmt::format("<line class=\"grid\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n",
                           x, kTop, kTop + plot_h);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                           kTop + plot_h + 18.0, tick_label(t, xstep));
    }
    const double ystep = tick_step(ya.ticks);
    for (double t : ya.ticks) {
        const double y = py(t);
        svg += fmt::format("<line class=\"grid\" x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\"/>\n",
                           y, kLeft, kLeft + plot_w);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                           kLeft - 8.0, y + 4.0, tick_label(t, ystep));
    }
    svg += fmt::format("<line class=\"axis\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n",
                       kLeft, kTop + plot_h, kLeft + plot_w);
    svg += fmt::format("<line class=\"axis\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n",
                       kLeft, kTop, kTop + plot_h);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + plot_w / 2.0, kHeight - 20.0, escape(spec.x_label));
    svg += fmt::format(
        "<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
        kTop + plot_h / 2.0, escape(spec.y_label));

    // Plain points first so highlighted ones are drawn on top.
    for (const Highlight pass : {Highlight::none, Highlight::outsider, Highlight::leader}) {
        for (const auto& p : spec.points) {
            if (p.highlight != pass) continue;
            svg += fmt::format(
                "<circle class=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{}\"><title>{}</title></circle>\n",
                class_of(p.highlight), px(p.x), py(p.y), pass == Highlight::none ? 3 : 5,
                escape(p.label));
            if (pass != Highlight::none) {
                svg += fmt::format("<text class=\"label\" x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
                                   px(p.x) + 7.0, py(p.y) - 6.0, escape(p.label));
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

void emit_scatter(const ScatterSpec& spec, const std::filesystem::path& out) {
    const auto svg = render_scatter(spec);
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(fmt::format("cannot write scatter diagram '{}'", out.string()));
    file << svg;
    if (!file) throw IoError(fmt::format("failed writing scatter diagram '{}'", out.string()));
}

}  // namespace shadow
