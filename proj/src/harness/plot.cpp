#include "evobench/harness.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace evobench {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
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

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0); }

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;
    double px0 = 0, px1 = 1; // pixel range

    double t(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        const double frac = b > a ? (x - a) / (b - a) : 0.5;
        return px0 + frac * (px1 - px0);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            const int e0 = static_cast<int>(std::floor(std::log10(lo)));
            const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
            const int step = std::max(1, (e1 - e0) / 6);
            for (int e = e0; e <= e1; e += step) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
            }
            if (out.empty()) out = {lo, hi};
            return out;
        }
        for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
        return out;
    }
};

std::string tick_label(double v) {
    if (v == 0) return "0";
    const double a = std::abs(v);
    if (a >= 1e5 || a < 1e-3) return fmt::format("{:.1e}", v);
    return fmt::format("{:.4g}", v);
}

} // namespace

std::string render_svg(const Plot& plot) {
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], plot.log_x) || !usable(s.y[i], plot.log_y)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    const bool empty = !(xmin <= xmax);

    Axis ax{0, 1, plot.log_x, kLeft, kWidth - kRight};
    Axis ay{0, 1, plot.log_y, kHeight - kBottom, kTop};
    if (!empty) {
        ax.lo = xmin;
        ax.hi = xmax;
        ay.lo = ymin;
        ay.hi = ymax;
    } else {
        if (ax.log) ax.lo = 1, ax.hi = 10;
        if (ay.log) ay.lo = 1, ay.hi = 10;
    }
    const auto widen = [](Axis& a) {
        if (a.hi > a.lo) return;
        if (a.log) {
            a.lo /= 2;
            a.hi *= 2;
        } else {
            a.lo -= 0.5;
            a.hi += 0.5;
        }
    };
    widen(ax);
    widen(ay);

    std::string svg;
    if (empty) {
        svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                           "viewBox=\"0 0 {} {}\" data-xmin=\"0\" data-xmax=\"1\" data-ymin=\"0\" data-ymax=\"1\" data-empty=\"true\">\n",
                           kWidth, kHeight, kWidth, kHeight);
    } else {
        svg += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                           "viewBox=\"0 0 {} {}\" data-xmin=\"{}\" data-xmax=\"{}\" data-ymin=\"{}\" data-ymax=\"{}\">\n",
                           kWidth, kHeight, kWidth, kHeight, xmin, xmax, ymin, ymax);
    }
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += fmt::format("<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                       (kLeft + kWidth - kRight) / 2, escape(plot.title));

    // Axes and ticks.
    svg += fmt::format("<g stroke=\"black\" stroke-width=\"1\"><line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
                       "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{3}\"/></g>\n",
                       kLeft, kHeight - kBottom, kWidth - kRight, kTop);
    svg += "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (double v : ax.ticks()) {
        const double px = ax.t(v);
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
                           "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
                           px, kHeight - kBottom, kHeight - kBottom + 5, kHeight - kBottom + 17, tick_label(v));
    }
    for (double v : ay.ticks()) {
        const double py = ay.t(v);
        svg += fmt::format("<line x1=\"{0}\" y1=\"{2:.2f}\" x2=\"{1}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
                           "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
                           kLeft - 5, kLeft, py, kLeft - 8, py + 3, tick_label(v));
    }
    svg += "</g>\n";
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}{}</text>\n",
                       (kLeft + kWidth - kRight) / 2, kHeight - 12, escape(plot.x_label), plot.log_x ? " (log)" : "");
    svg += fmt::format("<text x=\"16\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 16 {0})\">{1}{2}</text>\n",
                       (kTop + kHeight - kBottom) / 2, escape(plot.y_label), plot.log_y ? " (log)" : "");

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const auto& s = plot.series[si];
        const char* color = kPalette[si % kPalette.size()];
        // Standard-deviation band.
        if (s.y_std.size() == s.y.size() && !s.y.empty()) {
            std::string upper, lower;
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (!usable(s.x[i], plot.log_x) || !usable(s.y[i], plot.log_y) || !std::isfinite(s.y_std[i])) continue;
                const double hi = std::min(s.y[i] + s.y_std[i], ay.hi);
                double lo = std::max(s.y[i] - s.y_std[i], ay.lo);
                if (plot.log_y && lo <= 0) lo = ay.lo;
                upper += fmt::format("{:.2f},{:.2f} ", ax.t(s.x[i]), ay.t(hi));
                lower = fmt::format("{:.2f},{:.2f} ", ax.t(s.x[i]), ay.t(lo)) + lower;
            }
            if (!upper.empty()) {
                svg += fmt::format("<polygon points=\"{}{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", upper,
                                   lower, color);
            }
        }
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], plot.log_x) || !usable(s.y[i], plot.log_y)) continue;
            pts += fmt::format("{:.2f},{:.2f} ", ax.t(s.x[i]), ay.t(s.y[i]));
        }
        if (!pts.empty()) {
            pts.pop_back();
            svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", pts, color);
        }
        const double ly = kTop + 14.0 * static_cast<double>(si);
        svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
                           "<text x=\"{4}\" y=\"{5}\" font-family=\"sans-serif\" font-size=\"10\">{6}</text>\n",
                           kWidth - kRight + 10, ly, kWidth - kRight + 28, color, kWidth - kRight + 32, ly + 3,
                           escape(s.label));
    }
    svg += "</svg>\n";
    return svg;
}

std::string_view to_string(PlotKind k) {
    switch (k) {
    case PlotKind::QualityVsNfe: return "quality_vs_nfe";
    case PlotKind::RuntimeVsAxis: return "runtime_vs_axis";
    case PlotKind::Convergence: return "convergence";
    case PlotKind::Diversity: return "diversity";
    }
    return "unknown";
}

PlotKind parse_plot_kind(std::string_view s) {
    for (PlotKind k : {PlotKind::QualityVsNfe, PlotKind::RuntimeVsAxis, PlotKind::Convergence, PlotKind::Diversity}) {
        if (to_string(k) == s) return k;
    }
    throw UnknownId(fmt::format("unknown plot kind '{}'", s));
}

Plot plot_from_aggregate(const Aggregate& a, PlotKind kind, const std::string& label) {
    Plot p;
    PlotSeries s;
    s.label = label;
    for (const auto& pt : a.series) {
        switch (kind) {
        case PlotKind::QualityVsNfe:
            s.x.push_back(pt.nfe.mean);
            s.y.push_back(pt.quality.mean);
            break;
        case PlotKind::Convergence:
            s.x.push_back(static_cast<double>(pt.gen));
            s.y.push_back(pt.quality.mean);
            s.y_std.push_back(pt.quality.std);
            break;
        case PlotKind::Diversity:
            s.x.push_back(static_cast<double>(pt.gen));
            s.y.push_back(pt.diversity.mean);
            s.y_std.push_back(pt.diversity.std);
            break;
        case PlotKind::RuntimeVsAxis:
            throw ContractViolation("runtime_vs_axis needs a sweep result");
        }
    }
    switch (kind) {
    case PlotKind::QualityVsNfe:
        p.title = "Quality against evaluations";
        p.x_label = "NFE";
        p.y_label = "quality";
        p.log_x = true;
        p.log_y = true;
        break;
    case PlotKind::Convergence:
        p.title = "Convergence";
        p.x_label = "generation";
        p.y_label = "quality";
        p.log_y = true;
        break;
    default:
        p.title = "Population diversity";
        p.x_label = "generation";
        p.y_label = "mean pairwise distance";
        break;
    }
    if (!a.series.empty()) p.series.push_back(std::move(s));
    return p;
}

Plot plot_from_sweep(const SweepResult& r, PlotKind kind) {
    const auto rows = sweep_table(r);
    Plot p;
    PlotSeries s;
    s.label = r.spec.base.algo + (r.spec.base.backend.kind == BackendKind::Serial ? " serial" : " parallel");
    if (kind == PlotKind::RuntimeVsAxis) {
        p.title = "Runtime against " + std::string(r.spec.axis == SweepAxis::Dimension ? "dimension" : "population size");
        p.x_label = r.spec.axis == SweepAxis::Dimension ? "D" : "N";
        p.y_label = "seconds";
        p.log_x = true;
        p.log_y = true;
        for (const auto& row : rows) {
            s.x.push_back(static_cast<double>(row.value));
            s.y.push_back(row.runtime_s.mean);
            s.y_std.push_back(row.runtime_s.std);
        }
    } else if (kind == PlotKind::QualityVsNfe) {
        p.title = "Quality against evaluations in a fixed time";
        p.x_label = "NFE";
        p.y_label = "quality";
        p.log_x = true;
        p.log_y = true;
        for (const auto& row : rows) {
            s.x.push_back(row.nfe.mean);
            s.y.push_back(row.throughput_quality.mean);
        }
    } else {
        throw ContractViolation("sweep results support runtime_vs_axis and quality_vs_nfe plots");
    }
    if (!rows.empty()) p.series.push_back(std::move(s));
    return p;
}

void emit_plot(const Plot& plot, const std::string& path) { write_text(path, render_svg(plot)); }

} // namespace evobench
