#include "sensoria/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sensoria/error.hpp"

namespace sensoria {

SenseColorScheme SenseColorScheme::defaults() {
    SenseColorScheme scheme;
    scheme.colors[sense_index(Sense::Sight)] = "#e6c700";
    scheme.colors[sense_index(Sense::Hearing)] = "#d62728";
    scheme.colors[sense_index(Sense::Touch)] = "#7ec8e3";
    scheme.colors[sense_index(Sense::Taste)] = "#9467bd";
    scheme.colors[sense_index(Sense::Smell)] = "#1f3a93";
    return scheme;
}

namespace svg {
namespace {

constexpr double kWidth = 760;
constexpr double kHeight = 500;
constexpr double kLeft = 70;
constexpr double kRight = 40;
constexpr double kTop = 50;
constexpr double kBottom = 80;
constexpr double kLegendWidth = 150;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = 0;
    double hi = 1;

    double span() const { return hi - lo; }
};

Range padded(double lo, double hi, double pad_frac) {
    if (lo > hi) std::swap(lo, hi);
    double span = hi - lo;
    if (span <= 0) {
        double base = std::max(std::abs(lo), 1.0);
        return {lo - 0.5 * base, hi + 0.5 * base};
    }
    return {lo - pad_frac * span, hi + pad_frac * span};
}

class Canvas {
  public:
    Canvas(double width, double height) : width_(width), height_(height) {
        out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_)
             << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_) << " "
             << num(height_) << "\">\n";
        out_ << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\""
             << num(height_) << "\" fill=\"#ffffff\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0) {
        out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
             << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
             << num(width) << "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
             << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill, double opacity) {
        out_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
             << "\" fill=\"" << fill << "\" fill-opacity=\"" << num(opacity) << "\"/>\n";
    }

    void text(double x, double y, const std::string& content, double size,
              const std::string& anchor = "start", const std::string& extra = "") {
        out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\""
             << " font-size=\"" << num(size) << "\" text-anchor=\"" << anchor << "\"" << extra
             << ">" << escape_text(content) << "</text>\n";
    }

    void rotated_text(double x, double y, const std::string& content, double size,
                      double angle) {
        out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\""
             << " font-size=\"" << num(size) << "\" text-anchor=\"end\" transform=\"rotate("
             << num(angle) << " " << num(x) << " " << num(y) << ")\">" << escape_text(content)
             << "</text>\n";
    }

    void save(const std::filesystem::path& file) {
        out_ << "</svg>\n";
        std::ofstream os(file, std::ios::binary);
        if (!os) throw PipelineError("report", "cannot write " + file.string());
        os << out_.str();
        if (!os) throw PipelineError("report", "write failed: " + file.string());
    }

  private:
    double width_;
    double height_;
    std::ostringstream out_;
};

void draw_frame(Canvas& canvas, const std::string& title, const std::string& x_label,
                const std::string& y_label, double plot_right) {
    canvas.text(kWidth / 2, kTop - 22, title, 16, "middle");
    canvas.text((kLeft + plot_right) / 2, kHeight - 14, x_label, 13, "middle");
    canvas.text(16, (kTop + kHeight - kBottom) / 2, y_label, 13, "middle",
                " transform=\"rotate(-90 16 " + num((kTop + kHeight - kBottom) / 2) + ")\"");
    canvas.line(kLeft, kTop, kLeft, kHeight - kBottom, "#222222");
    canvas.line(kLeft, kHeight - kBottom, plot_right, kHeight - kBottom, "#222222");
}

void draw_legend(Canvas& canvas, const std::vector<std::pair<std::string, std::string>>& legend,
                 double x) {
    double y = kTop + 6;
    for (const auto& [name, color] : legend) {
        canvas.rect(x, y - 9, 12, 12, color);
        canvas.text(x + 18, y + 1, name, 12);
        y += 20;
    }
}

void draw_y_ticks(Canvas& canvas, const Range& range, double y0, double y1) {
    for (int i = 0; i <= 5; ++i) {
        double v = range.lo + range.span() * i / 5.0;
        double y = y0 - (y0 - y1) * i / 5.0;
        canvas.line(kLeft - 4, y, kLeft, y, "#222222");
        canvas.text(kLeft - 8, y + 4, tick_num(v), 11, "end");
    }
}

}  // namespace

std::string escape_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_scatter(const std::filesystem::path& file, const Scatter& chart) {
    const bool has_legend = !chart.legend.empty();
    const double plot_right = kWidth - kRight - (has_legend ? kLegendWidth : 0);

    Range xr{0, 1}, yr{0, 1};
    if (!chart.points.empty()) {
        double xlo = chart.points[0].x, xhi = xlo, ylo = chart.points[0].y, yhi = ylo;
        for (const auto& p : chart.points) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
        xr = padded(xlo, xhi, 0.06);
        yr = padded(ylo, yhi, 0.06);
    }

    const double y0 = kHeight - kBottom;
    auto sx = [&](double v) { return kLeft + (v - xr.lo) / xr.span() * (plot_right - kLeft); };
    auto sy = [&](double v) { return y0 - (v - yr.lo) / yr.span() * (y0 - kTop); };

    Canvas canvas(kWidth, kHeight);
    draw_frame(canvas, chart.title, chart.x_label, chart.y_label, plot_right);
    draw_y_ticks(canvas, yr, y0, kTop);
    for (int i = 0; i <= 5; ++i) {
        double v = xr.lo + xr.span() * i / 5.0;
        double x = sx(v);
        canvas.line(x, y0, x, y0 + 4, "#222222");
        canvas.text(x, y0 + 18, tick_num(v), 11, "middle");
    }

    for (const auto& p : chart.points) canvas.circle(sx(p.x), sy(p.y), 4, p.color, 0.75);
    for (const auto& p : chart.points) {
        if (!p.show_label || p.label.empty()) continue;
        canvas.text(sx(p.x) + 6, sy(p.y) - 5, p.label, 10);
    }

    if (has_legend) draw_legend(canvas, chart.legend, plot_right + 18);
    canvas.save(file);
}

void write_bars(const std::filesystem::path& file, const Bars& chart) {
    const bool has_legend = !chart.legend.empty();
    const double plot_right = kWidth - kRight - (has_legend ? kLegendWidth : 0);

    double max_v = 0;
    for (const auto& b : chart.bars) max_v = std::max(max_v, b.value);
    Range yr{0, max_v > 0 ? max_v * 1.08 : 1.0};

    const double y0 = kHeight - kBottom;
    auto sy = [&](double v) { return y0 - (v - yr.lo) / yr.span() * (y0 - kTop); };

    Canvas canvas(kWidth, kHeight);
    draw_frame(canvas, chart.title, "", chart.y_label, plot_right);
    draw_y_ticks(canvas, yr, y0, kTop);

    const std::size_t n = chart.bars.size();
    if (n > 0) {
        const double slot = (plot_right - kLeft) / static_cast<double>(n);
        const double bar_w = slot * 0.65;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& b = chart.bars[i];
            double x = kLeft + slot * (static_cast<double>(i) + 0.5);
            double top = sy(b.value);
            canvas.rect(x - bar_w / 2, top, bar_w, y0 - top, b.color);
            if (n <= 6) canvas.text(x, y0 + 18, b.label, 11, "middle");
            else canvas.rotated_text(x + 4, y0 + 12, b.label, 10, -40);
        }
    }

    if (has_legend) draw_legend(canvas, chart.legend, plot_right + 18);
    canvas.save(file);
}

void write_grouped_bars(const std::filesystem::path& file, const GroupedBars& chart) {
    const double plot_right = kWidth - kRight - kLegendWidth;

    double max_v = 0;
    for (const auto& row : chart.values)
        for (double v : row) max_v = std::max(max_v, v);
    Range yr{0, max_v > 0 ? max_v * 1.08 : 1.0};

    const double y0 = kHeight - kBottom;
    auto sy = [&](double v) { return y0 - (v - yr.lo) / yr.span() * (y0 - kTop); };

    Canvas canvas(kWidth, kHeight);
    draw_frame(canvas, chart.title, "", chart.y_label, plot_right);
    draw_y_ticks(canvas, yr, y0, kTop);

    const std::size_t groups = chart.groups.size();
    const std::size_t series = chart.series.size();
    if (groups > 0 && series > 0) {
        const double slot = (plot_right - kLeft) / static_cast<double>(groups);
        const double band = slot * 0.8;
        const double bar_w = band / static_cast<double>(series);
        for (std::size_t g = 0; g < groups; ++g) {
            double center = kLeft + slot * (static_cast<double>(g) + 0.5);
            for (std::size_t s = 0; s < series; ++s) {
                double v = g < chart.values.size() && s < chart.values[g].size()
                               ? chart.values[g][s]
                               : 0.0;
                double x = center - band / 2 + bar_w * static_cast<double>(s);
                double top = sy(v);
                canvas.rect(x, top, bar_w * 0.92, y0 - top, chart.series_colors[s]);
            }
            if (groups <= 6) canvas.text(center, y0 + 18, chart.groups[g], 11, "middle");
            else canvas.rotated_text(center + 4, y0 + 12, chart.groups[g], 10, -40);
        }
    }

    std::vector<std::pair<std::string, std::string>> legend;
    for (std::size_t s = 0; s < series; ++s)
        legend.emplace_back(chart.series[s], chart.series_colors[s]);
    draw_legend(canvas, legend, plot_right + 18);
    canvas.save(file);
}

}  // namespace svg
}  // namespace sensoria
