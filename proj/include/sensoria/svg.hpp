#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sensoria/types.hpp"

namespace sensoria {

struct SenseColorScheme {
    std::array<std::string, kSenseCount> colors;

    const std::string& color(Sense s) const { return colors[sense_index(s)]; }

    // yellow sight, red hearing, light blue touch, purple taste, dark blue smell
    static SenseColorScheme defaults();
};

namespace svg {

struct Scatter {
    struct Point {
        double x = 0;
        double y = 0;
        std::string color;
        std::string label;       // tooltip/annotation text
        bool show_label = false;
    };
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Point> points;
    std::vector<std::pair<std::string, std::string>> legend;  // name, color
};

struct Bars {
    struct Bar {
        std::string label;
        double value = 0;
        std::string color;
    };
    std::string title;
    std::string y_label;
    std::vector<Bar> bars;
    std::vector<std::pair<std::string, std::string>> legend;
};

struct GroupedBars {
    std::string title;
    std::string y_label;
    std::vector<std::string> groups;
    std::vector<std::string> series;
    std::vector<std::string> series_colors;          // aligned with series
    std::vector<std::vector<double>> values;         // [group][series]
};

// All writers emit standalone well-formed SVG with embedded styling only.
void write_scatter(const std::filesystem::path& file, const Scatter& chart);
void write_bars(const std::filesystem::path& file, const Bars& chart);
void write_grouped_bars(const std::filesystem::path& file, const GroupedBars& chart);

std::string escape_text(std::string_view raw);

}  // namespace svg
}  // namespace sensoria
