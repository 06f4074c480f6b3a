#pragma once

#include <string>
#include <vector>

namespace drex {

// Minimal self-contained SVG line chart. Output is deterministic: fixed
// viewport, fixed palette, fixed number formatting, no timestamps.
class LinePlot {
public:
    LinePlot(std::string title, std::string x_label, std::string y_label);

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys);
    std::string render() const;

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace drex
