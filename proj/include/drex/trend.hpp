#pragma once

#include <cstdint>
#include <vector>

#include "drex/grid.hpp"

namespace drex {

// Monthly and annual counts of cells experiencing one of their k historical
// extremes. Sum over months equals the total number of extracted events.
struct CountSeries {
    PeriodRange period;
    std::vector<int> monthly;  // indexed by month offset from period start
    std::vector<int> annual;   // indexed by year - period.start.year

    int start_year() const { return period.start.year; }
    long long total() const;

    bool operator==(const CountSeries&) const = default;
};

CountSeries monthly_lnpv_counts(const GridDataset& dataset, int k = 10);

struct OlsFit {
    double slope = 0.0;      // per time step
    double intercept = 0.0;
    double slope_per_decade = 0.0;
};

// Ordinary least squares of value on 0-based index. steps_per_decade scales
// the slope (120 for monthly input, 10 for annual).
OlsFit ols_trend(const std::vector<double>& series, double steps_per_decade = 120.0);

enum class TrendDirection { Increasing, Decreasing, None };

struct MannKendallResult {
    long long S = 0;
    double var_S = 0.0;  // tie-corrected
    double Z = 0.0;      // continuity-corrected normal score
    double p_two_sided = 1.0;
    TrendDirection direction = TrendDirection::None;
};

// Nonparametric monotone-trend test; requires n >= 3. A constant series
// yields S = 0, Z = 0, p = 1, direction none.
MannKendallResult mann_kendall(const std::vector<double>& series, double alpha = 0.05);

// Trailing mean aligned to the window end; output length = n - window + 1.
std::vector<double> moving_average(const std::vector<double>& series, int window);

}  // namespace drex
