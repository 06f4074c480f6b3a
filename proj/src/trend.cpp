#include "drex/trend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drex/extremes.hpp"

namespace drex {

long long CountSeries::total() const {
    long long sum = 0;
    for (int c : monthly) sum += c;
    return sum;
}

CountSeries monthly_lnpv_counts(const GridDataset& dataset, int k) {
    const PeriodRange period = dataset.period();
    CountSeries out{period,
                    std::vector<int>(static_cast<std::size_t>(period.months()), 0),
                    std::vector<int>(static_cast<std::size_t>(period.years()), 0)};
    for (const auto& set : lnpv_map(dataset, k)) {
        for (const auto& e : set.events) {
            ++out.monthly[static_cast<std::size_t>(period.offset(e.when))];
            ++out.annual[static_cast<std::size_t>(e.when.year - period.start.year)];
        }
    }
    return out;
}

OlsFit ols_trend(const std::vector<double>& series, double steps_per_decade) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("ols_trend: need at least 2 values");

    const double mean_t = static_cast<double>(n - 1) / 2.0;
    double mean_y = 0.0;
    for (double y : series) mean_y += y;
    mean_y /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - mean_t;
        sxy += dt * (series[i] - mean_y);
        sxx += dt * dt;
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_t;
    fit.slope_per_decade = fit.slope * steps_per_decade;
    return fit;
}

MannKendallResult mann_kendall(const std::vector<double>& series, double alpha) {
    const std::size_t n = series.size();
    if (n < 3) throw std::invalid_argument("mann_kendall: need at least 3 values");

    MannKendallResult res;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (series[j] > series[i])
                ++res.S;
            else if (series[j] < series[i])
                --res.S;
        }

    // tie-corrected variance
    std::vector<double> sorted(series);
    std::sort(sorted.begin(), sorted.end());
    const double dn = static_cast<double>(n);
    double tie_term = 0.0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && sorted[i] == sorted[i - 1]) {
            ++run;
            continue;
        }
        if (run > 1) {
            const double t = static_cast<double>(run);
            tie_term += t * (t - 1.0) * (2.0 * t + 5.0);
        }
        run = 1;
    }
    res.var_S = (dn * (dn - 1.0) * (2.0 * dn + 5.0) - tie_term) / 18.0;

    if (res.var_S > 0.0 && res.S != 0) {
        const double s = static_cast<double>(res.S);
        res.Z = (s - (res.S > 0 ? 1.0 : -1.0)) / std::sqrt(res.var_S);
    } else {
        res.Z = 0.0;
    }
    res.p_two_sided = std::erfc(std::abs(res.Z) / std::sqrt(2.0));

    if (res.p_two_sided < alpha && res.Z > 0.0)
        res.direction = TrendDirection::Increasing;
    else if (res.p_two_sided < alpha && res.Z < 0.0)
        res.direction = TrendDirection::Decreasing;
    else
        res.direction = TrendDirection::None;
    return res;
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    if (static_cast<std::size_t>(window) > series.size())
        throw std::invalid_argument("moving_average: window exceeds series length");

    const auto w = static_cast<std::size_t>(window);
    std::vector<double> out;
    out.reserve(series.size() - w + 1);
    for (std::size_t end = w; end <= series.size(); ++end) {
        double sum = 0.0;
        for (std::size_t i = end - w; i < end; ++i) sum += series[i];
        out.push_back(sum / static_cast<double>(w));
    }
    return out;
}

}  // namespace drex
