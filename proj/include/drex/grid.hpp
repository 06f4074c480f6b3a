#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "drex/common.hpp"

namespace drex {

// 2.5-degree global lattice: 144 x 55 = 7920 positions,
// 178.75W..178.75E by 58.75S..76.25N.
inline constexpr int kLonCount = 144;
inline constexpr int kLatCount = 55;
inline constexpr int kLatticeSize = kLonCount * kLatCount;
inline constexpr double kLonOrigin = -178.75;
inline constexpr double kLatOrigin = -58.75;
inline constexpr double kGridStep = 2.5;

struct GridCoordinate {
    int lon_index = 0;  // 0..143
    int lat_index = 0;  // 0..54

    double lon_deg() const { return kLonOrigin + kGridStep * lon_index; }
    double lat_deg() const { return kLatOrigin + kGridStep * lat_index; }
    int cell_id() const { return lat_index * kLonCount + lon_index; }

    static GridCoordinate from_cell_id(int id);
    // Exact lattice match; nullopt when (lon, lat) does not land on a node.
    static std::optional<GridCoordinate> from_degrees(double lon, double lat);

    auto operator<=>(const GridCoordinate&) const = default;
};

struct MonthStamp {
    int year = 1900;
    int month = 1;  // 1..12

    int serial() const { return (year - 1900) * 12 + (month - 1); }
    static MonthStamp from_serial(int serial);

    auto operator<=>(const MonthStamp&) const = default;
};

// Mid-month time axis: year + (month - 0.5) / 12.
double fractional_year(MonthStamp when);

struct PeriodRange {
    MonthStamp start{1900, 1};
    MonthStamp end{2014, 12};

    int months() const { return end.serial() - start.serial() + 1; }
    bool contains(MonthStamp t) const { return start <= t && t <= end; }
    int offset(MonthStamp t) const { return t.serial() - start.serial(); }
    MonthStamp at(int off) const { return MonthStamp::from_serial(start.serial() + off); }
    int years() const { return end.year - start.year + 1; }

    auto operator<=>(const PeriodRange&) const = default;
};

// Default study window, 1380 months.
inline constexpr PeriodRange kStudyPeriod{{1900, 1}, {2014, 12}};

// One cell's monthly PDSI record over a fixed period. Missing months are
// held as NaN internally; the accessors expose them as absent optionals.
class PdsiSeries {
public:
    PdsiSeries(GridCoordinate cell, PeriodRange period);

    const GridCoordinate& cell() const { return cell_; }
    const PeriodRange& period() const { return period_; }

    // value must be finite; when must lie inside the period
    void set(MonthStamp when, double value);
    void clear(MonthStamp when);

    bool present(int off) const { return !std::isnan(values_[static_cast<std::size_t>(off)]); }
    std::optional<double> at_offset(int off) const;
    std::optional<double> at(MonthStamp when) const;

    std::size_t valid_count() const;

    bool operator==(const PdsiSeries& other) const;

private:
    GridCoordinate cell_;
    PeriodRange period_;
    std::vector<double> values_;  // NaN = absent
};

// Immutable collection of populated cells sharing one period.
class GridDataset {
public:
    GridDataset(PeriodRange period, std::vector<PdsiSeries> cells);

    const PeriodRange& period() const { return period_; }
    const std::vector<PdsiSeries>& cells() const { return cells_; }
    std::size_t n_cells() const { return cells_.size(); }

    const PdsiSeries* find(GridCoordinate cell) const;

    bool operator==(const GridDataset& other) const = default;

private:
    PeriodRange period_;
    std::vector<PdsiSeries> cells_;  // sorted by cell_id, unique
};

struct CoveragePoint {
    MonthStamp when;
    double percent_missing;  // share of the full 7920-cell lattice, 0..100
};

// Per-month missing-data profile over the whole lattice.
std::vector<CoveragePoint> coverage_profile(const GridDataset& dataset);

}  // namespace drex
