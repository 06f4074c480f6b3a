#include "drex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drex {

GridCoordinate GridCoordinate::from_cell_id(int id) {
    if (id < 0 || id >= kLatticeSize) throw std::invalid_argument("cell id out of range");
    return GridCoordinate{id % kLonCount, id / kLonCount};
}

std::optional<GridCoordinate> GridCoordinate::from_degrees(double lon, double lat) {
    if (!std::isfinite(lon) || !std::isfinite(lat)) return std::nullopt;
    const long li = std::lround((lon - kLonOrigin) / kGridStep);
    const long la = std::lround((lat - kLatOrigin) / kGridStep);
    if (li < 0 || li >= kLonCount || la < 0 || la >= kLatCount) return std::nullopt;
    GridCoordinate c{static_cast<int>(li), static_cast<int>(la)};
    // lattice nodes are multiples of 0.25 deg, exactly representable
    if (c.lon_deg() != lon || c.lat_deg() != lat) return std::nullopt;
    return c;
}

MonthStamp MonthStamp::from_serial(int serial) {
    int year = 1900 + (serial >= 0 ? serial / 12 : -((-serial + 11) / 12));
    int month = serial - (year - 1900) * 12 + 1;
    return MonthStamp{year, month};
}

double fractional_year(MonthStamp when) { return when.year + (when.month - 0.5) / 12.0; }

PdsiSeries::PdsiSeries(GridCoordinate cell, PeriodRange period)
    : cell_(cell), period_(period),
      values_(static_cast<std::size_t>(period.months()), std::nan("")) {
    if (period.start > period.end) throw std::invalid_argument("period start after end");
    if (cell.lon_index < 0 || cell.lon_index >= kLonCount || cell.lat_index < 0 ||
        cell.lat_index >= kLatCount)
        throw std::invalid_argument("coordinate off the lattice");
}

void PdsiSeries::set(MonthStamp when, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("PDSI value must be finite");
    if (!period_.contains(when)) throw std::invalid_argument("month outside the series period");
    values_[static_cast<std::size_t>(period_.offset(when))] = value;
}

void PdsiSeries::clear(MonthStamp when) {
    if (!period_.contains(when)) throw std::invalid_argument("month outside the series period");
    values_[static_cast<std::size_t>(period_.offset(when))] = std::nan("");
}

std::optional<double> PdsiSeries::at_offset(int off) const {
    const double v = values_[static_cast<std::size_t>(off)];
    if (std::isnan(v)) return std::nullopt;
    return v;
}

std::optional<double> PdsiSeries::at(MonthStamp when) const {
    if (!period_.contains(when)) return std::nullopt;
    return at_offset(period_.offset(when));
}

std::size_t PdsiSeries::valid_count() const {
    std::size_t n = 0;
    for (double v : values_)
        if (!std::isnan(v)) ++n;
    return n;
}

bool PdsiSeries::operator==(const PdsiSeries& other) const {
    if (cell_ != other.cell_ || period_ != other.period_) return false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const bool a = std::isnan(values_[i]), b = std::isnan(other.values_[i]);
        if (a != b) return false;
        if (!a && values_[i] != other.values_[i]) return false;
    }
    return true;
}

GridDataset::GridDataset(PeriodRange period, std::vector<PdsiSeries> cells)
    : period_(period), cells_(std::move(cells)) {
    if (period.start > period.end) throw std::invalid_argument("period start after end");
    if (cells_.empty()) throw std::invalid_argument("dataset must contain at least one cell");
    std::sort(cells_.begin(), cells_.end(), [](const PdsiSeries& a, const PdsiSeries& b) {
        return a.cell().cell_id() < b.cell().cell_id();
    });
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i].period() != period_)
            throw std::invalid_argument("cell period differs from dataset period");
        if (cells_[i].valid_count() == 0)
            throw std::invalid_argument("cell with zero present values");
        if (i > 0 && cells_[i].cell() == cells_[i - 1].cell())
            throw std::invalid_argument("duplicate cell coordinate");
    }
}

const PdsiSeries* GridDataset::find(GridCoordinate cell) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), cell.cell_id(),
                               [](const PdsiSeries& s, int id) { return s.cell().cell_id() < id; });
    if (it == cells_.end() || it->cell() != cell) return nullptr;
    return &*it;
}

std::vector<CoveragePoint> coverage_profile(const GridDataset& dataset) {
    const int months = dataset.period().months();
    std::vector<int> present(static_cast<std::size_t>(months), 0);
    for (const auto& series : dataset.cells())
        for (int m = 0; m < months; ++m)
            if (series.present(m)) ++present[static_cast<std::size_t>(m)];

    std::vector<CoveragePoint> profile;
    profile.reserve(static_cast<std::size_t>(months));
    for (int m = 0; m < months; ++m) {
        const double missing =
            100.0 * (kLatticeSize - present[static_cast<std::size_t>(m)]) / kLatticeSize;
        profile.push_back({dataset.period().at(m), missing});
    }
    return profile;
}

}  // namespace drex
