#include "drex/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "drex/io_util.hpp"

namespace drex {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_int(std::string_view s, int& out) {
    s = trim(s);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool split5(std::string_view line, std::string_view out[5]) {
    std::size_t field = 0, start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (field >= 5) return false;
            out[field++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return field == 5;
}

struct CellAccum {
    GridCoordinate coord;
    std::vector<double> values;  // NaN = not yet present
    std::vector<char> seen;      // row observed for this month (incl. sentinel)
};

constexpr std::string_view kHeader = "lon,lat,year,month,pdsi";

}  // namespace

IngestResult ingest_csv(std::istream& in, const IngestOptions& options) {
    IngestReport report;
    std::string line;

    // header (skip a UTF-8 BOM if present)
    if (!std::getline(in, line)) throw DataError("ingest: empty input");
    std::string_view header{line};
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    if (trim(header) != kHeader)
        throw DataError("ingest: expected header '" + std::string(kHeader) + "'");

    // Rows are gathered per cell first; the final period may depend on the
    // data extent, so values are keyed by absolute month serial.
    struct Row {
        int serial;
        double value;  // NaN = sentinel
    };
    std::map<int, std::pair<GridCoordinate, std::vector<Row>>> cells;

    int min_serial = std::numeric_limits<int>::max();
    int max_serial = std::numeric_limits<int>::min();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = trim(line);
        if (row.empty()) continue;
        ++report.rows_read;

        std::string_view f[5];
        double lon, lat, pdsi;
        int year, month;
        const bool shape_ok = split5(row, f) && parse_double(f[0], lon) &&
                              parse_double(f[1], lat) && parse_int(f[2], year) &&
                              parse_int(f[3], month) && parse_double(f[4], pdsi);
        const bool fields_ok = shape_ok && month >= 1 && month <= 12 &&
                               (std::isfinite(pdsi) || pdsi == options.missing_sentinel);
        if (!fields_ok) {
            if (options.strict)
                throw DataError("ingest: malformed row at line " + std::to_string(line_no));
            ++report.rows_malformed;
            continue;
        }

        const auto coord = GridCoordinate::from_degrees(lon, lat);
        if (!coord)
            throw DataError("ingest: off-lattice coordinate (" + fmt_g(lon) + ", " + fmt_g(lat) +
                            ") at line " + std::to_string(line_no));

        const MonthStamp stamp{year, month};
        if (options.period && !options.period->contains(stamp)) {
            ++report.rows_out_of_period;
            continue;
        }

        const bool missing = (pdsi == options.missing_sentinel);
        if (missing)
            ++report.rows_missing;
        else if (std::abs(pdsi) > 10.0)
            ++report.out_of_range_values;

        auto& entry = cells[coord->cell_id()];
        if (entry.second.empty()) entry.first = *coord;
        entry.second.push_back({stamp.serial(), missing ? std::nan("") : pdsi});
        if (!missing) {
            min_serial = std::min(min_serial, stamp.serial());
            max_serial = std::max(max_serial, stamp.serial());
        }
    }

    if (min_serial > max_serial) throw DataError("ingest: no usable data");

    const PeriodRange period = options.period
                                   ? *options.period
                                   : PeriodRange{MonthStamp::from_serial(min_serial),
                                                 MonthStamp::from_serial(max_serial)};

    std::vector<PdsiSeries> series_list;
    series_list.reserve(cells.size());
    for (auto& [id, entry] : cells) {
        CellAccum accum{entry.first,
                        std::vector<double>(static_cast<std::size_t>(period.months()), std::nan("")),
                        std::vector<char>(static_cast<std::size_t>(period.months()), 0)};
        for (const Row& r : entry.second) {
            // sentinel rows can fall outside an inferred period
            if (r.serial < period.start.serial() || r.serial > period.end.serial()) continue;
            const auto off = static_cast<std::size_t>(r.serial - period.start.serial());
            if (accum.seen[off]) {
                if (options.strict)
                    throw DataError("ingest: duplicate (cell, month) row for cell " +
                                    std::to_string(id) + ", month serial " +
                                    std::to_string(r.serial));
                ++report.duplicate_rows;  // last wins
            }
            accum.seen[off] = 1;
            accum.values[off] = r.value;
        }

        PdsiSeries s(accum.coord, period);
        std::size_t n_present = 0;
        for (int m = 0; m < period.months(); ++m) {
            const double v = accum.values[static_cast<std::size_t>(m)];
            if (!std::isnan(v)) {
                s.set(period.at(m), v);
                ++n_present;
            }
        }
        if (n_present == 0) {
            ++report.cells_dropped_empty;
            continue;
        }
        report.rows_ingested += n_present;
        series_list.push_back(std::move(s));
    }

    if (series_list.empty()) throw DataError("ingest: no usable data");
    return IngestResult{GridDataset(period, std::move(series_list)), report};
}

IngestResult ingest_csv_file(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file: " + path);
    return ingest_csv(in, options);
}

void export_csv(const GridDataset& dataset, std::ostream& out) {
    out << kHeader << '\n';
    for (const auto& series : dataset.cells()) {
        const double lon = series.cell().lon_deg();
        const double lat = series.cell().lat_deg();
        for (int m = 0; m < dataset.period().months(); ++m) {
            const auto v = series.at_offset(m);
            if (!v) continue;
            const MonthStamp stamp = dataset.period().at(m);
            out << fmt_f(lon, 2) << ',' << fmt_f(lat, 2) << ',' << stamp.year << ','
                << stamp.month << ',' << fmt_g(*v) << '\n';
        }
    }
}

std::string export_csv(const GridDataset& dataset) {
    std::ostringstream out;
    export_csv(dataset, out);
    return out.str();
}

}  // namespace drex
