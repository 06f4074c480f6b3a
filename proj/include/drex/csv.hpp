#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "drex/grid.hpp"

namespace drex {

// Flat interchange format: header `lon,lat,year,month,pdsi`, decimal point,
// sentinel value for missing months, LF or CRLF, rows in any order.

struct IngestOptions {
    double missing_sentinel = -99.99;
    bool strict = false;
    // Rows outside the period are skipped and counted. When absent the
    // period is inferred from the data extent.
    std::optional<PeriodRange> period;
};

struct IngestReport {
    std::size_t rows_read = 0;           // data rows seen (excluding header)
    std::size_t rows_ingested = 0;       // present values stored
    std::size_t rows_missing = 0;        // sentinel rows
    std::size_t rows_malformed = 0;      // skipped rows (non-strict mode)
    std::size_t rows_out_of_period = 0;
    std::size_t duplicate_rows = 0;      // last-wins overwrites (non-strict mode)
    std::size_t out_of_range_values = 0; // |pdsi| > 10, kept with a warning
    std::size_t cells_dropped_empty = 0; // cells whose rows were all sentinel
};

struct IngestResult {
    GridDataset dataset;
    IngestReport report;
};

IngestResult ingest_csv(std::istream& in, const IngestOptions& options = {});
IngestResult ingest_csv_file(const std::string& path, const IngestOptions& options = {});

// Canonical export: cells by cell_id, months ascending, present values only,
// 12 significant digits. Re-ingesting with the same period reproduces the
// dataset.
void export_csv(const GridDataset& dataset, std::ostream& out);
std::string export_csv(const GridDataset& dataset);

}  // namespace drex
