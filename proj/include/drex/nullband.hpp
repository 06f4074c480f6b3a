#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "drex/trend.hpp"

namespace drex {

// Purely random timing model: per year and replicate, every cell draws 12
// uniforms on (0,1) and counts draws below p; the band is the 5th/95th
// nearest-rank percentile of the replicate counts.
struct NullBandParams {
    int n_cells = 2755;
    double p = 10.0 / 1380.0;
    int reps = 100;
    int years = 115;
    int start_year = 1900;
    double lower_pct = 5.0;
    double upper_pct = 95.0;
    // When non-empty (size n_cells), per-cell probabilities replace p; used
    // by the availability-respecting mode where p = k / valid months.
    std::vector<double> per_cell_p;
};

struct YearBand {
    int year = 0;
    int lower = 0;
    int upper = 0;
};

struct NullBand {
    std::vector<YearBand> bands;
    NullBandParams params;
    std::uint64_t seed = 0;
    // pooled replicate statistics across all years, for diagnostics
    double replicate_mean = 0.0;
    double replicate_variance = 0.0;
};

// Deterministic for a given seed via substreams keyed on (year, replicate);
// years may be simulated concurrently.
NullBand null_band(const NullBandParams& params, std::uint64_t seed);

enum class BandPosition { Below, Inside, Above };

struct BandExceedance {
    std::vector<BandPosition> positions;  // one per year, bounds inclusive
    // first year opening a run of >= 3 consecutive years above the band
    std::optional<int> sustained_onset_year;
};

// Annual counts against the band; the year ranges must match exactly.
BandExceedance band_exceedance(const CountSeries& counts, const NullBand& band);

}  // namespace drex
