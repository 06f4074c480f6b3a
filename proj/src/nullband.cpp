#include "drex/nullband.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drex/parallel.hpp"
#include "drex/rng.hpp"

namespace drex {

namespace {

// nearest-rank percentile of a sorted sample: the ceil(pct/100 * n)-th value
int nearest_rank(const std::vector<int>& sorted, double pct) {
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

}  // namespace

NullBand null_band(const NullBandParams& params, std::uint64_t seed) {
    if (params.n_cells < 1) throw std::invalid_argument("null_band: n_cells must be >= 1");
    if (!(params.p >= 0.0 && params.p < 1.0))
        throw std::invalid_argument("null_band: p must be in [0, 1)");
    if (params.reps < 2) throw std::invalid_argument("null_band: reps must be >= 2");
    if (params.years < 1) throw std::invalid_argument("null_band: years must be >= 1");
    if (!(params.lower_pct >= 0.0 && params.lower_pct <= params.upper_pct &&
          params.upper_pct <= 100.0))
        throw std::invalid_argument("null_band: bad percentile bounds");
    if (!params.per_cell_p.empty()) {
        if (params.per_cell_p.size() != static_cast<std::size_t>(params.n_cells))
            throw std::invalid_argument("null_band: per_cell_p size must match n_cells");
        for (double q : params.per_cell_p)
            if (!(q >= 0.0 && q <= 1.0))
                throw std::invalid_argument("null_band: per-cell p out of [0, 1]");
    }

    NullBand out;
    out.params = params;
    out.seed = seed;
    out.bands.resize(static_cast<std::size_t>(params.years));

    const auto years = static_cast<std::size_t>(params.years);
    const auto reps = static_cast<std::size_t>(params.reps);
    std::vector<double> year_sum(years, 0.0);
    std::vector<double> year_sq(years, 0.0);

    parallel_for(years, [&](std::size_t y) {
        std::vector<int> counts(reps, 0);
        for (std::size_t r = 0; r < reps; ++r) {
            auto gen = rng::substream(seed, rng::kSaltNullBand, y, r);
            int count = 0;
            if (params.per_cell_p.empty()) {
                const long long draws = 12LL * params.n_cells;
                for (long long d = 0; d < draws; ++d)
                    if (gen.uniform01() < params.p) ++count;
            } else {
                for (double q : params.per_cell_p)
                    for (int m = 0; m < 12; ++m)
                        if (gen.uniform01() < q) ++count;
            }
            counts[r] = count;
            year_sum[y] += count;
            year_sq[y] += static_cast<double>(count) * count;
        }
        std::sort(counts.begin(), counts.end());
        out.bands[y] = {params.start_year + static_cast<int>(y),
                        nearest_rank(counts, params.lower_pct),
                        nearest_rank(counts, params.upper_pct)};
    });

    const double n_total = static_cast<double>(years) * static_cast<double>(reps);
    double sum = 0.0, sq = 0.0;
    for (std::size_t y = 0; y < years; ++y) {
        sum += year_sum[y];
        sq += year_sq[y];
    }
    out.replicate_mean = sum / n_total;
    out.replicate_variance = sq / n_total - out.replicate_mean * out.replicate_mean;
    return out;
}

BandExceedance band_exceedance(const CountSeries& counts, const NullBand& band) {
    const std::size_t years = band.bands.size();
    if (counts.annual.size() != years || counts.start_year() != band.params.start_year)
        throw std::invalid_argument("band_exceedance: year ranges do not match");

    BandExceedance out;
    out.positions.reserve(years);
    for (std::size_t y = 0; y < years; ++y) {
        const int c = counts.annual[y];
        if (c < band.bands[y].lower)
            out.positions.push_back(BandPosition::Below);
        else if (c > band.bands[y].upper)
            out.positions.push_back(BandPosition::Above);
        else
            out.positions.push_back(BandPosition::Inside);
    }

    for (std::size_t y = 0; y + 2 < years; ++y) {
        if (out.positions[y] == BandPosition::Above &&
            out.positions[y + 1] == BandPosition::Above &&
            out.positions[y + 2] == BandPosition::Above) {
            out.sustained_onset_year = band.bands[y].year;
            break;
        }
    }
    return out;
}

}  // namespace drex
