#include "drex/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "drex/parallel.hpp"
#include "drex/rng.hpp"

namespace drex {

GridDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.n_cells < 1 || spec.n_cells > kLatticeSize)
        throw std::invalid_argument("n_cells must be in 1..7920");
    if (!(spec.ar1_phi >= 0.0 && spec.ar1_phi < 1.0))
        throw std::invalid_argument("ar1_phi must be in [0, 1)");
    if (!(spec.noise_sd > 0.0)) throw std::invalid_argument("noise_sd must be positive");
    if (!(spec.missing_fraction >= 0.0 && spec.missing_fraction < 1.0))
        throw std::invalid_argument("missing_fraction must be in [0, 1)");
    if (!std::isfinite(spec.trend_per_century))
        throw std::invalid_argument("trend_per_century must be finite");
    if (spec.period.start > spec.period.end) throw std::invalid_argument("invalid period");

    const int months = spec.period.months();
    const double stationary_sd = spec.noise_sd / std::sqrt(1.0 - spec.ar1_phi * spec.ar1_phi);
    const double scale = 2.0 / stationary_sd;

    std::vector<std::vector<double>> values(static_cast<std::size_t>(spec.n_cells));
    parallel_for(static_cast<std::size_t>(spec.n_cells), [&](std::size_t i) {
        auto gen = rng::substream(seed, rng::kSaltSynthetic, i);
        auto& out = values[i];
        out.assign(static_cast<std::size_t>(months), std::nan(""));
        double x = stationary_sd * gen.normal();  // stationary start, no burn-in
        for (int m = 0; m < months; ++m) {
            if (m > 0) x = spec.ar1_phi * x + spec.noise_sd * gen.normal();
            double v = scale * x + spec.trend_per_century * (m / 1200.0);
            v = std::clamp(v, -10.0, 10.0);
            const bool missing = gen.uniform01() < spec.missing_fraction;
            if (!missing) out[static_cast<std::size_t>(m)] = v;
        }
    });

    std::vector<PdsiSeries> cells;
    cells.reserve(static_cast<std::size_t>(spec.n_cells));
    for (int i = 0; i < spec.n_cells; ++i) {
        // stride placement spreads the cells over the lattice
        const int cell_id = static_cast<int>(static_cast<long long>(i) * kLatticeSize / spec.n_cells);
        PdsiSeries s(GridCoordinate::from_cell_id(cell_id), spec.period);
        bool any = false;
        for (int m = 0; m < months; ++m) {
            const double v = values[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
            if (!std::isnan(v)) {
                s.set(spec.period.at(m), v);
                any = true;
            }
        }
        if (any) cells.push_back(std::move(s));
    }
    if (cells.empty()) throw DataError("synthetic generation produced no populated cells");
    return GridDataset(spec.period, std::move(cells));
}

}  // namespace drex
