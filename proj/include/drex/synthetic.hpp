#pragma once

#include <cstdint>

#include "drex/grid.hpp"

namespace drex {

// Testing substitute for the non-redistributable PDSI export. Each cell is an
// AR(1) series rescaled so its stationary standard deviation maps to 2.0 (a
// plausible extreme-drought rate: values below -4 on ~2.3% of months), with
// optional linear drift and independent missingness.
struct SyntheticSpec {
    int n_cells = 100;  // 1..7920
    PeriodRange period = kStudyPeriod;
    double ar1_phi = 0.9;          // [0, 1)
    double noise_sd = 1.0;         // > 0
    double trend_per_century = 0.0;
    double missing_fraction = 0.0; // [0, 1)
};

// Pure function of (spec, seed); cells are spread over the lattice by stride.
GridDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace drex
