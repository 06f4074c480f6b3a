#pragma once

#include <string_view>
#include <vector>

#include "drex/grid.hpp"

namespace drex {

// Palmer classification. The published table prints gapped interval ends;
// here the eleven classes partition the real line with shared negative
// boundaries assigned to the more severe class, mirrored on the wet side.
enum class PalmerClass {
    ExtremeDrought,     // v <= -4
    SevereDrought,      // -4 < v <= -3
    ModerateDrought,    // -3 < v <= -2
    MildDrought,        // -2 < v <= -1
    IncipientDrySpell,  // -1 < v <= -0.5
    NearNormal,         // -0.5 < v < 0.5
    IncipientWetSpell,  // 0.5 <= v < 1
    SlightlyWet,        // 1 <= v < 2
    ModeratelyWet,      // 2 <= v < 3
    VeryWet,            // 3 <= v < 4
    ExtremelyWet,       // v >= 4
};

// Throws std::invalid_argument on non-finite input.
PalmerClass classify_pdsi(double value);

std::string_view palmer_label(PalmerClass c);

struct ExtremeEvent {
    GridCoordinate cell;
    MonthStamp when;
    double value = 0.0;

    bool operator==(const ExtremeEvent&) const = default;
};

// A cell's k most negative monthly values, most negative first, ties broken
// by earlier month. never_extreme flags cells whose deepest value stays above
// the extreme-drought bound.
struct LnpvSet {
    GridCoordinate cell;
    std::vector<ExtremeEvent> events;
    int capacity = 10;
    bool never_extreme = false;

    bool operator==(const LnpvSet&) const = default;
};

// k >= 1; a series with fewer present values yields all of them.
LnpvSet extract_lnpv(const PdsiSeries& series, int k);

// One LnpvSet per cell, in dataset cell order. May evaluate cells
// concurrently; the result does not depend on scheduling.
std::vector<LnpvSet> lnpv_map(const GridDataset& dataset, int k);

}  // namespace drex
