#include "drex/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drex/parallel.hpp"

namespace drex {

PalmerClass classify_pdsi(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("classify_pdsi: non-finite value");
    if (value <= -4.0) return PalmerClass::ExtremeDrought;
    if (value <= -3.0) return PalmerClass::SevereDrought;
    if (value <= -2.0) return PalmerClass::ModerateDrought;
    if (value <= -1.0) return PalmerClass::MildDrought;
    if (value <= -0.5) return PalmerClass::IncipientDrySpell;
    if (value < 0.5) return PalmerClass::NearNormal;
    if (value < 1.0) return PalmerClass::IncipientWetSpell;
    if (value < 2.0) return PalmerClass::SlightlyWet;
    if (value < 3.0) return PalmerClass::ModeratelyWet;
    if (value < 4.0) return PalmerClass::VeryWet;
    return PalmerClass::ExtremelyWet;
}

std::string_view palmer_label(PalmerClass c) {
    switch (c) {
        case PalmerClass::ExtremeDrought: return "extreme_drought";
        case PalmerClass::SevereDrought: return "severe_drought";
        case PalmerClass::ModerateDrought: return "moderate_drought";
        case PalmerClass::MildDrought: return "mild_drought";
        case PalmerClass::IncipientDrySpell: return "incipient_dry_spell";
        case PalmerClass::NearNormal: return "near_normal";
        case PalmerClass::IncipientWetSpell: return "incipient_wet_spell";
        case PalmerClass::SlightlyWet: return "slightly_wet";
        case PalmerClass::ModeratelyWet: return "moderately_wet";
        case PalmerClass::VeryWet: return "very_wet";
        case PalmerClass::ExtremelyWet: return "extremely_wet";
    }
    return "unknown";
}

LnpvSet extract_lnpv(const PdsiSeries& series, int k) {
    if (k < 1) throw std::invalid_argument("extract_lnpv: k must be >= 1");

    std::vector<ExtremeEvent> events;
    events.reserve(series.valid_count());
    for (int m = 0; m < series.period().months(); ++m) {
        const auto v = series.at_offset(m);
        if (v) events.push_back({series.cell(), series.period().at(m), *v});
    }
    if (events.empty()) throw DataError("extract_lnpv: series has no present values");

    const auto by_severity = [](const ExtremeEvent& a, const ExtremeEvent& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.when < b.when;  // ties: earlier month first
    };
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), events.size());
    std::partial_sort(events.begin(), events.begin() + static_cast<std::ptrdiff_t>(take),
                      events.end(), by_severity);
    events.resize(take);

    LnpvSet out{series.cell(), std::move(events), k, false};
    out.never_extreme = out.events.front().value > -4.0;
    return out;
}

std::vector<LnpvSet> lnpv_map(const GridDataset& dataset, int k) {
    std::vector<LnpvSet> out(dataset.n_cells());
    parallel_for(dataset.n_cells(),
                 [&](std::size_t i) { out[i] = extract_lnpv(dataset.cells()[i], k); });
    return out;
}

}  // namespace drex
