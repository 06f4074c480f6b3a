#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "drex/extremes.hpp"
#include "drex/parallel.hpp"
#include "drex/rng.hpp"
#include "drex/synthetic.hpp"

using namespace drex;

namespace {

// boundary table written out independently of the implementation
PalmerClass oracle_class(double v) {
    if (v <= -4.0) return PalmerClass::ExtremeDrought;
    if (v > -4.0 && v <= -3.0) return PalmerClass::SevereDrought;
    if (v > -3.0 && v <= -2.0) return PalmerClass::ModerateDrought;
    if (v > -2.0 && v <= -1.0) return PalmerClass::MildDrought;
    if (v > -1.0 && v <= -0.5) return PalmerClass::IncipientDrySpell;
    if (v > -0.5 && v < 0.5) return PalmerClass::NearNormal;
    if (v >= 0.5 && v < 1.0) return PalmerClass::IncipientWetSpell;
    if (v >= 1.0 && v < 2.0) return PalmerClass::SlightlyWet;
    if (v >= 2.0 && v < 3.0) return PalmerClass::ModeratelyWet;
    if (v >= 3.0 && v < 4.0) return PalmerClass::VeryWet;
    return PalmerClass::ExtremelyWet;
}

PdsiSeries make_series(const std::vector<std::pair<int, double>>& month_values,
                       PeriodRange period = PeriodRange{{1900, 1}, {1900, 12}}) {
    PdsiSeries s(GridCoordinate{0, 0}, period);
    for (const auto& [off, v] : month_values) s.set(period.at(off), v);
    return s;
}

}  // namespace

TEST_CASE("palmer classification boundaries") {
    CHECK(classify_pdsi(-4.5) == PalmerClass::ExtremeDrought);
    CHECK(classify_pdsi(-4.0) == PalmerClass::ExtremeDrought);
    CHECK(classify_pdsi(-3.0) == PalmerClass::SevereDrought);
    CHECK(classify_pdsi(-2.0) == PalmerClass::ModerateDrought);
    CHECK(classify_pdsi(-1.0) == PalmerClass::MildDrought);
    CHECK(classify_pdsi(-0.5) == PalmerClass::IncipientDrySpell);
    CHECK(classify_pdsi(-0.49) == PalmerClass::NearNormal);
    CHECK(classify_pdsi(0.0) == PalmerClass::NearNormal);
    CHECK(classify_pdsi(0.49) == PalmerClass::NearNormal);
    CHECK(classify_pdsi(0.5) == PalmerClass::IncipientWetSpell);
    CHECK(classify_pdsi(1.0) == PalmerClass::SlightlyWet);
    CHECK(classify_pdsi(2.0) == PalmerClass::ModeratelyWet);
    CHECK(classify_pdsi(3.0) == PalmerClass::VeryWet);
    CHECK(classify_pdsi(4.0) == PalmerClass::ExtremelyWet);
    CHECK(classify_pdsi(7.25) == PalmerClass::ExtremelyWet);
    CHECK(classify_pdsi(-9.75) == PalmerClass::ExtremeDrought);

    CHECK_THROWS_AS(classify_pdsi(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_pdsi(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("palmer classification is total and matches the table on a fine grid") {
    for (int i = -1100; i <= 1100; ++i) {
        const double v = i / 100.0;
        CHECK(classify_pdsi(v) == oracle_class(v));
    }
    // random values too
    auto gen = rng::substream(404, 1);
    for (int i = 0; i < 2000; ++i) {
        const double v = 22.0 * gen.uniform01() - 11.0;
        CHECK(classify_pdsi(v) == oracle_class(v));
    }
}

TEST_CASE("palmer labels") {
    CHECK(palmer_label(PalmerClass::ExtremeDrought) == "extreme_drought");
    CHECK(palmer_label(PalmerClass::NearNormal) == "near_normal");
    CHECK(palmer_label(PalmerClass::ExtremelyWet) == "extremely_wet");
}

TEST_CASE("extract_lnpv basics") {
    SUBCASE("fewer present values than k returns all of them") {
        const auto s = make_series({{0, -2.0}});
        const auto set = extract_lnpv(s, 10);
        REQUIRE(set.events.size() == 1);
        CHECK(set.events[0].value == -2.0);
        CHECK(set.events[0].when == MonthStamp{1900, 1});
        CHECK(set.capacity == 10);
        CHECK(set.never_extreme);  // -2.0 is above the extreme bound
    }

    SUBCASE("ties broken by earlier month") {
        const auto s = make_series({{0, -1.0}, {1, -5.0}, {2, -5.0}, {3, -3.0}});
        const auto set = extract_lnpv(s, 2);
        REQUIRE(set.events.size() == 2);
        CHECK(set.events[0].value == -5.0);
        CHECK(set.events[0].when == MonthStamp{1900, 2});
        CHECK(set.events[1].value == -5.0);
        CHECK(set.events[1].when == MonthStamp{1900, 3});
        CHECK_FALSE(set.never_extreme);
    }

    SUBCASE("errors") {
        const auto s = make_series({{0, -2.0}});
        CHECK_THROWS_AS(extract_lnpv(s, 0), std::invalid_argument);
        const PdsiSeries empty(GridCoordinate{0, 0}, PeriodRange{{1900, 1}, {1900, 12}});
        CHECK_THROWS_AS(extract_lnpv(empty, 10), DataError);
    }
}

TEST_CASE("extract_lnpv equals a brute-force sort for every k") {
    auto gen = rng::substream(515, 2);
    for (int trial = 0; trial < 30; ++trial) {
        const PeriodRange period{{1900, 1}, {1904, 12}};
        PdsiSeries s(GridCoordinate{3, 4}, period);
        std::vector<std::pair<double, int>> present;  // (value, offset)
        for (int m = 0; m < period.months(); ++m) {
            if (gen.uniform01() < 0.3) continue;  // missing
            // coarse quantization forces plenty of ties
            const double v = std::floor(gen.uniform01() * 12.0) - 8.0;
            s.set(period.at(m), v);
            present.emplace_back(v, m);
        }
        if (present.empty()) continue;

        std::sort(present.begin(), present.end());  // value, then earlier offset
        for (int k = 1; k <= static_cast<int>(present.size()); ++k) {
            const auto set = extract_lnpv(s, k);
            REQUIRE(set.events.size() == static_cast<std::size_t>(k));
            for (int e = 0; e < k; ++e) {
                CHECK(set.events[static_cast<std::size_t>(e)].value ==
                      present[static_cast<std::size_t>(e)].first);
                CHECK(period.offset(set.events[static_cast<std::size_t>(e)].when) ==
                      present[static_cast<std::size_t>(e)].second);
            }
        }

        // monotone nesting: events of k are a prefix of events of k+1
        for (int k = 1; k < static_cast<int>(present.size()); ++k) {
            const auto a = extract_lnpv(s, k);
            const auto b = extract_lnpv(s, k + 1);
            for (std::size_t e = 0; e < a.events.size(); ++e) CHECK(a.events[e] == b.events[e]);
        }
    }
}

TEST_CASE("lnpv_map on a synthetic dataset") {
    SyntheticSpec spec;
    spec.n_cells = 3;
    spec.period = PeriodRange{{1900, 1}, {1909, 12}};
    spec.missing_fraction = 0.4;
    const GridDataset ds = generate_synthetic(spec, 99);

    const auto sets = lnpv_map(ds, 10);
    REQUIRE(sets.size() == 3);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto& set = sets[i];
        CHECK(set.cell == ds.cells()[i].cell());
        CHECK(set.events.size() ==
              std::min<std::size_t>(10, ds.cells()[i].valid_count()));
        // ordered most negative first, ties by month, no month twice
        for (std::size_t e = 1; e < set.events.size(); ++e) {
            const auto& prev = set.events[e - 1];
            const auto& cur = set.events[e];
            CHECK((prev.value < cur.value ||
                   (prev.value == cur.value && prev.when < cur.when)));
        }
        // every event is a present value of the series
        for (const auto& e : set.events) CHECK(ds.cells()[i].at(e.when) == e.value);
    }

    // a cell whose minimum lands in a given year appears in that year's slice
    const auto& first = sets[0];
    const int min_year = first.events[0].when.year;
    int slice = 0;
    for (const auto& set : sets) slice += (set.events[0].when.year == min_year) ? 1 : 0;
    CHECK(slice >= 1);
}

TEST_CASE("lnpv_map is deterministic and worker-count independent") {
    SyntheticSpec spec;
    spec.n_cells = 6;
    spec.period = PeriodRange{{1900, 1}, {1901, 12}};
    const GridDataset ds = generate_synthetic(spec, 123);
    const auto a = lnpv_map(ds, 5);
    const auto b = lnpv_map(ds, 5);
    CHECK(a == b);

    set_max_threads(1);
    const auto serial = lnpv_map(ds, 5);
    set_max_threads(3);
    const auto parallel = lnpv_map(ds, 5);
    set_max_threads(0);
    CHECK(serial == parallel);
}
