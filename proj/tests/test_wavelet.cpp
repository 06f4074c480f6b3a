#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "drex/rng.hpp"
#include "drex/synthetic.hpp"
#include "drex/trend.hpp"
#include "drex/wavelet.hpp"

using namespace drex;

namespace {

std::vector<double> sine_series(int n, double period, double noise_sd, std::uint64_t seed) {
    auto gen = rng::substream(seed, 9001);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        y[static_cast<std::size_t>(t)] =
            std::sin(2.0 * std::numbers::pi * t / period) + noise_sd * gen.normal();
    return y;
}

double total_power(const WaveletSpectrum& spec) {
    double sum = 0.0;
    for (const auto& row : spec.power)
        for (double v : row) sum += v;
    return sum;
}

}  // namespace

TEST_CASE("spectrum structure") {
    const auto spec = cwt_morlet(sine_series(115, 8.0, 0.3, 1));
    CHECK(spec.periods.front() == doctest::Approx(2.0));
    CHECK(spec.periods.back() <= 57.5 * (1 + 1e-9));
    for (std::size_t s = 1; s < spec.periods.size(); ++s)
        CHECK(spec.periods[s] > spec.periods[s - 1]);
    REQUIRE(spec.power.size() == spec.periods.size());
    for (std::size_t s = 0; s < spec.periods.size(); ++s) {
        REQUIRE(spec.power[s].size() == 115);
        double mean = 0.0;
        for (double v : spec.power[s]) {
            CHECK(v >= 0.0);
            mean += v;
        }
        mean /= 115.0;
        CHECK(spec.global[s] == doctest::Approx(mean).epsilon(1e-12));
    }
    // cone of influence: zero at the edges, widest mid-series
    CHECK(spec.coi[0] == 0.0);
    CHECK(spec.coi[114] == 0.0);
    CHECK(spec.coi[57] > spec.coi[10]);
    CHECK(spec.fourier_factor == doctest::Approx(4.0 * std::numbers::pi /
                                                 (6.0 + std::sqrt(38.0))));
}

TEST_CASE("planted sinusoid dominates near its period") {
    const auto spec = cwt_morlet(sine_series(115, 8.0, 0.3, 2));
    const auto dom = dominant_period(spec);
    REQUIRE(dom.significant);
    REQUIRE(dom.period.has_value());
    CHECK(*dom.period >= 7.0);
    CHECK(*dom.period <= 9.0);
}

TEST_CASE("zero series has zero power and no dominant period") {
    const std::vector<double> zeros(115, 0.0);
    const auto spec = cwt_morlet(zeros);
    CHECK(total_power(spec) == 0.0);
    const auto dom = dominant_period(spec);
    CHECK_FALSE(dom.significant);
    CHECK_FALSE(dom.period.has_value());
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(cwt_morlet(std::vector<double>(10, 1.0)), std::invalid_argument);
    std::vector<double> bad(20, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(cwt_morlet(bad), std::invalid_argument);
}

TEST_CASE("power is quadratic in the input amplitude") {
    WaveletOptions opt;
    opt.detrend = false;
    const auto base = sine_series(64, 6.0, 0.5, 3);
    std::vector<double> scaled(base);
    for (auto& v : scaled) v *= 3.0;
    const auto a = cwt_morlet(base, opt);
    const auto b = cwt_morlet(scaled, opt);
    for (std::size_t s = 0; s < a.power.size(); ++s)
        for (std::size_t t = 0; t < a.power[s].size(); ++t)
            CHECK(b.power[s][t] == doctest::Approx(9.0 * a.power[s][t]).epsilon(1e-9));
}

TEST_CASE("circular shift moves power columns when no padding is added") {
    // n = 128 is already a power of two, so the transform is exactly circular
    WaveletOptions opt;
    opt.detrend = false;
    auto gen = rng::substream(44, 9002);
    std::vector<double> y(128);
    for (auto& v : y) v = gen.normal();
    const int shift = 13;
    std::vector<double> shifted(128);
    for (int t = 0; t < 128; ++t) shifted[static_cast<std::size_t>((t + shift) % 128)] = y[static_cast<std::size_t>(t)];

    const auto a = cwt_morlet(y, opt);
    const auto b = cwt_morlet(shifted, opt);
    for (std::size_t s = 0; s < a.power.size(); ++s)
        for (std::size_t t = 0; t < 128; ++t) {
            const std::size_t t2 = (t + static_cast<std::size_t>(shift)) % 128;
            CHECK(b.power[s][t2] ==
                  doctest::Approx(a.power[s][t]).epsilon(1e-9).scale(1.0 + a.power[s][t]));
        }
}

TEST_CASE("total power tracks series variance") {
    std::vector<double> powers, variances;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto gen = rng::substream(seed, 9003);
        const double amp = 0.2 + 3.0 * gen.uniform01();
        std::vector<double> y(64);
        for (auto& v : y) v = amp * gen.normal();
        WaveletOptions opt;
        opt.detrend = false;
        const auto spec = cwt_morlet(y, opt);
        powers.push_back(total_power(spec));
        variances.push_back(spec.series_variance);
    }
    const double n = 50.0;
    double mp = 0, mv = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        mp += powers[i];
        mv += variances[i];
    }
    mp /= n;
    mv /= n;
    double cov = 0, vp = 0, vv = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        cov += (powers[i] - mp) * (variances[i] - mv);
        vp += (powers[i] - mp) * (powers[i] - mp);
        vv += (variances[i] - mv) * (variances[i] - mv);
    }
    CHECK(cov / std::sqrt(vp * vv) > 0.5);
}

TEST_CASE("white noise rarely exceeds the pointwise threshold outside the cone") {
    long long total = 0, exceed = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto gen = rng::substream(seed, 9004);
        std::vector<double> y(115);
        for (auto& v : y) v = gen.normal();
        WaveletOptions opt;
        opt.detrend = false;
        const auto spec = cwt_morlet(y, opt);
        for (std::size_t s = 0; s < spec.periods.size(); ++s)
            for (std::size_t t = 0; t < 115; ++t)
                if (spec.periods[s] <= spec.coi[t]) {
                    ++total;
                    exceed += spec.power[s][t] > spec.significance[s] ? 1 : 0;
                }
    }
    CHECK(total > 100000);
    CHECK(static_cast<double>(exceed) / static_cast<double>(total) <= 0.10);
}

TEST_CASE("stationary synthetic counts rarely show a significant period") {
    // Family-wise false positives of the per-scale 95% threshold land near
    // 10-12% here, so the bound carries a measured margin.
    int significant = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SyntheticSpec spec;
        spec.n_cells = 100;
        spec.ar1_phi = 0.0;
        const GridDataset ds = generate_synthetic(spec, seed);
        const auto counts = monthly_lnpv_counts(ds, 10);
        const std::vector<double> annual(counts.annual.begin(), counts.annual.end());
        significant += dominant_period(cwt_morlet(annual)).significant ? 1 : 0;
    }
    CHECK(significant <= 15);
}
