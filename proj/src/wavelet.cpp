#include "drex/wavelet.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "drex/trend.hpp"

namespace drex {

namespace {

constexpr double kChi2TwoDof95 = 5.991464547107979;  // 95% quantile of chi-squared(2)

// iterative radix-2 FFT, n a power of two, unnormalized
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                           (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

WaveletSpectrum cwt_morlet(const std::vector<double>& series, const WaveletOptions& options) {
    const std::size_t n = series.size();
    if (n < 16) throw std::invalid_argument("cwt_morlet: need at least 16 points");
    for (double v : series)
        if (!std::isfinite(v)) throw std::invalid_argument("cwt_morlet: non-finite value");
    if (options.voices_per_octave < 1)
        throw std::invalid_argument("cwt_morlet: voices_per_octave must be >= 1");
    if (!(options.omega0 > 0.0)) throw std::invalid_argument("cwt_morlet: omega0 must be > 0");

    // preprocess: remove the OLS line (or just the mean)
    std::vector<double> y(series);
    if (options.detrend) {
        const OlsFit fit = ols_trend(series, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            y[i] -= fit.intercept + fit.slope * static_cast<double>(i);
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double variance = 0.0;
    for (auto& v : y) {
        v -= mean;
        variance += v * v;
    }
    variance /= static_cast<double>(n);

    const std::size_t n2 = std::bit_ceil(n);
    std::vector<std::complex<double>> xhat(n2, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) xhat[i] = {y[i], 0.0};
    fft_inplace(xhat, false);
    for (auto& c : xhat) c /= static_cast<double>(n2);

    WaveletSpectrum spec;
    const double w0 = options.omega0;
    spec.fourier_factor = 4.0 * std::numbers::pi / (w0 + std::sqrt(2.0 + w0 * w0));
    spec.series_variance = variance;

    const double max_period =
        options.max_period > 0.0 ? options.max_period : static_cast<double>(n) / 2.0;
    for (int j = 0;; ++j) {
        const double period =
            options.min_period *
            std::pow(2.0, static_cast<double>(j) / static_cast<double>(options.voices_per_octave));
        if (period > max_period * (1.0 + 1e-12)) break;
        spec.periods.push_back(period);
    }
    if (spec.periods.size() < 2) throw std::invalid_argument("cwt_morlet: empty scale range");

    const double norm_pi = std::pow(std::numbers::pi, -0.25);
    spec.power.resize(spec.periods.size());
    spec.global.resize(spec.periods.size());
    std::vector<std::complex<double>> w(n2);
    for (std::size_t si = 0; si < spec.periods.size(); ++si) {
        const double s = spec.periods[si] / spec.fourier_factor;
        const double norm = std::sqrt(2.0 * std::numbers::pi * s) * norm_pi;
        for (std::size_t kk = 0; kk < n2; ++kk) {
            // angular frequency of bin kk at unit time step
            const double omega =
                2.0 * std::numbers::pi *
                (kk <= n2 / 2 ? static_cast<double>(kk)
                              : static_cast<double>(kk) - static_cast<double>(n2)) /
                static_cast<double>(n2);
            if (omega > 0.0) {
                const double arg = s * omega - w0;
                w[kk] = xhat[kk] * (norm * std::exp(-0.5 * arg * arg));
            } else {
                w[kk] = {0.0, 0.0};
            }
        }
        fft_inplace(w, true);
        auto& row = spec.power[si];
        row.resize(n);
        double sum = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            row[t] = std::norm(w[t]);
            sum += row[t];
        }
        spec.global[si] = sum / static_cast<double>(n);
    }

    // e-folding time sqrt(2)*scale, expressed as the largest reliable period
    spec.coi.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double d = static_cast<double>(std::min(t, n - 1 - t));
        spec.coi[t] = spec.fourier_factor * d / std::sqrt(2.0);
    }

    spec.significance.assign(spec.periods.size(), variance * kChi2TwoDof95 / 2.0);
    return spec;
}

DominantPeriod dominant_period(const WaveletSpectrum& spectrum) {
    DominantPeriod out;
    double best = -1.0;
    for (std::size_t s = 0; s < spectrum.periods.size(); ++s) {
        if (spectrum.global[s] > spectrum.significance[s] && spectrum.global[s] > best) {
            best = spectrum.global[s];
            out.period = spectrum.periods[s];
            out.significant = true;
        }
    }
    return out;
}

}  // namespace drex
