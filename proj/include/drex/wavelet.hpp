#pragma once

#include <optional>
#include <vector>

namespace drex {

struct WaveletOptions {
    double omega0 = 6.0;
    double min_period = 2.0;     // years
    double max_period = 0.0;     // 0 = n/2
    int voices_per_octave = 8;
    bool detrend = true;         // remove the OLS line before transforming
};

// Morlet continuous wavelet transform of an annual series: mean-removed
// (optionally detrended), zero-padded to the next power of two, convolved
// scale-wise in the frequency domain. Power is normalized so white noise has
// expected power equal to the series variance at every scale.
struct WaveletSpectrum {
    std::vector<double> periods;              // strictly increasing, years
    std::vector<std::vector<double>> power;   // [scale][time], |CWT|^2
    std::vector<double> global;               // per-scale time-mean power
    std::vector<double> coi;                  // per-time max reliable period
    std::vector<double> significance;         // per-scale white-noise 95% level
    double series_variance = 0.0;
    double fourier_factor = 0.0;              // period = scale * fourier_factor
};

// Requires n >= 16 and finite values.
WaveletSpectrum cwt_morlet(const std::vector<double>& series, const WaveletOptions& options = {});

struct DominantPeriod {
    std::optional<double> period;  // absent when nothing is significant
    bool significant = false;
};

// Argmax of global power over scales exceeding the white-noise threshold.
DominantPeriod dominant_period(const WaveletSpectrum& spectrum);

}  // namespace drex
