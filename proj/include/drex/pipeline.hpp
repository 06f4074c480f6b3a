#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drex/cluster.hpp"
#include "drex/grid.hpp"
#include "drex/synthetic.hpp"

namespace drex::pipeline {

// Effective settings of one run. Defaults reproduce the reference analysis:
// k = 10 events per cell over 1900-01..2014-12, 100 band replicates with
// p = 10/1380, silhouette-selected cluster count.
struct RunConfig {
    std::string input;
    PeriodRange period = kStudyPeriod;
    int k = 10;

    // clustering
    int cluster_k = 0;  // 0 = auto
    int k_min = 2;
    int k_max = 10;
    std::string scaling = "none";  // none | standardize
    int restarts = 10;
    std::string cluster_points = "rank1";  // rank1 | all10

    // null band
    int band_reps = 100;
    int band_cells = 2755;       // standalone nullband runs only
    double band_p = -1.0;        // negative = k / months of the period
    std::string p_mode = "uniform";  // uniform | availability

    // wavelet
    double wavelet_omega0 = 6.0;
    int wavelet_voices = 8;
    bool wavelet_detrend = true;
    double wavelet_min_period = 2.0;
    double wavelet_max_period = 0.0;  // 0 = half the series length

    // ingestion
    double missing_sentinel = -99.99;
    bool strict = false;

    // run control
    std::uint64_t seed = 42;
    std::string out_dir;
    bool write_csv = true;
    bool write_geojson = true;
    bool write_svg = true;
    int verbosity = 1;  // 0 quiet, 1 normal, 2 verbose
};

// "YYYY-MM..YYYY-MM"; throws UsageError on malformed input.
PeriodRange parse_period(const std::string& text);
std::string format_period(const PeriodRange& period);

// key=value file, # comments. Unknown keys are usage errors. Flags given on
// the command line are applied after the file, so they win.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Replayable serialization: everything that shapes the outputs, nothing that
// merely locates them (no out_dir, no thread cap, no verbosity).
std::string serialize_config(const RunConfig& cfg);

// Each command writes its declared files under cfg.out_dir atomically and
// returns a human-readable summary for stdout.
std::string run_synth(const RunConfig& cfg, const SyntheticSpec& spec);
std::string run_ingest(const RunConfig& cfg);
std::string run_coverage(const RunConfig& cfg);
std::string run_extract(const RunConfig& cfg);
std::string run_classify_values(const std::vector<double>& values);
std::string run_classify_input(const RunConfig& cfg);
std::string run_cluster(const RunConfig& cfg);
std::string run_trend(const RunConfig& cfg);
std::string run_nullband(const RunConfig& cfg);
std::string run_wavelet(const RunConfig& cfg);
std::string run_report(const RunConfig& cfg);

}  // namespace drex::pipeline
