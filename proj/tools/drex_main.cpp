#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include "drex/common.hpp"
#include "drex/parallel.hpp"
#include "drex/pipeline.hpp"
#include "drex/synthetic.hpp"

using drex::pipeline::RunConfig;

namespace {

struct CommonFlags {
    std::string period_text;
    std::string formats;
    std::string config_path;  // consumed here; applied in the pre-scan
    unsigned threads = 0;
    bool quiet = false;
    bool verbose = false;
};

void add_common(CLI::App* sub, RunConfig& cfg, CommonFlags& flags) {
    sub->add_option("-o,--out", cfg.out_dir, "Output directory");
    sub->add_option("--seed", cfg.seed, "Seed for all randomness");
    sub->add_option("--period", flags.period_text, "Analysis window, YYYY-MM..YYYY-MM");
    sub->add_option("--threads", flags.threads, "Worker cap (0 = all cores); never affects results");
    sub->add_option("--config", flags.config_path, "key=value config file; flags win");
    sub->add_option("--formats", flags.formats, "Comma list of csv,geojson,svg");
    sub->add_flag("--quiet", flags.quiet, "Suppress the summary");
    sub->add_flag("--verbose", flags.verbose, "More logging on stderr");
}

void add_input(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("-i,--input", cfg.input, "Input PDSI CSV (lon,lat,year,month,pdsi)");
}

void add_cluster_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--clusters", cfg.cluster_k, "Cluster count; 0 = silhouette-selected");
    sub->add_option("--k-min", cfg.k_min, "Smallest k tried in auto mode");
    sub->add_option("--k-max", cfg.k_max, "Largest k tried in auto mode");
    sub->add_option("--scaling", cfg.scaling, "Feature scaling: none|standardize");
    sub->add_option("--restarts", cfg.restarts, "Independent K-means restarts");
    sub->add_option("--points", cfg.cluster_points, "Points clustered: rank1|all10");
}

void add_band_flags(CLI::App* sub, RunConfig& cfg, bool with_cells) {
    sub->add_option("--reps", cfg.band_reps, "Monte Carlo replicates per year");
    sub->add_option("--p", cfg.band_p, "Per-draw probability; negative = k / months");
    sub->add_option("--p-mode", cfg.p_mode, "uniform|availability");
    if (with_cells) sub->add_option("--cells", cfg.band_cells, "Cell count for the band");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;

    // The config file seeds the defaults, so flags parsed afterwards win.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string_view a = argv[i];
            if (a == "--config" && i + 1 < argc) {
                drex::pipeline::apply_config_file(cfg, argv[i + 1]);
                break;
            }
            if (a.rfind("--config=", 0) == 0) {
                drex::pipeline::apply_config_file(cfg, std::string(a.substr(9)));
                break;
            }
        }
    } catch (const drex::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    CLI::App app{"drex: extreme-drought extraction, clustering and trend analysis on gridded PDSI"};
    app.require_subcommand(1);
    CommonFlags flags;
    drex::SyntheticSpec synth_spec;
    std::vector<double> classify_values;
    bool respect_availability = false;
    bool no_detrend = false;

    auto* c_synth = app.add_subcommand("synth", "Generate a synthetic PDSI dataset");
    c_synth->add_option("--cells", synth_spec.n_cells, "Number of populated cells");
    c_synth->add_option("--phi", synth_spec.ar1_phi, "AR(1) persistence, [0,1)");
    c_synth->add_option("--noise-sd", synth_spec.noise_sd, "Innovation standard deviation");
    c_synth->add_option("--trend", synth_spec.trend_per_century, "Drift per century");
    c_synth->add_option("--missing", synth_spec.missing_fraction, "Missing-data fraction, [0,1)");
    add_common(c_synth, cfg, flags);

    auto* c_ingest = app.add_subcommand("ingest", "Validate and normalize a PDSI CSV");
    add_input(c_ingest, cfg);
    c_ingest->add_option("--missing-sentinel", cfg.missing_sentinel, "Sentinel for missing values");
    c_ingest->add_flag("--strict", cfg.strict, "Abort on malformed or duplicate rows");
    add_common(c_ingest, cfg, flags);

    auto* c_coverage = app.add_subcommand("coverage", "Per-month missing-data profile");
    add_input(c_coverage, cfg);
    add_common(c_coverage, cfg, flags);

    auto* c_extract = app.add_subcommand("extract", "Largest negative PDSI events per cell");
    add_input(c_extract, cfg);
    c_extract->add_option("-k,--k", cfg.k, "Events per cell");
    add_common(c_extract, cfg, flags);

    auto* c_classify = app.add_subcommand("classify", "Palmer classification");
    c_classify->add_option("--value", classify_values, "PDSI value(s) to classify");
    add_input(c_classify, cfg);
    add_common(c_classify, cfg, flags);

    auto* c_cluster = app.add_subcommand("cluster", "K-means over per-cell extreme points");
    add_input(c_cluster, cfg);
    c_cluster->add_option("-k,--k", cfg.k, "Events per cell for the summaries");
    add_cluster_flags(c_cluster, cfg);
    add_common(c_cluster, cfg, flags);

    auto* c_trend = app.add_subcommand("trend", "Monthly/annual counts, OLS and Mann-Kendall");
    add_input(c_trend, cfg);
    c_trend->add_option("-k,--k", cfg.k, "Events per cell");
    add_common(c_trend, cfg, flags);

    auto* c_nullband = app.add_subcommand("nullband", "Monte Carlo expectation band");
    add_input(c_nullband, cfg);
    c_nullband->add_option("-k,--k", cfg.k, "Events per cell");
    add_band_flags(c_nullband, cfg, true);
    c_nullband->add_flag("--respect-availability", respect_availability,
                         "Per-cell p = k / valid months (needs --input)");
    add_common(c_nullband, cfg, flags);

    auto* c_wavelet = app.add_subcommand("wavelet", "Morlet spectrum of annual counts");
    add_input(c_wavelet, cfg);
    c_wavelet->add_option("-k,--k", cfg.k, "Events per cell");
    c_wavelet->add_option("--omega0", cfg.wavelet_omega0, "Morlet central frequency");
    c_wavelet->add_option("--voices", cfg.wavelet_voices, "Voices per octave");
    c_wavelet->add_option("--min-period", cfg.wavelet_min_period, "Smallest period, years");
    c_wavelet->add_option("--max-period", cfg.wavelet_max_period,
                          "Largest period, years (0 = half the span)");
    c_wavelet->add_flag("--no-detrend", no_detrend, "Skip linear detrending");
    add_common(c_wavelet, cfg, flags);

    auto* c_report = app.add_subcommand("report", "Full pipeline with all tables and plots");
    add_input(c_report, cfg);
    c_report->add_option("-k,--k", cfg.k, "Events per cell");
    add_cluster_flags(c_report, cfg);
    add_band_flags(c_report, cfg, false);
    c_report->add_option("--omega0", cfg.wavelet_omega0, "Morlet central frequency");
    c_report->add_option("--voices", cfg.wavelet_voices, "Voices per octave");
    c_report->add_option("--min-period", cfg.wavelet_min_period, "Smallest period, years");
    c_report->add_option("--max-period", cfg.wavelet_max_period,
                          "Largest period, years (0 = half the span)");
    c_report->add_flag("--no-detrend", no_detrend, "Skip linear detrending");
    add_common(c_report, cfg, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!flags.period_text.empty()) cfg.period = drex::pipeline::parse_period(flags.period_text);
        if (!flags.formats.empty()) {
            cfg.write_csv = flags.formats.find("csv") != std::string::npos;
            cfg.write_geojson = flags.formats.find("geojson") != std::string::npos;
            cfg.write_svg = flags.formats.find("svg") != std::string::npos;
        }
        cfg.verbosity = flags.quiet ? 0 : (flags.verbose ? 2 : 1);
        if (respect_availability) cfg.p_mode = "availability";
        if (no_detrend) cfg.wavelet_detrend = false;
        drex::set_max_threads(flags.threads);
        synth_spec.period = cfg.period;
        if (cfg.verbosity >= 2) {
            std::fprintf(stderr, "[drex] effective settings:\n");
            std::fputs(drex::pipeline::serialize_config(cfg).c_str(), stderr);
        }

        std::string summary;
        if (app.got_subcommand(c_synth)) summary = drex::pipeline::run_synth(cfg, synth_spec);
        else if (app.got_subcommand(c_ingest)) summary = drex::pipeline::run_ingest(cfg);
        else if (app.got_subcommand(c_coverage)) summary = drex::pipeline::run_coverage(cfg);
        else if (app.got_subcommand(c_extract)) summary = drex::pipeline::run_extract(cfg);
        else if (app.got_subcommand(c_classify)) {
            if (!classify_values.empty())
                summary = drex::pipeline::run_classify_values(classify_values);
            else if (!cfg.input.empty())
                summary = drex::pipeline::run_classify_input(cfg);
            else
                throw drex::UsageError("classify needs --value or --input");
        } else if (app.got_subcommand(c_cluster)) summary = drex::pipeline::run_cluster(cfg);
        else if (app.got_subcommand(c_trend)) summary = drex::pipeline::run_trend(cfg);
        else if (app.got_subcommand(c_nullband)) summary = drex::pipeline::run_nullband(cfg);
        else if (app.got_subcommand(c_wavelet)) summary = drex::pipeline::run_wavelet(cfg);
        else if (app.got_subcommand(c_report)) summary = drex::pipeline::run_report(cfg);

        if (cfg.verbosity >= 1) std::fputs(summary.c_str(), stdout);
        return 0;
    } catch (const drex::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const drex::DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
