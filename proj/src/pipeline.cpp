#include "drex/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drex/csv.hpp"
#include "drex/extremes.hpp"
#include "drex/geojson.hpp"
#include "drex/io_util.hpp"
#include "drex/nullband.hpp"
#include "drex/svg.hpp"
#include "drex/trend.hpp"
#include "drex/wavelet.hpp"

namespace drex::pipeline {

namespace fs = std::filesystem;

namespace {

std::string month_str(MonthStamp t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", t.year, t.month);
    return buf;
}

MonthStamp parse_month(const std::string& text) {
    int year = 0, month = 0;
    const auto dash = text.find('-');
    if (dash == std::string::npos) throw UsageError("bad month '" + text + "', want YYYY-MM");
    const auto ok = [](const std::string& s, int& out) {
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc{} && p == s.data() + s.size();
    };
    if (!ok(text.substr(0, dash), year) || !ok(text.substr(dash + 1), month) || month < 1 ||
        month > 12)
        throw UsageError("bad month '" + text + "', want YYYY-MM");
    return MonthStamp{year, month};
}

const fs::path& require_out(const RunConfig& cfg, fs::path& cache) {
    if (cfg.out_dir.empty()) throw UsageError("an output directory is required (--out)");
    cache = cfg.out_dir;
    fs::create_directories(cache);
    return cache;
}

IngestResult load_dataset(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("an input CSV is required (--input)");
    if (!fs::exists(cfg.input)) throw UsageError("input file not found: " + cfg.input);
    IngestOptions opt;
    opt.missing_sentinel = cfg.missing_sentinel;
    opt.strict = cfg.strict;
    opt.period = cfg.period;
    return ingest_csv_file(cfg.input, opt);
}

double resolved_band_p(const RunConfig& cfg) {
    return cfg.band_p >= 0.0 ? cfg.band_p
                             : static_cast<double>(cfg.k) / cfg.period.months();
}

KMeansOptions kmeans_options(const RunConfig& cfg) {
    KMeansOptions opt;
    opt.n_restarts = cfg.restarts;
    if (cfg.scaling == "none")
        opt.scaling = FeatureScaling::None;
    else if (cfg.scaling == "standardize")
        opt.scaling = FeatureScaling::Standardize;
    else
        throw UsageError("unknown scaling '" + cfg.scaling + "' (none|standardize)");
    return opt;
}

ClusterLnpvOptions cluster_options(const RunConfig& cfg) {
    ClusterLnpvOptions opt;
    opt.k = cfg.cluster_k;
    opt.k_min = cfg.k_min;
    opt.k_max = cfg.k_max;
    opt.lnpv_k = cfg.k;
    if (cfg.cluster_points == "rank1")
        opt.points = ClusterPoints::Rank1;
    else if (cfg.cluster_points == "all10")
        opt.points = ClusterPoints::All10;
    else
        throw UsageError("unknown points mode '" + cfg.cluster_points + "' (rank1|all10)");
    opt.kmeans = kmeans_options(cfg);
    return opt;
}

std::string ingest_summary(const IngestResult& r, const RunConfig& cfg) {
    std::ostringstream s;
    s << "cells: " << r.dataset.n_cells() << "\n"
      << "period: " << format_period(r.dataset.period()) << " (" << r.dataset.period().months()
      << " months)\n"
      << "values: " << r.report.rows_ingested << "\n";
    if (r.report.rows_missing) s << "sentinel rows: " << r.report.rows_missing << "\n";
    if (r.report.rows_malformed) s << "malformed rows skipped: " << r.report.rows_malformed << "\n";
    if (r.report.rows_out_of_period)
        s << "rows outside " << format_period(cfg.period) << ": " << r.report.rows_out_of_period
          << "\n";
    if (r.report.duplicate_rows) s << "duplicate rows (last wins): " << r.report.duplicate_rows << "\n";
    if (r.report.out_of_range_values)
        s << "warning: values outside [-10, 10]: " << r.report.out_of_range_values << "\n";
    if (r.report.cells_dropped_empty)
        s << "cells dropped (no data): " << r.report.cells_dropped_empty << "\n";
    return s.str();
}

// ---- CSV writers ----------------------------------------------------------

std::string coverage_csv(const std::vector<CoveragePoint>& profile) {
    std::ostringstream out;
    out << "month_serial,year,month,percent_missing\n";
    for (const auto& p : profile)
        out << p.when.serial() << ',' << p.when.year << ',' << p.when.month << ','
            << fmt_f(p.percent_missing, 6) << '\n';
    return out.str();
}

std::string lnpv_csv(const std::vector<LnpvSet>& sets) {
    std::ostringstream out;
    out << "lon,lat,rank,year,month,pdsi\n";
    for (const auto& s : sets) {
        int rank = 1;
        for (const auto& e : s.events) {
            out << fmt_f(s.cell.lon_deg(), 2) << ',' << fmt_f(s.cell.lat_deg(), 2) << ',' << rank++
                << ',' << e.when.year << ',' << e.when.month << ',' << fmt_g(e.value) << '\n';
        }
    }
    return out.str();
}

std::string clusters_csv(const LnpvClustering& c) {
    std::ostringstream out;
    out << "lon,lat,cluster,t,v\n";
    for (std::size_t i = 0; i < c.cells.size(); ++i)
        out << fmt_f(c.cells[i].lon_deg(), 2) << ',' << fmt_f(c.cells[i].lat_deg(), 2) << ','
            << c.cell_assignments[i] << ',' << fmt_g(c.rank1_points[i].t) << ','
            << fmt_g(c.rank1_points[i].v) << '\n';
    return out.str();
}

std::string silhouette_csv(const std::vector<std::pair<int, double>>& table) {
    std::ostringstream out;
    out << "k,mean_silhouette\n";
    for (const auto& [k, sil] : table) out << k << ',' << fmt_g(sil) << '\n';
    return out.str();
}

std::string cluster_summary_csv(const LnpvClustering& c) {
    std::ostringstream out;
    out << "cluster,n_cells,centroid_t,centroid_v,"
           "v_min,v_q1,v_median,v_q3,v_max,t_min,t_q1,t_median,t_q3,t_max\n";
    for (const auto& s : c.summaries) {
        const Point2& ctr = c.model.centroids[static_cast<std::size_t>(s.cluster)];
        out << s.cluster << ',' << s.n_cells << ',' << fmt_g(ctr.t) << ',' << fmt_g(ctr.v) << ','
            << fmt_g(s.values.min) << ',' << fmt_g(s.values.q1) << ',' << fmt_g(s.values.median)
            << ',' << fmt_g(s.values.q3) << ',' << fmt_g(s.values.max) << ',' << fmt_g(s.years.min)
            << ',' << fmt_g(s.years.q1) << ',' << fmt_g(s.years.median) << ',' << fmt_g(s.years.q3)
            << ',' << fmt_g(s.years.max) << '\n';
    }
    return out.str();
}

std::string monthly_counts_csv(const CountSeries& counts) {
    std::ostringstream out;
    out << "month_serial,year,month,count\n";
    for (std::size_t m = 0; m < counts.monthly.size(); ++m) {
        const MonthStamp t = counts.period.at(static_cast<int>(m));
        out << t.serial() << ',' << t.year << ',' << t.month << ',' << counts.monthly[m] << '\n';
    }
    return out.str();
}

std::string annual_counts_csv(const CountSeries& counts, const NullBand* band) {
    const std::size_t years = counts.annual.size();
    std::vector<double> annual(years);
    for (std::size_t y = 0; y < years; ++y) annual[y] = counts.annual[y];

    std::ostringstream out;
    out << "year,count,ma10,ma20,ma30,band_lo,band_hi\n";
    const int windows[3] = {10, 20, 30};
    std::vector<double> ma[3];
    for (int w = 0; w < 3; ++w)
        if (static_cast<std::size_t>(windows[w]) <= years)
            ma[w] = moving_average(annual, windows[w]);
    for (std::size_t y = 0; y < years; ++y) {
        out << counts.start_year() + static_cast<int>(y) << ',' << counts.annual[y];
        for (int w = 0; w < 3; ++w) {
            out << ',';
            const auto offset = static_cast<std::size_t>(windows[w] - 1);
            if (!ma[w].empty() && y >= offset) out << fmt_g(ma[w][y - offset]);
        }
        out << ',';
        if (band) out << band->bands[y].lower;
        out << ',';
        if (band) out << band->bands[y].upper;
        out << '\n';
    }
    return out.str();
}

const char* direction_label(TrendDirection d) {
    switch (d) {
        case TrendDirection::Increasing: return "increasing";
        case TrendDirection::Decreasing: return "decreasing";
        case TrendDirection::None: return "none";
    }
    return "none";
}

std::string mk_csv(const MannKendallResult& r, std::size_t n) {
    std::ostringstream out;
    out << "n,S,var_S,Z,p_two_sided,direction\n";
    out << n << ',' << r.S << ',' << fmt_g(r.var_S) << ',' << fmt_g(r.Z) << ','
        << fmt_g(r.p_two_sided) << ',' << direction_label(r.direction) << '\n';
    return out.str();
}

std::string null_band_csv(const NullBand& band) {
    std::ostringstream out;
    out << "year,lower,upper\n";
    for (const auto& b : band.bands) out << b.year << ',' << b.lower << ',' << b.upper << '\n';
    return out.str();
}

std::string exceedance_csv(const CountSeries& counts, const BandExceedance& exc) {
    std::ostringstream out;
    out << "year,count,position\n";
    for (std::size_t y = 0; y < exc.positions.size(); ++y) {
        const char* pos = exc.positions[y] == BandPosition::Below    ? "below"
                          : exc.positions[y] == BandPosition::Above ? "above"
                                                                    : "inside";
        out << counts.start_year() + static_cast<int>(y) << ',' << counts.annual[y] << ',' << pos
            << '\n';
    }
    return out.str();
}

std::string wavelet_csv(const WaveletSpectrum& spec) {
    std::ostringstream out;
    out << "period_years,power,significance\n";
    for (std::size_t s = 0; s < spec.periods.size(); ++s)
        out << fmt_g(spec.periods[s]) << ',' << fmt_g(spec.global[s]) << ','
            << fmt_g(spec.significance[s]) << '\n';
    return out.str();
}

// ---- SVG builders ---------------------------------------------------------

std::string monthly_trend_svg(const CountSeries& counts, const OlsFit& fit) {
    std::vector<double> xs, ys, fit_ys;
    for (std::size_t m = 0; m < counts.monthly.size(); ++m) {
        xs.push_back(fractional_year(counts.period.at(static_cast<int>(m))));
        ys.push_back(counts.monthly[m]);
        fit_ys.push_back(fit.intercept + fit.slope * static_cast<double>(m));
    }
    LinePlot plot("Monthly cells at a historical extreme", "year", "cells");
    plot.add_series("count", xs, ys);
    plot.add_series("OLS fit", xs, fit_ys);
    return plot.render();
}

std::string annual_band_svg(const CountSeries& counts, const NullBand* band) {
    const std::size_t years = counts.annual.size();
    std::vector<double> xs(years), ys(years);
    for (std::size_t y = 0; y < years; ++y) {
        xs[y] = counts.start_year() + static_cast<int>(y);
        ys[y] = counts.annual[y];
    }
    LinePlot plot("Annual cells at a historical extreme", "year", "cells");
    plot.add_series("count", xs, ys);
    const int windows[3] = {10, 20, 30};
    for (int w : windows) {
        if (static_cast<std::size_t>(w) > years) continue;
        const auto ma = moving_average(ys, w);
        std::vector<double> mx(xs.begin() + (w - 1), xs.end());
        plot.add_series("ma" + std::to_string(w), mx, ma);
    }
    if (band) {
        std::vector<double> lo, hi;
        for (const auto& b : band->bands) {
            lo.push_back(b.lower);
            hi.push_back(b.upper);
        }
        plot.add_series("band 5%", xs, lo);
        plot.add_series("band 95%", xs, hi);
    }
    return plot.render();
}

std::string wavelet_svg(const WaveletSpectrum& spec) {
    LinePlot plot("Global wavelet spectrum of annual counts", "period (years)", "power");
    plot.add_series("power", spec.periods, spec.global);
    plot.add_series("95% white noise", spec.periods, spec.significance);
    return plot.render();
}

std::vector<double> annual_as_doubles(const CountSeries& counts) {
    return {counts.annual.begin(), counts.annual.end()};
}

NullBandParams band_params(const RunConfig& cfg, const GridDataset* dataset, int n_cells) {
    NullBandParams params;
    params.n_cells = n_cells;
    params.p = resolved_band_p(cfg);
    params.reps = cfg.band_reps;
    params.years = cfg.period.years();
    params.start_year = cfg.period.start.year;
    if (cfg.p_mode == "availability") {
        if (!dataset)
            throw UsageError("p-mode 'availability' needs an input dataset (--input)");
        params.per_cell_p.reserve(dataset->n_cells());
        for (const auto& cell : dataset->cells())
            params.per_cell_p.push_back(std::min(
                1.0, static_cast<double>(cfg.k) / static_cast<double>(cell.valid_count())));
    } else if (cfg.p_mode != "uniform") {
        throw UsageError("unknown p mode '" + cfg.p_mode + "' (uniform|availability)");
    }
    return params;
}

}  // namespace

PeriodRange parse_period(const std::string& text) {
    const auto sep = text.find("..");
    if (sep == std::string::npos)
        throw UsageError("bad period '" + text + "', want YYYY-MM..YYYY-MM");
    const PeriodRange period{parse_month(text.substr(0, sep)), parse_month(text.substr(sep + 2))};
    if (period.start > period.end) throw UsageError("period start after end: " + text);
    return period;
}

std::string format_period(const PeriodRange& period) {
    return month_str(period.start) + ".." + month_str(period.end);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = line.substr(start, eq - start);
        const std::string value = line.substr(eq + 1);

        const auto as_int = [&](const std::string& v) {
            int out = 0;
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc{} || p != v.data() + v.size())
                throw UsageError("config: bad integer for " + key + ": '" + v + "'");
            return out;
        };
        const auto as_double = [&](const std::string& v) {
            double out = 0;
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc{} || p != v.data() + v.size())
                throw UsageError("config: bad number for " + key + ": '" + v + "'");
            return out;
        };
        const auto as_bool = [&](const std::string& v) {
            if (v == "true" || v == "1") return true;
            if (v == "false" || v == "0") return false;
            throw UsageError("config: bad boolean for " + key + ": '" + v + "'");
        };

        if (key == "input") cfg.input = value;
        else if (key == "period") cfg.period = parse_period(value);
        else if (key == "k") cfg.k = as_int(value);
        else if (key == "cluster_k") cfg.cluster_k = value == "auto" ? 0 : as_int(value);
        else if (key == "k_min") cfg.k_min = as_int(value);
        else if (key == "k_max") cfg.k_max = as_int(value);
        else if (key == "scaling") cfg.scaling = value;
        else if (key == "restarts") cfg.restarts = as_int(value);
        else if (key == "cluster_points") cfg.cluster_points = value;
        else if (key == "band_reps") cfg.band_reps = as_int(value);
        else if (key == "band_cells") cfg.band_cells = as_int(value);
        else if (key == "band_p") cfg.band_p = value == "auto" ? -1.0 : as_double(value);
        else if (key == "p_mode") cfg.p_mode = value;
        else if (key == "wavelet_omega0") cfg.wavelet_omega0 = as_double(value);
        else if (key == "wavelet_min_period") cfg.wavelet_min_period = as_double(value);
        else if (key == "wavelet_max_period") cfg.wavelet_max_period = as_double(value);
        else if (key == "wavelet_voices") cfg.wavelet_voices = as_int(value);
        else if (key == "wavelet_detrend") cfg.wavelet_detrend = as_bool(value);
        else if (key == "missing_sentinel") cfg.missing_sentinel = as_double(value);
        else if (key == "strict") cfg.strict = as_bool(value);
        else if (key == "seed") {
            std::uint64_t out = 0;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc{} || p != value.data() + value.size())
                throw UsageError("config: bad seed '" + value + "'");
            cfg.seed = out;
        } else if (key == "formats") {
            cfg.write_csv = value.find("csv") != std::string::npos;
            cfg.write_geojson = value.find("geojson") != std::string::npos;
            cfg.write_svg = value.find("svg") != std::string::npos;
        } else {
            throw UsageError("config: unknown key '" + key + "'");
        }
    }
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "band_cells=" << cfg.band_cells << '\n';
    out << "band_p=" << (cfg.band_p >= 0.0 ? fmt_g(cfg.band_p) : "auto") << '\n';
    out << "band_reps=" << cfg.band_reps << '\n';
    out << "cluster_k=" << (cfg.cluster_k == 0 ? "auto" : std::to_string(cfg.cluster_k)) << '\n';
    out << "cluster_points=" << cfg.cluster_points << '\n';
    std::string formats;
    if (cfg.write_csv) formats += "csv";
    if (cfg.write_geojson) formats += formats.empty() ? "geojson" : ",geojson";
    if (cfg.write_svg) formats += formats.empty() ? "svg" : ",svg";
    out << "formats=" << formats << '\n';
    out << "input=" << cfg.input << '\n';
    out << "k=" << cfg.k << '\n';
    out << "k_max=" << cfg.k_max << '\n';
    out << "k_min=" << cfg.k_min << '\n';
    out << "missing_sentinel=" << fmt_g(cfg.missing_sentinel) << '\n';
    out << "p_mode=" << cfg.p_mode << '\n';
    out << "period=" << format_period(cfg.period) << '\n';
    out << "restarts=" << cfg.restarts << '\n';
    out << "scaling=" << cfg.scaling << '\n';
    out << "seed=" << cfg.seed << '\n';
    out << "strict=" << (cfg.strict ? "true" : "false") << '\n';
    out << "wavelet_detrend=" << (cfg.wavelet_detrend ? "true" : "false") << '\n';
    out << "wavelet_max_period=" << fmt_g(cfg.wavelet_max_period) << '\n';
    out << "wavelet_min_period=" << fmt_g(cfg.wavelet_min_period) << '\n';
    out << "wavelet_omega0=" << fmt_g(cfg.wavelet_omega0) << '\n';
    out << "wavelet_voices=" << cfg.wavelet_voices << '\n';
    return out.str();
}

std::string run_synth(const RunConfig& cfg, const SyntheticSpec& spec) {
    fs::path out;
    require_out(cfg, out);
    const GridDataset dataset = generate_synthetic(spec, cfg.seed);
    atomic_write_file(out / "dataset.csv", export_csv(dataset));
    std::ostringstream s;
    s << "wrote " << (out / "dataset.csv").string() << "\n"
      << "cells: " << dataset.n_cells() << "\n"
      << "period: " << format_period(dataset.period()) << "\n"
      << "seed: " << cfg.seed << "\n";
    return s.str();
}

std::string run_ingest(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    atomic_write_file(out / "dataset.csv", export_csv(r.dataset));
    return "wrote " + (out / "dataset.csv").string() + "\n" + ingest_summary(r, cfg);
}

std::string run_coverage(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    atomic_write_file(out / "coverage.csv", coverage_csv(coverage_profile(r.dataset)));
    return "wrote " + (out / "coverage.csv").string() + "\n";
}

std::string run_extract(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    const auto sets = lnpv_map(r.dataset, cfg.k);
    std::ostringstream s;
    if (cfg.write_csv) {
        atomic_write_file(out / "lnpv.csv", lnpv_csv(sets));
        s << "wrote " << (out / "lnpv.csv").string() << "\n";
    }
    if (cfg.write_geojson) {
        atomic_write_file(out / "lnpv.geojson", lnpv_geojson(sets).dump(2) + "\n");
        s << "wrote " << (out / "lnpv.geojson").string() << "\n";
    }
    std::size_t never = 0;
    for (const auto& set : sets) never += set.never_extreme ? 1 : 0;
    s << "cells: " << sets.size() << "\n"
      << "cells never reaching extreme drought: " << never << "\n";
    return s.str();
}

std::string run_classify_values(const std::vector<double>& values) {
    std::ostringstream s;
    s << "value,class\n";
    for (double v : values) s << fmt_g(v) << ',' << palmer_label(classify_pdsi(v)) << '\n';
    return s.str();
}

std::string run_classify_input(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    std::vector<long long> counts(11, 0);
    for (const auto& cell : r.dataset.cells())
        for (int m = 0; m < r.dataset.period().months(); ++m)
            if (const auto v = cell.at_offset(m))
                ++counts[static_cast<std::size_t>(classify_pdsi(*v))];
    std::ostringstream csv;
    csv << "class,count\n";
    for (int c = 0; c <= static_cast<int>(PalmerClass::ExtremelyWet); ++c)
        csv << palmer_label(static_cast<PalmerClass>(c)) << ',' << counts[static_cast<std::size_t>(c)]
            << '\n';
    atomic_write_file(out / "palmer_counts.csv", csv.str());
    return "wrote " + (out / "palmer_counts.csv").string() + "\n";
}

std::string run_cluster(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    const LnpvClustering clustering = cluster_lnpv(r.dataset, cluster_options(cfg), cfg.seed);

    std::ostringstream s;
    if (cfg.write_csv) {
        atomic_write_file(out / "clusters.csv", clusters_csv(clustering));
        atomic_write_file(out / "cluster_summary.csv", cluster_summary_csv(clustering));
        s << "wrote " << (out / "clusters.csv").string() << "\n";
        s << "wrote " << (out / "cluster_summary.csv").string() << "\n";
        if (!clustering.silhouettes.empty()) {
            atomic_write_file(out / "silhouette.csv", silhouette_csv(clustering.silhouettes));
            s << "wrote " << (out / "silhouette.csv").string() << "\n";
        }
    }
    if (cfg.write_geojson) {
        atomic_write_file(out / "clusters.geojson", cluster_geojson(clustering).dump(2) + "\n");
        s << "wrote " << (out / "clusters.geojson").string() << "\n";
    }
    s << "k: " << clustering.model.k << (cfg.cluster_k == 0 ? " (auto)" : "") << "\n"
      << "mean silhouette: " << fmt_g(clustering.model.mean_silhouette) << "\n"
      << "inertia: " << fmt_g(clustering.model.inertia) << "\n";
    for (const auto& c : clustering.model.centroids)
        s << "centroid: (" << fmt_f(c.t, 2) << ", " << fmt_f(c.v, 2) << ")\n";
    return s.str();
}

std::string run_trend(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    const CountSeries counts = monthly_lnpv_counts(r.dataset, cfg.k);

    std::vector<double> monthly(counts.monthly.begin(), counts.monthly.end());
    const OlsFit fit = ols_trend(monthly, 120.0);
    const MannKendallResult mk = mann_kendall(monthly);

    std::ostringstream s;
    if (cfg.write_csv) {
        atomic_write_file(out / "monthly_counts.csv", monthly_counts_csv(counts));
        atomic_write_file(out / "annual_counts.csv", annual_counts_csv(counts, nullptr));
        atomic_write_file(out / "mk_test.csv", mk_csv(mk, monthly.size()));
        s << "wrote " << (out / "monthly_counts.csv").string() << "\n";
        s << "wrote " << (out / "annual_counts.csv").string() << "\n";
        s << "wrote " << (out / "mk_test.csv").string() << "\n";
    }
    if (cfg.write_svg) {
        atomic_write_file(out / "monthly_trend.svg", monthly_trend_svg(counts, fit));
        s << "wrote " << (out / "monthly_trend.svg").string() << "\n";
    }
    s << "total events: " << counts.total() << "\n"
      << "OLS slope per decade (monthly counts): " << fmt_g(fit.slope_per_decade) << "\n"
      << "Mann-Kendall: S=" << mk.S << " Z=" << fmt_g(mk.Z) << " p=" << fmt_g(mk.p_two_sided)
      << " direction=" << direction_label(mk.direction) << "\n";
    return s.str();
}

std::string run_nullband(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);

    std::optional<IngestResult> data;
    if (!cfg.input.empty()) data = load_dataset(cfg);

    const int n_cells = data ? static_cast<int>(data->dataset.n_cells()) : cfg.band_cells;
    const NullBand band = null_band(band_params(cfg, data ? &data->dataset : nullptr, n_cells),
                                    cfg.seed);
    atomic_write_file(out / "null_band.csv", null_band_csv(band));

    std::ostringstream s;
    s << "wrote " << (out / "null_band.csv").string() << "\n"
      << "cells: " << n_cells << "  p: " << fmt_g(band.params.p)
      << "  reps: " << band.params.reps << "\n"
      << "replicate mean: " << fmt_f(band.replicate_mean, 3) << "\n";
    if (data) {
        const CountSeries counts = monthly_lnpv_counts(data->dataset, cfg.k);
        const BandExceedance exc = band_exceedance(counts, band);
        atomic_write_file(out / "band_exceedance.csv", exceedance_csv(counts, exc));
        s << "wrote " << (out / "band_exceedance.csv").string() << "\n";
        if (exc.sustained_onset_year)
            s << "sustained exceedance onset: " << *exc.sustained_onset_year << "\n";
        else
            s << "sustained exceedance onset: none\n";
    }
    return s.str();
}

std::string run_wavelet(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    const CountSeries counts = monthly_lnpv_counts(r.dataset, cfg.k);

    WaveletOptions opt;
    opt.omega0 = cfg.wavelet_omega0;
    opt.voices_per_octave = cfg.wavelet_voices;
    opt.detrend = cfg.wavelet_detrend;
    opt.min_period = cfg.wavelet_min_period;
    opt.max_period = cfg.wavelet_max_period;
    const WaveletSpectrum spec = cwt_morlet(annual_as_doubles(counts), opt);
    const DominantPeriod dom = dominant_period(spec);

    std::ostringstream s;
    if (cfg.write_csv) {
        atomic_write_file(out / "wavelet_global.csv", wavelet_csv(spec));
        s << "wrote " << (out / "wavelet_global.csv").string() << "\n";
    }
    if (cfg.write_svg) {
        atomic_write_file(out / "wavelet.svg", wavelet_svg(spec));
        s << "wrote " << (out / "wavelet.svg").string() << "\n";
    }
    if (dom.significant)
        s << "dominant period: " << fmt_f(*dom.period, 2) << " years\n";
    else
        s << "dominant period: none significant\n";
    return s.str();
}

std::string run_report(const RunConfig& cfg) {
    fs::path out;
    require_out(cfg, out);
    const IngestResult r = load_dataset(cfg);
    const GridDataset& dataset = r.dataset;

    std::ostringstream rep;
    rep << "extreme drought analysis report\n"
        << "===============================\n\n"
        << "input: " << cfg.input << "\n"
        << "seed: " << cfg.seed << "\n"
        << ingest_summary(r, cfg) << "\n";

    // coverage
    if (cfg.write_csv)
        atomic_write_file(out / "coverage.csv", coverage_csv(coverage_profile(dataset)));

    // extremes
    const auto sets = lnpv_map(dataset, cfg.k);
    if (cfg.write_csv) atomic_write_file(out / "lnpv.csv", lnpv_csv(sets));
    if (cfg.write_geojson)
        atomic_write_file(out / "lnpv.geojson", lnpv_geojson(sets).dump(2) + "\n");

    // rank-1 year ranking
    std::vector<int> rank1_by_year(static_cast<std::size_t>(dataset.period().years()), 0);
    for (const auto& set : sets)
        ++rank1_by_year[static_cast<std::size_t>(set.events.front().when.year -
                                                 dataset.period().start.year)];
    std::vector<std::pair<int, int>> year_rank;  // (count, year)
    for (std::size_t y = 0; y < rank1_by_year.size(); ++y)
        year_rank.emplace_back(rank1_by_year[y], dataset.period().start.year + static_cast<int>(y));
    std::sort(year_rank.begin(), year_rank.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    rep << "years with most rank-1 extremes:";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, year_rank.size()); ++i)
        rep << ' ' << year_rank[i].second << " (" << year_rank[i].first << ")";
    rep << "\n\n";

    // clustering
    const LnpvClustering clustering = cluster_lnpv(dataset, cluster_options(cfg), cfg.seed);
    if (cfg.write_csv) {
        atomic_write_file(out / "clusters.csv", clusters_csv(clustering));
        atomic_write_file(out / "cluster_summary.csv", cluster_summary_csv(clustering));
        if (!clustering.silhouettes.empty())
            atomic_write_file(out / "silhouette.csv", silhouette_csv(clustering.silhouettes));
    }
    if (cfg.write_geojson)
        atomic_write_file(out / "clusters.geojson", cluster_geojson(clustering).dump(2) + "\n");
    rep << "clusters: k=" << clustering.model.k << (cfg.cluster_k == 0 ? " (auto)" : "")
        << ", mean silhouette " << fmt_f(clustering.model.mean_silhouette, 4) << "\n";
    for (const auto& c : clustering.model.centroids)
        rep << "  centroid (" << fmt_f(c.t, 2) << ", " << fmt_f(c.v, 2) << ")\n";
    rep << "\n";

    // counts, trend, band
    const CountSeries counts = monthly_lnpv_counts(dataset, cfg.k);
    std::vector<double> monthly(counts.monthly.begin(), counts.monthly.end());
    const OlsFit fit = ols_trend(monthly, 120.0);
    const MannKendallResult mk = mann_kendall(monthly);
    const NullBand band =
        null_band(band_params(cfg, &dataset, static_cast<int>(dataset.n_cells())), cfg.seed);
    const BandExceedance exc = band_exceedance(counts, band);

    if (cfg.write_csv) {
        atomic_write_file(out / "monthly_counts.csv", monthly_counts_csv(counts));
        atomic_write_file(out / "annual_counts.csv", annual_counts_csv(counts, &band));
        atomic_write_file(out / "mk_test.csv", mk_csv(mk, monthly.size()));
        atomic_write_file(out / "null_band.csv", null_band_csv(band));
        atomic_write_file(out / "band_exceedance.csv", exceedance_csv(counts, exc));
    }
    if (cfg.write_svg) {
        atomic_write_file(out / "monthly_trend.svg", monthly_trend_svg(counts, fit));
        atomic_write_file(out / "annual_band.svg", annual_band_svg(counts, &band));
    }
    rep << "total events: " << counts.total() << "\n"
        << "OLS slope per decade (monthly counts): " << fmt_g(fit.slope_per_decade) << "\n"
        << "Mann-Kendall: S=" << mk.S << " Z=" << fmt_g(mk.Z) << " p=" << fmt_g(mk.p_two_sided)
        << " direction=" << direction_label(mk.direction) << "\n"
        << "null band: p=" << fmt_g(band.params.p) << " reps=" << band.params.reps << "\n";
    if (exc.sustained_onset_year)
        rep << "sustained exceedance onset: " << *exc.sustained_onset_year << "\n";
    else
        rep << "sustained exceedance onset: none\n";

    // wavelet
    if (counts.annual.size() >= 16) {
        WaveletOptions wopt;
        wopt.omega0 = cfg.wavelet_omega0;
        wopt.voices_per_octave = cfg.wavelet_voices;
        wopt.detrend = cfg.wavelet_detrend;
        wopt.min_period = cfg.wavelet_min_period;
        wopt.max_period = cfg.wavelet_max_period;
        const WaveletSpectrum spec = cwt_morlet(annual_as_doubles(counts), wopt);
        const DominantPeriod dom = dominant_period(spec);
        if (cfg.write_csv) atomic_write_file(out / "wavelet_global.csv", wavelet_csv(spec));
        if (cfg.write_svg) atomic_write_file(out / "wavelet.svg", wavelet_svg(spec));
        if (dom.significant)
            rep << "wavelet dominant period: " << fmt_f(*dom.period, 2) << " years\n";
        else
            rep << "wavelet dominant period: none significant\n";
    } else {
        rep << "wavelet: skipped (fewer than 16 years)\n";
    }

    atomic_write_file(out / "report.txt", rep.str());
    atomic_write_file(out / "run_config.txt", serialize_config(cfg));
    return rep.str();
}

}  // namespace drex::pipeline
