#include <doctest.h>

#include <json.hpp>

#include "cli_util.hpp"

using namespace cli_test;

TEST_CASE("synth is deterministic for a fixed seed") {
    const auto dir = fresh_dir("synth_det");
    auto a = run_cli("synth --cells 40 --seed 7 --period 1900-01..1919-12 --out " +
                         (dir / "a").string(),
                     dir);
    auto b = run_cli("synth --cells 40 --seed 7 --period 1900-01..1919-12 --out " +
                         (dir / "b").string(),
                     dir);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(read_file(dir / "a" / "dataset.csv") == read_file(dir / "b" / "dataset.csv"));
    CHECK(read_file(dir / "a" / "dataset.csv").starts_with("lon,lat,year,month,pdsi\n"));

    auto c = run_cli("synth --cells 40 --seed 8 --period 1900-01..1919-12 --out " +
                         (dir / "c").string(),
                     dir);
    REQUIRE(c.exit_code == 0);
    CHECK(read_file(dir / "a" / "dataset.csv") != read_file(dir / "c" / "dataset.csv"));
    fs::remove_all(dir);
}

TEST_CASE("extract on a single-cell csv writes at most k rows") {
    const auto dir = fresh_dir("extract_one");
    std::string csv = "lon,lat,year,month,pdsi\n";
    for (int m = 1; m <= 12; ++m)
        csv += "-178.75,-58.75,1900," + std::to_string(m) + "," +
               std::to_string(-1.0 - 0.2 * m) + "\n";
    write_file(dir / "one.csv", csv);

    const auto r = run_cli("extract --input " + (dir / "one.csv").string() +
                               " --period 1900-01..1900-12 --out " + (dir / "out").string(),
                           dir);
    REQUIRE(r.exit_code == 0);
    const std::string lnpv = read_file(dir / "out" / "lnpv.csv");
    CHECK(count_lines(lnpv) <= 1 + 10);  // header + up to k rows
    CHECK(count_lines(lnpv) == 1 + 10);  // 12 present values, k = 10
    CHECK(lnpv.starts_with("lon,lat,rank,year,month,pdsi\n"));
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    const auto dir = fresh_dir("exit_codes");

    SUBCASE("unknown flag is a usage error") {
        const auto r = run_cli("extract --no-such-flag", dir);
        CHECK(r.exit_code == 1);
    }

    SUBCASE("unknown subcommand is a usage error") {
        const auto r = run_cli("frobnicate", dir);
        CHECK(r.exit_code == 1);
    }

    SUBCASE("missing input file is a usage error") {
        const auto r = run_cli("extract --input " + (dir / "absent.csv").string() + " --out " +
                                   (dir / "o").string(),
                               dir);
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("not found") != std::string::npos);
    }

    SUBCASE("malformed data in strict mode is a data error") {
        write_file(dir / "bad.csv", "lon,lat,year,month,pdsi\n-178.75,-58.75,1900,13,-1\n");
        const auto r = run_cli("ingest --strict --input " + (dir / "bad.csv").string() +
                                   " --out " + (dir / "o").string(),
                               dir);
        CHECK(r.exit_code == 2);
    }

    SUBCASE("off-lattice coordinates are a data error") {
        write_file(dir / "off.csv", "lon,lat,year,month,pdsi\n-178.00,-58.75,1900,1,-1\n");
        const auto r = run_cli("ingest --input " + (dir / "off.csv").string() + " --out " +
                                   (dir / "o").string(),
                               dir);
        CHECK(r.exit_code == 2);
    }

    SUBCASE("dataset with no usable rows is a data error") {
        write_file(dir / "empty.csv", "lon,lat,year,month,pdsi\n-178.75,-58.75,1900,1,-99.99\n");
        const auto r = run_cli("ingest --input " + (dir / "empty.csv").string() + " --out " +
                                   (dir / "o").string(),
                               dir);
        CHECK(r.exit_code == 2);
    }

    SUBCASE("unknown config key is a usage error") {
        write_file(dir / "bad.conf", "no_such_key=1\n");
        const auto r = run_cli("report --config " + (dir / "bad.conf").string(), dir);
        CHECK(r.exit_code == 1);
    }

    fs::remove_all(dir);
}

TEST_CASE("classify values") {
    const auto dir = fresh_dir("classify");
    const auto r = run_cli("classify --value -4.5 --value 0 --value 3.2", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("-4.5,extreme_drought") != std::string::npos);
    CHECK(r.out.find("0,near_normal") != std::string::npos);
    CHECK(r.out.find("3.2,very_wet") != std::string::npos);

    const auto bad = run_cli("classify", dir);
    CHECK(bad.exit_code == 1);
    fs::remove_all(dir);
}

TEST_CASE("geojson outputs are valid point feature collections") {
    const auto dir = fresh_dir("geojson");
    REQUIRE(run_cli("synth --cells 30 --seed 3 --out " + (dir / "d").string(), dir).exit_code == 0);
    REQUIRE(run_cli("extract --input " + (dir / "d" / "dataset.csv").string() + " --out " +
                        (dir / "e").string(),
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("cluster --input " + (dir / "d" / "dataset.csv").string() +
                        " --clusters 3 --seed 5 --out " + (dir / "c").string(),
                    dir)
                .exit_code == 0);

    for (const auto& name : {dir / "e" / "lnpv.geojson", dir / "c" / "clusters.geojson"}) {
        const auto doc = nlohmann::json::parse(read_file(name));
        REQUIRE(doc.at("type") == "FeatureCollection");
        REQUIRE(doc.at("features").is_array());
        CHECK(doc.at("features").size() == 30);
        for (const auto& f : doc.at("features")) {
            CHECK(f.at("type") == "Feature");
            CHECK(f.at("geometry").at("type") == "Point");
            const auto& coords = f.at("geometry").at("coordinates");
            REQUIRE(coords.size() == 2);
            const double lon = coords[0].get<double>();
            const double lat = coords[1].get<double>();
            CHECK(lon >= -180.0);
            CHECK(lon <= 180.0);
            CHECK(lat >= -90.0);
            CHECK(lat <= 90.0);
            CHECK(f.contains("properties"));
        }
    }
    // the lnpv properties carry value, time and class
    const auto doc = nlohmann::json::parse(read_file(dir / "e" / "lnpv.geojson"));
    const auto& props = doc.at("features")[0].at("properties");
    CHECK(props.contains("pdsi"));
    CHECK(props.contains("fractional_year"));
    CHECK(props.contains("palmer_class"));
    fs::remove_all(dir);
}

TEST_CASE("inputs are never mutated and no temp files are left behind") {
    const auto dir = fresh_dir("no_mutation");
    REQUIRE(run_cli("synth --cells 25 --seed 9 --out " + (dir / "d").string(), dir).exit_code == 0);
    const std::string before = read_file(dir / "d" / "dataset.csv");
    REQUIRE(run_cli("report --input " + (dir / "d" / "dataset.csv").string() + " --seed 9 --out " +
                        (dir / "r").string(),
                    dir)
                .exit_code == 0);
    CHECK(read_file(dir / "d" / "dataset.csv") == before);
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        CHECK(entry.path().extension() != ".tmp");
    fs::remove_all(dir);
}

TEST_CASE("report replays byte-identically from its emitted config") {
    const auto dir = fresh_dir("replay");
    REQUIRE(run_cli("synth --cells 30 --seed 11 --out " + (dir / "d").string(), dir).exit_code ==
            0);
    const std::string input = (dir / "d" / "dataset.csv").string();
    REQUIRE(run_cli("report --input " + input + " --seed 11 --clusters 3 --out " +
                        (dir / "r1").string(),
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("report --config " + (dir / "r1" / "run_config.txt").string() + " --out " +
                        (dir / "r2").string(),
                    dir)
                .exit_code == 0);
    const auto t1 = read_tree(dir / "r1");
    const auto t2 = read_tree(dir / "r2");
    CHECK(t1 == t2);
    CHECK(t1.count("run_config.txt") == 1);
    CHECK(t1.count("report.txt") == 1);
    fs::remove_all(dir);
}

TEST_CASE("trend and nullband commands write their tables") {
    const auto dir = fresh_dir("trend_files");
    REQUIRE(run_cli("synth --cells 30 --seed 13 --out " + (dir / "d").string(), dir).exit_code ==
            0);
    const std::string input = (dir / "d" / "dataset.csv").string();

    REQUIRE(run_cli("trend --input " + input + " --out " + (dir / "t").string(), dir).exit_code ==
            0);
    const std::string annual = read_file(dir / "t" / "annual_counts.csv");
    CHECK(annual.starts_with("year,count,ma10,ma20,ma30,band_lo,band_hi\n"));
    CHECK(count_lines(annual) == 1 + 115);
    const std::string mk = read_file(dir / "t" / "mk_test.csv");
    CHECK(mk.starts_with("n,S,var_S,Z,p_two_sided,direction\n"));
    CHECK(count_lines(mk) == 2);
    CHECK(count_lines(read_file(dir / "t" / "monthly_counts.csv")) == 1 + 1380);

    const auto nb = run_cli("nullband --input " + input + " --seed 13 --out " +
                                (dir / "n").string(),
                            dir);
    REQUIRE(nb.exit_code == 0);
    CHECK(count_lines(read_file(dir / "n" / "null_band.csv")) == 1 + 115);
    CHECK(count_lines(read_file(dir / "n" / "band_exceedance.csv")) == 1 + 115);

    // standalone band without input uses --cells and a literal --p
    const auto nb0 = run_cli("nullband --cells 100 --p 0 --seed 1 --out " + (dir / "z").string(),
                             dir);
    REQUIRE(nb0.exit_code == 0);
    const std::string zeros = read_file(dir / "z" / "null_band.csv");
    CHECK(zeros.find(",0,0\n") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("coverage, wavelet and batch classify commands") {
    const auto dir = fresh_dir("more_commands");
    REQUIRE(run_cli("synth --cells 20 --seed 19 --out " + (dir / "d").string(), dir).exit_code ==
            0);
    const std::string input = (dir / "d" / "dataset.csv").string();

    REQUIRE(run_cli("coverage --input " + input + " --out " + (dir / "c").string(), dir)
                .exit_code == 0);
    const std::string cov = read_file(dir / "c" / "coverage.csv");
    CHECK(cov.starts_with("month_serial,year,month,percent_missing\n"));
    CHECK(count_lines(cov) == 1 + 1380);

    const auto w = run_cli("wavelet --input " + input + " --out " + (dir / "w").string(), dir);
    REQUIRE(w.exit_code == 0);
    const std::string spec_csv = read_file(dir / "w" / "wavelet_global.csv");
    CHECK(spec_csv.starts_with("period_years,power,significance\n"));
    CHECK(count_lines(spec_csv) > 30);
    CHECK(w.out.find("dominant period") != std::string::npos);
    CHECK(read_file(dir / "w" / "wavelet.svg").starts_with("<svg"));

    REQUIRE(run_cli("classify --input " + input + " --out " + (dir / "p").string(), dir)
                .exit_code == 0);
    const std::string palmer = read_file(dir / "p" / "palmer_counts.csv");
    CHECK(palmer.starts_with("class,count\n"));
    CHECK(count_lines(palmer) == 1 + 11);
    fs::remove_all(dir);
}

TEST_CASE("alternative option paths: all10 points, standardize, availability") {
    const auto dir = fresh_dir("option_paths");
    REQUIRE(run_cli("synth --cells 25 --seed 23 --missing 0.2 --out " + (dir / "d").string(), dir)
                .exit_code == 0);
    const std::string input = (dir / "d" / "dataset.csv").string();

    const auto c = run_cli("cluster --input " + input +
                               " --clusters 2 --points all10 --scaling standardize --seed 2 "
                               "--out " +
                               (dir / "c").string(),
                           dir);
    REQUIRE(c.exit_code == 0);
    CHECK(count_lines(read_file(dir / "c" / "clusters.csv")) == 1 + 25);

    const auto nb = run_cli("nullband --input " + input + " --respect-availability --seed 2 "
                                "--out " +
                                (dir / "n").string(),
                            dir);
    REQUIRE(nb.exit_code == 0);
    CHECK(count_lines(read_file(dir / "n" / "null_band.csv")) == 1 + 115);

    const auto bad = run_cli("cluster --input " + input + " --scaling banana --out " +
                                 (dir / "b").string(),
                             dir);
    CHECK(bad.exit_code == 1);
    fs::remove_all(dir);
}

TEST_CASE("help exits zero") {
    const auto dir = fresh_dir("help");
    CHECK(run_cli("--help", dir).exit_code == 0);
    CHECK(run_cli("report --help", dir).exit_code == 0);
    CHECK(run_cli("", dir).exit_code == 1);  // a subcommand is required
    fs::remove_all(dir);
}

TEST_CASE("quiet mode suppresses the summary") {
    const auto dir = fresh_dir("quiet");
    const auto r = run_cli("synth --cells 5 --seed 1 --quiet --period 1900-01..1900-12 --out " +
                               (dir / "d").string(),
                           dir);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    fs::remove_all(dir);
}
