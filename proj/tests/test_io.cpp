// Output plumbing: canonical number formatting, CSV rendering, content
// digests, JSON views, result tables, and the run manifest.

#include <catch2/catch_amalgamated.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "genbound/conditions.hpp"
#include "genbound/errors.hpp"
#include "genbound/io.hpp"
#include "genbound/mc.hpp"
#include "genbound/mi.hpp"
#include "genbound/models.hpp"
#include "genbound/version.hpp"

namespace gb = genbound;
namespace fs = std::filesystem;
using Catch::Approx;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("format_value canonical rendering", "[io]") {
    CHECK(gb::format_value(1.0 / 3.0) == "0.333333333");
    CHECK(gb::format_value(0.02) == "0.02");
    CHECK(gb::format_value(2e-7) == "2e-07");
    CHECK(gb::format_value(0.0) == "0");
    CHECK(gb::format_value(100.0) == "100");
    CHECK(gb::format_value(-1.5) == "-1.5");
}

TEST_CASE("render_csv layout and width check", "[io]") {
    const std::vector<std::string> cols{"n", "value"};
    const std::vector<std::vector<double>> rows{{10.0, 0.02}, {100.0, 1.0 / 3.0}};
    CHECK(gb::render_csv(cols, rows) == "n,value\n10,0.02\n100,0.333333333\n");
    CHECK(gb::render_csv(cols, {}) == "n,value\n");
    CHECK_THROWS_AS(gb::render_csv(cols, {{1.0, 2.0, 3.0}}), gb::error);
}

TEST_CASE("fnv1a digest frozen values", "[io]") {
    CHECK(gb::fnv1a_digest("") == "cbf29ce484222325");
    CHECK(gb::fnv1a_digest("a") == "af63dc4c8601ec8c");
    CHECK(gb::fnv1a_digest("hello") == "a430d84680aabd0b");
    CHECK(gb::fnv1a_digest("hello") != gb::fnv1a_digest("hellp"));
}

TEST_CASE("text files, csv files, and the run manifest", "[io]") {
    const fs::path dir = fs::temp_directory_path() / "genbound_io_scratch";
    fs::create_directories(dir);

    gb::write_text_file(dir / "t.txt", "line1\nline2\n");
    CHECK(slurp(dir / "t.txt") == "line1\nline2\n");

    gb::write_csv(dir / "t.csv", {"a", "b"}, {{1.0, 2.5}});
    CHECK(slurp(dir / "t.csv") == "a,b\n1,2.5\n");

    gb::run_manifest m;
    m.command_line = "genbound sweep --config x.cfg";
    m.config_digest = gb::fnv1a_digest("config body");
    m.master_seed = 42;
    m.started = gb::iso_utc_now();
    m.finished = gb::iso_utc_now();
    m.outputs = {"t.csv"};
    gb::write_manifest(dir, "run", m);
    const gb::json j = gb::json::parse(slurp(dir / "run_manifest.json"));
    CHECK(j["command_line"] == "genbound sweep --config x.cfg");
    CHECK(j["config_digest"] == m.config_digest);
    CHECK(j["master_seed"] == 42);
    CHECK(j["version"] == std::string(gb::version_string));
    CHECK(j["outputs"].size() == 1);

    CHECK_THROWS_AS(
        gb::write_text_file(dir / "missing_subdir" / "t.txt", "x"), gb::error);
    fs::remove_all(dir);
}

TEST_CASE("iso timestamp shape", "[io]") {
    const std::string ts = gb::iso_utc_now();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[7] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts[13] == ':');
    CHECK(ts[16] == ':');
    CHECK(ts[19] == 'Z');
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u}) {
        CHECK(std::isdigit(static_cast<unsigned char>(ts[i])) != 0);
    }
}

TEST_CASE("json views of reports", "[io]") {
    SECTION("condition report with and without max_c") {
        const gb::condition_report ok = gb::eta_c_check(-0.1, 0.2, 0.5);
        const gb::json j = gb::to_json(ok);
        CHECK(j["max_c"].is_number());
        CHECK(j["holds"] == ok.holds);
        CHECK(j["eta"] == 0.5);
        CHECK_FALSE(j.contains("reason"));

        const gb::condition_report bad = gb::eta_c_check(0.1, -0.5, 1.0);
        const gb::json k = gb::to_json(bad);
        CHECK(k["max_c"].is_null());
        CHECK(k["reason"] == "nonpositive_mean");
    }

    SECTION("mi estimate: closed form vs chain rule") {
        const auto cf = gb::closed_form_mi(gb::make_gaussian_mean(0.0, 1.0), 10);
        const gb::json j = gb::to_json(cf.front());
        CHECK(j["estimator"] == "closed_form");
        CHECK_FALSE(j.contains("k"));  // not a kNN estimate
        CHECK_FALSE(j.contains("components"));
        CHECK(j["warnings"].is_array());

        gb::rng_stream rng(3, 0);
        std::vector<std::vector<double>> w(30);
        std::vector<std::vector<double>> x(30);
        std::vector<int> y(30);
        for (std::size_t i = 0; i < 30; ++i) {
            const double g = rng.normal();
            w[i] = {g + 0.3 * rng.normal()};
            x[i] = {g};
            y[i] = g > 0 ? 1 : 0;
        }
        const gb::json c = gb::to_json(gb::chain_rule_mi(w, x, y, 3));
        CHECK(c["estimator"] == "chain_rule");
        CHECK(c["k"] == 3);
        REQUIRE(c.contains("components"));
        CHECK(c["components"].size() == 5);
        CHECK(c["components"].contains("i_wy"));
    }

    SECTION("example report serialization") {
        const gb::example_report rep =
            gb::reproduce_example(gb::example_id::example_5_6, 1, 0);
        const gb::json j = gb::to_json(rep);
        CHECK(j["example"] == "example_5_6");
        CHECK(j["all_pass"] == true);
        CHECK(j["verdicts"].size() == rep.verdicts.size());
        CHECK(j["fits"].contains("fast_subgaussian"));
        CHECK(j["fits"].contains("eta_c"));
        CHECK(j["fits"]["eta_c"].contains("slope"));
        // Dump/parse round trip preserves the document.
        CHECK(gb::json::parse(j.dump()) == j);
    }
}

TEST_CASE("sweep serialization and tables", "[io]") {
    gb::sweep_config cfg;
    cfg.model = gb::make_gaussian_mean(0.0, 1.0);
    cfg.n_grid = {10, 20};
    cfg.repetitions = 50;
    cfg.master_seed = 3;
    cfg.eta_grid = {0.25};
    const gb::sweep_result res = gb::run_sweep(cfg, 1);

    SECTION("json view") {
        const gb::json j = gb::to_json(res, cfg);
        REQUIRE(j["rows"].size() == 2);
        CHECK(j["rows"][0]["n"] == 10);
        CHECK(j["rows"][0].contains("closed_gen"));
        REQUIRE(j["rows"][0].contains("empirical_cgf"));
        CHECK(j["rows"][0]["empirical_cgf"].contains("0.25"));
        CHECK(j["bounds"].contains("eta_c"));
        CHECK(j["bounds"]["eta_c"].size() == 2);
        CHECK_FALSE(j.contains("condition"));
        CHECK(j["warnings"].is_array());
    }

    SECTION("results table") {
        const gb::curve_table t = gb::sweep_results_table(res, cfg);
        REQUIRE(t.columns.size() == 13);
        CHECK(t.columns.front() == "n");
        CHECK(t.columns.back() == "cgf_eta_0.25");
        REQUIRE(t.rows.size() == 2);
        for (const auto& r : t.rows) CHECK(r.size() == t.columns.size());
        CHECK(t.rows[0][0] == 10.0);
        CHECK(t.rows[1][0] == 20.0);
    }

    SECTION("results table without the cgf track") {
        gb::sweep_config quiet = cfg;
        quiet.with_cgf = false;
        const gb::sweep_result qres = gb::run_sweep(quiet, 1);
        const gb::curve_table t = gb::sweep_results_table(qres, quiet);
        CHECK(t.columns.size() == 12);
    }

    SECTION("bounds table") {
        const gb::curve_table t = gb::sweep_bounds_table(res);
        REQUIRE(t.columns.size() == res.bounds.size() + 1);
        CHECK(t.columns[0] == "n");
        REQUIRE(t.rows.size() == 2);
        for (const auto& r : t.rows) {
            CHECK(r.size() == t.columns.size());
            for (double v : r) CHECK(std::isfinite(v));
        }
    }
}
