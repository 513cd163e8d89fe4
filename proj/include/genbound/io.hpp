// Output plumbing: CSV and JSON emission, content digests, run manifests.
//
// Byte-determinism contract: every CSV/JSON writer formats numbers
// identically across runs and platforms (9 significant digits for CSV,
// shortest-round-trip for JSON), uses '\n' newlines, and emits keys in a
// fixed order.  Wall-clock timestamps appear only in run manifests, which
// are therefore the one output class excluded from byte-identity checks.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "genbound/conditions.hpp"
#include "genbound/errors.hpp"
#include "genbound/fitting.hpp"
#include "genbound/mc.hpp"
#include "genbound/mi.hpp"
#include "genbound/version.hpp"

namespace genbound {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Formatting / files
// ---------------------------------------------------------------------------

// Canonical CSV number rendering: 9 significant digits.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw error("write failed: " + path.string());
}

inline std::string render_csv(const std::vector<std::string>& columns,
                              const std::vector<std::vector<double>>& rows) {
    std::string text;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c > 0) text += ',';
        text += columns[c];
    }
    text += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw error("csv row width does not match header");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) text += ',';
            text += format_value(row[c]);
        }
        text += '\n';
    }
    return text;
}

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    write_text_file(path, render_csv(columns, rows));
}

// FNV-1a 64-bit content digest, hex-encoded; stable across platforms.
inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// JSON views
// ---------------------------------------------------------------------------

inline json to_json(const curve_table& table) {
    json j;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    return j;
}

inline json to_json(const rate_fit& fit) {
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["slope_stderr"] = fit.slope_stderr;
    j["r_squared"] = fit.r_squared;
    json pts = json::array();
    for (const rate_point& p : fit.points) pts.push_back({p.n, p.value});
    j["points"] = pts;
    json exc = json::array();
    for (const rate_point& p : fit.excluded) exc.push_back({p.n, p.value});
    j["excluded"] = exc;
    return j;
}

inline json to_json(const condition_report& rep) {
    json j;
    j["condition_id"] = rep.condition_id;
    j["holds"] = rep.holds;
    if (rep.max_c.has_value()) {
        j["max_c"] = *rep.max_c;
    } else {
        j["max_c"] = nullptr;
    }
    j["eta"] = rep.eta;
    j["margin"] = rep.margin;
    j["source"] = rep.source;
    if (rep.sample_count.has_value()) j["sample_count"] = *rep.sample_count;
    if (rep.ci_halfwidth.has_value()) j["ci_halfwidth"] = *rep.ci_halfwidth;
    if (!rep.reason.empty()) j["reason"] = rep.reason;
    j["cgf"] = rep.cgf_value;
    j["mean_r"] = rep.mean_r;
    return j;
}

inline json to_json(const mi_estimate& est) {
    json j;
    j["value"] = est.value;
    j["raw_value"] = est.raw_value;
    j["estimator"] = to_string(est.estimator);
    if (est.k > 0) j["k"] = est.k;
    j["sample_count"] = est.sample_count;
    if (est.seed.has_value()) j["seed"] = *est.seed;
    if (est.components.has_value()) {
        j["components"] = {{"i_wy", est.components->i_wy},
                           {"i_wx_y0", est.components->i_wx_y0},
                           {"i_wx_y1", est.components->i_wx_y1},
                           {"p_y0", est.components->p_y0},
                           {"p_y1", est.components->p_y1}};
    }
    j["dataset_level"] = est.dataset_level;
    j["deterministic_relation"] = est.deterministic_relation;
    j["warnings"] = est.warnings;
    return j;
}

inline json to_json(const verdict& v) {
    json j;
    j["name"] = v.name;
    j["pass"] = v.pass;
    j["observed"] = v.observed;
    j["expectation"] = v.expectation;
    return j;
}

inline json to_json(const example_report& rep) {
    json j;
    j["example"] = to_string(rep.id);
    j["master_seed"] = rep.master_seed;
    j["repetitions"] = rep.repetitions;
    json fits = json::object();
    for (const auto& [name, fit] : rep.fits) fits[name] = to_json(fit);
    j["fits"] = fits;
    json vs = json::array();
    for (const verdict& v : rep.verdicts) vs.push_back(to_json(v));
    j["verdicts"] = vs;
    j["notes"] = rep.notes;
    bool all = true;
    for (const verdict& v : rep.verdicts) all = all && v.pass;
    j["all_pass"] = all;
    return j;
}

inline json to_json(const sweep_result& res, const sweep_config& cfg) {
    json j;
    json rows = json::array();
    for (const sweep_row& row : res.rows) {
        json r;
        r["n"] = row.n;
        r["repetitions_used"] = row.repetitions_used;
        r["nonconverged"] = row.nonconverged;
        r["gen_mean"] = row.gen_mean;
        r["gen_stderr"] = row.gen_stderr;
        r["excess_mean"] = row.excess_mean;
        r["excess_stderr"] = row.excess_stderr;
        r["emp_excess_mean"] = row.emp_excess_mean;
        r["emp_excess_stderr"] = row.emp_excess_stderr;
        if (!row.cgf.empty()) {
            json cg = json::object();
            for (std::size_t e = 0; e < cfg.eta_grid.size() && e < row.cgf.size(); ++e) {
                cg[format_value(cfg.eta_grid[e])] = row.cgf[e];
            }
            r["empirical_cgf"] = cg;
        }
        if (row.closed_gen.has_value()) r["closed_gen"] = *row.closed_gen;
        if (row.closed_excess.has_value()) r["closed_excess"] = *row.closed_excess;
        if (row.closed_emp_excess.has_value()) {
            r["closed_emp_excess"] = *row.closed_emp_excess;
        }
        r["mi_sum"] = row.mi_sum;
        r["mi_sqrt_sum"] = row.mi_sqrt_sum;
        r["mi_dataset_level"] = row.mi_dataset_level;
        r["mi_estimated"] = row.mi_estimated;
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    json bounds = json::object();
    for (const bound_curve& c : res.bounds) bounds[c.name] = c.values;
    j["bounds"] = bounds;
    if (res.condition.has_value()) {
        const logistic_condition_summary& cond = *res.condition;
        j["condition"] = {{"eta", cond.eta},
                          {"per_n_max_c", cond.per_n_max_c},
                          {"pooled_max_c", cond.pooled_max_c},
                          {"pooled_ci_halfwidth", cond.pooled_ci_halfwidth},
                          {"holds", cond.holds}};
    }
    j["warnings"] = res.warnings;
    return j;
}

// Per-n statistics table for a sweep (no bound columns).
inline curve_table sweep_results_table(const sweep_result& res,
                                       const sweep_config& cfg) {
    curve_table t;
    t.columns = {"n",           "reps_used",     "nonconverged",    "gen_mean",
                 "gen_stderr",  "excess_mean",   "excess_stderr",   "emp_excess_mean",
                 "emp_excess_stderr", "closed_gen", "mi_sum",       "mi_sqrt_sum"};
    if (cfg.with_cgf) {
        for (double eta : cfg.eta_grid) {
            t.columns.push_back("cgf_eta_" + format_value(eta));
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const sweep_row& row : res.rows) {
        std::vector<double> r{static_cast<double>(row.n),
                              static_cast<double>(row.repetitions_used),
                              static_cast<double>(row.nonconverged),
                              row.gen_mean,
                              row.gen_stderr,
                              row.excess_mean,
                              row.excess_stderr,
                              row.emp_excess_mean,
                              row.emp_excess_stderr,
                              row.closed_gen.value_or(nan),
                              row.mi_sum,
                              row.mi_sqrt_sum};
        if (cfg.with_cgf) {
            for (std::size_t e = 0; e < cfg.eta_grid.size(); ++e) {
                r.push_back(e < row.cgf.size() ? row.cgf[e] : nan);
            }
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

// Bound curves (and condition track, when present) for a sweep: one row
// per n, one column per curve.
inline curve_table sweep_bounds_table(const sweep_result& res) {
    curve_table t;
    t.columns = {"n"};
    for (const bound_curve& c : res.bounds) t.columns.push_back(c.name);
    if (res.condition.has_value()) t.columns.push_back("max_c");
    for (std::size_t idx = 0; idx < res.rows.size(); ++idx) {
        std::vector<double> r{static_cast<double>(res.rows[idx].n)};
        for (const bound_curve& c : res.bounds) r.push_back(c.values[idx]);
        if (res.condition.has_value()) {
            r.push_back(res.condition->per_n_max_c[idx]);
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct run_manifest {
    std::string command_line;
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::string started;   // ISO-8601 UTC wall-clock
    std::string finished;
    std::vector<std::string> outputs;
};

inline std::string iso_utc_now() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& stem,
                           const run_manifest& m) {
    json j;
    j["command_line"] = m.command_line;
    j["config_digest"] = m.config_digest;
    j["master_seed"] = m.master_seed;
    j["version"] = version_string;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["outputs"] = m.outputs;
    write_text_file(dir / (stem + "_manifest.json"), j.dump(2) + "\n");
}

} // namespace genbound
