// genbound command-line tool.
//
// Subcommands:
//   example  — reproduce a built-in study; emit curves CSV + verdicts JSON
//   check    — scan the (eta, c)-central condition (closed-form or MC)
//   mi       — run one mutual-information estimator on a model, a data
//              file, or the shipped correlated-Gaussian generator
//   sweep    — run a Monte-Carlo sweep from a config file; emit CSV tables
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
// All randomness flows from --seed / the config master_seed; thread count
// never changes results (GENBOUND_THREADS overrides --threads).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <genbound/genbound.hpp>

namespace fs = std::filesystem;
namespace gb = genbound;

namespace {

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) s += ' ';
        s += argv[i];
    }
    return s;
}

// GENBOUND_THREADS, when set, overrides the --threads flag.
unsigned resolve_threads(unsigned cli_value) {
    const char* env = std::getenv("GENBOUND_THREADS");
    if (env == nullptr || *env == '\0') return cli_value;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') {
        throw gb::config_error("GENBOUND_THREADS must be a nonnegative integer, got '" +
                               std::string(env) + "'");
    }
    return static_cast<unsigned>(v);
}

double parse_double_strict(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw gb::config_error(what + ": cannot parse '" + text + "' as a number");
    }
    return v;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

// Eta grids come either as a comma list ("0.1,0.5,1") or as a linspace
// spec "start:stop:count".
std::vector<double> parse_eta_spec(const std::string& spec) {
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split_on(spec, ':');
        if (parts.size() != 3) {
            throw gb::config_error(
                "--eta-grid: expected 'start:stop:count' or a comma list, got '" +
                spec + "'");
        }
        const double start = parse_double_strict(parts[0], "--eta-grid start");
        const double stop = parse_double_strict(parts[1], "--eta-grid stop");
        const double count_d = parse_double_strict(parts[2], "--eta-grid count");
        const long count = static_cast<long>(count_d);
        if (count < 1 || static_cast<double>(count) != count_d) {
            throw gb::config_error("--eta-grid: count must be a positive integer");
        }
        if (count == 1) {
            grid.push_back(start);
        } else {
            for (long i = 0; i < count; ++i) {
                grid.push_back(start + (stop - start) * static_cast<double>(i) /
                                           static_cast<double>(count - 1));
            }
        }
    } else {
        for (const std::string& part : split_on(spec, ',')) {
            if (part.empty()) continue;
            grid.push_back(parse_double_strict(part, "--eta-grid"));
        }
    }
    if (grid.empty()) throw gb::config_error("--eta-grid: empty grid");
    for (double eta : grid) {
        if (!(eta > 0.0)) {
            throw gb::config_error("--eta-grid: all values must be positive");
        }
    }
    return grid;
}

// Default learning problem for a bare model name.  Linear regression gets
// the uniform all-ones design of the requested size.
gb::learning_tuple default_tuple(gb::model_id m, std::size_t n) {
    switch (m) {
        case gb::model_id::gaussian_mean: return gb::make_gaussian_mean();
        case gb::model_id::discrete_mean: return gb::make_discrete_mean();
        case gb::model_id::zero_mean_discrete: return gb::make_zero_mean_discrete();
        case gb::model_id::linear_regression:
            return gb::make_linear_regression(std::vector<double>(n, 1.0));
        case gb::model_id::logistic_regression: return gb::make_logistic_regression();
        case gb::model_id::hypothesis_selection: return gb::make_hypothesis_selection();
    }
    throw gb::invalid_input_error("unknown model id");
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gb::config_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_manifest(const fs::path& dir, const std::string& stem,
                   const std::string& command_line, const std::string& config_digest,
                   std::uint64_t seed, const std::string& started,
                   std::vector<std::string> outputs) {
    gb::run_manifest m;
    m.command_line = command_line;
    m.config_digest = config_digest;
    m.master_seed = seed;
    m.started = started;
    m.finished = gb::iso_utc_now();
    m.outputs = std::move(outputs);
    gb::write_manifest(dir, stem, m);
}

// ---------------------------------------------------------------------------
// example
// ---------------------------------------------------------------------------

struct example_options {
    std::string id;
    std::uint64_t seed = 1;
    std::size_t reps = 0; // 0 = per-study default
    std::string out = ".";
    bool json = false;
    unsigned threads = 0;
};

int run_example_cmd(const example_options& opt, const std::string& command_line) {
    std::vector<gb::example_id> ids;
    if (opt.id == "all") {
        ids = gb::all_example_ids();
    } else {
        ids.push_back(gb::parse_example_id(opt.id));
    }
    const unsigned threads = resolve_threads(opt.threads);
    const fs::path dir(opt.out);
    fs::create_directories(dir);

    bool all_pass = true;
    for (gb::example_id id : ids) {
        const std::string started = gb::iso_utc_now();
        const gb::example_report rep =
            gb::reproduce_example(id, opt.seed, opt.reps, threads);
        const std::string name = gb::to_string(id);

        std::vector<std::string> outputs;
        gb::write_csv(dir / (name + "_curves.csv"), rep.curves.columns,
                      rep.curves.rows);
        outputs.push_back(name + "_curves.csv");
        gb::write_text_file(dir / (name + "_verdicts.json"),
                            gb::to_json(rep).dump(2) + "\n");
        outputs.push_back(name + "_verdicts.json");
        if (opt.json) {
            gb::write_text_file(dir / (name + "_curves.json"),
                                gb::to_json(rep.curves).dump(2) + "\n");
            outputs.push_back(name + "_curves.json");
        }
        const std::string digest =
            gb::fnv1a_digest("example " + name + " seed=" + std::to_string(opt.seed) +
                             " reps=" + std::to_string(rep.repetitions));
        emit_manifest(dir, name, command_line, digest, opt.seed, started, outputs);

        std::cout << name << " (seed " << opt.seed << ", reps " << rep.repetitions
                  << ")\n";
        for (const gb::verdict& v : rep.verdicts) {
            std::cout << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.name << ": "
                      << v.observed << " (" << v.expectation << ")\n";
            all_pass = all_pass && v.pass;
        }
        for (const std::string& note : rep.notes) {
            std::cout << "  note: " << note << "\n";
        }
    }
    std::cout << (all_pass ? "all verdicts pass" : "some verdicts FAILED") << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct check_options {
    std::string model;
    std::string eta_spec;
    std::size_t n = 100;
    std::string source = "closed";
    std::size_t reps = 1000;
    std::uint64_t seed = 1;
    std::string out;
    unsigned threads = 0;
};

int run_check_cmd(const check_options& opt, const std::string& command_line) {
    const gb::model_id m = gb::parse_model_id(opt.model);
    const std::vector<double> grid = parse_eta_spec(opt.eta_spec);
    if (opt.source != "closed" && opt.source != "mc") {
        throw gb::config_error("--source must be 'closed' or 'mc', got '" + opt.source +
                               "'");
    }
    const gb::learning_tuple t = default_tuple(m, opt.n);

    const std::string started = gb::iso_utc_now();
    std::vector<gb::condition_report> reports;
    if (opt.source == "closed") {
        if (m == gb::model_id::logistic_regression) {
            throw gb::config_error(
                "logistic_regression has no closed-form risks; use --source mc");
        }
        reports = gb::eta_c_scan(t, opt.n, grid);
    } else {
        reports = gb::mc_condition_scan(t, opt.n, opt.reps, opt.seed, grid, 10000,
                                        resolve_threads(opt.threads));
    }

    gb::json arr = gb::json::array();
    for (const gb::condition_report& rep : reports) arr.push_back(gb::to_json(rep));
    std::cout << arr.dump(2) << "\n";

    if (!opt.out.empty()) {
        const fs::path dir(opt.out);
        fs::create_directories(dir);
        const std::string stem = gb::to_string(m) + "_condition";
        gb::write_text_file(dir / (stem + ".json"), arr.dump(2) + "\n");
        const std::string digest = gb::fnv1a_digest(
            "check " + gb::to_string(m) + " n=" + std::to_string(opt.n) + " source=" +
            opt.source + " eta=" + opt.eta_spec + " seed=" + std::to_string(opt.seed));
        emit_manifest(dir, stem, command_line, digest, opt.seed, started,
                      {stem + ".json"});
    }
    return 0;
}

// ---------------------------------------------------------------------------
// mi
// ---------------------------------------------------------------------------

struct mi_options {
    std::string estimator;
    std::string model;
    std::size_t n = 0;
    std::string data_file;
    double rho = 0.0;
    bool rho_given = false;
    std::size_t samples = 0;
    int k = 3;
    int bins = 8;
    std::uint64_t seed = 1;
};

// Shipped generator: standard-Gaussian pairs with correlation rho, for
// estimator calibration (true MI = -0.5 ln(1 - rho^2)).
void correlated_gaussians(double rho, std::size_t count, std::uint64_t seed,
                          std::vector<double>& x, std::vector<double>& y) {
    if (!(rho > -1.0 && rho < 1.0)) {
        throw gb::config_error("--rho must lie in (-1, 1)");
    }
    if (count < 8) throw gb::config_error("--samples must be at least 8");
    gb::rng_stream rng(seed, 0);
    x.resize(count);
    y.resize(count);
    const double ortho = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < count; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        x[i] = g1;
        y[i] = rho * g1 + ortho * g2;
    }
}

// CSV loader: comma-separated numeric columns, optional single header row
// (auto-detected: a first row with any non-numeric field is a header).
std::vector<std::vector<double>> load_csv_columns(const fs::path& file) {
    const std::string text = read_text_file(file);
    std::vector<std::vector<double>> columns;
    std::size_t line_no = 0;
    bool first_content_row = true;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_on(line, ',');
        std::vector<double> values;
        values.reserve(fields.size());
        bool numeric = true;
        for (const std::string& f : fields) {
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0') {
                numeric = false;
                break;
            }
            values.push_back(v);
        }
        if (!numeric) {
            if (first_content_row) { // header row
                first_content_row = false;
                continue;
            }
            throw gb::config_error(file.string() + ":" + std::to_string(line_no) +
                                   ": non-numeric field in data row");
        }
        if (columns.empty()) {
            columns.resize(values.size());
        } else if (values.size() != columns.size()) {
            throw gb::config_error(file.string() + ":" + std::to_string(line_no) +
                                   ": expected " + std::to_string(columns.size()) +
                                   " fields, got " + std::to_string(values.size()));
        }
        for (std::size_t c = 0; c < values.size(); ++c) {
            columns[c].push_back(values[c]);
        }
        first_content_row = false;
    }
    if (columns.empty() || columns[0].empty()) {
        throw gb::config_error(file.string() + ": no data rows");
    }
    return columns;
}

bool is_constant_column(const std::vector<double>& col) {
    for (double v : col) {
        if (v != col.front()) return false;
    }
    return true;
}

std::vector<int> to_int_labels(const std::vector<double>& col, const std::string& what) {
    std::vector<int> labels(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
        const double r = std::round(col[i]);
        if (std::abs(col[i] - r) > 1e-9) {
            throw gb::config_error(what + ": label column must hold integers, found " +
                                   gb::format_value(col[i]));
        }
        labels[i] = static_cast<int>(r);
    }
    return labels;
}

int run_mi_cmd(const mi_options& opt, const std::string&) {
    const bool from_data = !opt.data_file.empty();
    const bool from_rho = opt.rho_given;
    if (from_data && from_rho) {
        throw gb::config_error("choose one input source: --data or --rho/--samples");
    }

    gb::mi_estimate est;
    if (opt.estimator == "closed_form") {
        if (opt.model.empty() || opt.n == 0) {
            throw gb::config_error("--estimator closed_form requires --model and --n");
        }
        const gb::learning_tuple t = default_tuple(gb::parse_model_id(opt.model), opt.n);
        const std::vector<gb::mi_estimate> ests = gb::closed_form_mi(t, opt.n);
        gb::json j;
        j["model"] = gb::to_string(t.model);
        j["n"] = opt.n;
        double sum = 0.0;
        gb::json arr = gb::json::array();
        for (const gb::mi_estimate& e : ests) {
            sum += e.value;
            arr.push_back(gb::to_json(e));
        }
        j["estimates"] = arr;
        j["mi_sum"] = sum;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (opt.estimator == "ksg" || opt.estimator == "histogram") {
        std::vector<double> x;
        std::vector<double> y;
        if (from_data) {
            const auto cols = load_csv_columns(opt.data_file);
            if (cols.size() != 2) {
                throw gb::config_error("--estimator " + opt.estimator +
                                       " expects a two-column data file, got " +
                                       std::to_string(cols.size()) + " columns");
            }
            for (std::size_t c = 0; c < 2; ++c) {
                if (is_constant_column(cols[c])) {
                    est.estimator = opt.estimator == "ksg" ? gb::mi_estimator::ksg
                                                           : gb::mi_estimator::histogram;
                    est.value = 0.0;
                    est.raw_value = 0.0;
                    est.sample_count = cols[c].size();
                    est.warnings.push_back("degenerate axis: column " +
                                           std::to_string(c + 1) +
                                           " is constant, mutual information is 0");
                    std::cout << gb::to_json(est).dump(2) << "\n";
                    return 0;
                }
            }
            x = cols[0];
            y = cols[1];
        } else if (from_rho) {
            if (opt.samples == 0) throw gb::config_error("--rho requires --samples");
            correlated_gaussians(opt.rho, opt.samples, opt.seed, x, y);
        } else {
            throw gb::config_error("--estimator " + opt.estimator +
                                   " requires --data or --rho/--samples");
        }
        est = opt.estimator == "ksg" ? gb::ksg_mi(x, y, opt.k)
                                     : gb::histogram_mi(x, y, opt.bins);
        if (from_rho) est.seed = opt.seed;
        std::cout << gb::to_json(est).dump(2) << "\n";
        return 0;
    }

    if (opt.estimator == "mixed" || opt.estimator == "mixed_dc") {
        std::vector<int> labels;
        std::vector<double> cont;
        if (from_data) {
            const auto cols = load_csv_columns(opt.data_file);
            if (cols.size() != 2) {
                throw gb::config_error(
                    "--estimator mixed expects a two-column data file "
                    "(labels, values), got " +
                    std::to_string(cols.size()) + " columns");
            }
            labels = to_int_labels(cols[0], "--estimator mixed");
            cont = cols[1];
        } else if (from_rho) {
            if (opt.samples == 0) throw gb::config_error("--rho requires --samples");
            std::vector<double> x;
            correlated_gaussians(opt.rho, opt.samples, opt.seed, x, cont);
            labels.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) labels[i] = x[i] > 0.0 ? 1 : 0;
        } else {
            throw gb::config_error("--estimator mixed requires --data or --rho/--samples");
        }
        est = gb::mixed_mi(labels, cont, opt.k);
        if (from_rho) est.seed = opt.seed;
        std::cout << gb::to_json(est).dump(2) << "\n";
        return 0;
    }

    if (opt.estimator == "chain_rule") {
        if (!from_data) {
            throw gb::config_error(
                "--estimator chain_rule requires --data with columns "
                "w, x..., y (y binary)");
        }
        const auto cols = load_csv_columns(opt.data_file);
        if (cols.size() < 3) {
            throw gb::config_error(
                "--estimator chain_rule expects at least three columns "
                "(w, x..., y), got " +
                std::to_string(cols.size()));
        }
        const std::size_t rows = cols[0].size();
        std::vector<std::vector<double>> w(rows);
        std::vector<std::vector<double>> xs(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            w[i] = {cols[0][i]};
            xs[i].reserve(cols.size() - 2);
            for (std::size_t c = 1; c + 1 < cols.size(); ++c) {
                xs[i].push_back(cols[c][i]);
            }
        }
        const std::vector<int> y = to_int_labels(cols.back(), "--estimator chain_rule");
        est = gb::chain_rule_mi(w, xs, y, opt.k);
        std::cout << gb::to_json(est).dump(2) << "\n";
        return 0;
    }

    throw gb::config_error(
        "--estimator must be one of closed_form, ksg, mixed, chain_rule, "
        "histogram; got '" +
        opt.estimator + "'");
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct sweep_options {
    std::string config_file;
    std::string out = ".";
    bool json = false;
    unsigned threads = 0;
};

int run_sweep_cmd(const sweep_options& opt, const std::string& command_line) {
    const std::string text = read_text_file(opt.config_file);
    const gb::sweep_config cfg = gb::parse_sweep_config(text, opt.config_file);

    const std::string started = gb::iso_utc_now();
    const gb::sweep_result res = gb::run_sweep(cfg, resolve_threads(opt.threads));

    const fs::path dir(opt.out);
    fs::create_directories(dir);
    const std::string stem = fs::path(opt.config_file).stem().string();

    std::vector<std::string> outputs;
    const gb::curve_table results = gb::sweep_results_table(res, cfg);
    gb::write_csv(dir / (stem + "_results.csv"), results.columns, results.rows);
    outputs.push_back(stem + "_results.csv");
    const gb::curve_table bounds = gb::sweep_bounds_table(res);
    gb::write_csv(dir / (stem + "_bounds.csv"), bounds.columns, bounds.rows);
    outputs.push_back(stem + "_bounds.csv");
    if (opt.json) {
        gb::write_text_file(dir / (stem + "_results.json"),
                            gb::to_json(res, cfg).dump(2) + "\n");
        outputs.push_back(stem + "_results.json");
    }
    emit_manifest(dir, stem, command_line, gb::fnv1a_digest(text), cfg.master_seed,
                  started, outputs);

    for (const gb::sweep_row& row : res.rows) {
        std::cout << "n=" << row.n << " gen=" << gb::format_value(row.gen_mean) << "±"
                  << gb::format_value(row.gen_stderr);
        if (row.closed_gen.has_value()) {
            std::cout << " closed=" << gb::format_value(*row.closed_gen);
        }
        std::cout << "\n";
    }
    if (res.condition.has_value()) {
        std::cout << "pooled max_c=" << gb::format_value(res.condition->pooled_max_c)
                  << " ±" << gb::format_value(res.condition->pooled_ci_halfwidth)
                  << (res.condition->holds ? " (holds)" : " (does not hold)") << "\n";
    }
    for (const std::string& w : res.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "wrote " << outputs.size() << " files to " << dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    const std::string command_line = join_args(argc, argv);

    CLI::App app{"Numerical laboratory for information-theoretic "
                 "generalization bounds"};
    app.set_version_flag("--version", std::string(gb::version_string));
    app.require_subcommand(1);

    example_options ex;
    CLI::App* ex_cmd = app.add_subcommand(
        "example", "Reproduce a built-in study; emit curves CSV and verdicts JSON");
    ex_cmd->add_option("id", ex.id, "study id, or 'all'")->required();
    ex_cmd->add_option("--seed", ex.seed, "master seed (default 1)");
    ex_cmd->add_option("--reps", ex.reps,
                       "Monte-Carlo repetitions (0 = per-study default)");
    ex_cmd->add_option("--out", ex.out, "output directory (default .)");
    ex_cmd->add_flag("--json", ex.json, "also mirror the curves table as JSON");
    ex_cmd->add_option("--threads", ex.threads, "worker threads (0 = all cores)");

    check_options ck;
    CLI::App* ck_cmd =
        app.add_subcommand("check", "Scan the (eta, c)-central condition");
    ck_cmd->add_option("model", ck.model, "model id")->required();
    ck_cmd->add_option("--eta-grid", ck.eta_spec,
                       "eta grid: comma list or start:stop:count")
        ->required();
    ck_cmd->add_option("--n", ck.n, "sample size (default 100)");
    ck_cmd->add_option("--source", ck.source, "closed | mc (default closed)");
    ck_cmd->add_option("--reps", ck.reps, "MC repetitions (default 1000)");
    ck_cmd->add_option("--seed", ck.seed, "master seed (default 1)");
    ck_cmd->add_option("--out", ck.out, "also write the report into this directory");
    ck_cmd->add_option("--threads", ck.threads, "worker threads (0 = all cores)");

    mi_options mi;
    CLI::App* mi_cmd = app.add_subcommand("mi", "Estimate mutual information");
    mi_cmd->add_option("--estimator", mi.estimator,
                       "closed_form | ksg | mixed | chain_rule | histogram")
        ->required();
    mi_cmd->add_option("--model", mi.model, "model id (closed_form)");
    mi_cmd->add_option("--n", mi.n, "sample size (closed_form)");
    mi_cmd->add_option("--data", mi.data_file, "CSV data file");
    CLI::Option* rho_opt = mi_cmd->add_option(
        "--rho", mi.rho, "correlation of the shipped Gaussian generator");
    mi_cmd->add_option("--samples", mi.samples, "generator sample count");
    mi_cmd->add_option("--k", mi.k, "kNN order (default 3)");
    mi_cmd->add_option("--bins", mi.bins, "histogram bins per axis (default 8)");
    mi_cmd->add_option("--seed", mi.seed, "generator seed (default 1)");

    sweep_options sw;
    CLI::App* sw_cmd =
        app.add_subcommand("sweep", "Run a Monte-Carlo sweep from a config file");
    sw_cmd->add_option("--config", sw.config_file, "key = value config file")
        ->required();
    sw_cmd->add_option("--out", sw.out, "output directory (default .)");
    sw_cmd->add_flag("--json", sw.json, "also mirror the result tables as JSON");
    sw_cmd->add_option("--threads", sw.threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit 0; any parse error is usage
    }

    try {
        mi.rho_given = rho_opt->count() > 0;
        if (*ex_cmd) return run_example_cmd(ex, command_line);
        if (*ck_cmd) return run_check_cmd(ck, command_line);
        if (*mi_cmd) return run_mi_cmd(mi, command_line);
        if (*sw_cmd) return run_sweep_cmd(sw, command_line);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const gb::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gb::invalid_input_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
