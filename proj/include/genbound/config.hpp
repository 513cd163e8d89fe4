// Flat key=value configuration for sweep runs.
//
// Grammar: one `key = value` pair per line; `#` starts a comment; blank
// lines ignored.  Unknown keys, duplicate keys, and malformed values are
// rejected with line-precise diagnostics.  Lists are comma-separated.

#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/mc.hpp"

namespace genbound {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct config_entry {
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

inline std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line);
}

inline double parse_double_value(const std::string& v, const std::string& source,
                                 std::size_t line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error(where(source, line) + ": key '" + key +
                           "' expects a real number, got '" + v + "'");
    }
}

inline std::uint64_t parse_u64_value(const std::string& v, const std::string& source,
                                     std::size_t line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw config_error(where(source, line) + ": key '" + key +
                           "' expects a non-negative integer, got '" + v + "'");
    }
}

inline bool parse_bool_value(const std::string& v, const std::string& source,
                             std::size_t line, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error(where(source, line) + ": key '" + key +
                       "' expects true/false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

} // namespace detail

// Parse a sweep configuration from text.  `source` names the origin (file
// path) for diagnostics.  The result is validated before being returned.
inline sweep_config parse_sweep_config(const std::string& text,
                                       const std::string& source = "<config>") {
    std::map<std::string, detail::config_entry> entries;
    std::stringstream stream(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        const std::string line =
            detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(detail::where(source, line_no) +
                               ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw config_error(detail::where(source, line_no) + ": empty key");
        }
        if (entries.count(key) > 0) {
            throw config_error(detail::where(source, line_no) + ": duplicate key '" +
                               key + "' (first set at line " +
                               std::to_string(entries[key].line) + ")");
        }
        entries[key] = {value, line_no, false};
    }

    const auto take = [&](const std::string& key) -> detail::config_entry* {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };

    sweep_config cfg;
    const detail::config_entry* model = take("model");
    if (model == nullptr) {
        throw config_error(source + ": missing required key 'model'");
    }
    cfg.model.model = parse_model_id(model->value);  // throws on unknown name
    model_params& p = cfg.model.params;

    bool mean_set = false;
    if (auto* e = take("mean")) {
        p.mean = detail::parse_double_value(e->value, source, e->line, "mean");
        mean_set = true;
    }
    if (auto* e = take("noise_sd")) {
        p.noise_sd = detail::parse_double_value(e->value, source, e->line, "noise_sd");
    }
    if (auto* e = take("design")) {
        p.design.clear();
        for (const std::string& s : detail::split_list(e->value)) {
            p.design.push_back(detail::parse_double_value(s, source, e->line, "design"));
        }
    }
    if (auto* e = take("slope")) {
        p.w_star = {detail::parse_double_value(e->value, source, e->line, "slope")};
    }
    if (auto* e = take("w_star")) {
        p.w_star.clear();
        for (const std::string& s : detail::split_list(e->value)) {
            p.w_star.push_back(detail::parse_double_value(s, source, e->line, "w_star"));
        }
        p.dim = static_cast<int>(p.w_star.size());
    }
    if (auto* e = take("dim")) {
        p.dim =
            static_cast<int>(detail::parse_u64_value(e->value, source, e->line, "dim"));
    }
    if (auto* e = take("radius")) {
        p.hypothesis_radius =
            detail::parse_double_value(e->value, source, e->line, "radius");
    }
    if (auto* e = take("reg_coeff")) {
        p.reg_coeff = detail::parse_double_value(e->value, source, e->line, "reg_coeff");
    }
    if (auto* e = take("reg_bound")) {
        p.reg_bound = detail::parse_double_value(e->value, source, e->line, "reg_bound");
    }
    if (auto* e = take("label_sign")) {
        if (e->value == "negative") {
            p.label_sign = label_sign_convention::negative_inner_product;
        } else if (e->value == "positive") {
            p.label_sign = label_sign_convention::positive_inner_product;
        } else {
            throw config_error(detail::where(source, e->line) +
                               ": label_sign expects 'negative' or 'positive'");
        }
    }

    {
        const detail::config_entry* e = take("n_grid");
        if (e == nullptr) {
            throw config_error(source + ": missing required key 'n_grid'");
        }
        for (const std::string& s : detail::split_list(e->value)) {
            cfg.n_grid.push_back(static_cast<std::size_t>(
                detail::parse_u64_value(s, source, e->line, "n_grid")));
        }
    }
    {
        const detail::config_entry* e = take("repetitions");
        if (e == nullptr) {
            throw config_error(source + ": missing required key 'repetitions'");
        }
        cfg.repetitions = static_cast<std::size_t>(
            detail::parse_u64_value(e->value, source, e->line, "repetitions"));
    }
    if (auto* e = take("master_seed")) {
        cfg.master_seed = detail::parse_u64_value(e->value, source, e->line, "master_seed");
    }
    if (auto* e = take("eta_grid")) {
        for (const std::string& s : detail::split_list(e->value)) {
            cfg.eta_grid.push_back(
                detail::parse_double_value(s, source, e->line, "eta_grid"));
        }
    }
    if (auto* e = take("bound_eta")) {
        cfg.bound_eta = detail::parse_double_value(e->value, source, e->line, "bound_eta");
    }
    if (auto* e = take("knn_k")) {
        cfg.estimators.knn_k = static_cast<int>(
            detail::parse_u64_value(e->value, source, e->line, "knn_k"));
    }
    if (auto* e = take("histogram_bins")) {
        cfg.estimators.histogram_bins = static_cast<std::size_t>(
            detail::parse_u64_value(e->value, source, e->line, "histogram_bins"));
    }
    if (auto* e = take("test_points")) {
        cfg.test_points = static_cast<std::size_t>(
            detail::parse_u64_value(e->value, source, e->line, "test_points"));
    }
    if (auto* e = take("with_cgf")) {
        cfg.with_cgf = detail::parse_bool_value(e->value, source, e->line, "with_cgf");
    }
    if (auto* e = take("with_mi")) {
        cfg.with_mi = detail::parse_bool_value(e->value, source, e->line, "with_mi");
    }
    if (auto* e = take("with_bounds")) {
        cfg.with_bounds =
            detail::parse_bool_value(e->value, source, e->line, "with_bounds");
    }

    for (const auto& [key, entry] : entries) {
        if (!entry.used) {
            throw config_error(detail::where(source, entry.line) + ": unknown key '" +
                               key + "'");
        }
    }

    // Model-specific defaults mirroring the factory functions.  A mean the
    // user set explicitly is left for validation to accept or reject.
    if (cfg.model.model == model_id::discrete_mean && !mean_set) {
        p.mean = 1.0;
    } else if (cfg.model.model == model_id::linear_regression) {
        // The configured design is a base pattern; the sweep extends it
        // cyclically to each grid n.
        if (p.design.empty()) p.design = {1.0};
        if (p.w_star.empty()) p.w_star = {1.0};
    } else if (cfg.model.model == model_id::logistic_regression) {
        if (p.w_star.empty()) {
            p.w_star = {0.5, 0.5};
            p.dim = 2;
        }
    }

    try {
        cfg.validate();
    } catch (const error& e) {
        throw config_error(source + ": " + e.what());
    }
    return cfg;
}

} // namespace genbound
