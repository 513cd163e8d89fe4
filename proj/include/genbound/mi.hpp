// Mutual-information computation: exact closed forms for the analytic models
// and statistical estimators for the logistic experiment.
//
// The kNN estimators share one engine.  For each query point the k-th
// smallest joint max-norm distance rho is located (ties broken by smallest
// index); with rho > 0 the classic Kraskov-1 form applies with strict
// marginal counts, and with rho = 0 (possible once an axis is discrete) the
// coincident points themselves are counted, following the mixed
// discrete-continuous construction.  Both reduce to
//     xi_i = digamma(k_i) + digamma(N) - digamma(n_x+1) - digamma(n_y+1)
// and the estimate is the average of xi_i, clipped at zero with the raw
// value kept for diagnostics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/models.hpp"
#include "genbound/special.hpp"

namespace genbound {

enum class mi_estimator {
    closed_form,
    ksg,
    mixed_dc,
    histogram,
    chain_rule,
};

inline const char* to_string(mi_estimator e) {
    switch (e) {
        case mi_estimator::closed_form: return "closed_form";
        case mi_estimator::ksg: return "ksg";
        case mi_estimator::mixed_dc: return "mixed_dc";
        case mi_estimator::histogram: return "histogram";
        case mi_estimator::chain_rule: return "chain_rule";
    }
    return "unknown";
}

struct mi_components {
    double i_wy = 0.0;     // I(W;Y)
    double i_wx_y0 = 0.0;  // I(W;X | Y=0)
    double i_wx_y1 = 0.0;  // I(W;X | Y=1)
    double p_y0 = 0.0;
    double p_y1 = 0.0;
};

struct mi_estimate {
    double value = 0.0;      // nats, clipped at >= 0
    double raw_value = 0.0;  // unclipped estimate
    mi_estimator estimator = mi_estimator::closed_form;
    int k = 0;               // kNN order when applicable, else 0
    std::size_t sample_count = 0;
    std::optional<std::uint64_t> seed;  // filled by sampling callers
    std::optional<mi_components> components;
    bool dataset_level = false;         // I(W;S) rather than per-sample
    bool deterministic_relation = false;
    std::vector<std::string> warnings;
};

namespace detail {

// One side of a sample pair: row-major points with a per-axis metric.
// Continuous axes use the max-norm over coordinates; discrete axes use the
// 0/1 metric (equal tuple vs not).
struct mi_axis {
    const double* data = nullptr;
    std::size_t dim = 1;
    bool discrete = false;

    double dist(std::size_t i, std::size_t j) const {
        const double* a = data + i * dim;
        const double* b = data + j * dim;
        if (discrete) {
            for (std::size_t d = 0; d < dim; ++d) {
                if (a[d] != b[d]) return 1.0;
            }
            return 0.0;
        }
        double m = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            m = std::max(m, std::fabs(a[d] - b[d]));
        }
        return m;
    }
};

inline void check_knn_inputs(std::size_t n_x, std::size_t n_y, int k, const char* what) {
    if (n_x != n_y) {
        throw invalid_input_error(std::string(what) + ": sample counts differ");
    }
    if (k < 1) throw invalid_input_error(std::string(what) + ": k must be >= 1");
    if (n_x < static_cast<std::size_t>(k) + 2) {
        throw invalid_input_error(std::string(what) +
                                  ": need at least k + 2 samples (k < count - 1)");
    }
}

// Core kNN mutual-information engine shared by the continuous and mixed
// estimators.  Exact brute-force neighbor search: desk-scale sample counts
// make tree acceleration unnecessary, and exactness keeps the symmetry
// invariant bit-reproducible.
inline mi_estimate knn_mi(const mi_axis& ax, const mi_axis& ay, std::size_t n, int k,
                          mi_estimator tag) {
    mi_estimate est;
    est.estimator = tag;
    est.k = k;
    est.sample_count = n;

    std::vector<std::pair<double, std::size_t>> joint(n - 1);
    const double psi_n = digamma(static_cast<double>(n));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            joint[m++] = {std::max(ax.dist(i, j), ay.dist(i, j)), j};
        }
        std::nth_element(joint.begin(), joint.begin() + (k - 1), joint.end());
        const double rho = joint[static_cast<std::size_t>(k - 1)].first;

        std::size_t k_tilde = 0;
        std::size_t n_x = 0;
        std::size_t n_y = 0;
        if (rho > 0.0) {
            k_tilde = static_cast<std::size_t>(k);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                if (ax.dist(i, j) < rho) ++n_x;
                if (ay.dist(i, j) < rho) ++n_y;
            }
        } else {
            // Zero k-th distance: the neighborhood is the set of coincident
            // points; count those on each axis as well.
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double dx = ax.dist(i, j);
                const double dy = ay.dist(i, j);
                if (dx == 0.0 && dy == 0.0) ++k_tilde;
                if (dx == 0.0) ++n_x;
                if (dy == 0.0) ++n_y;
            }
        }
        acc += digamma(static_cast<double>(k_tilde)) + psi_n -
               (digamma(static_cast<double>(n_x + 1)) +
                digamma(static_cast<double>(n_y + 1)));
    }
    est.raw_value = acc / static_cast<double>(n);
    est.value = std::max(0.0, est.raw_value);

    // A (near-)deterministic relation saturates the estimator at its ceiling
    // digamma(N) - digamma(k); flag rather than report the ceiling as truth.
    const double ceiling = psi_n - digamma(static_cast<double>(k));
    if (ceiling > 0.0 && est.raw_value >= 0.9 * ceiling) {
        est.deterministic_relation = true;
        est.warnings.push_back(
            "estimate is near the estimator ceiling digamma(N) - digamma(k); "
            "the underlying dependence may be deterministic (I unbounded)");
    }
    return est;
}

inline void check_finite(const std::vector<double>& flat, const char* what) {
    for (double v : flat) {
        if (!std::isfinite(v)) {
            throw invalid_input_error(std::string(what) + ": non-finite coordinate");
        }
    }
}

inline std::vector<double> flatten(const std::vector<std::vector<double>>& pts,
                                   std::size_t& dim, const char* what) {
    if (pts.empty()) throw invalid_input_error(std::string(what) + ": empty sample");
    dim = pts.front().size();
    if (dim == 0) throw invalid_input_error(std::string(what) + ": zero-dimensional points");
    std::vector<double> flat;
    flat.reserve(pts.size() * dim);
    for (const auto& p : pts) {
        if (p.size() != dim) {
            throw invalid_input_error(std::string(what) + ": ragged point dimensions");
        }
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return flat;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

// Per-sample I(W;Z_i) for the analytic models; the selection model returns a
// single dataset-level I(W;S) entry instead.
inline std::vector<mi_estimate> closed_form_mi(const learning_tuple& t, std::size_t n) {
    if (t.model == model_id::logistic_regression) {
        throw invalid_input_error(
            "closed_form_mi: logistic_regression has no closed form; use the "
            "ksg/mixed/chain_rule estimators");
    }
    const closed_form_report cf = closed_form(t, n);
    std::vector<mi_estimate> out;
    if (cf.mi_dataset_level) {
        mi_estimate est;
        est.estimator = mi_estimator::closed_form;
        est.sample_count = n;
        est.dataset_level = true;
        est.raw_value = cf.mi_total.value_or(0.0);
        est.value = std::max(0.0, est.raw_value);
        out.push_back(std::move(est));
        return out;
    }
    out.reserve(cf.mi_per_sample.size());
    for (double v : cf.mi_per_sample) {
        mi_estimate est;
        est.estimator = mi_estimator::closed_form;
        est.sample_count = n;
        est.raw_value = v;
        est.value = std::max(0.0, v);
        if (cf.mi_is_upper_bound) {
            est.warnings.push_back(
                "value is a convexity upper bound on I(W;Z_i), not the exact "
                "mutual information");
        }
        out.push_back(std::move(est));
    }
    return out;
}

// ---------------------------------------------------------------------------
// kNN estimators
// ---------------------------------------------------------------------------

// Kraskov variant-1 estimator for continuous-continuous pairs.
inline mi_estimate ksg_mi(const std::vector<std::vector<double>>& x_samples,
                          const std::vector<std::vector<double>>& y_samples, int k = 3) {
    std::size_t dim_x = 0;
    std::size_t dim_y = 0;
    const std::vector<double> fx = detail::flatten(x_samples, dim_x, "ksg_mi");
    const std::vector<double> fy = detail::flatten(y_samples, dim_y, "ksg_mi");
    detail::check_finite(fx, "ksg_mi");
    detail::check_finite(fy, "ksg_mi");
    detail::check_knn_inputs(x_samples.size(), y_samples.size(), k, "ksg_mi");
    const detail::mi_axis ax{fx.data(), dim_x, false};
    const detail::mi_axis ay{fy.data(), dim_y, false};
    return detail::knn_mi(ax, ay, x_samples.size(), k, mi_estimator::ksg);
}

// Scalar convenience overload.
inline mi_estimate ksg_mi(const std::vector<double>& x_samples,
                          const std::vector<double>& y_samples, int k = 3) {
    detail::check_finite(x_samples, "ksg_mi");
    detail::check_finite(y_samples, "ksg_mi");
    detail::check_knn_inputs(x_samples.size(), y_samples.size(), k, "ksg_mi");
    const detail::mi_axis ax{x_samples.data(), 1, false};
    const detail::mi_axis ay{y_samples.data(), 1, false};
    return detail::knn_mi(ax, ay, x_samples.size(), k, mi_estimator::ksg);
}

// Mixed discrete-continuous estimator: the discrete side uses the 0/1
// metric, and zero-radius neighborhoods fall back to coincidence counting.
inline mi_estimate mixed_mi(const std::vector<int>& discrete_samples,
                            const std::vector<std::vector<double>>& continuous_samples,
                            int k = 3) {
    std::size_t dim_c = 0;
    const std::vector<double> fc =
        detail::flatten(continuous_samples, dim_c, "mixed_mi");
    detail::check_finite(fc, "mixed_mi");
    detail::check_knn_inputs(discrete_samples.size(), continuous_samples.size(), k,
                             "mixed_mi");
    std::vector<double> labels(discrete_samples.size());
    std::transform(discrete_samples.begin(), discrete_samples.end(), labels.begin(),
                   [](int v) { return static_cast<double>(v); });
    const detail::mi_axis ax{labels.data(), 1, true};
    const detail::mi_axis ay{fc.data(), dim_c, false};
    mi_estimate est =
        detail::knn_mi(ax, ay, discrete_samples.size(), k, mi_estimator::mixed_dc);

    // Small label classes force the k-th joint neighbor across class
    // boundaries; surface that as a reliability warning.
    std::vector<std::pair<int, std::size_t>> class_sizes;
    for (int v : discrete_samples) {
        auto it = std::find_if(class_sizes.begin(), class_sizes.end(),
                               [&](const auto& p) { return p.first == v; });
        if (it == class_sizes.end()) {
            class_sizes.push_back({v, 1});
        } else {
            it->second += 1;
        }
    }
    for (const auto& [label, count] : class_sizes) {
        if (count < static_cast<std::size_t>(k) + 1) {
            est.warnings.push_back("label class " + std::to_string(label) + " has " +
                                   std::to_string(count) +
                                   " members (< k + 1); its neighborhoods use the "
                                   "reduced effective order");
        }
    }
    return est;
}

// Scalar convenience overload.
inline mi_estimate mixed_mi(const std::vector<int>& discrete_samples,
                            const std::vector<double>& continuous_samples, int k = 3) {
    std::vector<std::vector<double>> pts(continuous_samples.size());
    for (std::size_t i = 0; i < continuous_samples.size(); ++i) {
        pts[i] = {continuous_samples[i]};
    }
    return mixed_mi(discrete_samples, pts, k);
}

// ---------------------------------------------------------------------------
// Chain-rule decomposition for I(W; (X, Y)) with binary Y
// ---------------------------------------------------------------------------

// I(W;(X,Y)) = I(W;Y) + P(Y=0) I(W;X|Y=0) + P(Y=1) I(W;X|Y=1).
// The first term uses the mixed estimator, the conditionals the continuous
// one restricted to each label class.
inline mi_estimate chain_rule_mi(const std::vector<std::vector<double>>& w_samples,
                                 const std::vector<std::vector<double>>& x_samples,
                                 const std::vector<int>& y_labels, int k = 3) {
    const std::size_t n = w_samples.size();
    if (x_samples.size() != n || y_labels.size() != n) {
        throw invalid_input_error("chain_rule_mi: misaligned sample triples");
    }
    for (int y : y_labels) {
        if (y != 0 && y != 1) {
            throw invalid_input_error("chain_rule_mi: labels must be binary (0/1)");
        }
    }

    mi_estimate est;
    est.estimator = mi_estimator::chain_rule;
    est.k = k;
    est.sample_count = n;

    mi_estimate wy = mixed_mi(y_labels, w_samples, k);
    for (const auto& w : wy.warnings) est.warnings.push_back("I(W;Y): " + w);

    mi_components comps;
    comps.i_wy = wy.value;
    double raw = wy.raw_value;
    double value = wy.value;

    for (int label = 0; label <= 1; ++label) {
        std::vector<std::vector<double>> w_sub;
        std::vector<std::vector<double>> x_sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (y_labels[i] == label) {
                w_sub.push_back(w_samples[i]);
                x_sub.push_back(x_samples[i]);
            }
        }
        const double p_hat = static_cast<double>(w_sub.size()) / static_cast<double>(n);
        double cond_value = 0.0;
        double cond_raw = 0.0;
        if (w_sub.empty()) {
            est.warnings.push_back("label " + std::to_string(label) +
                                   " absent; its conditional term has zero weight");
        } else {
            const int k_eff =
                std::min<int>(k, static_cast<int>(w_sub.size()) - 2);
            if (k_eff < 1) {
                est.warnings.push_back("label class " + std::to_string(label) +
                                       " too small for a conditional estimate; "
                                       "term set to 0");
            } else {
                if (k_eff < k) {
                    est.warnings.push_back("label class " + std::to_string(label) +
                                           " uses reduced k = " + std::to_string(k_eff));
                }
                mi_estimate cond = ksg_mi(w_sub, x_sub, k_eff);
                cond_value = cond.value;
                cond_raw = cond.raw_value;
                if (cond.deterministic_relation) {
                    est.warnings.push_back("conditional estimate for label " +
                                           std::to_string(label) +
                                           " is near its ceiling");
                }
            }
        }
        if (label == 0) {
            comps.i_wx_y0 = cond_value;
            comps.p_y0 = p_hat;
        } else {
            comps.i_wx_y1 = cond_value;
            comps.p_y1 = p_hat;
        }
        value += p_hat * cond_value;
        raw += p_hat * cond_raw;
    }

    est.components = comps;
    est.raw_value = raw;
    est.value = value;  // recombination of clipped components; >= 0 by construction
    est.deterministic_relation = wy.deterministic_relation;
    return est;
}

// ---------------------------------------------------------------------------
// Histogram baseline
// ---------------------------------------------------------------------------

namespace detail {

// Equal-frequency bin assignment; returns bin index per sample and the
// effective bin count (duplicate quantile edges collapse bins).
inline std::size_t equal_frequency_bins(const std::vector<double>& values,
                                        std::size_t bins,
                                        std::vector<std::size_t>& assignment) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = values.size();
    std::vector<double> edges;  // internal edges, strictly increasing
    edges.reserve(bins - 1);
    for (std::size_t b = 1; b < bins; ++b) {
        const double q = sorted[(b * n) / bins];
        if (edges.empty() || q > edges.back()) edges.push_back(q);
    }
    assignment.resize(n);
    std::vector<bool> used(edges.size() + 1, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bin = static_cast<std::size_t>(
            std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
        assignment[i] = bin;
        used[bin] = true;
    }
    std::size_t effective = 0;
    for (bool u : used) effective += u ? 1 : 0;
    return effective;
}

} // namespace detail

// Plug-in MI of the empirical joint histogram with equal-frequency edges.
// A coarse, positively biased baseline used only as a sanity cross-check.
inline mi_estimate histogram_mi(const std::vector<double>& x_samples,
                                const std::vector<double>& y_samples,
                                std::size_t bins = 8) {
    if (x_samples.size() != y_samples.size()) {
        throw invalid_input_error("histogram_mi: sample counts differ");
    }
    if (bins < 2) throw invalid_input_error("histogram_mi: bins must be >= 2");
    const std::size_t n = x_samples.size();
    if (n < bins) throw invalid_input_error("histogram_mi: fewer samples than bins");
    detail::check_finite(x_samples, "histogram_mi");
    detail::check_finite(y_samples, "histogram_mi");

    mi_estimate est;
    est.estimator = mi_estimator::histogram;
    est.sample_count = n;

    std::vector<std::size_t> bx;
    std::vector<std::size_t> by;
    const std::size_t kx = detail::equal_frequency_bins(x_samples, bins, bx);
    const std::size_t ky = detail::equal_frequency_bins(y_samples, bins, by);
    if (kx < 2 || ky < 2) {
        est.warnings.push_back("degenerate axis: fewer than two occupied bins; "
                               "histogram MI is 0 by construction");
        est.raw_value = 0.0;
        est.value = 0.0;
        return est;
    }

    std::vector<std::size_t> joint(bins * bins, 0);
    std::vector<std::size_t> marg_x(bins, 0);
    std::vector<std::size_t> marg_y(bins, 0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[bx[i] * bins + by[i]] += 1;
        marg_x[bx[i]] += 1;
        marg_y[by[i]] += 1;
    }
    double mi = 0.0;
    std::size_t occupied = 0;
    const double dn = static_cast<double>(n);
    for (std::size_t a = 0; a < bins; ++a) {
        for (std::size_t b = 0; b < bins; ++b) {
            const std::size_t c = joint[a * bins + b];
            if (c == 0) continue;
            ++occupied;
            const double p = static_cast<double>(c) / dn;
            mi += p * std::log(p * dn * dn /
                               (static_cast<double>(marg_x[a]) *
                                static_cast<double>(marg_y[b])));
        }
    }
    est.raw_value = mi;
    est.value = std::max(0.0, mi);

    // Miller-Madow-style finite-sample bias scale of the plug-in estimate.
    const double bias =
        static_cast<double>(occupied - 1) / (2.0 * dn) -
        static_cast<double>(kx - 1) / (2.0 * dn) -
        static_cast<double>(ky - 1) / (2.0 * dn);
    {
        char note[160];
        std::snprintf(note, sizeof(note),
                      "plug-in estimate; Miller-Madow bias scale ~ %.3g nats "
                      "(%zu occupied cells, %zux%zu bins, N=%zu)",
                      bias, occupied, kx, ky, n);
        est.warnings.push_back(note);
    }

    const double ceiling = std::log(static_cast<double>(std::min(kx, ky)));
    if (ceiling > 0.0 && est.raw_value >= 0.9 * ceiling) {
        est.deterministic_relation = true;
        est.warnings.push_back("estimate is near the histogram ceiling ln(min bins); "
                               "dependence may be deterministic");
    }
    return est;
}

} // namespace genbound
