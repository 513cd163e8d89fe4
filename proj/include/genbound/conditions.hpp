// Fast-rate condition verification.
//
// The central object is the (eta, c)-central condition on the excess loss
// r = loss(W, Z) - loss(w*, Z) under the decoupled product measure:
//     log E[ e^{-eta r} ]  <=  -c eta E[r],    given 0 < E[r] < infinity.
// This file checks it from closed-form CGFs or from Monte-Carlo samples,
// and computes the implication mappings from the Bernstein, witness,
// sub-exponential and sub-Gamma conditions into (eta, c) pairs, plus the
// epsilon-relaxed (v, c)-central condition with v(eps) = eps^{1-beta}.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/models.hpp"
#include "genbound/rng.hpp"
#include "genbound/special.hpp"

namespace genbound {

struct condition_report {
    std::string condition_id;
    bool holds = false;
    std::optional<double> max_c;  // largest admissible c at this eta
    double eta = 0.0;
    double margin = 0.0;          // RHS - LHS of the defining inequality (nats)
    std::string source = "closed_form";  // or "empirical"
    std::optional<std::size_t> sample_count;
    std::optional<double> ci_halfwidth;  // 95% bootstrap halfwidth on max_c
    std::string reason;
    // Diagnostics: the two ingredients of the inequality.
    double cgf_value = std::numeric_limits<double>::quiet_NaN();
    double mean_r = std::numeric_limits<double>::quiet_NaN();
};

struct bernstein_params {
    double beta = 1.0;          // exponent in E[r^2] <= B (E r)^beta
    double B_const = 1.0;       // B >= 1
    double lower_bound_b = 1.0; // r >= -b almost surely
};

struct witness_params {
    double u = 1.0;   // truncation level, > 0
    double c_w = 1.0; // witness constant in (0, 1]
};

struct eta_c_pair {
    double eta = 0.0;
    double c = 0.0;
};

// ---------------------------------------------------------------------------
// Empirical CGF
// ---------------------------------------------------------------------------

// log (1/m) sum_k exp(-eta v_k), max-subtraction stabilized.
inline double empirical_cgf(const std::vector<double>& values, double eta) {
    if (values.empty()) throw invalid_input_error("empirical_cgf: empty sample");
    std::vector<double> tilted(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw invalid_input_error("empirical_cgf: non-finite sample value");
        }
        tilted[i] = -eta * values[i];
    }
    return log_mean_exp(tilted);
}

namespace detail {

inline double mean_of(const std::vector<double>& values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

// Grouped (block) bootstrap over an iid sample: precompute per-block sums of
// the tilted exponentials / values, then resample blocks.  Equivalent in
// distribution to the plain bootstrap at the block-count resolution while
// keeping 1000 resamples affordable for multi-million-point samples.
struct cgf_block_sums {
    std::vector<double> exp_sum;    // sum of exp(-eta v - max_shift) per block
    std::vector<double> value_sum;  // sum of v per block
    std::vector<std::size_t> count;
    double max_shift = 0.0;
};

inline cgf_block_sums make_cgf_blocks(const std::vector<double>& values, double eta,
                                      std::size_t n_blocks) {
    cgf_block_sums b;
    n_blocks = std::min<std::size_t>(n_blocks, values.size());
    b.exp_sum.assign(n_blocks, 0.0);
    b.value_sum.assign(n_blocks, 0.0);
    b.count.assign(n_blocks, 0);
    double max_t = -std::numeric_limits<double>::infinity();
    for (double v : values) max_t = std::max(max_t, -eta * v);
    b.max_shift = max_t;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t blk = i % n_blocks;
        b.exp_sum[blk] += std::exp(-eta * values[i] - max_t);
        b.value_sum[blk] += values[i];
        b.count[blk] += 1;
    }
    return b;
}

} // namespace detail

// ---------------------------------------------------------------------------
// (eta, c)-central condition check
// ---------------------------------------------------------------------------

// From a CGF value and mean: max_c = clamp(-cgf/(eta mean), 0, 1); holds
// iff the mean is strictly positive and max_c > 0.  The reported margin is
// RHS - LHS at c = max_c (zero when max_c is interior, positive when the
// clamp at 1 is active, negative exactly when the condition fails).
inline condition_report eta_c_check(double cgf_value, double mean_r, double eta) {
    if (!(eta > 0.0)) throw invalid_input_error("eta_c_check: eta must be > 0");
    condition_report rep;
    rep.condition_id = "eta_c_central";
    rep.eta = eta;
    rep.cgf_value = cgf_value;
    rep.mean_r = mean_r;
    if (!(mean_r > 0.0)) {
        rep.holds = false;
        rep.reason = "nonpositive_mean";
        rep.margin = -cgf_value;  // eta-central margin; definition needs E[r] > 0
        return rep;
    }
    const double raw_c = -cgf_value / (eta * mean_r);
    const double c = std::clamp(raw_c, 0.0, 1.0);
    rep.max_c = c;
    rep.margin = -c * eta * mean_r - cgf_value;
    rep.holds = c > 0.0;
    if (!rep.holds) rep.reason = "cgf_nonnegative";
    return rep;
}

// Closed-form scan over an eta grid for one model at sample size n.
inline std::vector<condition_report> eta_c_scan(const learning_tuple& t, std::size_t n,
                                                const std::vector<double>& eta_grid) {
    if (eta_grid.empty()) throw invalid_input_error("eta_c_scan: empty eta grid");
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (!(eta_grid[i] > 0.0)) {
            throw invalid_input_error("eta_c_scan: grid must be strictly positive");
        }
        if (i > 0 && !(eta_grid[i] > eta_grid[i - 1])) {
            throw invalid_input_error("eta_c_scan: grid must be strictly ascending");
        }
    }
    const closed_form_report cf = closed_form(t, n);
    if (!cf.excess.has_value()) {
        throw invalid_input_error("eta_c_scan: model has no closed-form excess risk; "
                                  "use the empirical scan");
    }
    const cgf_evaluator ev = make_cgf_evaluator(t, n, cgf_kind::excess_neg);
    std::vector<condition_report> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        detail::require_in_domain(eta, ev.eta_max, "eta_c_scan");
        out.push_back(eta_c_check(ev.closed_form(eta), *cf.excess, eta));
    }
    return out;
}

// Empirical scan over r-samples drawn under the product measure, with a
// grouped-bootstrap 95% CI on max_c.  `holds` additionally requires the
// lower CI endpoint of max_c to stay positive (log-mean-exp is biased at
// finite samples, so the point estimate alone is not trusted).
inline std::vector<condition_report> eta_c_scan(const std::vector<double>& r_values,
                                                const std::vector<double>& eta_grid,
                                                rng_stream& rng,
                                                std::size_t resamples = 1000) {
    if (r_values.empty()) throw invalid_input_error("eta_c_scan: empty sample");
    if (eta_grid.empty()) throw invalid_input_error("eta_c_scan: empty eta grid");
    const double mean_r = detail::mean_of(r_values);
    std::vector<condition_report> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        condition_report rep = eta_c_check(empirical_cgf(r_values, eta), mean_r, eta);
        rep.source = "empirical";
        rep.sample_count = r_values.size();
        if (rep.max_c.has_value() && resamples > 0) {
            const detail::cgf_block_sums blocks =
                detail::make_cgf_blocks(r_values, eta, 1000);
            const std::size_t nb = blocks.exp_sum.size();
            std::vector<double> cs;
            cs.reserve(resamples);
            for (std::size_t rrep = 0; rrep < resamples; ++rrep) {
                double es = 0.0;
                double vs = 0.0;
                std::size_t cnt = 0;
                for (std::size_t j = 0; j < nb; ++j) {
                    const std::size_t pick = rng.uniform_below(nb);
                    es += blocks.exp_sum[pick];
                    vs += blocks.value_sum[pick];
                    cnt += blocks.count[pick];
                }
                const double cgf_star =
                    blocks.max_shift + std::log(es / static_cast<double>(cnt));
                const double mean_star = vs / static_cast<double>(cnt);
                if (mean_star > 0.0) {
                    cs.push_back(std::clamp(-cgf_star / (eta * mean_star), 0.0, 1.0));
                } else {
                    cs.push_back(0.0);
                }
            }
            std::sort(cs.begin(), cs.end());
            const auto quantile = [&](double p) {
                const double pos = p * static_cast<double>(cs.size() - 1);
                const std::size_t i0 = static_cast<std::size_t>(pos);
                const std::size_t i1 = std::min(i0 + 1, cs.size() - 1);
                const double frac = pos - static_cast<double>(i0);
                return cs[i0] * (1.0 - frac) + cs[i1] * frac;
            };
            const double lo = quantile(0.025);
            const double hi = quantile(0.975);
            rep.ci_halfwidth = 0.5 * (hi - lo);
            if (rep.holds && lo <= 0.0) {
                rep.holds = false;
                rep.reason = "ci_includes_zero";
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bernstein condition and its implication
// ---------------------------------------------------------------------------

struct bernstein_result {
    double b_min = std::numeric_limits<double>::quiet_NaN();  // E[r^2]/(E r)^beta
    condition_report report;
};

inline bernstein_result bernstein_check_moments(double second_moment, double mean_r,
                                                double beta,
                                                std::optional<double> B = std::nullopt) {
    if (!(beta >= 0.0) || !(beta <= 1.0)) {
        throw invalid_input_error("bernstein_check: beta must lie in [0, 1]");
    }
    if (!(second_moment >= 0.0) || !std::isfinite(second_moment)) {
        throw invalid_input_error("bernstein_check: second moment must be finite, >= 0");
    }
    bernstein_result res;
    res.report.condition_id = "bernstein";
    res.report.source = "closed_form";
    res.report.mean_r = mean_r;
    if (beta > 0.0 && !(mean_r > 0.0)) {
        res.report.holds = false;
        res.report.reason = "undefined_for_nonpositive_mean";
        return res;
    }
    res.b_min = beta == 0.0 ? second_moment : second_moment / std::pow(mean_r, beta);
    if (B.has_value()) {
        res.report.margin = *B - res.b_min;
        res.report.holds = res.b_min <= *B;
        if (!res.report.holds) res.report.reason = "B_min_exceeds_supplied_B";
    } else {
        res.report.holds = std::isfinite(res.b_min);
        res.report.margin = 0.0;
    }
    return res;
}

inline bernstein_result bernstein_check_samples(const std::vector<double>& r_values,
                                                double beta,
                                                std::optional<double> B = std::nullopt) {
    if (r_values.empty()) throw invalid_input_error("bernstein_check: empty sample");
    double m1 = 0.0;
    double m2 = 0.0;
    for (double v : r_values) {
        m1 += v;
        m2 += v * v;
    }
    const double inv = 1.0 / static_cast<double>(r_values.size());
    bernstein_result res = bernstein_check_moments(m2 * inv, m1 * inv, beta, B);
    res.report.source = "empirical";
    res.report.sample_count = r_values.size();
    return res;
}

// Closed-form excess moments of the Gaussian-mean problem:
// E[r] = sigma^2/n,  E[r^2] = 3 sigma^4/n^2 + 4 sigma^4/n.
struct gaussian_excess_moments_t {
    double mean = 0.0;
    double second_moment = 0.0;
};

inline gaussian_excess_moments_t gaussian_excess_moments(double noise_sd, std::size_t n) {
    if (n < 1) throw invalid_input_error("gaussian_excess_moments: n >= 1");
    const double s2 = noise_sd * noise_sd;
    const double dn = static_cast<double>(n);
    return {s2 / dn, 3.0 * s2 * s2 / (dn * dn) + 4.0 * s2 * s2 / dn};
}

// kappa(x) = (e^x - x - 1)/x^2 (continuous value 1/2 at x = 0); the weight
// function of the expected-Bernstein inequality, exposed for diagnostics.
inline double bernstein_kappa(double x) {
    if (std::fabs(x) < 1e-6) {
        return 0.5 + x / 6.0 + x * x / 24.0;  // series, avoids cancellation
    }
    return (std::expm1(x) - x) / (x * x);
}

// Bernstein (beta = 1, B, r >= -b a.s.)  =>  (min(1/b, 1/(2B(e-2))), 1/2)-central.
inline eta_c_pair bernstein_to_eta_c(double B, double lower_bound_b) {
    if (!(B >= 1.0)) throw invalid_input_error("bernstein_to_eta_c: B must be >= 1");
    if (!(lower_bound_b > 0.0)) {
        throw invalid_input_error("bernstein_to_eta_c: b must be > 0");
    }
    const double e_minus_2 = std::exp(1.0) - 2.0;
    return {std::min(1.0 / lower_bound_b, 1.0 / (2.0 * B * e_minus_2)), 0.5};
}

// ---------------------------------------------------------------------------
// Witness condition implication and diagnostic
// ---------------------------------------------------------------------------

// eta-central + (u, c_w)-witness  =>  (eta', c_w (1 - eta'/eta)/(eta' u + 1))-central
// for any 0 < eta' < eta.
inline eta_c_pair central_witness_to_eta_c(double eta, double u, double c_w,
                                           double eta_prime) {
    if (!(u > 0.0)) throw invalid_input_error("central_witness_to_eta_c: u must be > 0");
    if (!(c_w > 0.0) || !(c_w <= 1.0)) {
        throw invalid_input_error("central_witness_to_eta_c: c_w must lie in (0, 1]");
    }
    if (!(eta_prime > 0.0) || !(eta_prime < eta)) {
        throw invalid_input_error(
            "central_witness_to_eta_c: require 0 < eta_prime < eta");
    }
    return {eta_prime, c_w * (1.0 - eta_prime / eta) / (eta_prime * u + 1.0)};
}

// Witness ratio E[r 1{r <= u}] / E[r]; the witness condition asks this to be
// >= c_w.  Diagnostic only (no pass/fail semantics): the condition appears
// in the theory solely as a hypothesis.
inline double witness_ratio(const std::vector<double>& r_values, double u) {
    if (r_values.empty()) throw invalid_input_error("witness_ratio: empty sample");
    if (!(u > 0.0)) throw invalid_input_error("witness_ratio: u must be > 0");
    double full = 0.0;
    double truncated = 0.0;
    for (double v : r_values) {
        full += v;
        if (v <= u) truncated += v;
    }
    if (!(full > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return truncated / full;
}

// ---------------------------------------------------------------------------
// Sub-exponential / sub-Gamma implications
// ---------------------------------------------------------------------------

// (nu^2, alpha)-sub-exponential excess loss with E[r] > 0
//   =>  (min(1/alpha, E[r]/nu^2), 1/2)-central.
// Note the orientation E[r]/nu^2: the proof's requirement
// lambda nu^2/(2 E[r]) <= 1/2 pins lambda <= E[r]/nu^2, consistent with the
// alpha -> 0 limit of the sub-Gamma mapping below.
inline eta_c_pair subexp_to_eta_c(double nu2, double alpha, double mean_r) {
    if (!(nu2 > 0.0)) throw invalid_input_error("subexp_to_eta_c: nu2 must be > 0");
    if (!(alpha >= 0.0)) throw invalid_input_error("subexp_to_eta_c: alpha must be >= 0");
    if (!(mean_r > 0.0)) {
        throw invalid_input_error("subexp_to_eta_c: mean_r must be > 0 (the E[r] = 0 "
                                  "regime is the condition-failure counterexample)");
    }
    const double inv_alpha =
        alpha > 0.0 ? 1.0 / alpha : std::numeric_limits<double>::infinity();
    return {std::min(inv_alpha, mean_r / nu2), 0.5};
}

// (nu^2, alpha)-sub-Gamma  =>  (E[r]/(nu^2 + alpha E[r]), 1/2)-central.
inline eta_c_pair subgamma_to_eta_c(double nu2, double alpha, double mean_r) {
    if (!(nu2 > 0.0)) throw invalid_input_error("subgamma_to_eta_c: nu2 must be > 0");
    if (!(alpha >= 0.0)) {
        throw invalid_input_error("subgamma_to_eta_c: alpha must be >= 0");
    }
    if (!(mean_r > 0.0)) {
        throw invalid_input_error("subgamma_to_eta_c: mean_r must be > 0");
    }
    return {mean_r / (nu2 + alpha * mean_r), 0.5};
}

// ---------------------------------------------------------------------------
// (v, c)-central condition, v(eps) = eps^{1-beta}
// ---------------------------------------------------------------------------

namespace detail {

inline condition_report v_central_from_cgf(double cgf_value, double mean_r, double v,
                                           double epsilon) {
    condition_report rep;
    rep.condition_id = "v_central";
    rep.eta = v;
    rep.cgf_value = cgf_value;
    rep.mean_r = mean_r;
    if (!(v > 0.0)) {
        rep.holds = false;
        rep.reason = "v_of_epsilon_is_zero";
        return rep;
    }
    if (!(mean_r > 0.0)) {
        rep.holds = false;
        rep.reason = "nonpositive_mean";
        rep.margin = v * epsilon - cgf_value;
        return rep;
    }
    // log E e^{-v r} <= -c v E[r] + v eps; largest feasible c:
    const double raw_c = (v * epsilon - cgf_value) / (v * mean_r);
    const double c = std::clamp(raw_c, 0.0, 1.0);
    rep.max_c = c;
    rep.margin = -c * v * mean_r + v * epsilon - cgf_value;
    rep.holds = c > 0.0;
    if (!rep.holds) rep.reason = "cgf_exceeds_slack";
    return rep;
}

} // namespace detail

inline std::vector<condition_report> v_central_check(const learning_tuple& t,
                                                     std::size_t n, double beta,
                                                     const std::vector<double>& epsilon_grid) {
    if (!(beta >= 0.0) || !(beta <= 1.0)) {
        throw invalid_input_error("v_central_check: beta must lie in [0, 1]");
    }
    if (epsilon_grid.empty()) throw invalid_input_error("v_central_check: empty grid");
    const closed_form_report cf = closed_form(t, n);
    if (!cf.excess.has_value()) {
        throw invalid_input_error("v_central_check: model has no closed-form excess");
    }
    const cgf_evaluator ev = make_cgf_evaluator(t, n, cgf_kind::excess_neg);
    std::vector<condition_report> out;
    out.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) {
        if (!(eps >= 0.0)) {
            throw invalid_input_error("v_central_check: epsilon must be >= 0");
        }
        const double v = std::pow(eps, 1.0 - beta);  // beta = 1 -> v = 1 for all eps
        condition_report rep;
        if (v > 0.0) {
            detail::require_in_domain(v, ev.eta_max, "v_central_check");
            rep = detail::v_central_from_cgf(ev.closed_form(v), *cf.excess, v, eps);
        } else {
            rep = detail::v_central_from_cgf(0.0, *cf.excess, v, eps);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

inline std::vector<condition_report> v_central_check(const std::vector<double>& r_values,
                                                     double beta,
                                                     const std::vector<double>& epsilon_grid) {
    if (!(beta >= 0.0) || !(beta <= 1.0)) {
        throw invalid_input_error("v_central_check: beta must lie in [0, 1]");
    }
    if (r_values.empty()) throw invalid_input_error("v_central_check: empty sample");
    if (epsilon_grid.empty()) throw invalid_input_error("v_central_check: empty grid");
    const double mean_r = detail::mean_of(r_values);
    std::vector<condition_report> out;
    out.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) {
        if (!(eps >= 0.0)) {
            throw invalid_input_error("v_central_check: epsilon must be >= 0");
        }
        const double v = std::pow(eps, 1.0 - beta);
        condition_report rep = detail::v_central_from_cgf(
            v > 0.0 ? empirical_cgf(r_values, v) : 0.0, mean_r, v, eps);
        rep.source = "empirical";
        rep.sample_count = r_values.size();
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace genbound
