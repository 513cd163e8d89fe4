// The six analytic learning problems: samplers, ERM solvers, closed-form
// reports (risks, per-sample mutual information, sub-Gaussian proxies) and
// exact cumulant generating functions of the loss / excess loss under the
// decoupled product measure P_W (x) mu.
//
// Closed-form cheat sheet (sigma = noise_sd, q = Q(sqrt(n))):
//   gaussian_mean     gen 2s^2/n, excess s^2/n, I(W;Z_i) = (1/2)ln(n/(n-1))
//   discrete_mean     excess 4q, gen sqrt(8/(n pi)) e^{-n/2}, MI upper bound
//   zero_mean         excess 0, gen sqrt(8/(pi n)) — the central-condition
//                     counterexample with E[r] = 0
//   linear_regression gen 2s^2/n, excess s^2/n, I_i = (1/2)ln(m_i/(m_i-1)),
//                     m_i = sum_j x_j^2 / x_i^2
//   selection         dataset-level I(W;S) = ln n; every arm optimal
//   logistic          Monte-Carlo only

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "genbound/core.hpp"
#include "genbound/rng.hpp"
#include "genbound/special.hpp"

namespace genbound {

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

inline dataset sample_dataset(const learning_tuple& t, std::size_t n, rng_stream& rng) {
    validate(t);
    if (n == 0) throw invalid_input_error("sample_dataset: n must be >= 1");
    const model_params& p = t.params;
    dataset data(n, sample_arity(t));
    switch (t.model) {
        case model_id::gaussian_mean:
        case model_id::discrete_mean:
        case model_id::zero_mean_discrete:
        case model_id::hypothesis_selection:
            for (std::size_t i = 0; i < n; ++i) {
                data.row(i)[0] = p.mean + p.noise_sd * rng.normal();
            }
            break;
        case model_id::linear_regression: {
            if (p.design.size() != n) {
                throw invalid_input_error(
                    "linear_regression: fixed design has " +
                    std::to_string(p.design.size()) + " points, requested n = " +
                    std::to_string(n));
            }
            for (std::size_t i = 0; i < n; ++i) {
                auto row = data.row(i);
                row[0] = p.design[i];
                row[1] = p.w_star[0] * p.design[i] + p.noise_sd * rng.normal();
            }
            break;
        }
        case model_id::logistic_regression: {
            const auto d = static_cast<std::size_t>(p.dim);
            const double sign =
                p.label_sign == label_sign_convention::negative_inner_product ? -1.0
                                                                              : 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                auto row = data.row(i);
                double margin = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    row[j] = rng.normal();
                    margin += row[j] * p.w_star[j];
                }
                row[d] = rng.bernoulli(sigmoid(sign * margin)) ? 1.0 : 0.0;
            }
            break;
        }
    }
    return data;
}

// ---------------------------------------------------------------------------
// ERM
// ---------------------------------------------------------------------------

struct erm_result {
    std::vector<double> w;
    bool converged = true;
    int iterations = 0;
    double grad_norm = 0.0;
};

namespace detail {

// Dense symmetric solve via Gaussian elimination with partial pivoting;
// dimensions here are tiny (logistic d is 2 in the canonical experiment).
inline std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b) {
    const std::size_t d = b.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::fabs(a[r * d + col]) > std::fabs(a[pivot * d + col])) pivot = r;
        }
        if (a[pivot * d + col] == 0.0) {
            throw domain_error("solve_linear: singular system");
        }
        if (pivot != col) {
            for (std::size_t k = 0; k < d; ++k) std::swap(a[col * d + k], a[pivot * d + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = a[r * d + col] / a[col * d + col];
            for (std::size_t k = col; k < d; ++k) a[r * d + k] -= f * a[col * d + k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(d, 0.0);
    for (std::size_t ri = d; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t k = ri + 1; k < d; ++k) acc -= a[ri * d + k] * x[k];
        x[ri] = acc / a[ri * d + ri];
    }
    return x;
}

inline double logistic_objective(const learning_tuple& t, const std::vector<double>& w,
                                 const dataset& data) {
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        acc += evaluate_loss(t, w, data.row(i));
    }
    return acc / static_cast<double>(data.size());
}

inline erm_result logistic_erm(const learning_tuple& t, const dataset& data) {
    const auto d = static_cast<std::size_t>(t.params.dim);
    const double n = static_cast<double>(data.size());
    const double radius = t.params.hypothesis_radius * (1.0 - 1e-9);
    constexpr int max_iterations = 100;
    constexpr double grad_tolerance = 1e-8;

    erm_result res;
    res.w.assign(d, 0.0);
    std::vector<double> grad(d), hess(d * d);
    for (int iter = 0; iter < max_iterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto z = data.row(i);
            double margin = 0.0;
            for (std::size_t j = 0; j < d; ++j) margin += res.w[j] * z[j];
            const double prob = sigmoid(margin);
            const double resid = prob - z[d];
            const double curv = prob * (1.0 - prob);
            for (std::size_t j = 0; j < d; ++j) {
                grad[j] += resid * z[j];
                for (std::size_t k = 0; k < d; ++k) hess[j * d + k] += curv * z[j] * z[k];
            }
        }
        double gnorm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            grad[j] /= n;
            gnorm2 += grad[j] * grad[j];
        }
        res.grad_norm = std::sqrt(gnorm2);
        res.iterations = iter;
        if (res.grad_norm <= grad_tolerance) {
            res.converged = true;
            return res;
        }
        for (std::size_t j = 0; j < d * d; ++j) hess[j] /= n;
        for (std::size_t j = 0; j < d; ++j) hess[j * d + j] += 1e-12;

        std::vector<double> rhs(d);
        for (std::size_t j = 0; j < d; ++j) rhs[j] = -grad[j];
        std::vector<double> step = solve_linear(hess, rhs);

        const double f0 = logistic_objective(t, res.w, data);
        double directional = 0.0;
        for (std::size_t j = 0; j < d; ++j) directional += grad[j] * step[j];
        double step_size = 1.0;
        std::vector<double> trial(d);
        for (int halving = 0; halving < 40; ++halving) {
            for (std::size_t j = 0; j < d; ++j) trial[j] = res.w[j] + step_size * step[j];
            if (logistic_objective(t, trial, data) <=
                f0 + 1e-4 * step_size * directional) {
                break;
            }
            step_size *= 0.5;
        }
        res.w = trial;
        double norm2 = 0.0;
        for (double v : res.w) norm2 += v * v;
        const double norm = std::sqrt(norm2);
        if (norm > radius) {
            for (double& v : res.w) v *= radius / norm;  // radial projection
        }
    }
    res.converged = false;  // iteration cap; last iterate returned as-is
    return res;
}

} // namespace detail

inline erm_result erm(const learning_tuple& t, const dataset& data) {
    validate(t);
    if (data.empty()) throw invalid_input_error("erm: empty dataset");
    if (data.arity != sample_arity(t)) {
        throw invalid_input_error("erm: dataset arity does not match model");
    }
    erm_result res;
    switch (t.model) {
        case model_id::gaussian_mean: {
            double acc = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) acc += data.row(i)[0];
            res.w = {acc / static_cast<double>(data.size())};
            return res;
        }
        case model_id::discrete_mean:
        case model_id::zero_mean_discrete: {
            double acc = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) acc += data.row(i)[0];
            res.w = {acc >= 0.0 ? 1.0 : -1.0};
            return res;
        }
        case model_id::linear_regression: {
            double sxy = 0.0;
            double sxx = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) {
                const auto row = data.row(i);
                sxy += row[0] * row[1];
                sxx += row[0] * row[0];
            }
            if (!(sxx > 0.0)) {
                throw invalid_input_error("linear_regression erm: degenerate design");
            }
            res.w = {sxy / sxx};
            return res;
        }
        case model_id::logistic_regression:
            return detail::logistic_erm(t, data);
        case model_id::hypothesis_selection: {
            std::size_t best = 0;
            for (std::size_t i = 1; i < data.size(); ++i) {
                if (data.row(i)[0] > data.row(best)[0]) best = i;  // ties -> lowest index
            }
            res.w = {static_cast<double>(best)};
            return res;
        }
    }
    throw invalid_input_error("erm: unknown model");
}

// One full (W, S_n) draw: sample, fit.
inline joint_draw draw_joint(const learning_tuple& t, std::size_t n,
                             std::uint64_t master_seed, std::uint64_t stream_index) {
    rng_stream rng(master_seed, stream_index);
    joint_draw jd;
    jd.data = sample_dataset(t, n, rng);
    erm_result fit = erm(t, jd.data);
    jd.hypothesis = std::move(fit.w);
    jd.converged = fit.converged;
    jd.iterations = fit.iterations;
    jd.stream_index = stream_index;
    return jd;
}

// ---------------------------------------------------------------------------
// Closed-form report
// ---------------------------------------------------------------------------

struct closed_form_report {
    std::optional<double> gen_error;
    std::optional<double> excess;
    std::optional<double> empirical_excess;
    std::vector<double> mi_per_sample;           // empty when not defined
    std::optional<double> mi_total;
    bool mi_is_upper_bound = false;              // discrete_mean: Jensen-step bound
    bool mi_dataset_level = false;               // hypothesis_selection
    std::optional<double> subgaussian_proxy_excess;  // sigma for r(W,Z) under product
    std::optional<double> subgaussian_proxy_loss;    // sigma for loss(W,Z)
    std::optional<int> validity_min_n;
    bool proxy_uncertified = false;              // n below validity_min_n
    bool monte_carlo_only = false;               // logistic
};

// Smallest n for which the excess-loss sub-Gaussian proxy sqrt(8 sigma^4/n)
// is certified at tilt eta: the CGF domination holds for
// n > max{ (4e^2 s^4 + e s^2)(2e^2 s^4 + e s^2)/(e^2 s^4), 4e^2 s^4 + 2 e s^2 }.
inline int subgaussian_proxy_min_n(double noise_sd, double eta) {
    const double s2 = noise_sd * noise_sd;
    const double a = eta * eta * s2 * s2;  // eta^2 sigma^4
    const double b = eta * s2;             // eta sigma^2
    const double threshold =
        std::max((4.0 * a + b) * (2.0 * a + b) / a, 4.0 * a + 2.0 * b);
    return static_cast<int>(std::floor(threshold)) + 1;
}

namespace detail {

// Per-sample leverage ratios m_i = sum_j x_j^2 / x_i^2 of a fixed design.
inline std::vector<double> design_leverage(const std::vector<double>& design) {
    double ssq = 0.0;
    for (double x : design) ssq += x * x;
    std::vector<double> m(design.size());
    for (std::size_t i = 0; i < design.size(); ++i) {
        if (design[i] == 0.0) {
            m[i] = std::numeric_limits<double>::infinity();  // sample carries no info
        } else {
            m[i] = ssq / (design[i] * design[i]);
        }
    }
    return m;
}

} // namespace detail

inline closed_form_report closed_form(const learning_tuple& t, std::size_t n) {
    validate(t);
    if (n < 2) {
        throw invalid_input_error("closed_form: n >= 2 required (n-1 denominators)");
    }
    const model_params& p = t.params;
    const double s2 = p.noise_sd * p.noise_sd;
    const double dn = static_cast<double>(n);
    closed_form_report rep;
    switch (t.model) {
        case model_id::gaussian_mean: {
            rep.gen_error = 2.0 * s2 / dn;
            rep.excess = s2 / dn;
            rep.empirical_excess = -s2 / dn;
            const double mi = -0.5 * std::log1p(-1.0 / dn);  // (1/2) ln(n/(n-1))
            rep.mi_per_sample.assign(n, mi);
            rep.mi_total = dn * mi;
            rep.subgaussian_proxy_excess = std::sqrt(8.0 * s2 * s2 / dn);
            // Loss side: (W - Z)^2 with W - Z ~ N(0, (n+1)/n sigma^2); the
            // square is handled with parameter sqrt(2) (n+1)/n sigma^2.
            rep.subgaussian_proxy_loss = std::numbers::sqrt2 * (dn + 1.0) / dn * s2;
            const int min_n = subgaussian_proxy_min_n(p.noise_sd, 0.25 / s2);
            rep.validity_min_n = min_n;
            rep.proxy_uncertified = static_cast<int>(n) < min_n;
            return rep;
        }
        case model_id::discrete_mean: {
            const double q = q_function(std::sqrt(dn));
            rep.excess = 4.0 * q;
            rep.gen_error = std::sqrt(8.0 / (dn * std::numbers::pi)) * std::exp(-dn / 2.0);
            rep.empirical_excess = *rep.excess - *rep.gen_error;
            // Jensen-step upper bound on I(W;Z_i): the entropy of the sign
            // hypothesis minus the conditional entropy evaluated at the
            // truncated-mean representative of Z_i.
            const double trunc_mean =
                truncated_normal_mean_above(1.0, 1.0, -(dn - 1.0));
            const double inner =
                q_function(trunc_mean / std::sqrt(dn - 1.0) + std::sqrt(dn - 1.0));
            const double mi_ub = binary_entropy(q) - binary_entropy(inner);
            rep.mi_per_sample.assign(n, mi_ub);
            rep.mi_total = dn * mi_ub;
            rep.mi_is_upper_bound = true;
            return rep;
        }
        case model_id::zero_mean_discrete: {
            rep.excess = 0.0;
            rep.gen_error = std::sqrt(8.0 / (std::numbers::pi * dn));
            rep.empirical_excess = -*rep.gen_error;
            // By the +/- symmetry of the hypothesis marginal the per-sample
            // MI is reported as 0; no bound is assembled from it (the model
            // exists as the central-condition counterexample).
            rep.mi_per_sample.assign(n, 0.0);
            rep.mi_total = 0.0;
            return rep;
        }
        case model_id::linear_regression: {
            if (p.design.size() != n) {
                throw invalid_input_error("linear_regression closed_form: n must equal "
                                          "the design size");
            }
            rep.gen_error = 2.0 * s2 / dn;
            rep.excess = s2 / dn;
            rep.empirical_excess = -s2 / dn;
            const std::vector<double> lev = detail::design_leverage(p.design);
            rep.mi_per_sample.resize(n);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double m = lev[i];
                rep.mi_per_sample[i] =
                    std::isinf(m) ? 0.0 : -0.5 * std::log1p(-1.0 / m);
                total += rep.mi_per_sample[i];
            }
            rep.mi_total = total;
            return rep;
        }
        case model_id::logistic_regression:
            rep.monte_carlo_only = true;
            return rep;
        case model_id::hypothesis_selection: {
            rep.excess = 0.0;
            // gen_error = E[max of n arms] - mean has no elementary closed
            // form; left to Monte Carlo.
            rep.mi_total = std::log(dn);  // I(W;S) = H(W) = ln n
            rep.mi_dataset_level = true;
            return rep;
        }
    }
    throw invalid_input_error("closed_form: unknown model");
}

// ---------------------------------------------------------------------------
// Cumulant generating functions under the product measure
// ---------------------------------------------------------------------------

// Which tilted quantity: the excess loss r(W,Z) or the loss itself, with
// the tilt sign folded in (neg: log E e^{-eta X}, pos: log E e^{+eta X}).
enum class cgf_kind { excess_neg, excess_pos, loss_neg, loss_pos };

inline std::string to_string(cgf_kind k) {
    switch (k) {
        case cgf_kind::excess_neg: return "excess_neg";
        case cgf_kind::excess_pos: return "excess_pos";
        case cgf_kind::loss_neg: return "loss_neg";
        case cgf_kind::loss_pos: return "loss_pos";
    }
    throw invalid_input_error("to_string: unknown cgf_kind");
}

struct cgf_evaluator {
    cgf_kind kind = cgf_kind::excess_neg;
    double eta_max = std::numeric_limits<double>::infinity();  // open upper bound
    std::function<double(double)> closed_form;                  // defined on [0, eta_max)
};

namespace detail {

inline double require_in_domain(double eta, double eta_max, const char* what) {
    if (!(eta >= 0.0)) {
        throw domain_error(std::string(what) + ": eta must be >= 0");
    }
    if (!(eta < eta_max)) {
        throw domain_error(std::string(what) + ": eta = " + std::to_string(eta) +
                           " at or beyond the divergence boundary " +
                           std::to_string(eta_max));
    }
    return eta;
}

// log E exp(s * eta * chi_squared_scale * A^2 - ...) building blocks.
// Gaussian-mean excess CGF with effective sample mass m:
//   log E e^{-eta r} = -(1/2) log(1 - (4 e^2 s^4 - 2 e s^2)/m).
inline double quadratic_excess_cgf(double eta, double s2, double mass, bool positive) {
    const double g = positive ? 4.0 * eta * eta * s2 * s2 + 2.0 * eta * s2
                              : 4.0 * eta * eta * s2 * s2 - 2.0 * eta * s2;
    return -0.5 * std::log1p(-g / mass);
}

inline double quadratic_excess_eta_max(double s2, double mass, bool positive) {
    // Roots of 4 s^4 e^2 +/- 2 s^2 e - mass = 0.
    const double disc = std::sqrt(1.0 + 4.0 * mass);
    return positive ? (disc - 1.0) / (4.0 * s2) : (disc + 1.0) / (4.0 * s2);
}

} // namespace detail

inline cgf_evaluator make_cgf_evaluator(const learning_tuple& t, std::size_t n,
                                        cgf_kind kind) {
    validate(t);
    if (n < 2) throw invalid_input_error("cgf: n >= 2 required");
    const model_params p = t.params;
    const double s2 = p.noise_sd * p.noise_sd;
    const double dn = static_cast<double>(n);
    cgf_evaluator ev;
    ev.kind = kind;

    switch (t.model) {
        case model_id::gaussian_mean: {
            if (kind == cgf_kind::excess_neg || kind == cgf_kind::excess_pos) {
                const bool pos = kind == cgf_kind::excess_pos;
                ev.eta_max = detail::quadratic_excess_eta_max(s2, dn, pos);
                ev.closed_form = [s2, dn, pos](double eta) {
                    return detail::quadratic_excess_cgf(eta, s2, dn, pos);
                };
            } else {
                // loss = (W-Z)^2 = sW^2 * chi^2(1), sW^2 = (n+1)/n sigma^2
                const double sw2 = (dn + 1.0) / dn * s2;
                if (kind == cgf_kind::loss_neg) {
                    ev.closed_form = [sw2](double eta) {
                        return -0.5 * std::log1p(2.0 * eta * sw2);
                    };
                } else {
                    ev.eta_max = 1.0 / (2.0 * sw2);
                    ev.closed_form = [sw2](double eta) {
                        return -0.5 * std::log1p(-2.0 * eta * sw2);
                    };
                }
            }
            break;
        }
        case model_id::discrete_mean: {
            const double q = q_function(std::sqrt(dn));
            switch (kind) {
                case cgf_kind::excess_neg:
                    ev.closed_form = [q](double eta) {
                        return std::log1p(q * std::expm1(8.0 * eta * eta - 4.0 * eta));
                    };
                    break;
                case cgf_kind::excess_pos:
                    ev.closed_form = [q](double eta) {
                        return std::log1p(q * std::expm1(8.0 * eta * eta + 4.0 * eta));
                    };
                    break;
                case cgf_kind::loss_neg:
                    ev.closed_form = [q](double eta) {
                        return -0.5 * std::log1p(2.0 * eta) +
                               std::log1p(q * std::expm1(-4.0 * eta / (1.0 + 2.0 * eta)));
                    };
                    break;
                case cgf_kind::loss_pos:
                    ev.eta_max = 0.5;
                    ev.closed_form = [q](double eta) {
                        return -0.5 * std::log1p(-2.0 * eta) +
                               std::log1p(q * std::expm1(4.0 * eta / (1.0 - 2.0 * eta)));
                    };
                    break;
            }
            break;
        }
        case model_id::zero_mean_discrete: {
            switch (kind) {
                case cgf_kind::excess_neg:
                case cgf_kind::excess_pos:
                    // log( (1 + e^{8 eta^2})/2 ), symmetric in the tilt sign
                    ev.closed_form = [](double eta) {
                        const double m = 8.0 * eta * eta;
                        return m + std::log1p(std::exp(-m)) - std::log(2.0);
                    };
                    break;
                case cgf_kind::loss_neg:
                    ev.closed_form = [](double eta) {
                        return -0.5 * std::log1p(2.0 * eta) - eta / (1.0 + 2.0 * eta);
                    };
                    break;
                case cgf_kind::loss_pos:
                    ev.eta_max = 0.5;
                    ev.closed_form = [](double eta) {
                        return -0.5 * std::log1p(-2.0 * eta) + eta / (1.0 - 2.0 * eta);
                    };
                    break;
            }
            break;
        }
        case model_id::linear_regression: {
            if (p.design.size() != n) {
                throw invalid_input_error("cgf: linear_regression n must equal the "
                                          "design size");
            }
            const std::vector<double> lev = detail::design_leverage(p.design);
            if (kind == cgf_kind::excess_neg || kind == cgf_kind::excess_pos) {
                const bool pos = kind == cgf_kind::excess_pos;
                double m_min = std::numeric_limits<double>::infinity();
                for (double m : lev) m_min = std::min(m_min, m);
                ev.eta_max = detail::quadratic_excess_eta_max(s2, m_min, pos);
                ev.closed_form = [lev, s2, pos](double eta) {
                    // CGF of r(W, Z_I) with I uniform: log of the mixture MGF.
                    std::vector<double> terms(lev.size());
                    for (std::size_t i = 0; i < lev.size(); ++i) {
                        terms[i] = std::isinf(lev[i])
                                       ? 0.0
                                       : detail::quadratic_excess_cgf(eta, s2, lev[i], pos);
                    }
                    return log_mean_exp(terms);
                };
            } else {
                // loss on sample i: N(0, sigma^2 (1 + 1/m_i)) squared
                std::vector<double> sw2(lev.size());
                double sw2_max = 0.0;
                for (std::size_t i = 0; i < lev.size(); ++i) {
                    sw2[i] = s2 * (1.0 + (std::isinf(lev[i]) ? 0.0 : 1.0 / lev[i]));
                    sw2_max = std::max(sw2_max, sw2[i]);
                }
                const bool pos = kind == cgf_kind::loss_pos;
                if (pos) ev.eta_max = 1.0 / (2.0 * sw2_max);
                ev.closed_form = [sw2, pos](double eta) {
                    std::vector<double> terms(sw2.size());
                    for (std::size_t i = 0; i < sw2.size(); ++i) {
                        terms[i] = pos ? -0.5 * std::log1p(-2.0 * eta * sw2[i])
                                       : -0.5 * std::log1p(2.0 * eta * sw2[i]);
                    }
                    return log_mean_exp(terms);
                };
            }
            break;
        }
        case model_id::logistic_regression:
            throw domain_error("cgf: logistic_regression has no closed-form CGF; use "
                               "empirical_cgf on Monte-Carlo samples");
        case model_id::hypothesis_selection: {
            const double mu = p.mean;
            switch (kind) {
                case cgf_kind::excess_neg:
                case cgf_kind::excess_pos:
                    // r = z_ref - z_w under the product measure: zero with
                    // probability 1/n, N(0, 2 sigma^2) otherwise (sign-symmetric).
                    ev.closed_form = [s2, dn](double eta) {
                        return std::log1p((dn - 1.0) / dn *
                                          std::expm1(s2 * eta * eta));
                    };
                    break;
                case cgf_kind::loss_neg:
                    ev.closed_form = [s2, mu](double eta) {
                        return eta * mu + 0.5 * s2 * eta * eta;
                    };
                    break;
                case cgf_kind::loss_pos:
                    ev.closed_form = [s2, mu](double eta) {
                        return -eta * mu + 0.5 * s2 * eta * eta;
                    };
                    break;
            }
            break;
        }
    }
    return ev;
}

inline double cgf(const learning_tuple& t, std::size_t n, cgf_kind kind, double eta) {
    const cgf_evaluator ev = make_cgf_evaluator(t, n, kind);
    detail::require_in_domain(eta, ev.eta_max, "cgf");
    return ev.closed_form(eta);
}

// Per-sample excess CGF values for heterogeneous linear-regression designs
// (the scalar cgf() is their uniform mixture).
inline std::vector<double> cgf_linreg_per_sample(const learning_tuple& t,
                                                 cgf_kind kind, double eta) {
    if (t.model != model_id::linear_regression) {
        throw invalid_input_error("cgf_linreg_per_sample: linear_regression only");
    }
    if (kind != cgf_kind::excess_neg && kind != cgf_kind::excess_pos) {
        throw invalid_input_error("cgf_linreg_per_sample: excess kinds only");
    }
    const bool pos = kind == cgf_kind::excess_pos;
    const double s2 = t.params.noise_sd * t.params.noise_sd;
    const std::vector<double> lev = detail::design_leverage(t.params.design);
    std::vector<double> out(lev.size());
    for (std::size_t i = 0; i < lev.size(); ++i) {
        if (std::isinf(lev[i])) {
            out[i] = 0.0;
            continue;
        }
        const double boundary = detail::quadratic_excess_eta_max(s2, lev[i], pos);
        detail::require_in_domain(eta, boundary, "cgf_linreg_per_sample");
        out[i] = detail::quadratic_excess_cgf(eta, s2, lev[i], pos);
    }
    return out;
}

} // namespace genbound
