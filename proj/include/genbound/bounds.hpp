// Every generalization / excess-risk bound of the study, evaluated from
// explicit inputs (per-sample mutual information lists, empirical risk
// terms, condition constants).  Nothing here estimates anything: the
// statistical work lives in the model suite, the condition checkers and
// the Monte-Carlo engine; these are pure formulas.
//
// Conventions: `mi` lists are per-sample I(W;Z_i) in nats, n = mi.size().
// "gen" variants bound E[L(W) - L_hat(W)]; "excess" variants bound
// E[L(W) - L(w*)].  Reports are returned invalid (never thrown) when a
// bound's own validity condition fails on otherwise well-formed inputs.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound {

// Parameter carrier used by the sweep engine / CLI; individual bound
// functions take the relevant subset explicitly.
struct bound_params {
    double eta = std::numeric_limits<double>::quiet_NaN();
    double c = std::numeric_limits<double>::quiet_NaN();
    double sigma = std::numeric_limits<double>::quiet_NaN();
    double nu2 = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double a_eta = std::numeric_limits<double>::quiet_NaN();
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double reg_coeff = std::numeric_limits<double>::quiet_NaN();
    double reg_bound = std::numeric_limits<double>::quiet_NaN();
};

// Summary of what went into a bound value (for manifests / CSV emission).
struct bound_inputs {
    std::size_t mi_count = 0;
    double mi_sum = 0.0;
    double empirical_term = std::numeric_limits<double>::quiet_NaN();
    bound_params params;
};

struct bound_report {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> excess_value;      // excess-risk variant where defined
    std::optional<double> simplified_value;  // regularized-ERM short form
    std::string kind;
    bool valid = true;
    std::string reason;
    bound_inputs inputs;
};

namespace detail {

inline double mi_sum_checked(const std::vector<double>& mi, const char* what) {
    if (mi.empty()) {
        throw invalid_input_error(std::string(what) + ": empty mutual-information list");
    }
    double acc = 0.0;
    for (double v : mi) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw invalid_input_error(std::string(what) +
                                      ": MI entries must be finite and >= 0");
        }
        acc += v;
    }
    return acc;
}

inline void note_positive_empirical(bound_report& rep, double empirical_term) {
    if (empirical_term > 0.0) {
        rep.reason = "positive empirical term: the negative-ERM interpretation does "
                     "not apply (non-ERM algorithm?)";
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Inverse rate function psi*^{-1}(x) = inf_{lambda in (0,b)} (x + psi(lambda))/lambda
// ---------------------------------------------------------------------------

struct psi_inverse_result {
    double value = std::numeric_limits<double>::quiet_NaN();
    double argmin = std::numeric_limits<double>::quiet_NaN();
    bool valid = true;
    std::string reason;
};

// Golden-section search on the quasi-convex objective; psi must be convex
// with psi(0) = 0 on (0, b).  b may be +infinity (a bracket is grown by
// doubling).  Relative tolerance 1e-10, 200-iteration cap, domain shrink
// factor 1 - 1e-12 at the upper boundary.
inline psi_inverse_result psi_inverse(const std::function<double(double)>& psi,
                                      double b, double x) {
    if (!(x >= 0.0)) throw invalid_input_error("psi_inverse: x must be >= 0");
    if (!(b > 0.0)) throw invalid_input_error("psi_inverse: empty domain (b <= 0)");

    const auto objective = [&](double lambda) -> double {
        const double p = psi(lambda);
        if (!std::isfinite(p)) return std::numeric_limits<double>::infinity();
        return (x + p) / lambda;
    };

    double lo;
    double hi;
    if (std::isfinite(b)) {
        hi = b * (1.0 - 1e-12);
        lo = b * 1e-13;
    } else {
        lo = 1e-18;
        hi = 1.0;
        // Grow the bracket until the objective starts increasing again.
        for (int i = 0; i < 80 && objective(2.0 * hi) <= objective(hi); ++i) hi *= 2.0;
    }

    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double d = hi;
    double c1 = d - inv_phi * (d - a);
    double c2 = a + inv_phi * (d - a);
    double f1 = objective(c1);
    double f2 = objective(c2);
    psi_inverse_result res;
    double best = std::min(f1, f2);
    double best_arg = f1 <= f2 ? c1 : c2;
    for (int iter = 0; iter < 200 && (d - a) > 1e-10 * std::max(1e-300, d); ++iter) {
        if (f1 <= f2) {
            d = c2;
            c2 = c1;
            f2 = f1;
            c1 = d - inv_phi * (d - a);
            f1 = objective(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + inv_phi * (d - a);
            f2 = objective(c2);
        }
        if (f1 < best) { best = f1; best_arg = c1; }
        if (f2 < best) { best = f2; best_arg = c2; }
    }
    // The infimum may sit at the left edge (x = 0): probe the boundary.
    const double f_lo = objective(lo);
    if (f_lo < best) { best = f_lo; best_arg = lo; }
    res.value = best;
    res.argmin = best_arg;
    if (!std::isfinite(best) || best < -1e15) {
        res.valid = false;
        res.reason = "objective unbounded below or non-finite on the domain";
    }
    return res;
}

// ---------------------------------------------------------------------------
// Square-root mutual-information bound:  (1/n) sum sqrt(2 sigma^2 I_i)
// ---------------------------------------------------------------------------

inline bound_report mi_sqrt_bound(double sigma, const std::vector<double>& mi) {
    if (!(sigma >= 0.0)) throw invalid_input_error("mi_sqrt_bound: sigma must be >= 0");
    detail::mi_sum_checked(mi, "mi_sqrt_bound");
    bound_report rep;
    rep.kind = "mi_sqrt";
    double acc = 0.0;
    for (double v : mi) acc += std::sqrt(2.0 * sigma * sigma * v);
    rep.value = acc / static_cast<double>(mi.size());
    rep.inputs.mi_count = mi.size();
    for (double v : mi) rep.inputs.mi_sum += v;
    rep.inputs.params.sigma = sigma;
    return rep;
}

// ---------------------------------------------------------------------------
// Fast rate under the sub-Gaussian condition:
//   gen    <= ((1-a)/a) Rhat + (1/(n eta a)) sum I_i
//   excess <= (1/a)     Rhat + (1/(n eta a)) sum I_i
// with a = 1 - eta sigma^2 / (2 mean_excess),  valid for
// 0 < eta < 2 mean_excess / sigma^2.
// ---------------------------------------------------------------------------

inline bound_report fast_subgaussian_bound(double sigma, double eta, double mean_excess,
                                           const std::vector<double>& mi,
                                           double empirical_excess) {
    if (!(mean_excess > 0.0)) {
        throw invalid_input_error("fast_subgaussian_bound: mean_excess must be > 0");
    }
    if (!(sigma >= 0.0)) {
        throw invalid_input_error("fast_subgaussian_bound: sigma must be >= 0");
    }
    const double mi_sum = detail::mi_sum_checked(mi, "fast_subgaussian_bound");
    const double n = static_cast<double>(mi.size());
    bound_report rep;
    rep.kind = "fast_subgaussian";
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.empirical_term = empirical_excess;
    rep.inputs.params.sigma = sigma;
    rep.inputs.params.eta = eta;

    const double eta_hi = sigma > 0.0 ? 2.0 * mean_excess / (sigma * sigma)
                                      : std::numeric_limits<double>::infinity();
    if (!(eta > 0.0) || !(eta < eta_hi)) {
        rep.valid = false;
        rep.reason = "eta outside the admissible interval (0, " +
                     std::to_string(eta_hi) + ")";
        return rep;
    }
    const double a = 1.0 - eta * sigma * sigma / (2.0 * mean_excess);
    rep.inputs.params.a_eta = a;
    const double info_term = mi_sum / (n * eta * a);
    rep.value = (1.0 - a) / a * empirical_excess + info_term;
    rep.excess_value = empirical_excess / a + info_term;
    detail::note_positive_empirical(rep, empirical_excess);
    return rep;
}

// ---------------------------------------------------------------------------
// Fast rate under the (eta, c)-central condition:
//   gen    <= ((1-c)/c) Rhat + (1/(c eta n)) sum I_i
//   excess <= (1/c)     Rhat + (1/(c eta n)) sum I_i
// ---------------------------------------------------------------------------

inline bound_report eta_c_bound(double eta, double c, double empirical_excess,
                                const std::vector<double>& mi) {
    if (!(eta > 0.0)) throw invalid_input_error("eta_c_bound: eta must be > 0");
    if (!(c > 0.0) || !(c <= 1.0)) {
        throw invalid_input_error("eta_c_bound: c must lie in (0, 1]");
    }
    const double mi_sum = detail::mi_sum_checked(mi, "eta_c_bound");
    const double n = static_cast<double>(mi.size());
    bound_report rep;
    rep.kind = "eta_c";
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.empirical_term = empirical_excess;
    rep.inputs.params.eta = eta;
    rep.inputs.params.c = c;
    const double info_term = mi_sum / (c * eta * n);
    rep.value = (1.0 - c) / c * empirical_excess + info_term;
    rep.excess_value = empirical_excess / c + info_term;
    detail::note_positive_empirical(rep, empirical_excess);
    return rep;
}

// Loss-side variant:  gen <= ((1-c)/c) E[L_hat] + (1/(c eta n)) sum I_i.
inline bound_report eta_c_loss_bound(double eta, double c, double empirical_loss,
                                     const std::vector<double>& mi) {
    if (!(eta > 0.0)) throw invalid_input_error("eta_c_loss_bound: eta must be > 0");
    if (!(c > 0.0) || !(c <= 1.0)) {
        throw invalid_input_error("eta_c_loss_bound: c must lie in (0, 1]");
    }
    const double mi_sum = detail::mi_sum_checked(mi, "eta_c_loss_bound");
    const double n = static_cast<double>(mi.size());
    bound_report rep;
    rep.kind = "eta_c_loss";
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.empirical_term = empirical_loss;
    rep.inputs.params.eta = eta;
    rep.inputs.params.c = c;
    rep.value = (1.0 - c) / c * empirical_loss + mi_sum / (c * eta * n);
    return rep;
}

// The Gaussian-mean loss satisfies the loss-side central condition with
// c = ln(1 + 4 eta sigma^2) / (4 eta sigma^2).
inline double gaussian_loss_central_c(double eta, double noise_sd) {
    if (!(eta > 0.0)) throw invalid_input_error("gaussian_loss_central_c: eta > 0");
    const double u = 4.0 * eta * noise_sd * noise_sd;
    return std::log1p(u) / u;
}

// ---------------------------------------------------------------------------
// Loss-side bounds from heavier tails (per-sample inverse rate functions)
// ---------------------------------------------------------------------------

// (nu^2, alpha)-sub-exponential loss: per sample,
//   sqrt(2 nu^2 I_i)          when I_i <= nu^2/(2 alpha^2)
//   nu^2/(2 alpha) + alpha I_i  otherwise  (continuous at the split).
inline bound_report subexp_loss_bound(double nu2, double alpha,
                                      const std::vector<double>& mi) {
    if (!(nu2 > 0.0)) throw invalid_input_error("subexp_loss_bound: nu2 must be > 0");
    if (!(alpha > 0.0)) throw invalid_input_error("subexp_loss_bound: alpha must be > 0");
    const double mi_sum = detail::mi_sum_checked(mi, "subexp_loss_bound");
    const double threshold = nu2 / (2.0 * alpha * alpha);
    double acc = 0.0;
    for (double v : mi) {
        acc += v <= threshold ? std::sqrt(2.0 * nu2 * v)
                              : nu2 / (2.0 * alpha) + alpha * v;
    }
    bound_report rep;
    rep.kind = "subexp_loss";
    rep.value = acc / static_cast<double>(mi.size());
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.params.nu2 = nu2;
    rep.inputs.params.alpha = alpha;
    return rep;
}

// (nu^2, alpha)-sub-Gamma loss:  (1/n) sum [ sqrt(2 nu^2 I_i) + alpha I_i ].
inline bound_report subgamma_loss_bound(double nu2, double alpha,
                                        const std::vector<double>& mi) {
    if (!(nu2 > 0.0)) throw invalid_input_error("subgamma_loss_bound: nu2 must be > 0");
    if (!(alpha >= 0.0)) {
        throw invalid_input_error("subgamma_loss_bound: alpha must be >= 0");
    }
    const double mi_sum = detail::mi_sum_checked(mi, "subgamma_loss_bound");
    double acc = 0.0;
    for (double v : mi) acc += std::sqrt(2.0 * nu2 * v) + alpha * v;
    bound_report rep;
    rep.kind = "subgamma_loss";
    rep.value = acc / static_cast<double>(mi.size());
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.params.nu2 = nu2;
    rep.inputs.params.alpha = alpha;
    return rep;
}

// ---------------------------------------------------------------------------
// Intermediate rates under the (v, c)-central condition, v(eps) = eps^{1-beta}
// ---------------------------------------------------------------------------

enum class intermediate_form { appendix, main_text };

// Explicit-epsilon mode:  ((1-c)/c) Rhat + (1/n) sum ( I_i/(eta c) + eps/c ).
// Optimized mode (eps_i* = I_i^{1/(2-beta)}):
//   appendix coefficient:   ((1-c)/c) Rhat + (2/(n c)) sum I_i^{1/(2-beta)}
//   main-text coefficient:  2 replaced by (2-beta)(1-beta)^{(beta-1)/(2-beta)}
//                           (limit 1 as beta -> 1).
inline bound_report intermediate_bound(double eta, double c, double beta,
                                       double empirical_excess,
                                       const std::vector<double>& mi,
                                       std::optional<double> epsilon,
                                       intermediate_form form = intermediate_form::appendix) {
    if (!(c > 0.0) || !(c <= 1.0)) {
        throw invalid_input_error("intermediate_bound: c must lie in (0, 1]");
    }
    if (!(beta >= 0.0) || !(beta <= 1.0)) {
        throw invalid_input_error("intermediate_bound: beta must lie in [0, 1]");
    }
    const double mi_sum = detail::mi_sum_checked(mi, "intermediate_bound");
    const double n = static_cast<double>(mi.size());
    bound_report rep;
    rep.kind = "intermediate";
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.empirical_term = empirical_excess;
    rep.inputs.params.eta = eta;
    rep.inputs.params.c = c;
    rep.inputs.params.beta = beta;

    const double base = (1.0 - c) / c * empirical_excess;
    if (epsilon.has_value()) {
        if (!(*epsilon >= 0.0)) {
            throw invalid_input_error("intermediate_bound: epsilon must be >= 0");
        }
        if (!(eta > 0.0)) {
            throw invalid_input_error("intermediate_bound: eta must be > 0 in "
                                      "explicit-epsilon mode");
        }
        rep.inputs.params.epsilon = *epsilon;
        rep.value = base + (mi_sum / (eta * c) + n * (*epsilon) / c) / n;
        return rep;
    }
    const double exponent = 1.0 / (2.0 - beta);
    double powered = 0.0;
    for (double v : mi) powered += std::pow(v, exponent);
    double coeff = 2.0;
    if (form == intermediate_form::main_text) {
        coeff = beta >= 1.0
                    ? 1.0  // limit of (2-b)(1-b)^{(b-1)/(2-b)} as b -> 1
                    : (2.0 - beta) * std::pow(1.0 - beta, (beta - 1.0) / (2.0 - beta));
    }
    rep.value = base + coeff * powered / (n * c);
    detail::note_positive_empirical(rep, empirical_excess);
    return rep;
}

// ---------------------------------------------------------------------------
// Regularized ERM:
//   excess <= (1/c) Rhat_reg + lambda B/(c n) + (1/(c eta n)) sum I_i
// with the ERM-optimality simplification dropping the first term.
// ---------------------------------------------------------------------------

inline bound_report rerm_bound(double eta, double c, double reg_coeff, double reg_bound,
                               double empirical_reg_excess,
                               const std::vector<double>& mi) {
    if (!(eta > 0.0)) throw invalid_input_error("rerm_bound: eta must be > 0");
    if (!(c > 0.0) || !(c <= 1.0)) {
        throw invalid_input_error("rerm_bound: c must lie in (0, 1]");
    }
    if (!(reg_coeff >= 0.0)) throw invalid_input_error("rerm_bound: reg_coeff >= 0");
    if (!(reg_bound > 0.0)) throw invalid_input_error("rerm_bound: reg_bound > 0");
    const double mi_sum = detail::mi_sum_checked(mi, "rerm_bound");
    const double n = static_cast<double>(mi.size());
    bound_report rep;
    rep.kind = "rerm";
    rep.inputs.mi_count = mi.size();
    rep.inputs.mi_sum = mi_sum;
    rep.inputs.empirical_term = empirical_reg_excess;
    rep.inputs.params.eta = eta;
    rep.inputs.params.c = c;
    rep.inputs.params.reg_coeff = reg_coeff;
    rep.inputs.params.reg_bound = reg_bound;
    const double tail = reg_coeff * reg_bound / (c * n) + mi_sum / (c * eta * n);
    rep.value = empirical_reg_excess / c + tail;
    rep.simplified_value = tail;
    return rep;
}

// ---------------------------------------------------------------------------
// Matching lower bounds for the Gaussian-mean problem:
//   gen    >= 2 sigma^2 (n-1)/n^2 * sum I_i
//   excess >= (2 sigma^2 / n) sum I_i + Rhat - gen/(n-1)
// ---------------------------------------------------------------------------

struct lower_bounds_report {
    double gen_lower = 0.0;
    double excess_lower = 0.0;
};

inline lower_bounds_report gaussian_lower_bounds(double noise_sd, std::size_t n,
                                                 const std::vector<double>& mi,
                                                 double empirical_excess,
                                                 double gen_error) {
    if (n < 2) throw invalid_input_error("gaussian_lower_bounds: n >= 2 required");
    const double mi_sum = detail::mi_sum_checked(mi, "gaussian_lower_bounds");
    const double s2 = noise_sd * noise_sd;
    const double dn = static_cast<double>(n);
    lower_bounds_report rep;
    rep.gen_lower = 2.0 * s2 * (dn - 1.0) / (dn * dn) * mi_sum;
    rep.excess_lower = 2.0 * s2 / dn * mi_sum + empirical_excess - gen_error / (dn - 1.0);
    return rep;
}

// Model-checked overload: the lemma is specific to the Gaussian-mean problem.
// Templated on the tuple type so this header stays independent of the model
// suite; the enum lookup is deferred to the instantiation point.
template <typename Tuple>
lower_bounds_report gaussian_lower_bounds(const Tuple& t, std::size_t n,
                                          const std::vector<double>& mi,
                                          double empirical_excess, double gen_error) {
    using id_type = std::decay_t<decltype(t.model)>;
    if (t.model != id_type::gaussian_mean) {
        throw invalid_input_error(
            "gaussian_lower_bounds: lemma is specific to gaussian_mean; got " +
            to_string(t.model));
    }
    return gaussian_lower_bounds(t.params.noise_sd, n, mi, empirical_excess, gen_error);
}

} // namespace genbound
