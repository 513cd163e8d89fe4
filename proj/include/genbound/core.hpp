// Core vocabulary of the laboratory: the six analytic learning problems,
// datasets, hypothesis draws, and exact risk accounting.
//
// Every model is a triple (data law, hypothesis space, loss).  The library
// studies the ERM hypothesis W fitted on S_n = (Z_1..Z_n) and the four
// population quantities
//     population risk      L(w)      = E_Z  loss(w, Z)
//     empirical risk       L_hat(w)  = mean_i loss(w, z_i)
//     excess risk          R(w)      = L(w) - L(w*)
//     empirical excess     R_hat(w)  = L_hat(w) - L_hat(w*)
// with w* the population risk minimizer, and the generalization error
// gen = L(W) - L_hat(W).  These satisfy the exact decomposition
//     R(W) = gen + R_hat(W) + (L_hat(w*) - L(w*)).

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/special.hpp"

namespace genbound {

enum class model_id {
    gaussian_mean,        // Z ~ N(mean, sd^2), w real, loss (w - z)^2
    discrete_mean,        // Z ~ N(1, 1), w in {-1, +1}, loss (w - z)^2
    zero_mean_discrete,   // Z ~ N(0, 1), w in {-1, +1}, loss (w - z)^2
    linear_regression,    // fixed design x_i, y = w* x + noise, loss (y - w x)^2
    logistic_regression,  // x ~ N(0, I_d), binary y, cross-entropy loss
    hypothesis_selection, // n iid rewards z_w ~ N(mean, sd^2); loss of arm w is -z_w
};

inline std::string to_string(model_id m) {
    switch (m) {
        case model_id::gaussian_mean: return "gaussian_mean";
        case model_id::discrete_mean: return "discrete_mean";
        case model_id::zero_mean_discrete: return "zero_mean_discrete";
        case model_id::linear_regression: return "linear_regression";
        case model_id::logistic_regression: return "logistic_regression";
        case model_id::hypothesis_selection: return "hypothesis_selection";
    }
    throw invalid_input_error("to_string: unknown model_id");
}

inline model_id parse_model_id(const std::string& s) {
    if (s == "gaussian_mean") return model_id::gaussian_mean;
    if (s == "discrete_mean") return model_id::discrete_mean;
    if (s == "zero_mean_discrete") return model_id::zero_mean_discrete;
    if (s == "linear_regression") return model_id::linear_regression;
    if (s == "logistic_regression" || s == "logistic") return model_id::logistic_regression;
    if (s == "hypothesis_selection") return model_id::hypothesis_selection;
    throw invalid_input_error("parse_model_id: unknown model '" + s + "'");
}

// The logistic label law is P(Y=1 | x) = sigmoid(sign * <x, w_star>).
// The default is the negative sign; under it the population risk minimizer
// is -w_star (the two conventions are exact mirror images of each other).
enum class label_sign_convention { negative_inner_product, positive_inner_product };

struct model_params {
    double mean = 0.0;                   // data mean (gaussian_mean, selection)
    double noise_sd = 1.0;               // noise scale sigma_N > 0
    std::vector<double> design;          // linear_regression fixed design x_1..x_n
    int dim = 2;                         // logistic feature dimension
    std::vector<double> w_star;          // logistic data-generating parameter
    double hypothesis_radius = 3.0;      // logistic hypothesis-space radius > 0
    double reg_coeff = 0.0;              // regularization weight lambda >= 0
    double reg_bound = 1.0;              // regularizer range bound B > 0
    label_sign_convention label_sign = label_sign_convention::negative_inner_product;
};

struct learning_tuple {
    model_id model = model_id::gaussian_mean;
    model_params params;
};

inline void validate(const learning_tuple& t) {
    const model_params& p = t.params;
    if (!(p.noise_sd > 0.0)) {
        throw invalid_input_error("learning_tuple: noise_sd must be > 0");
    }
    if (!(p.hypothesis_radius > 0.0)) {
        throw invalid_input_error("learning_tuple: hypothesis_radius must be > 0");
    }
    if (p.reg_coeff < 0.0) {
        throw invalid_input_error("learning_tuple: reg_coeff must be >= 0");
    }
    if (!(p.reg_bound > 0.0)) {
        throw invalid_input_error("learning_tuple: reg_bound must be > 0");
    }
    switch (t.model) {
        case model_id::discrete_mean:
            // Closed forms below are derived for the canonical N(1,1) data law.
            if (p.mean != 1.0 || p.noise_sd != 1.0) {
                throw invalid_input_error(
                    "discrete_mean: canonical data law is N(1,1); got mean/sd "
                    "different from (1, 1)");
            }
            break;
        case model_id::zero_mean_discrete:
            if (p.mean != 0.0 || p.noise_sd != 1.0) {
                throw invalid_input_error(
                    "zero_mean_discrete: canonical data law is N(0,1)");
            }
            break;
        case model_id::linear_regression:
            if (p.design.empty()) {
                throw invalid_input_error("linear_regression: empty design");
            }
            for (double x : p.design) {
                if (!std::isfinite(x)) {
                    throw invalid_input_error("linear_regression: non-finite design entry");
                }
            }
            {
                double ssq = 0.0;
                for (double x : p.design) ssq += x * x;
                if (!(ssq > 0.0)) {
                    throw invalid_input_error(
                        "linear_regression: design must contain a nonzero entry");
                }
            }
            if (p.w_star.size() != 1) {
                throw invalid_input_error(
                    "linear_regression: w_star must hold exactly the scalar slope");
            }
            break;
        case model_id::logistic_regression:
            if (p.dim < 1) {
                throw invalid_input_error("logistic_regression: dim must be >= 1");
            }
            if (p.w_star.size() != static_cast<std::size_t>(p.dim)) {
                throw invalid_input_error(
                    "logistic_regression: w_star length must equal dim");
            }
            break;
        default:
            break;
    }
}

// Convenience factories for the canonical parameterizations.
inline learning_tuple make_gaussian_mean(double mean = 0.0, double noise_sd = 1.0) {
    learning_tuple t;
    t.model = model_id::gaussian_mean;
    t.params.mean = mean;
    t.params.noise_sd = noise_sd;
    validate(t);
    return t;
}

inline learning_tuple make_discrete_mean() {
    learning_tuple t;
    t.model = model_id::discrete_mean;
    t.params.mean = 1.0;
    t.params.noise_sd = 1.0;
    validate(t);
    return t;
}

inline learning_tuple make_zero_mean_discrete() {
    learning_tuple t;
    t.model = model_id::zero_mean_discrete;
    t.params.mean = 0.0;
    t.params.noise_sd = 1.0;
    validate(t);
    return t;
}

inline learning_tuple make_linear_regression(std::vector<double> design,
                                             double slope = 1.0,
                                             double noise_sd = 1.0) {
    learning_tuple t;
    t.model = model_id::linear_regression;
    t.params.design = std::move(design);
    t.params.w_star = {slope};
    t.params.noise_sd = noise_sd;
    validate(t);
    return t;
}

inline learning_tuple make_logistic_regression(
    std::vector<double> w_star = {0.5, 0.5}, double radius = 3.0,
    label_sign_convention sign = label_sign_convention::negative_inner_product) {
    learning_tuple t;
    t.model = model_id::logistic_regression;
    t.params.dim = static_cast<int>(w_star.size());
    t.params.w_star = std::move(w_star);
    t.params.hypothesis_radius = radius;
    t.params.label_sign = sign;
    validate(t);
    return t;
}

inline learning_tuple make_hypothesis_selection(double mean = 1.0,
                                                double noise_sd = 1.0) {
    learning_tuple t;
    t.model = model_id::hypothesis_selection;
    t.params.mean = mean;
    t.params.noise_sd = noise_sd;
    validate(t);
    return t;
}

// Number of coordinates in one sample z for the given model.
inline std::size_t sample_arity(const learning_tuple& t) {
    switch (t.model) {
        case model_id::linear_regression: return 2;  // (x, y)
        case model_id::logistic_regression:
            return static_cast<std::size_t>(t.params.dim) + 1;  // (x_1..x_d, y)
        default: return 1;
    }
}

// Flat row-major sample container: n rows of `arity` doubles.
struct dataset {
    std::vector<double> values;
    std::size_t arity = 1;

    dataset() = default;
    dataset(std::size_t n, std::size_t arity_in) : values(n * arity_in), arity(arity_in) {}

    std::size_t size() const { return arity == 0 ? 0 : values.size() / arity; }
    bool empty() const { return values.empty(); }

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * arity, arity};
    }
    std::span<double> row(std::size_t i) {
        return {values.data() + i * arity, arity};
    }
};

// One joint draw (W, S_n): the fitted hypothesis with the sample it was
// fitted on, plus solver diagnostics for the iterative (logistic) case.
struct joint_draw {
    std::vector<double> hypothesis;
    dataset data;
    std::uint64_t stream_index = 0;
    bool converged = true;
    int iterations = 0;
};

struct risk_record_t {
    double population_risk = 0.0;
    double empirical_risk = 0.0;
    double excess_risk = 0.0;
    double empirical_excess = 0.0;
    double gen_error = 0.0;
};

enum class population_source { closed_form, test_sample };

namespace detail {

inline void check_arity(const learning_tuple& t, std::span<const double> z) {
    if (z.size() != sample_arity(t)) {
        throw invalid_input_error("sample arity " + std::to_string(z.size()) +
                                  " does not match model " + to_string(t.model) +
                                  " (expected " + std::to_string(sample_arity(t)) + ")");
    }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

// Pointwise loss of hypothesis w on one sample z.  For hypothesis_selection
// the loss is defined at the dataset level (the selected arm's negated
// reward); on a single sample row this evaluates -z, the loss of any arm on
// its own reward coordinate.
inline double evaluate_loss(const learning_tuple& t, std::span<const double> w,
                            std::span<const double> z) {
    detail::check_arity(t, z);
    switch (t.model) {
        case model_id::gaussian_mean:
        case model_id::discrete_mean:
        case model_id::zero_mean_discrete: {
            if (w.size() != 1) throw invalid_input_error("scalar hypothesis expected");
            const double d = w[0] - z[0];
            return d * d;
        }
        case model_id::linear_regression: {
            if (w.size() != 1) throw invalid_input_error("scalar hypothesis expected");
            const double d = z[1] - w[0] * z[0];
            return d * d;
        }
        case model_id::logistic_regression: {
            const auto d = static_cast<std::size_t>(t.params.dim);
            if (w.size() != d) throw invalid_input_error("hypothesis dim mismatch");
            const double margin = detail::dot(w, z.first(d));
            const double y = z[d];
            // cross-entropy: -[y log s(m) + (1-y) log(1 - s(m))]
            return y > 0.5 ? logistic_loss_from_margin(margin)
                           : logistic_loss_from_margin(-margin);
        }
        case model_id::hypothesis_selection:
            return -z[0];
    }
    throw invalid_input_error("evaluate_loss: unknown model");
}

// Population risk minimizer w*.  For logistic regression this is the
// minimizer of the population cross-entropy, which depends on the label-law
// sign convention; for the two-point models the canonical optimum is +1;
// for hypothesis_selection every arm is equally optimal (arm 0 returned).
inline std::vector<double> optimal_hypothesis(const learning_tuple& t) {
    switch (t.model) {
        case model_id::gaussian_mean: return {t.params.mean};
        case model_id::discrete_mean: return {1.0};
        case model_id::zero_mean_discrete: return {1.0};
        case model_id::linear_regression: return {t.params.w_star[0]};
        case model_id::logistic_regression: {
            std::vector<double> w = t.params.w_star;
            if (t.params.label_sign == label_sign_convention::negative_inner_product) {
                for (double& v : w) v = -v;
            }
            return w;
        }
        case model_id::hypothesis_selection: return {0.0};
    }
    throw invalid_input_error("optimal_hypothesis: unknown model");
}

inline double excess_loss(const learning_tuple& t, std::span<const double> w,
                          std::span<const double> z) {
    const std::vector<double> w_opt = optimal_hypothesis(t);
    return evaluate_loss(t, w, z) - evaluate_loss(t, w_opt, z);
}

// Closed-form population risk.  Logistic regression has none and must go
// through a test sample (population_source::test_sample).
inline double population_risk(const learning_tuple& t, std::span<const double> w) {
    const model_params& p = t.params;
    switch (t.model) {
        case model_id::gaussian_mean: {
            const double d = w[0] - p.mean;
            return p.noise_sd * p.noise_sd + d * d;
        }
        case model_id::discrete_mean: {
            const double d = w[0] - 1.0;
            return 1.0 + d * d;
        }
        case model_id::zero_mean_discrete:
            return 1.0 + w[0] * w[0];
        case model_id::linear_regression: {
            double ssq = 0.0;
            for (double x : p.design) ssq += x * x;
            const double d = w[0] - p.w_star[0];
            return p.noise_sd * p.noise_sd +
                   d * d * ssq / static_cast<double>(p.design.size());
        }
        case model_id::logistic_regression:
            throw domain_error(
                "population_risk: logistic_regression has no closed form; use a "
                "test sample");
        case model_id::hypothesis_selection:
            return -p.mean;
    }
    throw invalid_input_error("population_risk: unknown model");
}

// Mean loss of w over a dataset.  For hypothesis_selection the empirical
// loss is the selected arm's own -z_w, not an average.
inline double empirical_risk(const learning_tuple& t, std::span<const double> w,
                             const dataset& data) {
    if (data.empty()) throw invalid_input_error("empirical_risk: empty dataset");
    if (t.model == model_id::hypothesis_selection) {
        const auto idx = static_cast<std::size_t>(std::llround(w[0]));
        if (idx >= data.size()) {
            throw invalid_input_error("hypothesis_selection: arm index out of range");
        }
        return -data.row(idx)[0];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        acc += evaluate_loss(t, w, data.row(i));
    }
    return acc / static_cast<double>(data.size());
}

// Exact risk accounting for one fitted hypothesis.  Population-side values
// come from the closed form, or from `test` when source == test_sample
// (mandatory for logistic regression).
inline risk_record_t risk_record(const learning_tuple& t, std::span<const double> w,
                                 const dataset& data, population_source source,
                                 const dataset* test = nullptr) {
    risk_record_t rec;
    const std::vector<double> w_opt = optimal_hypothesis(t);
    double pop_w = 0.0;
    double pop_opt = 0.0;
    if (source == population_source::test_sample) {
        if (test == nullptr || test->empty()) {
            throw invalid_input_error("risk_record: test_sample source requires a "
                                      "nonempty test dataset");
        }
        pop_w = empirical_risk(t, w, *test);
        pop_opt = empirical_risk(t, w_opt, *test);
    } else {
        pop_w = population_risk(t, w);
        pop_opt = population_risk(t, w_opt);
    }
    rec.population_risk = pop_w;
    rec.empirical_risk = empirical_risk(t, w, data);
    rec.excess_risk = pop_w - pop_opt;
    const double emp_opt =
        t.model == model_id::hypothesis_selection
            ? -data.row(0)[0]  // arm 0 is the designated reference arm
            : empirical_risk(t, w_opt, data);
    rec.empirical_excess = rec.empirical_risk - emp_opt;
    rec.gen_error = rec.population_risk - rec.empirical_risk;
    return rec;
}

} // namespace genbound
