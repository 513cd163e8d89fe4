// Mutual-information estimation: analytic per-sample values, the Kraskov
// kNN estimator against a correlated-Gaussian benchmark, the mixed
// discrete-continuous variant, the chain-rule decomposition for (X, Y)
// pairs with binary labels, and the histogram baseline.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/mi.hpp"
#include "genbound/models.hpp"
#include "genbound/rng.hpp"
#include "genbound/special.hpp"

namespace gb = genbound;
using Catch::Approx;

namespace {

// Correlated standard-normal pair stream: x ~ N(0,1), y = rho x + sqrt(1-rho^2) g.
void correlated(double rho, std::size_t count, std::uint64_t seed,
                std::vector<double>& x, std::vector<double>& y) {
    gb::rng_stream rng(seed, 0);
    x.resize(count);
    y.resize(count);
    const double mix = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < count; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        x[i] = g1;
        y[i] = rho * g1 + mix * g2;
    }
}

bool has_warning(const gb::mi_estimate& est, const std::string& needle) {
    return std::any_of(est.warnings.begin(), est.warnings.end(),
                       [&](const std::string& w) {
                           return w.find(needle) != std::string::npos;
                       });
}

} // namespace

TEST_CASE("closed-form mutual information per model", "[mi]") {
    SECTION("gaussian mean: exact per-sample values") {
        const auto out = gb::closed_form_mi(gb::make_gaussian_mean(0.0, 1.0), 100);
        REQUIRE(out.size() == 100);
        const gb::mi_estimate& e = out.front();
        CHECK(e.estimator == gb::mi_estimator::closed_form);
        CHECK(gb::to_string(e.estimator) == std::string("closed_form"));
        CHECK(e.k == 0);
        CHECK(e.sample_count == 100);
        CHECK_FALSE(e.dataset_level);
        CHECK_FALSE(e.deterministic_relation);
        CHECK(e.warnings.empty());
        CHECK(e.value == Approx(0.0050251679267507206).epsilon(1e-14));
        CHECK(e.raw_value == e.value);
        CHECK(out[37].value == e.value);  // exchangeable samples
    }

    SECTION("discrete mean: convexity upper bound is flagged") {
        const auto out = gb::closed_form_mi(gb::make_discrete_mean(), 4);
        REQUIRE(out.size() == 4);
        for (const gb::mi_estimate& e : out) {
            CHECK(e.value == Approx(0.050459250693478124).epsilon(1e-10));
            CHECK(has_warning(e, "convexity upper bound"));
        }
    }

    SECTION("zero-mean two-point: information term vanishes") {
        const auto out = gb::closed_form_mi(gb::make_zero_mean_discrete(), 6);
        REQUIRE(out.size() == 6);
        for (const gb::mi_estimate& e : out) {
            CHECK(e.value == 0.0);
            CHECK(e.raw_value == 0.0);
            CHECK(e.warnings.empty());
        }
    }

    SECTION("linear regression: per-design-point values") {
        const auto out =
            gb::closed_form_mi(gb::make_linear_regression({1.0, 0.0, 2.0}), 3);
        REQUIRE(out.size() == 3);
        CHECK(out[1].value == 0.0);  // zero-leverage design point
        CHECK(out[2].value == Approx(0.5 * std::log(5.0)).epsilon(1e-13));
    }

    SECTION("hypothesis selection: one dataset-level entry") {
        const auto out = gb::closed_form_mi(gb::make_hypothesis_selection(), 10);
        REQUIRE(out.size() == 1);
        const gb::mi_estimate& e = out.front();
        CHECK(e.dataset_level);
        CHECK(e.value == std::log(10.0));
        CHECK(e.sample_count == 10);
        CHECK(e.k == 0);
    }

    SECTION("logistic regression has no closed form") {
        CHECK_THROWS_AS(
            gb::closed_form_mi(gb::make_logistic_regression(), 100),
            gb::invalid_input_error);
    }
}

TEST_CASE("ksg estimator reproduces the bivariate gaussian benchmark", "[mi]") {
    std::vector<double> x;
    std::vector<double> y;
    correlated(0.9, 5000, 7, x, y);

    const gb::mi_estimate e = gb::ksg_mi(x, y, 3);
    CHECK(e.value == Approx(0.85817681367438914).epsilon(1e-13));
    CHECK(e.raw_value == e.value);
    CHECK(e.estimator == gb::mi_estimator::ksg);
    CHECK(e.k == 3);
    CHECK(e.sample_count == 5000);
    CHECK_FALSE(e.seed.has_value());
    CHECK_FALSE(e.dataset_level);
    CHECK_FALSE(e.deterministic_relation);
    CHECK(e.warnings.empty());

    // True mutual information of the pair is -log(1 - rho^2) / 2.
    const double truth = -0.5 * std::log(1.0 - 0.9 * 0.9);
    CHECK(truth == Approx(0.83036560341082545).epsilon(1e-15));
    CHECK(std::fabs(e.value - truth) <= 0.05);

    // The coarse histogram baseline lands in the same neighborhood.
    const gb::mi_estimate h = gb::histogram_mi(x, y, 8);
    CHECK(h.value == Approx(0.70434881904441404).epsilon(1e-13));
    CHECK(h.estimator == gb::mi_estimator::histogram);
    CHECK(h.k == 0);
    REQUIRE(h.warnings.size() == 1);
    CHECK(has_warning(h, "plug-in estimate"));
    CHECK_FALSE(h.deterministic_relation);
    CHECK(std::fabs(h.value - truth) <= 0.15);
}

TEST_CASE("ksg estimator on independent data clips at zero", "[mi]") {
    std::vector<double> x;
    std::vector<double> y;
    correlated(0.0, 5000, 11, x, y);
    const gb::mi_estimate e = gb::ksg_mi(x, y, 3);
    CHECK(e.value == 0.0);
    CHECK(e.raw_value == Approx(-0.0045625012442224106).epsilon(1e-12));
    CHECK(e.warnings.empty());
    CHECK_FALSE(e.deterministic_relation);
}

TEST_CASE("ksg symmetry and the deterministic-relation flag", "[mi]") {
    SECTION("estimate is symmetric in its arguments") {
        std::vector<double> x;
        std::vector<double> y;
        correlated(0.6, 1200, 21, x, y);
        const gb::mi_estimate a = gb::ksg_mi(x, y, 3);
        const gb::mi_estimate b = gb::ksg_mi(y, x, 3);
        CHECK(a.value == b.value);  // bit-exact: the engine is axis-symmetric
        CHECK(a.raw_value == b.raw_value);
    }

    SECTION("identical coordinates saturate the estimator ceiling") {
        gb::rng_stream rng(5, 0);
        std::vector<double> x(400);
        for (double& v : x) v = rng.normal();
        const gb::mi_estimate e = gb::ksg_mi(x, x, 3);
        CHECK(e.deterministic_relation);
        CHECK(has_warning(e, "ceiling"));
        const double ceiling = gb::digamma(400.0) - gb::digamma(3.0);
        CHECK(e.value == Approx(ceiling).epsilon(1e-12));
    }

    SECTION("multivariate overload: 2-d input against a noisy sum") {
        gb::rng_stream rng(17, 0);
        std::vector<std::vector<double>> w(600);
        std::vector<std::vector<double>> s(600);
        for (std::size_t i = 0; i < 600; ++i) {
            const double g1 = rng.normal();
            const double g2 = rng.normal();
            const double g3 = rng.normal();
            w[i] = {g1, g2};
            s[i] = {g1 + g2 + g3};
        }
        // I((G1,G2); G1+G2+G3) = log(3)/2 for unit normals.
        const gb::mi_estimate e = gb::ksg_mi(w, s, 3);
        CHECK(std::fabs(e.value - 0.5 * std::log(3.0)) <= 0.12);
        CHECK_FALSE(e.deterministic_relation);
    }
}

TEST_CASE("ksg and histogram input validation", "[mi]") {
    const std::vector<double> a{0.1, 0.7, -0.3, 1.2, 0.4};
    const std::vector<double> b{0.0, 1.0, -1.0, 0.5, 0.25};

    SECTION("scalar ksg rejects malformed inputs") {
        CHECK_THROWS_AS(gb::ksg_mi(a, std::vector<double>{1.0, 2.0}, 3),
                        gb::invalid_input_error);
        CHECK_THROWS_AS(gb::ksg_mi(a, b, 0), gb::invalid_input_error);
        // Needs at least k + 2 samples.
        CHECK_THROWS_AS(gb::ksg_mi(std::vector<double>{1.0, 2.0, 3.0, 4.0},
                                   std::vector<double>{1.0, 2.0, 3.0, 4.0}, 3),
                        gb::invalid_input_error);
        std::vector<double> with_nan = a;
        with_nan[2] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(gb::ksg_mi(with_nan, b, 1), gb::invalid_input_error);
        std::vector<double> with_inf = a;
        with_inf[0] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(gb::ksg_mi(with_inf, b, 1), gb::invalid_input_error);
    }

    SECTION("vector ksg rejects malformed point sets") {
        const std::vector<std::vector<double>> empty;
        CHECK_THROWS_AS(gb::ksg_mi(empty, empty, 3), gb::invalid_input_error);
        const std::vector<std::vector<double>> zero_dim(5, std::vector<double>{});
        CHECK_THROWS_AS(gb::ksg_mi(zero_dim, zero_dim, 1), gb::invalid_input_error);
        std::vector<std::vector<double>> ragged{{1.0, 2.0}, {3.0}, {4.0, 5.0},
                                               {6.0, 7.0}, {8.0, 9.0}};
        CHECK_THROWS_AS(gb::ksg_mi(ragged, ragged, 1), gb::invalid_input_error);
    }

    SECTION("histogram rejects malformed inputs") {
        CHECK_THROWS_AS(gb::histogram_mi(a, std::vector<double>{1.0, 2.0}, 2),
                        gb::invalid_input_error);
        CHECK_THROWS_AS(gb::histogram_mi(a, b, 1), gb::invalid_input_error);
        CHECK_THROWS_AS(gb::histogram_mi(a, b, 8), gb::invalid_input_error);
    }
}

TEST_CASE("mixed estimator separates label information from noise", "[mi]") {
    std::vector<double> x;
    std::vector<double> y;
    correlated(0.0, 2000, 3, x, y);  // x and y independent
    std::vector<int> labels(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) labels[i] = x[i] > 0.0 ? 1 : 0;

    SECTION("sign label carries about log(2) nats about its source") {
        const gb::mi_estimate m = gb::mixed_mi(labels, x, 3);
        CHECK(m.value == Approx(0.69276631212234663).epsilon(1e-13));
        CHECK(std::fabs(m.value - std::log(2.0)) <= 0.01);
        CHECK(m.estimator == gb::mi_estimator::mixed_dc);
        CHECK(m.k == 3);
        CHECK(m.warnings.empty());
    }

    SECTION("label of an independent stream carries nothing") {
        const gb::mi_estimate ind = gb::mixed_mi(labels, y, 3);
        CHECK(ind.value == 0.0);
    }

    SECTION("small label classes are flagged") {
        gb::rng_stream rng(9, 0);
        std::vector<double> z(40);
        for (double& v : z) v = rng.normal();
        std::vector<int> few(40, 0);
        few[0] = few[1] = few[2] = 1;
        const gb::mi_estimate m = gb::mixed_mi(few, z, 3);
        CHECK(m.value >= 0.0);
        CHECK(has_warning(m, "label class 1 has 3 members"));
        CHECK(has_warning(m, "reduced effective order"));
    }

    SECTION("count mismatch throws") {
        CHECK_THROWS_AS(gb::mixed_mi(std::vector<int>{0, 1, 0}, x, 3),
                        gb::invalid_input_error);
    }
}

TEST_CASE("chain-rule decomposition recombines its components", "[mi]") {
    const std::size_t n = 500;
    gb::rng_stream rng(13, 0);
    std::vector<std::vector<double>> w(n);
    std::vector<std::vector<double>> x(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g1 = rng.normal();
        const double g2 = rng.normal();
        const double g3 = rng.normal();
        const double g4 = rng.normal();
        x[i] = {g1, g2};
        y[i] = (g1 + g2 > 0.0) ? 1 : 0;
        w[i] = {g1 + 0.5 * g3, g2 + 0.5 * g4};
    }

    const gb::mi_estimate est = gb::chain_rule_mi(w, x, y, 3);
    CHECK(est.estimator == gb::mi_estimator::chain_rule);
    CHECK(est.k == 3);
    CHECK(est.sample_count == n);
    REQUIRE(est.components.has_value());
    const gb::mi_components& c = *est.components;

    // value = I(W;Y) + sum of label-weighted conditional terms, exactly.
    CHECK(est.value ==
          Approx(c.i_wy + c.p_y0 * c.i_wx_y0 + c.p_y1 * c.i_wx_y1).epsilon(1e-12));
    CHECK(c.p_y0 + c.p_y1 == Approx(1.0).margin(1e-15));
    CHECK(est.value >= c.i_wy);
    CHECK(est.value > 0.3);  // W tracks X closely by construction

    // Each component matches the standalone estimator on the same data.
    CHECK(gb::mixed_mi(y, w, 3).value == c.i_wy);
    std::vector<std::vector<double>> w1;
    std::vector<std::vector<double>> x1;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == 1) {
            w1.push_back(w[i]);
            x1.push_back(x[i]);
        }
    }
    CHECK(c.p_y1 == static_cast<double>(w1.size()) / static_cast<double>(n));
    CHECK(gb::ksg_mi(w1, x1, 3).value == c.i_wx_y1);
}

TEST_CASE("chain-rule warnings and input validation", "[mi]") {
    auto make_pairs = [](std::size_t n, std::uint64_t seed) {
        gb::rng_stream rng(seed, 0);
        std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
            out;
        out.first.resize(n);
        out.second.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double g = rng.normal();
            out.first[i] = {g};
            out.second[i] = {g + 0.25 * rng.normal()};
        }
        return out;
    };

    SECTION("misaligned triples and non-binary labels throw") {
        auto [w, x] = make_pairs(20, 19);
        std::vector<int> y(20, 0);
        std::vector<std::vector<double>> short_x(x.begin(), x.end() - 1);
        CHECK_THROWS_AS(gb::chain_rule_mi(w, short_x, y, 3),
                        gb::invalid_input_error);
        std::vector<int> short_y(y.begin(), y.end() - 1);
        CHECK_THROWS_AS(gb::chain_rule_mi(w, x, short_y, 3),
                        gb::invalid_input_error);
        std::vector<int> bad = y;
        bad[7] = 2;
        CHECK_THROWS_AS(gb::chain_rule_mi(w, x, bad, 3), gb::invalid_input_error);
    }

    SECTION("absent label contributes zero weight") {
        auto [w, x] = make_pairs(50, 19);
        const std::vector<int> y(50, 0);
        const gb::mi_estimate est = gb::chain_rule_mi(w, x, y, 3);
        CHECK(has_warning(est, "label 1 absent"));
        REQUIRE(est.components.has_value());
        CHECK(est.components->p_y1 == 0.0);
        CHECK(est.components->i_wx_y1 == 0.0);
        CHECK(est.components->p_y0 == 1.0);
        CHECK(est.components->i_wy == 0.0);  // constant label is uninformative
        CHECK(est.value ==
              Approx(est.components->i_wy + est.components->i_wx_y0).epsilon(1e-12));
    }

    SECTION("class too small for a conditional estimate") {
        auto [w, x] = make_pairs(60, 23);
        std::vector<int> y(60, 0);
        y[0] = y[1] = 1;
        const gb::mi_estimate est = gb::chain_rule_mi(w, x, y, 3);
        CHECK(has_warning(est, "too small for a conditional estimate"));
        CHECK(has_warning(est, "I(W;Y): label class 1 has 2 members"));
        REQUIRE(est.components.has_value());
        CHECK(est.components->i_wx_y1 == 0.0);
        CHECK(est.components->p_y1 == 2.0 / 60.0);
    }

    SECTION("mid-sized class falls back to a reduced order") {
        auto [w, x] = make_pairs(60, 29);
        std::vector<int> y(60, 0);
        y[0] = y[1] = y[2] = y[3] = 1;
        const gb::mi_estimate est = gb::chain_rule_mi(w, x, y, 3);
        CHECK(has_warning(est, "uses reduced k = 2"));
        CHECK(std::isfinite(est.value));
        CHECK(est.value >= 0.0);
    }
}

TEST_CASE("histogram degenerate and ceiling paths", "[mi]") {
    SECTION("constant axis yields zero with a warning") {
        gb::rng_stream rng(31, 0);
        std::vector<double> x(64, 3.5);
        std::vector<double> y(64);
        for (double& v : y) v = rng.normal();
        const gb::mi_estimate e = gb::histogram_mi(x, y, 8);
        CHECK(e.value == 0.0);
        CHECK(e.raw_value == 0.0);
        CHECK(has_warning(e, "degenerate axis"));
    }

    SECTION("identical axes approach the log(bins) ceiling") {
        gb::rng_stream rng(37, 0);
        std::vector<double> x(256);
        for (double& v : x) v = rng.normal();
        const gb::mi_estimate e = gb::histogram_mi(x, x, 8);
        CHECK(e.deterministic_relation);
        CHECK(has_warning(e, "histogram ceiling"));
        CHECK(has_warning(e, "occupied cells"));
        CHECK(std::fabs(e.value - std::log(8.0)) <= 0.005);
    }
}
