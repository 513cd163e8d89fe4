// Samplers, ERM solvers, closed-form reports, and the exact cumulant
// generating functions, checked against independently computed oracle
// values (30-digit arithmetic) and structural invariants.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/models.hpp"
#include "genbound/special.hpp"

namespace gb = genbound;
using Catch::Approx;

TEST_CASE("sample_dataset is deterministic and law-consistent", "[models]") {
    const gb::learning_tuple t = gb::make_gaussian_mean(5.0, 0.1);
    gb::rng_stream r1(2, 0);
    gb::rng_stream r2(2, 0);
    const gb::dataset a = gb::sample_dataset(t, 200, r1);
    const gb::dataset b = gb::sample_dataset(t, 200, r2);
    REQUIRE(a.values == b.values);
    double mean = 0.0;
    for (double v : a.values) mean += v;
    mean /= 200.0;
    CHECK(mean == Approx(5.0).margin(0.05));  // sd 0.1 => stderr ~ 0.007

    gb::rng_stream r3(2, 1);
    CHECK(gb::sample_dataset(t, 200, r3).values != a.values);
    CHECK_THROWS_AS(gb::sample_dataset(t, 0, r3), gb::invalid_input_error);
}

TEST_CASE("linear regression sampler follows its fixed design", "[models]") {
    const gb::learning_tuple t = gb::make_linear_regression({1.0, 2.0, 3.0}, 2.0, 0.5);
    gb::rng_stream rng(4, 0);
    const gb::dataset d = gb::sample_dataset(t, 3, rng);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(d.row(i)[0] == t.params.design[i]);
        CHECK(std::fabs(d.row(i)[1] - 2.0 * d.row(i)[0]) < 5.0);  // noise-scale sane
    }
    gb::rng_stream rng2(4, 0);
    CHECK_THROWS_AS(gb::sample_dataset(t, 5, rng2), gb::invalid_input_error);
}

TEST_CASE("logistic sampler emits binary labels with the configured law", "[models]") {
    const gb::learning_tuple t = gb::make_logistic_regression({3.0, 0.0});
    gb::rng_stream rng(6, 0);
    const gb::dataset d = gb::sample_dataset(t, 4000, rng);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double y = d.row(i)[2];
        REQUIRE((y == 0.0 || y == 1.0));
        // Negative convention: P(Y=1|x) = sigmoid(-3 x_1), so labels
        // anti-align with the first feature's sign.
        if ((d.row(i)[0] > 0.0) == (y == 0.0)) ++agree;
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(d.size()) > 0.75);
}

TEST_CASE("erm closed-form solvers", "[models]") {
    // Gaussian mean: exactly the sample mean.
    const gb::learning_tuple g = gb::make_gaussian_mean(0.0, 1.0);
    gb::dataset d(4, 1);
    d.row(0)[0] = 1.0;
    d.row(1)[0] = 2.0;
    d.row(2)[0] = -0.5;
    d.row(3)[0] = 3.5;
    CHECK(gb::erm(g, d).w[0] == Approx(1.5).epsilon(1e-15));

    // Two-point models: the sign of the sample mean, +1 on ties.
    const gb::learning_tuple z = gb::make_zero_mean_discrete();
    CHECK(gb::erm(z, d).w[0] == 1.0);
    gb::dataset neg(2, 1);
    neg.row(0)[0] = -1.0;
    neg.row(1)[0] = 0.5;
    CHECK(gb::erm(z, neg).w[0] == -1.0);
    gb::dataset tie(2, 1);
    tie.row(0)[0] = -1.0;
    tie.row(1)[0] = 1.0;
    CHECK(gb::erm(z, tie).w[0] == 1.0);

    // Least squares through the origin: sum(xy)/sum(xx).
    const gb::learning_tuple lr = gb::make_linear_regression({1.0, 2.0});
    gb::dataset xy(2, 2);
    xy.row(0)[0] = 1.0;
    xy.row(0)[1] = 2.0;
    xy.row(1)[0] = 2.0;
    xy.row(1)[1] = 3.0;
    CHECK(gb::erm(lr, xy).w[0] == Approx(8.0 / 5.0).epsilon(1e-15));

    // Selection: highest reward wins, ties to the lowest index.
    const gb::learning_tuple hs = gb::make_hypothesis_selection();
    gb::dataset arms(3, 1);
    arms.row(0)[0] = 0.5;
    arms.row(1)[0] = 2.0;
    arms.row(2)[0] = 2.0;
    CHECK(gb::erm(hs, arms).w[0] == 1.0);

    CHECK_THROWS_AS(gb::erm(g, gb::dataset{}), gb::invalid_input_error);
    CHECK_THROWS_AS(gb::erm(lr, d), gb::invalid_input_error);  // arity mismatch
}

TEST_CASE("logistic erm converges and respects the radius", "[models]") {
    const gb::learning_tuple t = gb::make_logistic_regression({0.5, 0.5});
    gb::rng_stream rng(8, 0);
    const gb::dataset d = gb::sample_dataset(t, 400, rng);
    const gb::erm_result fit = gb::erm(t, d);
    REQUIRE(fit.converged);
    CHECK(fit.grad_norm <= 1e-8);
    const double norm = std::hypot(fit.w[0], fit.w[1]);
    CHECK(norm <= t.params.hypothesis_radius);
    // At n=400 the fit should sit near the population minimizer -w*.
    CHECK(fit.w[0] == Approx(-0.5).margin(0.35));
    CHECK(fit.w[1] == Approx(-0.5).margin(0.35));

    // A tiny hypothesis ball keeps the projection active but bounded.
    const gb::learning_tuple small = gb::make_logistic_regression({0.5, 0.5}, 0.05);
    const gb::erm_result clipped = gb::erm(small, d);
    CHECK(std::hypot(clipped.w[0], clipped.w[1]) <= 0.05 + 1e-12);
}

TEST_CASE("draw_joint couples the sample and its fit", "[models]") {
    const gb::learning_tuple t = gb::make_gaussian_mean(0.0, 1.0);
    const gb::joint_draw jd = gb::draw_joint(t, 50, 3, 17);
    CHECK(jd.stream_index == 17);
    CHECK(jd.converged);
    double mean = 0.0;
    for (std::size_t i = 0; i < jd.data.size(); ++i) mean += jd.data.row(i)[0];
    CHECK(jd.hypothesis[0] == Approx(mean / 50.0).epsilon(1e-15));
    const gb::joint_draw again = gb::draw_joint(t, 50, 3, 17);
    CHECK(again.hypothesis == jd.hypothesis);
    CHECK(again.data.values == jd.data.values);
}

TEST_CASE("gaussian mean closed forms", "[models]") {
    const gb::learning_tuple t = gb::make_gaussian_mean(0.0, 1.0);
    const gb::closed_form_report cf = gb::closed_form(t, 100);
    CHECK(cf.gen_error.value() == Approx(0.02).epsilon(1e-15));
    CHECK(cf.excess.value() == Approx(0.01).epsilon(1e-15));
    CHECK(cf.empirical_excess.value() == Approx(-0.01).epsilon(1e-15));
    REQUIRE(cf.mi_per_sample.size() == 100);
    // I(W;Z_i) = (1/2) ln(n/(n-1)); oracle value at n=100.
    CHECK(cf.mi_per_sample[0] == Approx(0.0050251679267507206).epsilon(1e-14));
    CHECK(cf.mi_total.value() == Approx(0.50251679267507206).epsilon(1e-13));
    CHECK(cf.subgaussian_proxy_excess.value() ==
          Approx(std::sqrt(0.08)).epsilon(1e-15));
    CHECK(cf.subgaussian_proxy_loss.value() ==
          Approx(std::numbers::sqrt2 * 1.01).epsilon(1e-15));
    CHECK(cf.validity_min_n.value() == 4);
    CHECK_FALSE(cf.proxy_uncertified);
    CHECK_FALSE(cf.mi_is_upper_bound);

    // Below the certification threshold the proxy is flagged, not hidden.
    CHECK(gb::closed_form(t, 2).proxy_uncertified);
    CHECK_THROWS_AS(gb::closed_form(t, 1), gb::invalid_input_error);
    CHECK(gb::subgaussian_proxy_min_n(1.0, 0.25) == 4);
}

TEST_CASE("discrete mean closed forms", "[models]") {
    const gb::closed_form_report cf = gb::closed_form(gb::make_discrete_mean(), 4);
    CHECK(cf.excess.value() == Approx(0.091000527792716829).epsilon(1e-13));
    CHECK(cf.gen_error.value() == Approx(0.1079819330263761).epsilon(1e-13));
    CHECK(cf.empirical_excess.value() ==
          Approx(*cf.excess - *cf.gen_error).epsilon(1e-15));
    REQUIRE(cf.mi_per_sample.size() == 4);
    CHECK(cf.mi_per_sample[0] == Approx(0.050459250693478124).epsilon(1e-10));
    CHECK(cf.mi_is_upper_bound);

    // The bound shrinks rapidly with n (the hypothesis freezes to +1).
    CHECK(gb::closed_form(gb::make_discrete_mean(), 10).mi_per_sample[0] ==
          Approx(0.0026250030058904579).epsilon(1e-9));
    CHECK(gb::closed_form(gb::make_discrete_mean(), 24).mi_per_sample[0] ==
          Approx(2.9794709500868456e-6).epsilon(1e-6));
}

TEST_CASE("zero-mean and selection closed forms", "[models]") {
    const gb::closed_form_report zm =
        gb::closed_form(gb::make_zero_mean_discrete(), 100);
    CHECK(zm.excess.value() == 0.0);
    CHECK(zm.gen_error.value() == Approx(0.15957691216057307).epsilon(1e-14));
    CHECK(zm.empirical_excess.value() == Approx(-*zm.gen_error).epsilon(1e-15));
    CHECK(zm.mi_total.value() == 0.0);

    const gb::closed_form_report hs =
        gb::closed_form(gb::make_hypothesis_selection(1.0, 1.0), 10);
    CHECK(hs.excess.value() == 0.0);
    CHECK(hs.mi_dataset_level);
    CHECK(hs.mi_total.value() == Approx(std::log(10.0)).epsilon(1e-15));
    CHECK_FALSE(hs.gen_error.has_value());  // no elementary closed form

    CHECK(gb::closed_form(gb::make_logistic_regression(), 50).monte_carlo_only);
}

TEST_CASE("linear regression closed forms track the design", "[models]") {
    const gb::learning_tuple ones =
        gb::make_linear_regression(std::vector<double>(10, 1.0));
    const gb::closed_form_report cf = gb::closed_form(ones, 10);
    CHECK(cf.gen_error.value() == Approx(0.2).epsilon(1e-15));
    CHECK(cf.excess.value() == Approx(0.1).epsilon(1e-15));
    // Homogeneous design: every leverage is n, so I_i = (1/2) ln(10/9).
    for (double mi : cf.mi_per_sample) {
        CHECK(mi == Approx(0.052680257828913151).epsilon(1e-13));
    }

    // A zero design point carries no information about the slope.
    const gb::learning_tuple with_zero = gb::make_linear_regression({1.0, 0.0, 2.0});
    const gb::closed_form_report cz = gb::closed_form(with_zero, 3);
    CHECK(cz.mi_per_sample[1] == 0.0);
    // x = 2 dominates the design mass, so its sample reveals more.
    CHECK(cz.mi_per_sample[2] > cz.mi_per_sample[0]);
    CHECK(cz.mi_per_sample[0] == Approx(0.5 * std::log(1.25)).epsilon(1e-13));
    CHECK(cz.mi_per_sample[2] == Approx(0.5 * std::log(5.0)).epsilon(1e-13));

    CHECK_THROWS_AS(gb::closed_form(ones, 5), gb::invalid_input_error);
}

TEST_CASE("gaussian CGF closed forms", "[models]") {
    const gb::learning_tuple t = gb::make_gaussian_mean(0.0, 1.0);
    // Oracle values at n=100.
    CHECK(gb::cgf(t, 100, gb::cgf_kind::excess_neg, 0.25) ==
          Approx(-0.0012484400992935995).epsilon(1e-12));
    CHECK(gb::cgf(t, 100, gb::cgf_kind::excess_pos, 0.25) ==
          Approx(0.0037641332103957869).epsilon(1e-12));
    CHECK(gb::cgf(t, 100, gb::cgf_kind::loss_neg, 0.25) ==
          Approx(-0.20439644910041953).epsilon(1e-13));
    CHECK(gb::cgf(t, 100, gb::cgf_kind::loss_pos, 0.4) ==
          Approx(0.82512995347717775).epsilon(1e-13));
    // CGF(0) = 0 for every kind.
    for (gb::cgf_kind k : {gb::cgf_kind::excess_neg, gb::cgf_kind::excess_pos,
                           gb::cgf_kind::loss_neg, gb::cgf_kind::loss_pos}) {
        CHECK(gb::cgf(t, 100, k, 0.0) == 0.0);
    }
}

TEST_CASE("CGF domain boundaries are enforced", "[models]") {
    const gb::learning_tuple t = gb::make_gaussian_mean(0.0, 1.0);
    const gb::cgf_evaluator pos = gb::make_cgf_evaluator(t, 100, gb::cgf_kind::loss_pos);
    // loss = sW^2 chi^2(1) with sW^2 = 1.01 diverges at eta = 1/(2 sW^2).
    CHECK(pos.eta_max == Approx(1.0 / 2.02).epsilon(1e-15));
    CHECK_THROWS_AS(gb::cgf(t, 100, gb::cgf_kind::loss_pos, 0.5), gb::domain_error);
    CHECK_THROWS_AS(gb::cgf(t, 100, gb::cgf_kind::loss_pos, -0.1), gb::domain_error);
    // Approaching the boundary blows up smoothly.
    CHECK(gb::cgf(t, 100, gb::cgf_kind::loss_pos, pos.eta_max * (1.0 - 1e-6)) > 5.0);
}

TEST_CASE("two-point and selection CGF closed forms", "[models]") {
    const gb::learning_tuple zm = gb::make_zero_mean_discrete();
    // log((1 + e^{8 eta^2})/2), oracle at eta = 0.5.
    CHECK(gb::cgf(zm, 100, gb::cgf_kind::excess_neg, 0.5) ==
          Approx(1.4337808304830272).epsilon(1e-13));
    // Sign-symmetric excess: both tilts agree.
    for (double eta : {0.1, 0.5, 1.0, 2.0}) {
        CHECK(gb::cgf(zm, 100, gb::cgf_kind::excess_neg, eta) ==
              Approx(gb::cgf(zm, 100, gb::cgf_kind::excess_pos, eta)).epsilon(1e-14));
    }

    const gb::learning_tuple dm = gb::make_discrete_mean();
    CHECK(gb::cgf(dm, 4, gb::cgf_kind::excess_neg, 0.25) ==
          Approx(-0.0089917846086334648).epsilon(1e-12));
    // At eta = 1/2 the exponent 8 eta^2 - 4 eta vanishes identically.
    CHECK(gb::cgf(dm, 4, gb::cgf_kind::excess_neg, 0.5) == 0.0);

    const gb::learning_tuple hs = gb::make_hypothesis_selection(1.0, 1.0);
    // log(1/n + ((n-1)/n) e^{sigma^2 eta^2}) at n=10, eta=1.
    CHECK(gb::cgf(hs, 10, gb::cgf_kind::excess_neg, 1.0) ==
          Approx(0.9347016640011663).epsilon(1e-13));
    // Loss CGFs of the reference arm are plain Gaussian cumulants.
    CHECK(gb::cgf(hs, 10, gb::cgf_kind::loss_neg, 0.7) ==
          Approx(0.7 + 0.5 * 0.49).epsilon(1e-14));
}

TEST_CASE("linear regression CGF is the mixture of per-sample CGFs", "[models]") {
    const gb::learning_tuple t = gb::make_linear_regression({1.0, 2.0, 3.0});
    const double eta = 0.1;
    const std::vector<double> per =
        gb::cgf_linreg_per_sample(t, gb::cgf_kind::excess_neg, eta);
    REQUIRE(per.size() == 3);
    CHECK(gb::cgf(t, 3, gb::cgf_kind::excess_neg, eta) ==
          Approx(gb::log_mean_exp(per)).margin(1e-14));

    // Homogeneous design: the mixture collapses to the common value.
    const gb::learning_tuple ones =
        gb::make_linear_regression(std::vector<double>(10, 1.0));
    const std::vector<double> hom =
        gb::cgf_linreg_per_sample(ones, gb::cgf_kind::excess_neg, eta);
    for (double v : hom) {
        CHECK(v == Approx(gb::cgf(ones, 10, gb::cgf_kind::excess_neg, eta))
                       .margin(1e-14));
    }

    CHECK_THROWS_AS(
        gb::cgf_linreg_per_sample(gb::make_gaussian_mean(), gb::cgf_kind::excess_neg, eta),
        gb::invalid_input_error);
    CHECK_THROWS_AS(gb::cgf_linreg_per_sample(t, gb::cgf_kind::loss_neg, eta),
                    gb::invalid_input_error);
}

TEST_CASE("logistic CGF has no closed form by design", "[models]") {
    CHECK_THROWS_AS(
        gb::cgf(gb::make_logistic_regression(), 50, gb::cgf_kind::excess_neg, 0.5),
        gb::domain_error);
}
