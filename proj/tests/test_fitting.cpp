// Rate fitting: log-log least squares for power-law decay exponents and the
// plain affine variant used when the ordinate is already a logarithm.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/fitting.hpp"

namespace gb = genbound;
using Catch::Approx;

TEST_CASE("fit_rate recovers exact power laws", "[fitting]") {
    SECTION("square-root decay") {
        std::vector<gb::rate_point> pts;
        for (double n : {10.0, 20.0, 40.0, 80.0, 160.0, 320.0}) {
            pts.push_back({n, 3.0 / std::sqrt(n)});
        }
        const gb::rate_fit fit = gb::fit_rate(pts);
        CHECK(fit.slope == Approx(-0.5).margin(1e-9));
        CHECK(fit.intercept == Approx(std::log(3.0)).margin(1e-9));
        CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
        CHECK(fit.slope_stderr <= 1e-9);
        CHECK(fit.points.size() == 6);
        CHECK(fit.excluded.empty());
    }

    SECTION("linear decay") {
        std::vector<gb::rate_point> pts;
        for (double n : {5.0, 25.0, 125.0, 625.0}) {
            pts.push_back({n, 0.25 / n});
        }
        const gb::rate_fit fit = gb::fit_rate(pts);
        CHECK(fit.slope == Approx(-1.0).margin(1e-9));
    }

    SECTION("flat series") {
        const std::vector<gb::rate_point> pts{{10.0, 7.0}, {100.0, 7.0}, {1000.0, 7.0}};
        const gb::rate_fit fit = gb::fit_rate(pts);
        CHECK(fit.slope == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("fit_rate excludes and records non-positive values", "[fitting]") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<gb::rate_point> pts{
        {10.0, 1e-1}, {100.0, 0.0}, {1000.0, 1e-3},
        {10000.0, -5.0}, {100000.0, 1e-5}, {42.0, inf},
    };
    const gb::rate_fit fit = gb::fit_rate(pts);
    CHECK(fit.points.size() == 3);
    REQUIRE(fit.excluded.size() == 3);
    CHECK(fit.excluded[0].n == 100.0);
    CHECK(fit.excluded[0].value == 0.0);
    CHECK(fit.excluded[1].n == 10000.0);
    CHECK(fit.excluded[1].value == -5.0);
    CHECK(fit.excluded[2].n == 42.0);
    // The surviving points sit on v = 1/n exactly.
    CHECK(fit.slope == Approx(-1.0).margin(1e-9));
}

TEST_CASE("fit_rate input validation", "[fitting]") {
    CHECK_THROWS_AS(gb::fit_rate({}), gb::invalid_input_error);
    CHECK_THROWS_AS(gb::fit_rate({{0.0, 1.0}, {10.0, 1.0}, {100.0, 1.0}}),
                    gb::invalid_input_error);
    CHECK_THROWS_AS(gb::fit_rate({{-3.0, 1.0}, {10.0, 1.0}, {100.0, 1.0}}),
                    gb::invalid_input_error);
    // Two positive values among four points is not enough.
    CHECK_THROWS_AS(gb::fit_rate({{10.0, 1.0}, {100.0, 0.0}, {1000.0, -1.0},
                                  {10000.0, 2.0}}),
                    gb::invalid_input_error);
    // Coincident sample sizes leave the slope undefined.
    CHECK_THROWS_AS(gb::fit_rate({{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}}),
                    gb::invalid_input_error);
}

TEST_CASE("fit_rate is permutation invariant", "[fitting]") {
    const std::vector<double> ns{8.0, 19.0, 37.0, 101.0, 260.0, 777.0};
    const std::vector<double> wiggle{1.01, 0.98, 1.02, 0.99, 1.015, 0.995};
    std::vector<gb::rate_point> pts;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        pts.push_back({ns[i], 2.0 * std::pow(ns[i], -0.7) * wiggle[i]});
    }
    const gb::rate_fit forward = gb::fit_rate(pts);
    std::vector<gb::rate_point> reversed(pts.rbegin(), pts.rend());
    const gb::rate_fit backward = gb::fit_rate(reversed);
    CHECK(forward.slope == Approx(backward.slope).epsilon(1e-12));
    CHECK(forward.intercept == Approx(backward.intercept).epsilon(1e-12));
    CHECK(forward.slope_stderr == Approx(backward.slope_stderr).epsilon(1e-12));
    CHECK(forward.r_squared == Approx(backward.r_squared).epsilon(1e-12));
    CHECK(forward.slope_stderr > 0.0);  // the wiggle leaves real residuals
    CHECK(forward.slope < -0.6);
    CHECK(forward.slope > -0.8);
}

TEST_CASE("fit_affine exact recovery and validation", "[fitting]") {
    const std::vector<double> x{-2.0, -1.0, 0.0, 1.0, 2.0, 3.0};
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * v - 1.25);

    const gb::rate_fit fit = gb::fit_affine(x, y);
    CHECK(fit.slope == Approx(2.5).margin(1e-12));
    CHECK(fit.intercept == Approx(-1.25).margin(1e-12));
    CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
    CHECK(fit.slope_stderr <= 1e-12);
    CHECK(fit.points.size() == 6);

    CHECK_THROWS_AS(gb::fit_affine(x, std::vector<double>{1.0, 2.0}),
                    gb::invalid_input_error);
    CHECK_THROWS_AS(gb::fit_affine({1.0, 2.0}, {3.0, 4.0}), gb::invalid_input_error);
    std::vector<double> bad = y;
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(gb::fit_affine(x, bad), gb::invalid_input_error);
    CHECK_THROWS_AS(gb::fit_affine({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}),
                    gb::invalid_input_error);
}
