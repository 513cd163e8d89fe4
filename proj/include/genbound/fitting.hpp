// Convergence-rate fitting: ordinary least squares on (ln n, ln value),
// turning O(n^{-alpha}) rate claims into measurable slopes.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound {

struct rate_point {
    double n = 0.0;
    double value = 0.0;
};

struct rate_fit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::vector<rate_point> points;    // the points actually fitted
    std::vector<rate_point> excluded;  // non-positive values, recorded
};

// OLS fit of ln(value) against ln(n).  Requires at least 3 usable
// (strictly positive) points; non-positive values are excluded and recorded
// rather than silently dropped.
inline rate_fit fit_rate(const std::vector<rate_point>& points) {
    rate_fit fit;
    std::vector<double> lx;
    std::vector<double> ly;
    for (const rate_point& p : points) {
        if (!(p.n > 0.0)) {
            throw invalid_input_error("fit_rate: sample sizes must be > 0");
        }
        if (p.value > 0.0 && std::isfinite(p.value)) {
            lx.push_back(std::log(p.n));
            ly.push_back(std::log(p.value));
            fit.points.push_back(p);
        } else {
            fit.excluded.push_back(p);
        }
    }
    const std::size_t m = lx.size();
    if (m < 3) {
        throw invalid_input_error("fit_rate: need at least 3 positive points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = lx[i] - mx;
        const double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw invalid_input_error("fit_rate: sample sizes must not all coincide");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double resid = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += resid * resid;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    fit.slope_stderr =
        m > 2 ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
    return fit;
}

// Affine fit of y against x (no logs); used for exponential-rate checks
// where ln(quantity) is already the natural ordinate.
inline rate_fit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw invalid_input_error("fit_affine: mismatched lengths");
    }
    const std::size_t m = x.size();
    if (m < 3) throw invalid_input_error("fit_affine: need at least 3 points");
    rate_fit fit;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw invalid_input_error("fit_affine: non-finite point");
        }
        mx += x[i];
        my += y[i];
        fit.points.push_back({x[i], y[i]});
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw invalid_input_error("fit_affine: degenerate abscissae");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double resid = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += resid * resid;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    fit.slope_stderr =
        m > 2 ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
    return fit;
}

} // namespace genbound
