#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "nld/errors.hpp"

namespace nld {

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
inline LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2)
        throw argument_error("fit_linear: need at least two matching samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0)
        throw fit_error("fit_linear: abscissae are all equal");

    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            ss += r * r;
        }
        f.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

struct QuadraticFit {
    double c0 = 0.0; // constant term
    double c1 = 0.0; // coefficient of the basis function
};

// Least squares y = c0 + c1 * b(x) for a caller-supplied basis column b;
// used for small-argument expansions where the curvature term must be
// modeled but only the constant is wanted.
inline QuadraticFit fit_affine_in_basis(std::span<const double> b, std::span<const double> y) {
    const std::size_t n = b.size();
    if (n != y.size() || n < 2)
        throw argument_error("fit_affine_in_basis: need at least two matching samples");

    double mb = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mb += b[i];
        my += y[i];
    }
    mb /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sbb = 0.0, sby = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sbb += (b[i] - mb) * (b[i] - mb);
        sby += (b[i] - mb) * (y[i] - my);
    }
    if (sbb <= 0.0)
        throw fit_error("fit_affine_in_basis: basis column is constant");

    QuadraticFit f;
    f.c1 = sby / sbb;
    f.c0 = my - f.c1 * mb;
    return f;
}

} // namespace nld
