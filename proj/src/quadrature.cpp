#include "nld/quadrature.hpp"

#include <cmath>
#include <cstddef>

#include "nld/errors.hpp"

namespace nld {

namespace {

// Laguerre L_n and L_{n-1} at x via the three-term recurrence.
struct LaguerrePair {
    double ln;
    double lnm1;
};

LaguerrePair laguerre(std::size_t n, double x) {
    if (n == 0)
        return {1.0, 0.0};
    double p0 = 1.0;
    double p1 = 1.0 - x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double p2 =
            ((2.0 * static_cast<double>(k) - 1.0 - x) * p1 - (static_cast<double>(k) - 1.0) * p0) /
            static_cast<double>(k);
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

} // namespace

QuadratureRule gauss_laguerre(std::size_t n) {
    if (n < 1)
        throw argument_error("gauss_laguerre: need n >= 1");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const double nn = static_cast<double>(n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Stroud-Secrest style initial guesses, then Newton.
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * nn);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * nn);
        } else {
            const double ai = static_cast<double>(i - 1);
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double pp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const auto [ln, lnm1] = laguerre(n, z);
            pp = nn * (ln - lnm1) / z; // L_n'(z)
            const double dz = ln / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * (1.0 + std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw accuracy_error("gauss_laguerre: Newton iteration did not converge");
        rule.nodes[i] = z;
        const double lnm1 = laguerre(n - 1, z).ln;
        rule.weights[i] = z / (nn * nn * lnm1 * lnm1);
    }
    return rule;
}

} // namespace nld
