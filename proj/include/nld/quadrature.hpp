#pragma once

#include <cstddef>
#include <vector>

namespace nld {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Laguerre rule: sum_i w_i g(t_i) approximates \int_0^inf e^{-t} g(t) dt,
// exact for polynomials g of degree <= 2n-1.
QuadratureRule gauss_laguerre(std::size_t n);

} // namespace nld
