#pragma once

#include <vector>

#include "nld/kernel.hpp"
#include "nld/spectral_grid.hpp"

namespace nld {

/// Precomputed multiplier data for one (kernel, grid, initial datum) run.
/// The propagator is exact in time: uhat(t) = e^{t(Jhat-1)} uhat(0).
struct PropagatorPlan {
    Kernel kernel;
    Grid grid;
    std::vector<double> jhat_on_grid; // Jhat(xi_k), FFT storage order
    double initial_mass_m = 0.0;      // M = \int u0
};

PropagatorPlan make_plan(const Kernel& kernel, const Grid& grid, const Field& u0);

/// State at one time: u = rough + v with rough = e^{-t} u0 the non-smoothing
/// carry-over of the initial datum and v the smooth part.
struct EvolutionSnapshot {
    double t = 0.0;
    Field u;
    Field rough;
    Field v;
};

EvolutionSnapshot evolve(const PropagatorPlan& plan, const Field& u0, double t);

// Regular-part kernel K_t: inverse transform of e^{t(Jhat-1)} - e^{-t}.
Field kernel_kt(const PropagatorPlan& plan, double t);

// Forcing of the v-equation: e^{-t} (J * u0).
Field source_term(const PropagatorPlan& plan, const Field& u0, double t);

// J_lambda * f via the exact multiplier Jhat(xi/lambda), J_lambda = lambda J(lambda .).
Field spectral_convolve(const Kernel& kernel, const Field& f, double lambda = 1.0);

// Rectangle-rule quadrature weights of the kernel truncated to its effective
// support; shared by the oracle integrator and the discrete double sums.
std::vector<double> quadrature_weights(const Kernel& kernel, double dx, double tail_tol = 1e-12);

// Independent verification path: classical fourth-order one-step integration
// of u' = J*u - u with a real-space truncated-kernel quadrature convolution.
// No frequency-domain computation anywhere.
Field oracle_evolve(const Kernel& kernel, const Field& u0, double t, double dt);

} // namespace nld
