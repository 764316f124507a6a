#include "nld/semigroup.hpp"

#include <cmath>
#include <cstddef>

#include "nld/errors.hpp"

namespace nld {

namespace {

void require_on_grid(const PropagatorPlan& plan, const Field& f) {
    if (!(f.grid == plan.grid))
        throw argument_error("field is not on the plan's grid");
}

// Direct periodic convolution with precomputed symmetric weights w[-mr..mr]
// (stored at offset mr). The input is padded so the inner loop stays
// contiguous.
std::vector<double> periodic_convolve(const std::vector<double>& u, int n, int mr,
                                      const std::vector<double>& w) {
    std::vector<double> ext(static_cast<std::size_t>(n + 2 * mr));
    for (int j = 0; j < n + 2 * mr; ++j) {
        int src = (j - mr) % n;
        if (src < 0)
            src += n;
        ext[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(src)];
    }
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int m = -mr; m <= mr; ++m) {
        const double wm = w[static_cast<std::size_t>(m + mr)];
        if (wm == 0.0)
            continue;
        const double* src = ext.data() + (mr - m);
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(j)] += wm * src[j];
    }
    return out;
}

} // namespace

PropagatorPlan make_plan(const Kernel& kernel, const Grid& grid, const Field& u0) {
    if (!(u0.grid == grid))
        throw argument_error("make_plan: u0 is not on the given grid");
    require_finite(u0);
    require_tail_guard(u0);

    PropagatorPlan plan{kernel, grid, {}, 0.0};
    std::vector<double> frequencies(static_cast<std::size_t>(grid.n));
    for (int k = 0; k < grid.n; ++k)
        frequencies[static_cast<std::size_t>(k)] = grid.frequency(k);
    plan.jhat_on_grid.resize(static_cast<std::size_t>(grid.n));
    kernel.fourier(frequencies, plan.jhat_on_grid);

    if (std::abs(plan.jhat_on_grid[0] - 1.0) > 1e-12)
        throw data_error("make_plan: Jhat(0) must equal the unit kernel mass");
    for (double v : plan.jhat_on_grid)
        if (std::abs(v) > 1.0 + 1e-12)
            throw data_error("make_plan: |Jhat| must not exceed 1");

    plan.initial_mass_m = u0.mass();
    return plan;
}

EvolutionSnapshot evolve(const PropagatorPlan& plan, const Field& u0, double t) {
    if (t < 0.0)
        throw argument_error("evolve: t must be nonnegative");
    require_on_grid(plan, u0);

    const SpectralField u0_hat = to_spectral(u0);
    const double decay = std::exp(-t);

    SpectralField u_hat = u0_hat;
    SpectralField v_hat = u0_hat;
    for (int k = 0; k < plan.grid.n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const double g = std::exp(t * (plan.jhat_on_grid[ks] - 1.0));
        u_hat.coeffs[ks] *= g;
        v_hat.coeffs[ks] *= (g - decay);
    }

    EvolutionSnapshot snap;
    snap.t = t;
    snap.u = from_spectral(u_hat);
    snap.v = from_spectral(v_hat);
    snap.rough = decay * u0;
    // Output guard: a solution spread past the boundary bands means the
    // domain was too small for this horizon.
    require_tail_guard(snap.u);
    return snap;
}

Field kernel_kt(const PropagatorPlan& plan, double t) {
    if (!(t > 0.0))
        throw argument_error("kernel_kt: t must be positive");

    const int n = plan.grid.n;
    SpectralField k_hat;
    k_hat.grid = plan.grid;
    k_hat.coeffs.resize(static_cast<std::size_t>(n));
    const double decay = std::exp(-t);
    double peak = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const double value = std::exp(t * (plan.jhat_on_grid[ks] - 1.0)) - decay;
        k_hat.coeffs[ks] = value;
        peak = std::max(peak, std::abs(value));
    }
    const double at_nyquist = std::abs(k_hat.coeffs[static_cast<std::size_t>(n / 2)]);
    if (peak == 0.0 || at_nyquist > 1e-8 * peak)
        throw resolution_error("kernel_kt: K_t spectrum not resolved at this grid's bandwidth");
    return from_spectral(k_hat);
}

Field source_term(const PropagatorPlan& plan, const Field& u0, double t) {
    if (t < 0.0)
        throw argument_error("source_term: t must be nonnegative");
    require_on_grid(plan, u0);

    SpectralField s = to_spectral(u0);
    const double decay = std::exp(-t);
    for (int k = 0; k < plan.grid.n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        s.coeffs[ks] *= decay * plan.jhat_on_grid[ks];
    }
    return from_spectral(s);
}

Field spectral_convolve(const Kernel& kernel, const Field& f, double lambda) {
    if (!(lambda > 0.0))
        throw argument_error("spectral_convolve: lambda must be positive");
    SpectralField s = to_spectral(f);
    for (int k = 0; k < f.grid.n; ++k)
        s.coeffs[static_cast<std::size_t>(k)] *= kernel.fourier(f.grid.frequency(k) / lambda);
    return from_spectral(s);
}

std::vector<double> quadrature_weights(const Kernel& kernel, double dx, double tail_tol) {
    const double r = kernel.truncation_radius(tail_tol);
    const int mr = static_cast<int>(std::ceil(r / dx));
    std::vector<double> w(static_cast<std::size_t>(2 * mr + 1));
    for (int m = -mr; m <= mr; ++m)
        w[static_cast<std::size_t>(m + mr)] = kernel.density(m * dx) * dx;
    return w;
}

Field oracle_evolve(const Kernel& kernel, const Field& u0, double t, double dt) {
    if (t < 0.0)
        throw argument_error("oracle_evolve: t must be nonnegative");
    if (!(dt > 0.0) || dt > 0.1)
        throw argument_error("oracle_evolve: need 0 < dt <= 0.1");
    require_finite(u0);
    if (t == 0.0)
        return u0;

    const int n = u0.grid.n;
    const std::vector<double> w = quadrature_weights(kernel, u0.grid.dx);
    const int mr = (static_cast<int>(w.size()) - 1) / 2;
    if (2 * mr + 1 >= n)
        throw domain_error("oracle_evolve: kernel support exceeds the domain");

    const auto rhs = [&](const std::vector<double>& u) {
        std::vector<double> f = periodic_convolve(u, n, mr, w);
        for (int j = 0; j < n; ++j)
            f[static_cast<std::size_t>(j)] -= u[static_cast<std::size_t>(j)];
        return f;
    };

    const int steps = static_cast<int>(std::ceil(t / dt - 1e-12));
    const double h = t / steps;

    std::vector<double> u = u0.samples;
    std::vector<double> stage(static_cast<std::size_t>(n));
    for (int s = 0; s < steps; ++s) {
        const std::vector<double> k1 = rhs(u);
        for (int j = 0; j < n; ++j)
            stage[static_cast<std::size_t>(j)] =
                u[static_cast<std::size_t>(j)] + 0.5 * h * k1[static_cast<std::size_t>(j)];
        const std::vector<double> k2 = rhs(stage);
        for (int j = 0; j < n; ++j)
            stage[static_cast<std::size_t>(j)] =
                u[static_cast<std::size_t>(j)] + 0.5 * h * k2[static_cast<std::size_t>(j)];
        const std::vector<double> k3 = rhs(stage);
        for (int j = 0; j < n; ++j)
            stage[static_cast<std::size_t>(j)] =
                u[static_cast<std::size_t>(j)] + h * k3[static_cast<std::size_t>(j)];
        const std::vector<double> k4 = rhs(stage);
        for (int j = 0; j < n; ++j) {
            const auto js = static_cast<std::size_t>(j);
            u[js] += h / 6.0 * (k1[js] + 2.0 * (k2[js] + k3[js]) + k4[js]);
        }
    }

    Field out;
    out.grid = u0.grid;
    out.samples = std::move(u);
    return out;
}

} // namespace nld
