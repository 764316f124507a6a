#pragma once

#include <functional>
#include <vector>

#include "nld/kernel.hpp"
#include "nld/semigroup.hpp"
#include "nld/spectral_grid.hpp"

namespace nld {

/// Gaussian target profile m * G_{a t}, G_t(x) = exp(-x^2/(4t)) / sqrt(4 pi t).
struct HeatProfile {
    double m = 1.0;
    double a = 1.0;
    double t = 1.0;

    double peak_value() const;
    double value(double x) const;
};

Field heat_profile(double m, double a, double t, const Grid& grid);

// Parabolic rescaling v_lambda(x, t) = lambda v(lambda x, lambda^2 t),
// sampled on `target` by band-limited interpolation of the source field.
Field rescale(const std::function<Field(double)>& v_at, double lambda, double t,
              const Grid& target);

struct DecayRow {
    double t = 0.0;
    double raw_u = 0.0;    // ||u(t) - M G_{At}||_p
    double scaled_u = 0.0; // t^{(1/2)(1-1/p)} * raw_u
    double raw_v = 0.0;
    double scaled_v = 0.0;
    double norm_v = 0.0;  // ||v(t)||_p
    double norm_vx = 0.0; // ||v_x(t)||_p
};

struct DecayReport {
    Lp p = Lp::one;
    std::vector<DecayRow> rows;
    double fitted_rate = 0.0;      // log-log slope of raw_u, upper half of the sweep
    double lemma1_constant = 0.0;  // sup_t t^alpha ||v||_p / ||u0||_1
    double lemma2_constant = 0.0;  // sup_t t^{alpha+1/2} ||v_x||_p / ||u0||_1
};

DecayReport decay_sweep(const PropagatorPlan& plan, const Field& u0, Lp p,
                        const std::vector<double>& times);

struct PairCheck {
    double lhs = 0.0;
    double rhs = 0.0;
};

// Both sides of the discrete symmetrization identity
//   sum J(x-y)(phi(y)-phi(x)) psi(x) = -1/2 sum J(x-y)(phi(y)-phi(x))(psi(y)-psi(x));
// equal up to rounding by index relabeling.
PairCheck verify_symmetrization(const Kernel& kernel, const Field& phi, const Field& psi);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// Nonlocal Dirichlet form vs the H^1 seminorm:
//   lambda^2 \iint J_lambda(x-y) (u(y)-u(x))^2 <= (\int J z^2) \int u_x^2,
// with \int J z^2 evaluated under the same truncated quadrature as the
// double sum so the discrete comparison is exact for every kernel.
InequalityCheck verify_dirichlet_bound(const Kernel& kernel, const Field& u, double lambda,
                                       double slack = 1e-8);

// Sup-norm bound on the rescaled generator:
//   || lambda^2 (J_lambda * psi - psi) ||_inf <= (1/2)(\int J z^2) ||psi_xx||_inf.
InequalityCheck verify_laplacian_bound(const Kernel& kernel, const Field& psi, double lambda,
                                       double slack = 1e-6);

// lambda^2 (J_lambda * phi - phi), the rescaled generator applied to phi;
// converges to A phi_xx as lambda grows.
Field nonlocal_to_local(const Kernel& kernel, const Field& phi, double lambda);
double operator_limit_error(const Kernel& kernel, const Field& phi, double lambda);

using SpaceTimeFn = std::function<double(double x, double t)>;

struct DeltaSourceRow {
    double lambda = 0.0;
    double integral = 0.0; // I(lambda)
    double gap = 0.0;      // |I(lambda) - M phi(0,0)|
};

// Concentration of the rescaled source term toward M delta_0, tested against
// a space-time function phi: I(lambda) -> M phi(0, 0) at rate C(phi)/lambda.
std::vector<DeltaSourceRow> verify_delta_source(const Kernel& kernel, const Field& u0,
                                                const SpaceTimeFn& phi,
                                                const std::vector<double>& lambdas,
                                                std::size_t laguerre_nodes = 40);

// L1 content outside the centered window of radius r.
double tail_mass(const Field& v, double r);

struct TailRow {
    double t = 0.0;
    double radius = 0.0;      // R
    double tail_at_2r = 0.0;  // \int_{|x|>2R} |v(t)|
    double base = 0.0;        // \int_{|x|>R} (J*u0)
    double excess = 0.0;      // tail_at_2r - base
    double ratio_full = 0.0;  // excess_+ / (t/R^2 + sqrt(t)/R)
    double ratio_parabolic = 0.0; // excess_+ / (t/R^2)
};

struct TailReport {
    std::vector<TailRow> rows;
    double measured_c_full = 0.0;
    double measured_c_parabolic = 0.0;
};

TailReport verify_tail_bound(const PropagatorPlan& plan, const Field& u0,
                             const std::vector<double>& times, const std::vector<double>& radii);

} // namespace nld
