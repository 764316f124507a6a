#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nld {

enum class KernelForm { gaussian, box, hat, sampled };

std::string to_string(KernelForm form);

/// Convolution kernel J: even, nonnegative, unit mass. Analytic families
/// carry closed-form transforms and moments; sampled kernels are read from a
/// two-column table, symmetrized and renormalized to unit mass on load.
class Kernel {
  public:
    static Kernel gaussian(double sigma);
    static Kernel box(double half_width);
    static Kernel hat(double half_width);
    // table: strictly ascending, uniformly spaced z with J(z) >= 0.
    static Kernel sampled(std::span<const double> z, std::span<const double> j);
    static Kernel sampled_from_file(const std::string& path);

    KernelForm form() const { return form_; }
    double parameter() const { return param_; }
    // Identifier like "gaussian:1", used in CSV reports.
    std::string id() const;

    double mass() const { return mass_; }
    // A = (1/2) \int z^2 J(z) dz, the effective diffusivity.
    double second_moment_a() const { return second_moment_a_; }
    // \int z^4 J(z) dz; drives the rate of the nonlocal->local operator limit.
    std::optional<double> fourth_moment() const { return fourth_moment_; }

    // J(z) pointwise (table lookup with linear interpolation for sampled).
    double density(double z) const;

    // Jhat(xi) = \int J(z) e^{-i xi z} dz; real and even because J is.
    double fourier(double xi) const;
    // 1 - Jhat(xi), evaluated without cancellation for small xi.
    double one_minus_fourier(double xi) const;
    void fourier(std::span<const double> xi, std::span<double> out) const;

    // Smallest r with \int_{|z|>r} J < tail_tol (closed form tail for the
    // analytic families, cumulative scan for sampled).
    double truncation_radius(double tail_tol = 1e-12) const;

    // Largest |xi| at which fourier() is trustworthy. Unbounded for analytic
    // families; pi/dz for a sampled table.
    double max_resolvable_xi() const;

    // Table spacing dz (sampled form only; 0 otherwise).
    double table_spacing() const { return table_dz_; }

    // Absolute noise level of fourier(): zero for closed forms, the
    // rectangle-rule rounding floor for sampled tables.
    double fourier_noise_floor() const;

  private:
    Kernel() = default;

    KernelForm form_ = KernelForm::gaussian;
    double param_ = 1.0;
    double mass_ = 1.0;
    double second_moment_a_ = 0.0;
    std::optional<double> fourth_moment_;

    // sampled form only: uniform table on [-z_max, z_max]
    double table_z0_ = 0.0;
    double table_dz_ = 0.0;
    std::vector<double> table_values_;
};

double second_moment(const Kernel& k);

struct FitConfig {
    // hyp1 window: log-spaced xi in [xi_small_lo, xi_small], constant +
    // curvature least squares on (1 - Jhat)/xi^2.
    double xi_small_lo = 1e-4;
    double xi_small = 1e-2;
    int hyp1_points = 64;

    // hyp2 window: the upper decade of the resolvable band, envelope fit of
    // |Jhat| on log-log axes.
    double xi_max = 1e3;
    int hyp2_bins = 16;
    int hyp2_samples_per_bin = 256;

    // |Jhat| below this is floating noise; if the whole window sits under it
    // the decay is reported as super-polynomial (m = +inf).
    double noise_floor = 1e-280;

    // The strict m > 2 gate uses max(fit stderr, this floor) as its
    // confidence margin.
    double m_confidence_floor = 0.01;

    double hyp1_tolerance = 1e-6;
};

struct AdmissibilityReport {
    std::string kernel_id;
    double a_estimated = 0.0;
    double a_moment = 0.0;
    // Fitted decay exponent of |Jhat| ~ C |xi|^{-m}; +inf when the envelope
    // is below the noise floor across the whole fit window.
    double decay_exponent_m = 0.0;
    double m_stderr = 0.0;
    // Informational prefactor C from the envelope fit intercept.
    double prefactor_c = 0.0;
    bool passes_hyp1 = false;
    bool passes_hyp2 = false;
};

AdmissibilityReport check_admissibility(const Kernel& kernel, const FitConfig& cfg = {});

} // namespace nld
