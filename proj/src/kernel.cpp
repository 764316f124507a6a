#include "nld/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "nld/errors.hpp"
#include "nld/fit.hpp"

namespace nld {

namespace {

// sin(x)/x with the removable singularity filled in.
double sinc(double x) {
    if (std::abs(x) < 1e-8)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// 1 - sin(x)/x without cancellation near x = 0.
double one_minus_sinc(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 0.1)
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    return 1.0 - std::sin(x) / x;
}

} // namespace

std::string to_string(KernelForm form) {
    switch (form) {
    case KernelForm::gaussian: return "gaussian";
    case KernelForm::box: return "box";
    case KernelForm::hat: return "hat";
    case KernelForm::sampled: return "sampled";
    }
    return "unknown";
}

Kernel Kernel::gaussian(double sigma) {
    if (!(sigma > 0.0))
        throw argument_error("gaussian kernel: sigma must be positive");
    Kernel k;
    k.form_ = KernelForm::gaussian;
    k.param_ = sigma;
    k.mass_ = 1.0;
    k.second_moment_a_ = 0.5 * sigma * sigma;
    k.fourth_moment_ = 3.0 * sigma * sigma * sigma * sigma;
    return k;
}

Kernel Kernel::box(double half_width) {
    if (!(half_width > 0.0))
        throw argument_error("box kernel: half width must be positive");
    Kernel k;
    k.form_ = KernelForm::box;
    k.param_ = half_width;
    k.mass_ = 1.0;
    k.second_moment_a_ = half_width * half_width / 6.0;
    k.fourth_moment_ = std::pow(half_width, 4) / 5.0;
    return k;
}

Kernel Kernel::hat(double half_width) {
    if (!(half_width > 0.0))
        throw argument_error("hat kernel: half width must be positive");
    Kernel k;
    k.form_ = KernelForm::hat;
    k.param_ = half_width;
    k.mass_ = 1.0;
    k.second_moment_a_ = half_width * half_width / 12.0;
    k.fourth_moment_ = std::pow(half_width, 4) / 15.0;
    return k;
}

Kernel Kernel::sampled(std::span<const double> z, std::span<const double> j) {
    if (z.size() != j.size() || z.size() < 5)
        throw data_error("sampled kernel: need at least 5 matching (z, J) rows");
    const std::size_t m = z.size();
    const double dz = (z.back() - z.front()) / static_cast<double>(m - 1);
    if (!(dz > 0.0))
        throw data_error("sampled kernel: z column must be strictly ascending");
    for (std::size_t i = 1; i < m; ++i) {
        if (std::abs((z[i] - z[i - 1]) - dz) > 1e-9 * dz)
            throw data_error("sampled kernel: z column must be uniformly spaced");
    }
    if (std::abs(z.front() + z.back()) > 1e-9 * z.back())
        throw data_error("sampled kernel: table must cover a symmetric range [-Z, Z]");

    std::vector<double> values(j.begin(), j.end());
    double vmax = 0.0;
    for (double v : values)
        vmax = std::max(vmax, std::abs(v));
    for (double v : values) {
        if (!std::isfinite(v))
            throw data_error("sampled kernel: non-finite J value");
        if (v < -1e-12 * vmax)
            throw data_error("sampled kernel: J must be nonnegative");
    }

    // Symmetrize, clamp quadrature-level negatives, renormalize to unit mass.
    std::vector<double> sym(m);
    for (std::size_t i = 0; i < m; ++i)
        sym[i] = std::max(0.0, 0.5 * (values[i] + values[m - 1 - i]));
    double mass = 0.0;
    for (double v : sym)
        mass += v * dz;
    if (!(mass > 0.0))
        throw data_error("sampled kernel: zero mass");
    for (double& v : sym)
        v /= mass;

    Kernel k;
    k.form_ = KernelForm::sampled;
    k.param_ = 0.0;
    k.mass_ = 1.0;
    k.table_z0_ = z.front();
    k.table_dz_ = dz;
    k.table_values_ = std::move(sym);

    double a2 = 0.0, a4 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double zi = k.table_z0_ + static_cast<double>(i) * dz;
        a2 += k.table_values_[i] * zi * zi * dz;
        a4 += k.table_values_[i] * zi * zi * zi * zi * dz;
    }
    k.second_moment_a_ = 0.5 * a2;
    k.fourth_moment_ = a4;
    if (!(k.second_moment_a_ > 0.0))
        throw data_error("sampled kernel: second moment must be positive");
    return k;
}

Kernel Kernel::sampled_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open kernel table: " + path);
    std::vector<double> z, j;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream row(line);
        double zi, ji;
        if (row >> zi >> ji) {
            z.push_back(zi);
            j.push_back(ji);
        } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            throw parse_error("kernel table " + path + ": bad row at line " +
                              std::to_string(lineno));
        }
    }
    return sampled(z, j);
}

std::string Kernel::id() const {
    if (form_ == KernelForm::sampled)
        return "sampled";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:%g", to_string(form_).c_str(), param_);
    return buf;
}

double Kernel::density(double z) const {
    switch (form_) {
    case KernelForm::gaussian: {
        const double s = param_;
        return std::exp(-z * z / (2.0 * s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
    }
    case KernelForm::box:
        return std::abs(z) <= param_ ? 0.5 / param_ : 0.0;
    case KernelForm::hat: {
        const double t = 1.0 - std::abs(z) / param_;
        return t > 0.0 ? t / param_ : 0.0;
    }
    case KernelForm::sampled: {
        const double pos = (z - table_z0_) / table_dz_;
        if (pos < 0.0 || pos > static_cast<double>(table_values_.size() - 1))
            return 0.0;
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= table_values_.size())
            return table_values_.back();
        const double frac = pos - static_cast<double>(i);
        return (1.0 - frac) * table_values_[i] + frac * table_values_[i + 1];
    }
    }
    return 0.0;
}

double Kernel::fourier(double xi) const {
    switch (form_) {
    case KernelForm::gaussian: {
        const double s = param_;
        return std::exp(-0.5 * s * s * xi * xi);
    }
    case KernelForm::box:
        return sinc(param_ * xi);
    case KernelForm::hat: {
        const double s = sinc(0.5 * param_ * xi);
        return s * s;
    }
    case KernelForm::sampled: {
        if (std::abs(xi) > max_resolvable_xi())
            throw resolution_error("sampled kernel: |xi| beyond the table's resolvable band");
        double sum = 0.0;
        for (std::size_t i = 0; i < table_values_.size(); ++i) {
            const double zi = table_z0_ + static_cast<double>(i) * table_dz_;
            sum += table_values_[i] * std::cos(xi * zi) * table_dz_;
        }
        return sum;
    }
    }
    return 0.0;
}

double Kernel::one_minus_fourier(double xi) const {
    switch (form_) {
    case KernelForm::gaussian: {
        const double s = param_;
        return -std::expm1(-0.5 * s * s * xi * xi);
    }
    case KernelForm::box:
        return one_minus_sinc(param_ * xi);
    case KernelForm::hat: {
        const double y = 0.5 * param_ * xi;
        return one_minus_sinc(y) * (1.0 + sinc(y));
    }
    case KernelForm::sampled: {
        if (std::abs(xi) > max_resolvable_xi())
            throw resolution_error("sampled kernel: |xi| beyond the table's resolvable band");
        // 1 - cos = 2 sin^2(.) keeps precision at small xi; the table has
        // unit discrete mass so this matches 1 - fourier(xi) identically.
        double sum = 0.0;
        for (std::size_t i = 0; i < table_values_.size(); ++i) {
            const double zi = table_z0_ + static_cast<double>(i) * table_dz_;
            const double s = std::sin(0.5 * xi * zi);
            sum += table_values_[i] * 2.0 * s * s * table_dz_;
        }
        return sum;
    }
    }
    return 0.0;
}

void Kernel::fourier(std::span<const double> xi, std::span<double> out) const {
    if (xi.size() != out.size())
        throw argument_error("Kernel::fourier: xi/out size mismatch");
    for (std::size_t i = 0; i < xi.size(); ++i)
        out[i] = fourier(xi[i]);
}

double Kernel::truncation_radius(double tail_tol) const {
    switch (form_) {
    case KernelForm::gaussian: {
        // tail(r) = erfc(r / (sigma sqrt(2))); bisect.
        const double s = param_;
        double lo = 0.0, hi = 60.0 * s;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (std::erfc(mid / (s * std::numbers::sqrt2)) > tail_tol)
                lo = mid;
            else
                hi = mid;
        }
        return hi;
    }
    case KernelForm::box:
    case KernelForm::hat:
        return param_;
    case KernelForm::sampled: {
        const std::size_t m = table_values_.size();
        double tail = 0.0;
        std::size_t left = 0, right = m - 1;
        while (left < right) {
            const double step =
                (table_values_[left] + table_values_[right]) * table_dz_;
            if (tail + step > tail_tol)
                break;
            tail += step;
            ++left;
            --right;
        }
        const double zl = std::abs(table_z0_ + static_cast<double>(left) * table_dz_);
        const double zr = std::abs(table_z0_ + static_cast<double>(right) * table_dz_);
        return std::max(zl, zr);
    }
    }
    return 0.0;
}

double Kernel::max_resolvable_xi() const {
    if (form_ == KernelForm::sampled)
        return std::numbers::pi / table_dz_;
    return std::numeric_limits<double>::infinity();
}

double Kernel::fourier_noise_floor() const {
    if (form_ != KernelForm::sampled)
        return 0.0;
    return 1e-13; // summation rounding of the unit-mass cosine quadrature
}

double second_moment(const Kernel& k) {
    if (k.form() == KernelForm::sampled) {
        // A fat-tailed table silently underestimates the moment; flag it via
        // the z^2-weighted density left at the table edges.
        const double r = k.truncation_radius(0.0); // table edge
        const double edge = (k.density(r) + k.density(-r)) * r * r * k.table_spacing();
        if (edge > 1e-8 * 2.0 * k.second_moment_a())
            throw truncation_error("sampled kernel: table too short for the second moment");
    }
    return k.second_moment_a();
}

AdmissibilityReport check_admissibility(const Kernel& kernel, const FitConfig& cfg) {
    AdmissibilityReport rep;
    rep.kernel_id = kernel.id();
    rep.a_moment = kernel.second_moment_a();

    // hyp1: recover A from the small-xi expansion 1 - Jhat = A xi^2 + O(xi^4).
    // Fitting (1-Jhat)/xi^2 against a constant plus a xi^2 curvature column
    // removes the leading bias of the window.
    {
        const int n = cfg.hyp1_points;
        if (n < 4 || !(cfg.xi_small_lo > 0.0) || !(cfg.xi_small > cfg.xi_small_lo))
            throw argument_error("check_admissibility: bad hyp1 fit window");
        std::vector<double> basis(n), y(n);
        const double ratio = cfg.xi_small / cfg.xi_small_lo;
        double peak = 0.0;
        for (int i = 0; i < n; ++i) {
            const double xi =
                cfg.xi_small_lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
            const double omf = kernel.one_minus_fourier(xi);
            peak = std::max(peak, std::abs(omf));
            basis[i] = xi * xi;
            y[i] = omf / (xi * xi);
        }
        if (peak < 1e-13)
            throw fit_error("check_admissibility: 1 - Jhat below floating noise in hyp1 window");
        rep.a_estimated = fit_affine_in_basis(basis, y).c0;
        rep.passes_hyp1 = std::abs(rep.a_estimated - rep.a_moment) <= cfg.hyp1_tolerance;
    }

    // hyp2: envelope fit of |Jhat| over the upper decade of the resolvable
    // band. Oscillatory transforms (box, hat) pass through zero, so each
    // log-spaced bin contributes its max, which rides the envelope.
    {
        const double xi_hi = std::min(cfg.xi_max, kernel.max_resolvable_xi());
        const double xi_lo = xi_hi / 10.0;
        if (!(xi_lo > cfg.xi_small))
            throw argument_error("check_admissibility: hyp2 window collides with hyp1 window");
        const double floor = std::max(cfg.noise_floor, kernel.fourier_noise_floor());
        std::vector<double> log_xi, log_env;
        int dropped = 0;
        for (int b = 0; b < cfg.hyp2_bins; ++b) {
            const double lo = xi_lo * std::pow(10.0, static_cast<double>(b) / cfg.hyp2_bins);
            const double hi = xi_lo * std::pow(10.0, static_cast<double>(b + 1) / cfg.hyp2_bins);
            double best = -1.0, best_xi = lo;
            for (int s = 0; s < cfg.hyp2_samples_per_bin; ++s) {
                const double xi =
                    lo * std::pow(hi / lo,
                                  static_cast<double>(s) / (cfg.hyp2_samples_per_bin - 1));
                const double v = std::abs(kernel.fourier(xi));
                if (v > best) {
                    best = v;
                    best_xi = xi;
                }
            }
            if (best < floor) {
                ++dropped;
                continue;
            }
            log_xi.push_back(std::log(best_xi));
            log_env.push_back(std::log(best));
        }
        if (dropped > cfg.hyp2_bins / 2 || log_xi.size() < 3) {
            // Super-polynomial decay: everything in the window underflowed.
            rep.decay_exponent_m = std::numeric_limits<double>::infinity();
            rep.m_stderr = 0.0;
            rep.prefactor_c = 0.0;
            rep.passes_hyp2 = true;
        } else {
            const LinearFit f = fit_linear(log_xi, log_env);
            rep.decay_exponent_m = -f.slope;
            rep.m_stderr = f.slope_stderr;
            rep.prefactor_c = std::exp(f.intercept);
            // Strict gate with a confidence floor: a kernel sitting exactly
            // on m = 2 (hat) must not pass on fit noise.
            rep.passes_hyp2 =
                rep.decay_exponent_m > 2.0 + std::max(rep.m_stderr, cfg.m_confidence_floor);
        }
    }
    return rep;
}

} // namespace nld
