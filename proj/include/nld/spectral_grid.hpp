#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nld {

/// Uniform periodic sampling of [-L, L) with n a power of two.
/// Node j sits at x_j = -L + j dx, dx = 2L/n.
struct Grid {
    int n = 0;
    double half_length = 0.0;
    double dx = 0.0;

    static Grid make(int n, double half_length);

    double node(int j) const { return -half_length + j * dx; }
    std::vector<double> nodes() const;
    // Frequency of coefficient k (FFT storage order): xi = pi*k'/L with
    // k' = k for k < n/2 and k - n otherwise.
    double frequency(int k) const;
    double nyquist() const;

    bool operator==(const Grid& other) const {
        return n == other.n && half_length == other.half_length;
    }
};

// Grid sized for a long-time run: L = 10 sqrt(2 A t_max) + support radius,
// n the smallest power of two with dx <= 0.1.
Grid auto_grid(double diffusivity_a, double t_max, double support_radius);

struct Field {
    Grid grid;
    std::vector<double> samples;

    double mass() const; // rectangle-rule integral
};

Field make_field(const Grid& grid, const std::function<double(double)>& f);
Field zero_field(const Grid& grid);

// Throws data_error on non-finite samples.
void require_finite(const Field& f);

// Relative L1 content of the outer 5% bands on each side. A field about to
// be treated as a whole-line function must keep this below the guard.
double tail_band_fraction(const Field& f);
constexpr double kDefaultTailGuard = 1e-10;
void require_tail_guard(const Field& f, double guard = kDefaultTailGuard);

/// Frequency-space companion of a Field: coeffs[k] approximates the
/// continuous transform \int f(x) e^{-i xi_k x} dx (dx-scaled DFT).
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeffs;
};

SpectralField to_spectral(const Field& f);
Field from_spectral(const SpectralField& s);

enum class Lp { one, two, inf };
Lp lp_from_string(const std::string& s);
std::string to_string(Lp p);
// Exponent alpha in the profile scaling t^alpha, alpha = (1/2)(1 - 1/p).
double lp_scaling_exponent(Lp p);

double lp_norm(const Field& f, Lp p);

// Pointwise algebra on a common grid.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);

Field spectral_derivative(const Field& f);

// Band-limited (trigonometric) interpolation; exact at the nodes.
std::vector<double> fourier_interpolate(const Field& f, std::span<const double> points);
double fourier_interpolate_at(const SpectralField& s, double x);

// Two-column text serialization (x, value), one row per node.
void write_field_table(const Field& f, const std::string& path);

} // namespace nld
