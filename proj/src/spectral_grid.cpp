#include "nld/spectral_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "fft.hpp"
#include "nld/errors.hpp"

namespace nld {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid == b.grid))
        throw argument_error("fields live on different grids");
}

} // namespace

Grid Grid::make(int n, double half_length) {
    if (n < 16 || !is_power_of_two(n))
        throw argument_error("Grid: n must be a power of two >= 16");
    if (!(half_length > 0.0))
        throw argument_error("Grid: half length must be positive");
    Grid g;
    g.n = n;
    g.half_length = half_length;
    g.dx = 2.0 * half_length / n;
    return g;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        x[static_cast<std::size_t>(j)] = node(j);
    return x;
}

double Grid::frequency(int k) const {
    const int ks = k < n / 2 ? k : k - n;
    return std::numbers::pi * ks / half_length;
}

double Grid::nyquist() const { return std::numbers::pi * (n / 2) / half_length; }

Grid auto_grid(double diffusivity_a, double t_max, double support_radius) {
    if (!(diffusivity_a > 0.0) || !(t_max > 0.0) || support_radius < 0.0)
        throw argument_error("auto_grid: need positive diffusivity and horizon");
    const double half_length = 10.0 * std::sqrt(2.0 * diffusivity_a * t_max) + support_radius;
    int n = 16;
    while (2.0 * half_length / n > 0.1)
        n *= 2;
    return Grid::make(n, half_length);
}

double Field::mass() const {
    double sum = 0.0;
    for (double v : samples)
        sum += v;
    return sum * grid.dx;
}

Field make_field(const Grid& grid, const std::function<double(double)>& f) {
    Field out;
    out.grid = grid;
    out.samples.resize(static_cast<std::size_t>(grid.n));
    for (int j = 0; j < grid.n; ++j)
        out.samples[static_cast<std::size_t>(j)] = f(grid.node(j));
    return out;
}

Field zero_field(const Grid& grid) {
    Field out;
    out.grid = grid;
    out.samples.assign(static_cast<std::size_t>(grid.n), 0.0);
    return out;
}

void require_finite(const Field& f) {
    for (double v : f.samples)
        if (!std::isfinite(v))
            throw data_error("field contains non-finite samples");
}

double tail_band_fraction(const Field& f) {
    const int n = f.grid.n;
    const int band = std::max(1, (n + 19) / 20); // ceil(0.05 n) per side
    double tail = 0.0, total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(f.samples[static_cast<std::size_t>(j)]);
        total += a;
        if (j < band || j >= n - band)
            tail += a;
    }
    if (total == 0.0)
        return 0.0;
    return tail / total;
}

void require_tail_guard(const Field& f, double guard) {
    if (tail_band_fraction(f) > guard)
        throw domain_error("boundary bands carry more than the allowed relative mass "
                           "(domain too small, or the kernel/datum pair leaves "
                           "unresolved high-frequency content)");
}

namespace {

// Transform without the whole-line tail guard, for the purely periodic
// operations (differentiation, trigonometric interpolation) whose contract
// holds for full-domain harmonics too.
SpectralField transform_periodic(const Field& f) {
    require_finite(f);

    const int n = f.grid.n;
    std::vector<std::complex<double>> in(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        in[static_cast<std::size_t>(j)] = f.samples[static_cast<std::size_t>(j)];

    SpectralField s;
    s.grid = f.grid;
    s.coeffs.resize(static_cast<std::size_t>(n));
    detail::fft_forward(in, s.coeffs);

    // Nodes start at -L, not 0: the (-1)^k twist together with the dx scale
    // turns the raw DFT into a continuous-transform approximant.
    for (int k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s.coeffs[static_cast<std::size_t>(k)] *= sign * f.grid.dx;
    }
    return s;
}

} // namespace

SpectralField to_spectral(const Field& f) {
    // Whole-line semantics: the coefficients are only meaningful when the
    // field has decayed inside the truncated domain.
    require_tail_guard(f);
    return transform_periodic(f);
}

Field from_spectral(const SpectralField& s) {
    const int n = s.grid.n;
    if (static_cast<int>(s.coeffs.size()) != n)
        throw argument_error("from_spectral: coefficient count does not match grid");

    std::vector<std::complex<double>> in(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        in[static_cast<std::size_t>(k)] = s.coeffs[static_cast<std::size_t>(k)] * sign;
    }
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
    detail::fft_inverse(in, out);

    Field f;
    f.grid = s.grid;
    f.samples.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        f.samples[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j)].real() / s.grid.dx;
    return f;
}

Lp lp_from_string(const std::string& s) {
    if (s == "1")
        return Lp::one;
    if (s == "2")
        return Lp::two;
    if (s == "inf")
        return Lp::inf;
    throw parse_error("unknown L^p selector: " + s);
}

std::string to_string(Lp p) {
    switch (p) {
    case Lp::one: return "1";
    case Lp::two: return "2";
    case Lp::inf: return "inf";
    }
    return "?";
}

double lp_scaling_exponent(Lp p) {
    switch (p) {
    case Lp::one: return 0.0;
    case Lp::two: return 0.25;
    case Lp::inf: return 0.5;
    }
    return 0.0;
}

double lp_norm(const Field& f, Lp p) {
    require_finite(f);
    switch (p) {
    case Lp::one: {
        double sum = 0.0;
        for (double v : f.samples)
            sum += std::abs(v);
        return sum * f.grid.dx;
    }
    case Lp::two: {
        double sum = 0.0;
        for (double v : f.samples)
            sum += v * v;
        return std::sqrt(sum * f.grid.dx);
    }
    case Lp::inf: {
        double best = 0.0;
        for (double v : f.samples)
            best = std::max(best, std::abs(v));
        return best;
    }
    }
    return 0.0;
}

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field out = a;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] += b.samples[i];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field out = a;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] -= b.samples[i];
    return out;
}

Field operator*(double c, const Field& a) {
    Field out = a;
    for (double& v : out.samples)
        v *= c;
    return out;
}

Field spectral_derivative(const Field& f) {
    SpectralField s = transform_periodic(f);
    const int n = s.grid.n;
    for (int k = 0; k < n; ++k) {
        if (k == n / 2) {
            // The lone Nyquist mode has no Hermitian partner; an odd
            // derivative must drop it to stay real.
            s.coeffs[static_cast<std::size_t>(k)] = 0.0;
            continue;
        }
        const double xi = s.grid.frequency(k);
        s.coeffs[static_cast<std::size_t>(k)] *= std::complex<double>(0.0, xi);
    }
    return from_spectral(s);
}

double fourier_interpolate_at(const SpectralField& s, double x) {
    const int n = s.grid.n;
    const double L = s.grid.half_length;
    double sum = s.coeffs[0].real();
    for (int k = 1; k < n / 2; ++k) {
        const double xi = s.grid.frequency(k);
        const auto c = s.coeffs[static_cast<std::size_t>(k)];
        sum += 2.0 * (c.real() * std::cos(xi * x) - c.imag() * std::sin(xi * x));
    }
    // Split Nyquist mode symmetrically so the interpolant is real.
    sum += s.coeffs[static_cast<std::size_t>(n / 2)].real() * std::cos(s.grid.nyquist() * x);
    return sum / (2.0 * L);
}

void write_field_table(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open for writing: " + path);
    char buf[96];
    for (int j = 0; j < f.grid.n; ++j) {
        std::snprintf(buf, sizeof buf, "%.16e %.16e\n", f.grid.node(j),
                      f.samples[static_cast<std::size_t>(j)]);
        out << buf;
    }
    if (!out)
        throw io_error("short write: " + path);
}

std::vector<double> fourier_interpolate(const Field& f, std::span<const double> points) {
    for (double x : points)
        if (!(x >= -f.grid.half_length && x <= f.grid.half_length))
            throw range_error("fourier_interpolate: point outside the domain");

    const SpectralField s = transform_periodic(f);
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out[i] = fourier_interpolate_at(s, points[i]);
    return out;
}

} // namespace nld
