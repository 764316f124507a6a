#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nld/errors.hpp"
#include "nld/rng.hpp"
#include "nld/spectral_grid.hpp"
#include "nld/test_functions.hpp"

using namespace nld;

namespace {

double heat_kernel(double x, double t) {
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((void)Grid::make(1000, 40.0), argument_error); // not a power of two
    CHECK_THROWS_AS((void)Grid::make(8, 40.0), argument_error);
    CHECK_THROWS_AS((void)Grid::make(64, 0.0), argument_error);

    const Grid g = Grid::make(64, 10.0);
    // dx = 2L/n with n a power of two: the product is exact in binary
    CHECK(g.dx * g.n == 2.0 * g.half_length);
    CHECK(g.node(0) == -10.0);
    CHECK(g.frequency(0) == 0.0);
    CHECK(g.frequency(1) == doctest::Approx(std::numbers::pi / 10.0));
    CHECK(g.frequency(63) == doctest::Approx(-std::numbers::pi / 10.0));
}

TEST_CASE("auto grid encodes the long-time tail budget") {
    const Grid g = auto_grid(0.5, 256.0, 0.5);
    CHECK(g.half_length == doctest::Approx(160.5));
    CHECK(g.n == 4096);
    CHECK(g.dx <= 0.1);
}

TEST_CASE("transform of zero is zero") {
    const Grid g = Grid::make(128, 20.0);
    const SpectralField s = to_spectral(zero_field(g));
    for (const auto& c : s.coeffs)
        CHECK(std::abs(c) == 0.0);
}

TEST_CASE("transform approximates the continuous Fourier integral") {
    const Grid g = Grid::make(1024, 40.0);

    // unit-mass heat kernel: coefficient at xi = 0 reads the mass
    const Field g1 = make_field(g, [](double x) { return heat_kernel(x, 1.0); });
    const SpectralField s1 = to_spectral(g1);
    CHECK(std::abs(s1.coeffs[0].real() - 1.0) <= 1e-10);
    CHECK(std::abs(s1.coeffs[0].imag()) <= 1e-12);

    // gaussian bump against its closed-form transform on |xi| <= 10
    const Field bump = make_field(g, [](double x) { return std::exp(-0.5 * x * x); });
    const SpectralField s2 = to_spectral(bump);
    for (int k = 0; k < g.n; ++k) {
        const double xi = g.frequency(k);
        if (std::abs(xi) > 10.0)
            continue;
        const double exact = std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * xi * xi);
        CHECK(std::abs(s2.coeffs[static_cast<std::size_t>(k)].real() - exact) <= 1e-8);
        CHECK(std::abs(s2.coeffs[static_cast<std::size_t>(k)].imag()) <= 1e-8);
    }
}

TEST_CASE("round trip and Hermitian symmetry") {
    const Grid g = Grid::make(256, 15.0);
    const Field f = make_field(g, [](double x) { return std::exp(-x * x) * (1.0 + 0.3 * x); });
    const SpectralField s = to_spectral(f);

    for (int k = 1; k < g.n / 2; ++k) {
        const auto a = s.coeffs[static_cast<std::size_t>(k)];
        const auto b = s.coeffs[static_cast<std::size_t>(g.n - k)];
        CHECK(std::abs(a - std::conj(b)) <= 1e-12 * (1.0 + std::abs(a)));
    }

    const Field back = from_spectral(s);
    double scale = lp_norm(f, Lp::inf);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(back.samples[static_cast<std::size_t>(j)] -
                       f.samples[static_cast<std::size_t>(j)]) <= 1e-12 * scale);
}

TEST_CASE("Parseval identity") {
    const Grid g = Grid::make(512, 25.0);
    const Field f = make_field(g, [](double x) { return std::exp(-0.3 * x * x) * std::cos(x); });
    const SpectralField s = to_spectral(f);

    const double l2 = lp_norm(f, Lp::two);
    const double dxi = std::numbers::pi / g.half_length;
    double sum = 0.0;
    for (const auto& c : s.coeffs)
        sum += std::norm(c);
    const double via_coeffs = sum * dxi / (2.0 * std::numbers::pi);
    CHECK(std::abs(l2 * l2 - via_coeffs) <= 1e-10 * l2 * l2);
}

TEST_CASE("lp norms") {
    const Grid g = Grid::make(2048, 20.0);
    CHECK(lp_norm(zero_field(g), Lp::one) == 0.0);
    CHECK(lp_norm(zero_field(g), Lp::two) == 0.0);
    CHECK(lp_norm(zero_field(g), Lp::inf) == 0.0);

    // unit box of width 1, height 1 (sampled indicator)
    const Field box = make_field(g, [](double x) { return std::abs(x) <= 0.5 ? 1.0 : 0.0; });
    CHECK(std::abs(lp_norm(box, Lp::one) - 1.0) <= 2.0 * g.dx);
    CHECK(std::abs(lp_norm(box, Lp::two) - 1.0) <= 2.0 * g.dx);
    CHECK(lp_norm(box, Lp::inf) == 1.0);

    const Field g1 = make_field(g, [](double x) { return heat_kernel(x, 1.0); });
    CHECK(lp_norm(g1, Lp::inf) == doctest::Approx(0.2820947917738781).epsilon(1e-12));
}

TEST_CASE("quadrature converges fast under refinement until floating noise") {
    double prev = -1.0;
    for (int n : {32, 64, 128, 256}) {
        const Grid g = Grid::make(n, 40.0);
        const Field f = make_field(g, [](double x) { return heat_kernel(x, 1.0); });
        const double err = std::abs(lp_norm(f, Lp::one) - 1.0);
        if (prev >= 0.0 && prev > 1e-13)
            CHECK(err <= prev / 4.0);
        prev = err;
    }
}

TEST_CASE("spectral derivative") {
    const Grid g = Grid::make(1024, 40.0);

    // resolved harmonic is differentiated exactly
    const double w = std::numbers::pi / g.half_length;
    const Field s = make_field(g, [&](double x) { return std::sin(w * x); });
    const Field ds = spectral_derivative(s);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(ds.samples[static_cast<std::size_t>(j)] -
                       w * std::cos(w * g.node(j))) <= 1e-10);

    // closed-form derivative oracle for a gaussian
    const Field f = make_field(g, [](double x) { return std::exp(-x * x); });
    const Field df = spectral_derivative(f);
    double worst = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double x = g.node(j);
        worst = std::max(worst, std::abs(df.samples[static_cast<std::size_t>(j)] +
                                         2.0 * x * std::exp(-x * x)));
    }
    CHECK(worst <= 1e-8);

    // flat plateau: derivative vanishes in the interior
    const Field flat = make_field(g, [](double x) { return smooth_plateau(x, 5.0, 15.0); });
    const Field dflat = spectral_derivative(flat);
    CHECK(std::abs(dflat.samples[static_cast<std::size_t>(g.n / 2)]) <= 1e-10);
}

TEST_CASE("trigonometric interpolation") {
    const Grid g = Grid::make(512, 30.0);

    // exact at the nodes
    const Field f = make_field(g, [](double x) { return std::exp(-0.2 * x * x) * (x + 0.7); });
    const std::vector<double> nodes = g.nodes();
    const std::vector<double> at_nodes = fourier_interpolate(f, nodes);
    const double scale = lp_norm(f, Lp::inf);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(at_nodes[static_cast<std::size_t>(j)] -
                       f.samples[static_cast<std::size_t>(j)]) <= 1e-12 * scale);

    // resolved harmonic at half-node offsets
    const double w = 2.0 * std::numbers::pi / g.half_length;
    const Field c = make_field(g, [&](double x) { return std::cos(w * x); });
    std::vector<double> offs;
    for (int j = 40; j < 470; j += 7)
        offs.push_back(g.node(j) + 0.5 * g.dx);
    const std::vector<double> vals = fourier_interpolate(c, offs);
    for (std::size_t i = 0; i < offs.size(); ++i)
        CHECK(std::abs(vals[i] - std::cos(w * offs[i])) <= 1e-10);

    // heat kernel at seeded random points against the closed form
    const Grid g2 = Grid::make(1024, 40.0);
    const Field g4 = make_field(g2, [](double x) { return heat_kernel(x, 4.0); });
    Rng rng(20240817);
    std::vector<double> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back(rng.uniform(-35.0, 35.0));
    const std::vector<double> interp = fourier_interpolate(g4, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(std::abs(interp[i] - heat_kernel(pts[i], 4.0)) <= 1e-8);

    CHECK_THROWS_AS((void)fourier_interpolate(f, std::vector<double>{31.0}), range_error);
}

TEST_CASE("tail guard trips on fields leaking into the boundary bands") {
    const Grid g = Grid::make(256, 10.0);
    const Field shifted = make_field(g, [](double x) { return std::exp(-(x - 9.5) * (x - 9.5)); });
    CHECK(tail_band_fraction(shifted) > 1e-10);
    CHECK_THROWS_AS((void)to_spectral(shifted), domain_error);

    const Field centered = make_field(g, [](double x) { return std::exp(-x * x); });
    CHECK_NOTHROW((void)to_spectral(centered));
}

TEST_CASE("non-finite samples are a data error") {
    const Grid g = Grid::make(64, 10.0);
    Field f = zero_field(g);
    f.samples[10] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)lp_norm(f, Lp::one), data_error);
    CHECK_THROWS_AS((void)to_spectral(f), data_error);
}
