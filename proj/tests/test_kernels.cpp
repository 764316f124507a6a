#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "nld/errors.hpp"
#include "nld/kernel.hpp"
#include "nld/quadrature.hpp"

using namespace nld;

namespace {

// Dense gaussian table for the sampled-kernel path.
void gaussian_table(double z_max, double dz, std::vector<double>& z, std::vector<double>& j) {
    z.clear();
    j.clear();
    const int m = static_cast<int>(std::round(2.0 * z_max / dz));
    for (int i = 0; i <= m; ++i) {
        const double zi = -z_max + i * dz;
        z.push_back(zi);
        j.push_back(std::exp(-0.5 * zi * zi) / std::sqrt(2.0 * M_PI));
    }
}

} // namespace

TEST_CASE("closed-form transforms at xi = 0 and evenness") {
    const std::vector<Kernel> kernels = {Kernel::gaussian(1.0), Kernel::box(1.0),
                                         Kernel::hat(1.0), Kernel::gaussian(0.37),
                                         Kernel::hat(2.5)};
    for (const auto& k : kernels) {
        CHECK(std::abs(k.fourier(0.0) - 1.0) <= 1e-12);
        for (double xi : {0.1, 0.7, 3.0, 11.0}) {
            CHECK(std::abs(k.fourier(xi) - k.fourier(-xi)) <= 1e-12);
            CHECK(std::abs(k.fourier(xi)) <= 1.0);
            // the two evaluation routes agree away from the cancellation zone
            CHECK(k.one_minus_fourier(xi) ==
                  doctest::Approx(1.0 - k.fourier(xi)).epsilon(1e-12));
        }
    }
}

TEST_CASE("box transform is sin(xi)/xi") {
    const Kernel k = Kernel::box(1.0);
    for (double xi : {0.3, 1.0, 2.0, 7.5})
        CHECK(k.fourier(xi) == doctest::Approx(std::sin(xi) / xi).epsilon(1e-14));
}

TEST_CASE("gaussian transform value at xi = 1") {
    CHECK(Kernel::gaussian(1.0).fourier(1.0) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));
}

TEST_CASE("second moments of the analytic families") {
    CHECK(second_moment(Kernel::box(1.0)) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(second_moment(Kernel::gaussian(1.0)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(second_moment(Kernel::hat(1.0)) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("gaussian Jhat strictly decreasing on xi > 0") {
    const Kernel k = Kernel::gaussian(1.0);
    double prev = k.fourier(1e-3);
    for (int i = 1; i <= 100; ++i) {
        const double xi = 1e-3 + 0.2 * i;
        const double cur = k.fourier(xi);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("admissibility: gaussian passes both hypotheses") {
    const AdmissibilityReport rep = check_admissibility(Kernel::gaussian(1.0));
    CHECK(rep.passes_hyp1);
    CHECK(std::abs(rep.a_estimated - 0.5) <= 1e-6);
    CHECK(rep.passes_hyp2);
    CHECK(std::isinf(rep.decay_exponent_m)); // super-polynomial sentinel
}

TEST_CASE("admissibility: box decays like 1/|xi| and fails hyp2") {
    const AdmissibilityReport rep = check_admissibility(Kernel::box(1.0));
    CHECK(rep.passes_hyp1);
    CHECK_FALSE(rep.passes_hyp2);
    CHECK(rep.decay_exponent_m > 0.8);
    CHECK(rep.decay_exponent_m < 1.2);
}

TEST_CASE("admissibility: hat sits at the m = 2 boundary and fails the strict gate") {
    const AdmissibilityReport rep = check_admissibility(Kernel::hat(1.0));
    CHECK_FALSE(rep.passes_hyp2);
    CHECK(rep.decay_exponent_m > 1.8);
    CHECK(rep.decay_exponent_m < 2.2);
}

TEST_CASE("moment/fit agreement for gaussian and hat") {
    for (const auto& k : {Kernel::gaussian(1.0), Kernel::hat(1.0)}) {
        const AdmissibilityReport rep = check_admissibility(k);
        CHECK(std::abs(rep.a_estimated - second_moment(k)) <= 1e-6);
    }
}

TEST_CASE("admissibility: signal below floating noise is a fit error") {
    CHECK_THROWS_AS((void)check_admissibility(Kernel::gaussian(1e-8)), fit_error);
}

TEST_CASE("sampled kernel: load, symmetrize, renormalize") {
    std::vector<double> z, j;
    gaussian_table(10.0, 0.005, z, j);
    // smooth odd perturbation; the loader must symmetrize it away
    for (std::size_t i = 0; i < j.size(); ++i)
        j[i] *= 1.0 + 0.01 * std::tanh(z[i]);
    const Kernel k = Kernel::sampled(z, j);

    CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {0.3, 1.1, 2.7})
        CHECK(k.density(x) == doctest::Approx(k.density(-x)).epsilon(1e-12));
    CHECK(second_moment(k) == doctest::Approx(0.5).epsilon(1e-4));
    for (double xi : {0.5, 2.0, 5.0})
        CHECK(k.fourier(xi) == doctest::Approx(std::exp(-0.5 * xi * xi)).epsilon(1e-4));

    CHECK_THROWS_AS((void)k.fourier(2.0 * k.max_resolvable_xi()), resolution_error);

    const AdmissibilityReport rep = check_admissibility(k);
    CHECK(rep.passes_hyp1);
    CHECK(rep.passes_hyp2); // table Nyquist band is deep in the underflow zone
}

TEST_CASE("sampled kernel: truncated table flags the second moment") {
    std::vector<double> z, j;
    gaussian_table(4.0, 0.01, z, j); // tails cut far too early
    const Kernel k = Kernel::sampled(z, j);
    CHECK_THROWS_AS((void)second_moment(k), truncation_error);
}

TEST_CASE("sampled kernel: rejects malformed tables") {
    std::vector<double> z = {-2.0, -1.0, 0.0, 1.0, 2.0};
    std::vector<double> j = {0.1, 0.2, 0.4, 0.2, 0.1};

    std::vector<double> z_bad = z;
    z_bad[2] = 0.3; // non-uniform
    CHECK_THROWS_AS((void)Kernel::sampled(z_bad, j), data_error);

    std::vector<double> z_shift = {-1.0, 0.0, 1.0, 2.0, 3.0}; // asymmetric range
    CHECK_THROWS_AS((void)Kernel::sampled(z_shift, j), data_error);

    std::vector<double> j_neg = j;
    j_neg[1] = -0.2;
    CHECK_THROWS_AS((void)Kernel::sampled(z, j_neg), data_error);
}

TEST_CASE("sampled kernel: file loading") {
    const std::string path = "/tmp/nld_kernel_table.txt";
    {
        std::ofstream out(path);
        out << "# z  J(z)\n";
        std::vector<double> z, j;
        gaussian_table(10.0, 0.01, z, j);
        for (std::size_t i = 0; i < z.size(); ++i)
            out << z[i] << " " << j[i] << "\n";
    }
    const Kernel k = Kernel::sampled_from_file(path);
    CHECK(second_moment(k) == doctest::Approx(0.5).epsilon(1e-4));

    {
        std::ofstream out(path);
        out << "0.0 1.0\nnot a row\n";
    }
    CHECK_THROWS_AS((void)Kernel::sampled_from_file(path), parse_error);
    CHECK_THROWS_AS((void)Kernel::sampled_from_file("/nonexistent/table"), io_error);
}

TEST_CASE("truncation radius matches the closed-form tails") {
    const Kernel g = Kernel::gaussian(1.0);
    const double r = g.truncation_radius(1e-12);
    CHECK(std::erfc(r / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::erfc((r - 0.01) / std::sqrt(2.0)) > 1e-12);

    CHECK(Kernel::box(1.0).truncation_radius() == doctest::Approx(1.0));
    CHECK(Kernel::hat(2.0).truncation_radius() == doctest::Approx(2.0));
}

TEST_CASE("gauss-laguerre rule integrates e^{-t} t^k exactly") {
    const QuadratureRule rule = gauss_laguerre(40);
    double factorial = 1.0;
    for (int k = 0; k <= 8; ++k) {
        if (k > 0)
            factorial *= k;
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * std::pow(rule.nodes[i], k);
        CHECK(sum == doctest::Approx(factorial).epsilon(1e-10));
    }
}

TEST_CASE("invalid kernel parameters are rejected") {
    CHECK_THROWS_AS((void)Kernel::gaussian(0.0), argument_error);
    CHECK_THROWS_AS((void)Kernel::box(-1.0), argument_error);
    CHECK_THROWS_AS((void)Kernel::hat(0.0), argument_error);
}
