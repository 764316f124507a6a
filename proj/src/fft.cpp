#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "nld/errors.hpp"

namespace nld::detail {

namespace {

// One cached plan pair per transform size. FFTW planning is not thread-safe,
// so creation is serialized; executing on caller-owned buffers via
// fftw_execute_dft is safe concurrently.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

PlanPair plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;

    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    std::vector<fftw_complex> buf(n);
    PlanPair p;
    p.forward = fftw_plan_dft_1d(static_cast<int>(n), buf.data(), buf.data(), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_1d(static_cast<int>(n), buf.data(), buf.data(), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    if (!p.forward || !p.inverse)
        throw error("fftw plan creation failed");
    cache.emplace(n, p);
    return p;
}

void run(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
         bool forward) {
    if (in.size() != out.size())
        throw argument_error("fft: size mismatch");
    const std::size_t n = in.size();
    if (n == 0)
        return;
    const PlanPair plans = plans_for(n);

    std::vector<std::complex<double>> work(in.begin(), in.end());
    auto* data = reinterpret_cast<fftw_complex*>(work.data());
    fftw_execute_dft(forward ? plans.forward : plans.inverse, data, data);

    if (forward) {
        std::copy(work.begin(), work.end(), out.begin());
    } else {
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = work[i] * scale;
    }
}

} // namespace

void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    run(in, out, true);
}

void fft_inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
    run(in, out, false);
}

} // namespace nld::detail
