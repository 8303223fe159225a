#include "multiform/dft_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace multiform {

namespace {
std::mutex plan_mutex;
std::map<std::size_t, fftw_plan> plans;

fftw_plan plan_for(std::size_t n, fftw_complex* in, fftw_complex* out) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    // FFTW_ESTIMATE leaves the arrays untouched; the plan is reused with
    // new-array execute, so keep alignment uniform via fftw_malloc.
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    plans.emplace(n, p);
    return p;
}
}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0) return;
    fftw_complex* buf = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i][0] = data[i].real();
        buf[i][1] = data[i].imag();
    }
    fftw_plan p = plan_for(n, buf, out);
    fftw_execute_dft(p, buf, out);
    for (std::size_t i = 0; i < n; ++i) data[i] = {out[i][0], out[i][1]};
    fftw_free(buf);
    fftw_free(out);
}

std::vector<std::complex<double>> measure_symbol_grid(const SignedMeasure& rho, std::int64_t n) {
    if (n < 2 * rho.half_width() + 1)
        throw std::invalid_argument("measure_symbol_grid: grid shorter than the window");
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n), 0.0);
    rho.for_each([&](std::int64_t x, double v) {
        std::int64_t pos = ((x % n) + n) % n;
        buf[static_cast<std::size_t>(pos)] += v;
    });
    fft_forward(buf);
    return buf;
}

std::complex<double> measure_symbol_at(const SignedMeasure& rho, double xi) {
    std::complex<double> acc = 0.0;
    rho.for_each([&](std::int64_t x, double v) {
        acc += v * std::polar(1.0, -xi * static_cast<double>(x));
    });
    return acc;
}

double measure_symbol_grid_max(const SignedMeasure& rho, std::int64_t n) {
    auto sym = measure_symbol_grid(rho, n);
    double m = 0;
    for (const auto& z : sym) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace multiform
