// Timing comparison of the OpenMP kernels against their serial reference
// twins, on the sizes the solver and extension modules actually use.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "fpo/kernels.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    const int n = 4096;
    std::vector<double> f(n), w(n), tail(n), out(n);
    for (int i = 0; i < n; ++i) {
        f[i] = uni(rng);
        w[i] = 1.0 / (1.0 + i * i * std::sqrt(1.0 + i));
        tail[i] = 0.1 * uni(rng);
    }

    report("nonlocal zero-extension",
           time_ms([&] { fpo::ref::nonlocal_apply_zero_ext(f, w, tail, out); }, 5),
           time_ms([&] { fpo::kernels::nonlocal_apply_zero_ext(f, w, tail, out); }, 5));
    report("nonlocal periodic",
           time_ms([&] { fpo::ref::nonlocal_apply_periodic(f, w, out); }, 5),
           time_ms([&] { fpo::kernels::nonlocal_apply_periodic(f, w, out); }, 5));

    std::vector<double> wt(2 * 1024 + 1);
    for (size_t k = 0; k < wt.size(); ++k) wt[k] = uni(rng);
    report("convolution zero-extension",
           time_ms([&] { fpo::ref::convolve_zero_ext(f, wt, out); }, 10),
           time_ms([&] { fpo::kernels::convolve_zero_ext(f, wt, out); }, 10));
    report("convolution periodic",
           time_ms([&] { fpo::ref::convolve_periodic(f, wt, out); }, 10),
           time_ms([&] { fpo::kernels::convolve_periodic(f, wt, out); }, 10));

    const int nx = 512, ny = 512;
    std::vector<double> g(static_cast<size_t>(nx) * ny), res(g.size());
    for (auto& v : g) v = uni(rng);
    report("weighted div-grad 512x512",
           time_ms([&] { fpo::ref::weighted_div_grad(g, nx, ny, 1e-2, 1e-2, -0.5, res); }, 5),
           time_ms([&] { fpo::kernels::weighted_div_grad(g, nx, ny, 1e-2, 1e-2, -0.5, res); },
                   5));
    return 0;
}
