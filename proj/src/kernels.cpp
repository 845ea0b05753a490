#include "fpo/kernels.hpp"

namespace fpo {

namespace kernels {

void nonlocal_apply_zero_ext(std::span<const double> f, std::span<const double> w,
                             std::span<const double> diag_tail, std::span<double> out) {
    const int n = static_cast<int>(f.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        out[i] = detail::nonlocal_row_zero_ext(f, w, diag_tail, i);
}

void nonlocal_apply_periodic(std::span<const double> f, std::span<const double> w,
                             std::span<double> out) {
    const int n = static_cast<int>(f.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = detail::nonlocal_row_periodic(f, w, i);
}

void convolve_zero_ext(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out) {
    const int n = static_cast<int>(f.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = detail::convolve_at_zero_ext(f, wt, i);
}

void convolve_periodic(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out) {
    const int n = static_cast<int>(f.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) out[i] = detail::convolve_at_periodic(f, wt, i);
}

void weighted_div_grad(std::span<const double> f, int nx, int ny, double hx, double hy,
                       double b, std::span<double> out) {
#pragma omp parallel for schedule(static)
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i)
            out[static_cast<size_t>(j) * nx + i] = detail::div_grad_at(f, nx, hx, hy, b, i, j);
}

}  // namespace kernels

namespace ref {

void nonlocal_apply_zero_ext(std::span<const double> f, std::span<const double> w,
                             std::span<const double> diag_tail, std::span<double> out) {
    const int n = static_cast<int>(f.size());
    for (int i = 0; i < n; ++i)
        out[i] = detail::nonlocal_row_zero_ext(f, w, diag_tail, i);
}

void nonlocal_apply_periodic(std::span<const double> f, std::span<const double> w,
                             std::span<double> out) {
    const int n = static_cast<int>(f.size());
    for (int i = 0; i < n; ++i) out[i] = detail::nonlocal_row_periodic(f, w, i);
}

void convolve_zero_ext(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out) {
    const int n = static_cast<int>(f.size());
    for (int i = 0; i < n; ++i) out[i] = detail::convolve_at_zero_ext(f, wt, i);
}

void convolve_periodic(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out) {
    const int n = static_cast<int>(f.size());
    for (int i = 0; i < n; ++i) out[i] = detail::convolve_at_periodic(f, wt, i);
}

void weighted_div_grad(std::span<const double> f, int nx, int ny, double hx, double hy,
                       double b, std::span<double> out) {
    for (int j = 1; j < ny - 1; ++j)
        for (int i = 1; i < nx - 1; ++i)
            out[static_cast<size_t>(j) * nx + i] = detail::div_grad_at(f, nx, hx, hy, b, i, j);
}

}  // namespace ref

}  // namespace fpo
