#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace fpo {

/// Per-element arithmetic shared by the parallel kernels and their serial
/// reference twins; keeping a single definition is what makes the two lanes
/// bit-identical.
namespace detail {

inline double nonlocal_row_zero_ext(std::span<const double> f, std::span<const double> w,
                                    std::span<const double> diag_tail, int i) {
    const int n = static_cast<int>(f.size());
    const double fi = f[i];
    const int kmax = std::max(i, n - 1 - i);
    double acc = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double fr = (i + k < n) ? f[i + k] : 0.0;
        const double fl = (i - k >= 0) ? f[i - k] : 0.0;
        acc += w[k] * (2.0 * fi - fr - fl);
    }
    return acc + diag_tail[i] * fi;
}

inline double nonlocal_row_periodic(std::span<const double> f, std::span<const double> w,
                                    int i) {
    const int n = static_cast<int>(f.size());
    const double fi = f[i];
    double acc = 0.0;
    for (int k = 1; k < n; ++k) {
        const int j = i + k < n ? i + k : i + k - n;
        acc += w[k] * (fi - f[j]);
    }
    return acc;
}

inline double convolve_at_zero_ext(std::span<const double> f, std::span<const double> wt,
                                   int i) {
    const int n = static_cast<int>(f.size());
    const int c = static_cast<int>(wt.size()) / 2;
    const int m_lo = std::max(-c, -i);
    const int m_hi = std::min(c, n - 1 - i);
    double acc = 0.0;
    for (int m = m_lo; m <= m_hi; ++m) acc += wt[c + m] * f[i + m];
    return acc;
}

inline double convolve_at_periodic(std::span<const double> f, std::span<const double> wt,
                                   int i) {
    const int n = static_cast<int>(f.size());
    const int c = static_cast<int>(wt.size()) / 2;
    double acc = 0.0;
    for (int m = -c; m <= c; ++m) {
        int j = (i + m) % n;
        if (j < 0) j += n;
        acc += wt[c + m] * f[j];
    }
    return acc;
}

inline double div_grad_at(std::span<const double> f, int nx, double hx, double hy,
                          double b, int i, int j) {
    const double yj = j * hy;
    const double yp = (j + 0.5) * hy;
    const double ym = (j - 0.5) * hy;
    const auto v = [&](int ii, int jj) { return f[static_cast<size_t>(jj) * nx + ii]; };
    const double wx = std::pow(yj, b);
    const double dxx = wx * (v(i + 1, j) - 2.0 * v(i, j) + v(i - 1, j)) / (hx * hx);
    const double flux_p = std::pow(yp, b) * (v(i, j + 1) - v(i, j));
    const double flux_m = std::pow(ym, b) * (v(i, j) - v(i, j - 1));
    return dxx + (flux_p - flux_m) / (hy * hy);
}

}  // namespace detail

/// Data-parallel inner loops shared by the operator, extension, and solver
/// modules. Each kernel has an OpenMP version here and a plain serial twin in
/// fpo::ref with identical per-element arithmetic, so the two produce
/// bit-identical output; tests pin that and tools/fpo_bench compares timings.
namespace kernels {

/// Nonlocal second-difference sum with zero extension outside the grid:
///   out_i = sum_{k=1}^{K_i} w[k] * (2 f_i - f_{i+k} - f_{i-k}) + diag_tail[i] * f_i
/// where K_i = max(i, n-1-i) and out-of-range samples are zero.
void nonlocal_apply_zero_ext(std::span<const double> f, std::span<const double> w,
                             std::span<const double> diag_tail, std::span<double> out);

/// Periodic variant: indices wrap, w[k] holds the periodized kernel weight for
/// offset k = 1..n-1, no tail term.
void nonlocal_apply_periodic(std::span<const double> f, std::span<const double> w,
                             std::span<double> out);

/// Discrete convolution with a centered stencil, zero extension:
///   out_i = sum_{m=-c}^{c} wt[c + m] * f_{i+m}
void convolve_zero_ext(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out);

/// Discrete convolution with periodic wraparound.
void convolve_periodic(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out);

/// Conservative discretization of div(y^b grad f) on a half-plane grid with
/// nx columns, ny rows, y_j = j * hy. Interior nodes only; boundary entries of
/// `out` are left untouched.
void weighted_div_grad(std::span<const double> f, int nx, int ny, double hx, double hy,
                       double b, std::span<double> out);

}  // namespace kernels

/// Serial reference implementations (same contracts as fpo::kernels).
namespace ref {

void nonlocal_apply_zero_ext(std::span<const double> f, std::span<const double> w,
                             std::span<const double> diag_tail, std::span<double> out);
void nonlocal_apply_periodic(std::span<const double> f, std::span<const double> w,
                             std::span<double> out);
void convolve_zero_ext(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out);
void convolve_periodic(std::span<const double> f, std::span<const double> wt,
                       std::span<double> out);
void weighted_div_grad(std::span<const double> f, int nx, int ny, double hx, double hy,
                       double b, std::span<double> out);

}  // namespace ref

}  // namespace fpo
