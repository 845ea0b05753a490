#include "fpo/extension.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fpo/kernels.hpp"
#include "fpo/numerics.hpp"

namespace fpo {

PoissonKernel::PoissonKernel(FracParams p, int n, double h, FarField mode)
    : n_(n), h_(h), s_(p.s), mode_(mode) {
    if (n < 16) throw std::invalid_argument("PoissonKernel: n must be >= 16");
    if (!(h > 0)) throw std::invalid_argument("PoissonKernel: h must be positive");
    // Unit mass fixes the constant: C = 1 / int_R (1 + u^2)^{-(1+2s)/2} du.
    // Finite part by adaptive Simpson, far tail by the asymptotic expansion
    // of (1 + u^2)^{-(1+2s)/2} ~ u^{-1-2s} (1 - (1+2s)/(2u^2) + ...).
    const double s = s_;
    const double U = 100.0;
    const double body = num::adaptive_simpson(
        [s](double u) { return std::pow(1.0 + u * u, -(1.0 + 2.0 * s) / 2.0); }, 0.0, U,
        1e-13);
    const double twos = 2.0 * s;
    const double tail = std::pow(U, -twos) / twos -
                        (1.0 + twos) / 2.0 * std::pow(U, -twos - 2.0) / (twos + 2.0) +
                        (1.0 + twos) * (3.0 + twos) / 8.0 * std::pow(U, -twos - 4.0) /
                            (twos + 4.0);
    c_mass_ = 1.0 / (2.0 * (body + tail));
}

double PoissonKernel::cell_integral(double x_lo, double x_hi, double y) const {
    // int of (x^2 + y^2)^{-(1+2s)/2} over the cell; 4-point Gauss is exact
    // enough even when the cell width is comparable to y.
    const double s = s_;
    auto k = [s, y](double x) { return std::pow(x * x + y * y, -(1.0 + 2.0 * s) / 2.0); };
    static constexpr double gn[2] = {0.3399810435848563, 0.8611363115940526};
    static constexpr double gw[2] = {0.6521451548625461, 0.3478548451374538};
    const double c = 0.5 * (x_lo + x_hi), hw = 0.5 * (x_hi - x_lo);
    double acc = 0.0;
    for (int q = 0; q < 2; ++q) acc += gw[q] * (k(c + hw * gn[q]) + k(c - hw * gn[q]));
    return acc * hw;
}

std::vector<double> PoissonKernel::weights(double y) const {
    if (!(y > 0)) throw std::invalid_argument("PoissonKernel: height must be positive");
    // Stencil wide enough that the omitted tail mass is negligible relative
    // to the renormalization; cap at the grid size.
    int c = n_ - 1;
    if (mode_ == FarField::Periodic) c = n_ / 2;
    std::vector<double> wt(2 * c + 1);
    const double pref = std::pow(y, 2.0 * s_);
    for (int m = -c; m <= c; ++m)
        wt[c + m] = pref * cell_integral(m * h_ - 0.5 * h_, m * h_ + 0.5 * h_, y);
    if (mode_ == FarField::Periodic) {
        // Fold distant images into the stencil so the periodic sum is exact.
        const double L = n_ * h_;
        for (int img = 1; img <= 8; ++img) {
            for (int m = -c; m <= c; ++m) {
                wt[c + m] += pref * cell_integral(m * h_ + img * L - 0.5 * h_,
                                                  m * h_ + img * L + 0.5 * h_, y);
                wt[c + m] += pref * cell_integral(m * h_ - img * L - 0.5 * h_,
                                                  m * h_ - img * L + 0.5 * h_, y);
            }
        }
    }
    double mass = 0.0;
    for (double w : wt) mass += w;
    for (double& w : wt) w /= mass;
    return wt;
}

double PoissonKernel::mass_deviation(double y) const {
    const double s = s_;
    const double U = 100.0 * std::max(y, 1.0);
    const double body = num::adaptive_simpson(
        [s, y](double x) {
            return std::pow(y, 2.0 * s) * std::pow(x * x + y * y, -(1.0 + 2.0 * s) / 2.0);
        },
        0.0, U, 1e-13);
    const double twos = 2.0 * s;
    const double tail = std::pow(y, twos) *
                        (std::pow(U, -twos) / twos -
                         (1.0 + twos) / 2.0 * y * y * std::pow(U, -twos - 2.0) / (twos + 2.0));
    return std::abs(c_mass_ * 2.0 * (body + tail) - 1.0);
}

std::vector<double> poisson_extend(std::span<const double> f, double y,
                                   const PoissonKernel& kernel) {
    if (static_cast<int>(f.size()) != kernel.size())
        throw std::invalid_argument("poisson_extend: grid mismatch");
    const auto wt = kernel.weights(y);
    std::vector<double> out(f.size());
    if (kernel.far_field() == FarField::Periodic)
        kernels::convolve_periodic(f, wt, out);
    else
        kernels::convolve_zero_ext(f, wt, out);
    return out;
}

ExtensionField extend_to_half_plane(std::span<const double> f, const PoissonKernel& kernel,
                                    const HalfPlaneGrid& grid, std::string provenance) {
    if (grid.nx != kernel.size())
        throw std::invalid_argument("extend_to_half_plane: grid mismatch");
    ExtensionField ext{grid, std::vector<double>(grid.size()), std::move(provenance)};
    for (int i = 0; i < grid.nx; ++i) ext.values[grid.idx(i, 0)] = f[i];
    for (int j = 1; j < grid.ny; ++j) {
        const auto row = poisson_extend(f, grid.y(j), kernel);
        for (int i = 0; i < grid.nx; ++i) ext.values[grid.idx(i, j)] = row[i];
    }
    return ext;
}

NormalDerivative weighted_normal_derivative(std::span<const double> f,
                                            const PoissonKernel& kernel,
                                            std::span<const double> heights) {
    if (heights.size() < 2)
        throw std::invalid_argument("weighted_normal_derivative: need >= 2 heights");
    for (size_t m = 0; m + 1 < heights.size(); ++m)
        if (!(heights[m] > heights[m + 1]))
            throw std::invalid_argument(
                "weighted_normal_derivative: heights must be strictly decreasing");

    const double s = kernel.s();
    const double one_minus_a = 2.0 * s;  // 1 - a = 2s
    const int n = static_cast<int>(f.size());

    NormalDerivative nd;
    nd.heights.assign(heights.begin(), heights.end());
    nd.per_height.reserve(heights.size());
    for (double y : heights) {
        const auto uy = poisson_extend(f, y, kernel);
        std::vector<double> est(n);
        const double scale = one_minus_a / std::pow(y, one_minus_a);
        for (int i = 0; i < n; ++i) est[i] = scale * (uy[i] - f[i]);
        nd.per_height.push_back(std::move(est));
    }

    const double ladder[4] = {2.0 - 2.0 * s, 2.0, 4.0 - 2.0 * s, 4.0};
    nd.extrapolated.resize(n);
    std::vector<double> vals(heights.size());
    for (int i = 0; i < n; ++i) {
        for (size_t m = 0; m < heights.size(); ++m) vals[m] = nd.per_height[m][i];
        nd.extrapolated[i] = num::richardson(nd.heights, vals, ladder);
    }
    return nd;
}

ExtensionCalibration calibrate_extension_sign_constant(
    const PoissonKernel& kernel, const SpectralOperator& spectral,
    std::span<const std::vector<double>> test_fields, std::span<const double> heights) {
    if (test_fields.empty())
        throw std::invalid_argument("calibrate_extension_sign_constant: empty test set");
    double num = 0.0, den = 0.0;
    std::vector<std::vector<double>> wnds, specs;
    for (const auto& f : test_fields) {
        const auto wnd = weighted_normal_derivative(f, kernel, heights);
        const auto sp = spectral.apply(f);
        for (size_t i = 0; i < f.size(); ++i) {
            num += wnd.extrapolated[i] * sp[i];
            den += wnd.extrapolated[i] * wnd.extrapolated[i];
        }
        wnds.push_back(wnd.extrapolated);
        specs.push_back(sp);
    }
    if (den == 0.0)
        throw std::invalid_argument(
            "calibrate_extension_sign_constant: degenerate fit (all-zero test fields)");
    const double sk = num / den;
    ExtensionCalibration cal;
    cal.sigma = sk >= 0 ? 1.0 : -1.0;
    cal.kappa = std::abs(sk);
    cal.residual = 0.0;
    for (size_t t = 0; t < wnds.size(); ++t) {
        double err = 0.0, scale = 0.0;
        for (size_t i = 0; i < wnds[t].size(); ++i) {
            err = std::max(err, std::abs(sk * wnds[t][i] - specs[t][i]));
            scale = std::max(scale, std::abs(specs[t][i]));
        }
        if (scale > 0) cal.residual = std::max(cal.residual, err / scale);
    }
    return cal;
}

}  // namespace fpo
