#include "fpo/frac_ops.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fpo/kernels.hpp"
#include "fpo/numerics.hpp"

namespace fpo {

namespace {

// FFTW planning is not thread safe; execution on new arrays is.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct SpectralOperator::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~Plans() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

SpectralOperator::SpectralOperator(FracParams p, int n, double h)
    : n_(n), h_(h), s_(p.s), plans_(std::make_unique<Plans>()) {
    if (n < 16) throw std::invalid_argument("SpectralOperator: n must be >= 16");
    if (!(h > 0)) throw std::invalid_argument("SpectralOperator: h must be positive");
    const double L = n_ * h_;
    mult_.resize(n_ / 2 + 1);
    for (int k = 0; k <= n_ / 2; ++k) {
        const double xi = 2.0 * std::numbers::pi * k / L;
        mult_[k] = std::pow(xi, 2.0 * s_);
    }
    mult_[0] = 0.0;

    std::vector<double> in(n_, 0.0);
    std::vector<std::complex<double>> out(n_ / 2 + 1);
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plans_->fwd = fftw_plan_dft_r2c_1d(n_, in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->bwd = fftw_plan_dft_c2r_1d(n_, reinterpret_cast<fftw_complex*>(out.data()),
                                       in.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plans_->fwd || !plans_->bwd)
        throw std::runtime_error("SpectralOperator: FFTW plan creation failed");
}

SpectralOperator::~SpectralOperator() = default;

std::vector<double> SpectralOperator::transform_multiplied(
    std::span<const double> f, std::span<const double> factor) const {
    if (static_cast<int>(f.size()) != n_)
        throw std::invalid_argument("SpectralOperator: grid mismatch");
    std::vector<double> in(f.begin(), f.end());
    std::vector<std::complex<double>> hat(n_ / 2 + 1);
    fftw_execute_dft_r2c(plans_->fwd, in.data(),
                         reinterpret_cast<fftw_complex*>(hat.data()));
    for (int k = 0; k <= n_ / 2; ++k) hat[k] *= factor[k] / n_;
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(plans_->bwd, reinterpret_cast<fftw_complex*>(hat.data()),
                         out.data());
    return out;
}

std::vector<double> SpectralOperator::apply(std::span<const double> f) const {
    return transform_multiplied(f, mult_);
}

std::vector<double> SpectralOperator::solve_shifted(std::span<const double> f,
                                                    double dt) const {
    std::vector<double> factor(n_ / 2 + 1);
    for (int k = 0; k <= n_ / 2; ++k) factor[k] = 1.0 / (1.0 + dt * mult_[k]);
    return transform_multiplied(f, factor);
}

QuadratureOperator::QuadratureOperator(FracParams p, const SpaceGrid& grid, FarField mode)
    : n_(grid.n_x), h_(grid.h), s_(p.s), mode_(mode) {
    c1s_ = calibrate_constant(s_);
    rho_ = 0.5 * h_;
    const double twos = 2.0 * s_;

    // Midpoint weights on cells [kh - h/2, kh + h/2]; the cell [0, h/2) is
    // integrated in closed form against the quadratic interpolant, which
    // turns the second difference at offset h into an extra weight.
    const double near = std::pow(rho_, 2.0 - twos) / ((2.0 - twos) * h_ * h_);

    weights_.assign(n_, 0.0);
    if (mode_ == FarField::ZeroExtension) {
        for (int k = 1; k < n_; ++k)
            weights_[k] = c1s_ * h_ * std::pow(k * h_, -1.0 - twos);
        weights_[1] += c1s_ * near;
        diag_tail_.assign(n_, 0.0);
        for (int i = 0; i < n_; ++i) {
            const int kmax = std::max(i, n_ - 1 - i);
            const double z_far = (kmax + 0.5) * h_;
            diag_tail_[i] = c1s_ * std::pow(z_far, -twos) / s_;
        }
        // Symmetric Toeplitz matrix data, A_{ij} = -offdiag[|i-j|] off the
        // diagonal. Diagonal: 2 sum w_k over covered offsets plus the tail.
        offdiag_ = weights_;
        diag_.assign(n_, 0.0);
        std::vector<double> prefix(n_, 0.0);
        for (int k = 1; k < n_; ++k) prefix[k] = prefix[k - 1] + weights_[k];
        for (int i = 0; i < n_; ++i) {
            const int kmax = std::max(i, n_ - 1 - i);
            diag_[i] = 2.0 * prefix[kmax] + diag_tail_[i];
        }
    } else {
        // Periodized kernel: weight at offset k sums the images k h + m L.
        const double L = n_ * h_;
        const int images = 64;
        for (int k = 1; k < n_; ++k) {
            double wsum = std::pow(k * h_, -1.0 - twos);
            for (int m = 1; m <= images; ++m)
                wsum += std::pow(m * L + k * h_, -1.0 - twos) +
                        std::pow(m * L - k * h_, -1.0 - twos);
            // Remainder of the image sum as an integral.
            wsum += 2.0 * std::pow((images + 0.5) * L, -twos) / (twos * L);
            weights_[k] = c1s_ * h_ * wsum;
        }
        const double cn = c1s_ * near;
        weights_[1] += cn;
        weights_[n_ - 1] += cn;
        diag_tail_.assign(n_, 0.0);
        offdiag_ = weights_;
        diag_.assign(n_, 0.0);
        double total = 0.0;
        for (int k = 1; k < n_; ++k) total += weights_[k];
        for (int i = 0; i < n_; ++i) diag_[i] = total;
    }
}

double QuadratureOperator::apply_at(std::span<const double> f, int i) const {
    if (static_cast<int>(f.size()) != n_)
        throw std::invalid_argument("QuadratureOperator: grid mismatch");
    if (i <= 0 || i >= n_ - 1)
        throw std::invalid_argument("frac_lap_quadrature: needs interior node");
    if (mode_ == FarField::ZeroExtension)
        return detail::nonlocal_row_zero_ext(f, weights_, diag_tail_, i);
    return detail::nonlocal_row_periodic(f, weights_, i);
}

std::vector<double> QuadratureOperator::apply(std::span<const double> f) const {
    if (static_cast<int>(f.size()) != n_)
        throw std::invalid_argument("QuadratureOperator: grid mismatch");
    std::vector<double> out(n_);
    if (mode_ == FarField::ZeroExtension)
        kernels::nonlocal_apply_zero_ext(f, weights_, diag_tail_, out);
    else
        kernels::nonlocal_apply_periodic(f, weights_, out);
    return out;
}

double calibrate_constant(double s, double mode) {
    if (!(s > 0.5 && s < 1.0))
        throw std::invalid_argument("calibrate_constant: s must lie in (1/2, 1)");
    if (!(mode > 0.0)) throw std::invalid_argument("calibrate_constant: mode must be > 0");
    const double k = mode;
    const double twos = 2.0 * s;

    // J = int_R (1 - cos(k z)) |z|^{-1-2s} dz, split at z = 1/k.
    // Series part: int_0^{1/k} via the entire series of 1 - cos.
    double series = 0.0;
    double kpow = k * k;  // k^{2m}
    double fact = 2.0;    // (2m)!
    double sign = 1.0;
    for (int m = 1; m <= 18; ++m) {
        series += sign * kpow / (fact * (2.0 * m - twos) * std::pow(k, 2.0 * m - twos));
        sign = -sign;
        kpow *= k * k;
        fact *= (2.0 * m + 1.0) * (2.0 * m + 2.0);
    }

    // Oscillatory part: int_{1/k}^inf cos(k z) z^{-1-2s} dz, summed between
    // consecutive zeros of cos(k z) and accelerated as an alternating series.
    const double z0 = 1.0 / k;
    auto integrand = [&](double z) { return std::cos(k * z) / std::pow(z, 1.0 + twos); };
    const double half_period = std::numbers::pi / k;
    double first_zero = (std::floor((k * z0 - std::numbers::pi / 2) / std::numbers::pi) + 1.0) *
                            std::numbers::pi / k +
                        half_period / 2.0;
    // first_zero is the smallest zero of cos(k z) above z0.
    double head = 0.0;
    if (first_zero > z0) head = num::gauss16(integrand, z0, first_zero);
    std::vector<double> terms;
    terms.reserve(96);
    double lo = first_zero;
    for (int j = 0; j < 96; ++j) {
        const double hi = lo + half_period;
        terms.push_back(std::abs(num::gauss16(integrand, lo, hi)));
        lo = hi;
    }
    // Sign of the first half-period lobe of cos(k z) after first_zero.
    const double probe = integrand(first_zero + 0.25 * half_period);
    const double lead_sign = probe >= 0 ? 1.0 : -1.0;
    const double osc = head + lead_sign * num::euler_alternating_sum(terms);

    const double tail_power = std::pow(z0, -twos) / twos;  // int_{z0}^inf z^{-1-2s} dz
    const double J = 2.0 * (series + tail_power - osc);
    return std::pow(k, twos) / J;
}

double c1s_closed_form(double s) {
    return std::pow(4.0, s) * std::tgamma(0.5 + s) /
           (std::sqrt(std::numbers::pi) * std::abs(std::tgamma(-s)));
}

}  // namespace fpo
