#include "fpo/obstacle.hpp"

#include <algorithm>
#include <limits>

namespace fpo {

namespace {

// Central finite-difference derivatives of orders 1..4 with order-matched steps.
double fd_derivative(const ObstacleSpec::Fn& f, int k, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    switch (k) {
        case 1: {
            const double e = std::cbrt(eps);
            return (f(x + e) - f(x - e)) / (2 * e);
        }
        case 2: {
            const double e = std::pow(eps, 0.25);
            return (f(x + e) - 2 * f(x) + f(x - e)) / (e * e);
        }
        case 3: {
            const double e = std::pow(eps, 0.2);
            return (f(x + 2 * e) - 2 * f(x + e) + 2 * f(x - e) - f(x - 2 * e)) /
                   (2 * e * e * e);
        }
        case 4: {
            const double e = std::pow(eps, 1.0 / 6.0);
            return (f(x + 2 * e) - 4 * f(x + e) + 6 * f(x) - 4 * f(x - e) + f(x - 2 * e)) /
                   (e * e * e * e);
        }
        default:
            throw std::invalid_argument("fd_derivative: order must be 1..4");
    }
}

}  // namespace

ObstacleSpec ObstacleSpec::from_function(Fn phi, double win_lo, double win_hi) {
    ObstacleSpec obs;
    obs.phi_ = phi;
    for (int k = 1; k <= 4; ++k)
        obs.deriv_[k - 1] = [phi, k](double x) { return fd_derivative(phi, k, x); };
    obs.win_lo_ = win_lo;
    obs.win_hi_ = win_hi;
    obs.estimate_bounds();
    return obs;
}

ObstacleSpec ObstacleSpec::from_analytic(Fn phi, std::array<Fn, 4> d, double win_lo,
                                         double win_hi) {
    ObstacleSpec obs;
    obs.phi_ = phi;
    obs.deriv_ = std::move(d);
    obs.win_lo_ = win_lo;
    obs.win_hi_ = win_hi;
    obs.estimate_bounds();
    return obs;
}

double ObstacleSpec::derivative(int k, double x) const {
    if (k < 1 || k > 4) throw std::invalid_argument("ObstacleSpec: derivative order 1..4");
    return deriv_[k - 1](x);
}

void ObstacleSpec::estimate_bounds(int samples) {
    for (int k = 1; k <= 4; ++k) {
        double m = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double x = win_lo_ + (win_hi_ - win_lo_) * i / samples;
            m = std::max(m, std::abs(deriv_[k - 1](x)));
        }
        if (!std::isfinite(m))
            throw std::invalid_argument("ObstacleSpec: derivative bound M_" +
                                        std::to_string(k) + " is not finite");
        bounds_[k - 1] = m;
    }
}

namespace obstacles {

namespace {

double gauss_d(double x, double A, double sigma, int k) {
    // d^k/dx^k [A exp(-(x/sigma)^2)] via Hermite polynomials.
    const double u = x / sigma;
    const double g = A * std::exp(-u * u);
    switch (k) {
        case 0: return g;
        case 1: return g * (-2 * u) / sigma;
        case 2: return g * (4 * u * u - 2) / (sigma * sigma);
        case 3: return g * (-8 * u * u * u + 12 * u) / (sigma * sigma * sigma);
        case 4: return g * (16 * u * u * u * u - 48 * u * u + 12) /
                       (sigma * sigma * sigma * sigma);
        default: throw std::invalid_argument("gauss_d: order 0..4");
    }
}

// Mollifier rho(t) = c (1 - t^2)^5 on [-1, 1], unit mass; c = 693/512.
constexpr double kMollC = 693.0 / 512.0;

double moll_rho(double t, int k) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    switch (k) {
        case 0: return kMollC * q * q * q * q * q;
        case 1: return -10.0 * kMollC * t * q * q * q * q;
        case 2: return -10.0 * kMollC * q * q * q * (1.0 - 9.0 * t * t);
        default: throw std::invalid_argument("moll_rho: order 0..2");
    }
}

// Antiderivatives of rho and t*rho on [-1, t].
double moll_cdf(double t) {
    if (t <= -1) return 0.0;
    if (t >= 1) return 1.0;
    // integral of c(1 - u^2)^5 = c (u - 5u^3/3 + 2u^5 - 10u^7/7 + 5u^9/9 - u^11/11)
    auto F = [](double u) {
        const double u2 = u * u;
        return u * (1 + u2 * (-5.0 / 3 + u2 * (2.0 + u2 * (-10.0 / 7 + u2 * (5.0 / 9 - u2 / 11)))));
    };
    return kMollC * (F(t) - F(-1.0));
}

double moll_first_moment(double t) {
    // integral_{-1}^{t} u rho(u) du
    if (t <= -1) return 0.0;
    if (t >= 1) return 0.0;  // rho even => zero total first moment
    auto G = [](double u) {
        const double u2 = u * u;
        // integral of c u (1-u^2)^5 = -c (1-u^2)^6 / 12
        return -kMollC * std::pow(1.0 - u2, 6) / 12.0;
    };
    return G(t) - G(-1.0);
}

}  // namespace

double smoothed_ramp(double x, double kink, double delta, int k) {
    // Mollification of r(x) = (x - kink)_+ by rho_delta; exact closed form.
    const double w = (x - kink) / delta;
    if (w >= 1.0) {
        switch (k) {
            case 0: return x - kink;
            case 1: return 1.0;
            default: return 0.0;
        }
    }
    if (w <= -1.0) return 0.0;
    // p(x) = int rho(t) (x - kink - delta t)_+ dt over t < w
    //      = delta * int_{-1}^{w} rho(t) (w - t) dt
    switch (k) {
        case 0: return delta * (w * moll_cdf(w) - moll_first_moment(w));
        case 1: return moll_cdf(w);
        case 2: return moll_rho(w, 0) / delta;
        case 3: return moll_rho(w, 1) / (delta * delta);
        case 4: return moll_rho(w, 2) / (delta * delta * delta);
        default: throw std::invalid_argument("smoothed_ramp: order 0..4");
    }
}

ObstacleSpec two_scale_bump(double A, double sc, double B, double sw, double win) {
    auto phi = [=](double x) { return gauss_d(x, A, sc, 0) - gauss_d(x, B, sw, 0); };
    std::array<ObstacleSpec::Fn, 4> d;
    for (int k = 1; k <= 4; ++k)
        d[k - 1] = [=](double x) { return gauss_d(x, A, sc, k) - gauss_d(x, B, sw, k); };
    return ObstacleSpec::from_analytic(phi, d, -win, win);
}

ObstacleSpec gaussian_bump(double A, double sigma, double win) {
    auto phi = [=](double x) { return gauss_d(x, A, sigma, 0); };
    std::array<ObstacleSpec::Fn, 4> d;
    for (int k = 1; k <= 4; ++k)
        d[k - 1] = [=](double x) { return gauss_d(x, A, sigma, k); };
    return ObstacleSpec::from_analytic(phi, d, -win, win);
}

ObstacleSpec smoothed_put(double strike, double delta, double win) {
    // (K - x)_+ = (-(x - K))_+ : reflect the ramp.
    auto phi = [=](double x) { return smoothed_ramp(2 * strike - x, strike, delta, 0); };
    std::array<ObstacleSpec::Fn, 4> d;
    for (int k = 1; k <= 4; ++k)
        d[k - 1] = [=](double x) {
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            return sgn * smoothed_ramp(2 * strike - x, strike, delta, k);
        };
    return ObstacleSpec::from_analytic(phi, d, -win, win);
}

ObstacleSpec smoothed_call_spread(double strike, double width, double delta, double win) {
    auto phi = [=](double x) {
        return smoothed_ramp(x, strike, delta, 0) - smoothed_ramp(x, strike + width, delta, 0);
    };
    std::array<ObstacleSpec::Fn, 4> d;
    for (int k = 1; k <= 4; ++k)
        d[k - 1] = [=](double x) {
            return smoothed_ramp(x, strike, delta, k) -
                   smoothed_ramp(x, strike + width, delta, k);
        };
    return ObstacleSpec::from_analytic(phi, d, -win, win);
}

}  // namespace obstacles

}  // namespace fpo
