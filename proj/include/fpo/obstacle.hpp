#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpo {

/// Admissible obstacle: phi with evaluable derivatives D^k phi, k = 1..4, and
/// finite sup-norm bounds M_k on a declared window. Analytic derivatives are
/// used when supplied; otherwise centered finite differences of phi.
class ObstacleSpec {
public:
    using Fn = std::function<double(double)>;

    /// Build from phi alone; derivatives fall back to finite differences.
    /// M_k are estimated by dense sampling over [win_lo, win_hi].
    static ObstacleSpec from_function(Fn phi, double win_lo, double win_hi);

    /// Build with analytic derivatives d[0] = phi', ..., d[3] = phi''''.
    static ObstacleSpec from_analytic(Fn phi, std::array<Fn, 4> d, double win_lo,
                                      double win_hi);

    double phi(double x) const { return phi_(x); }
    double derivative(int k, double x) const;  // k = 1..4
    double bound(int k) const { return bounds_[k - 1]; }  // M_k, k = 1..4
    double bound_sum() const { return bounds_[0] + bounds_[1] + bounds_[2] + bounds_[3]; }

    double window_lo() const { return win_lo_; }
    double window_hi() const { return win_hi_; }

private:
    ObstacleSpec() = default;
    void estimate_bounds(int samples = 4096);

    Fn phi_;
    std::array<Fn, 4> deriv_;
    std::array<double, 4> bounds_{};
    double win_lo_ = 0.0, win_hi_ = 0.0;
};

namespace obstacles {

/// Difference of two Gaussian humps, A exp(-(x/sc)^2) - B exp(-(x/sw)^2).
/// With B*sw > A*sc the far field of (-Delta)^s phi turns positive, so the
/// solution stays in contact near the truncation edges.
ObstacleSpec two_scale_bump(double A, double sc, double B, double sw, double win);

/// Single Gaussian hump A exp(-(x/sigma)^2).
ObstacleSpec gaussian_bump(double A, double sigma, double win);

/// Smoothed put payoff (K - x)_+ mollified by a compactly supported C^4 bump
/// of width delta; exact piecewise-polynomial mollification.
ObstacleSpec smoothed_put(double strike, double delta, double win);

/// Smoothed call spread (x - K)_+ - (x - K - width)_+, each ramp mollified.
ObstacleSpec smoothed_call_spread(double strike, double width, double delta, double win);

/// One smoothed ramp: sign * (sign * (x - kink))_+ mollified at scale delta.
/// Exposed for payoff assembly and tests.
double smoothed_ramp(double x, double kink, double delta, int k /* derivative 0..4 */);

}  // namespace obstacles

}  // namespace fpo
