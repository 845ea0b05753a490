#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fpo::num {

/// 16-point Gauss-Legendre rule on [a, b].
double gauss16(const std::function<double(double)>& f, double a, double b);

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// Sum of the alternating series sum_k (-1)^k a_k (a_k >= 0, slowly decaying)
/// by repeated averaging of partial sums (Euler transformation).
double euler_alternating_sum(std::span<const double> terms);

/// Slope and intercept of the least-squares line through (x_i, y_i).
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Golden-section minimization of a unimodal f on [a, b].
double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-10);

/// Richardson extrapolation to step 0 of values v_m measured at steps y_m
/// (strictly decreasing), with known error exponents e_0 < e_1 < ...:
/// v_m = L + c_0 y_m^{e_0} + c_1 y_m^{e_1} + ...
/// Eliminates as many exponents as the data allows and returns the corner value.
double richardson(std::span<const double> y, std::span<const double> v,
                  std::span<const double> exponents);

}  // namespace fpo::num
