#include "fpo/closed_forms.hpp"

#include <algorithm>
#include <cmath>

#include "fpo/kernels.hpp"

namespace fpo {

double eval_u0(double z, double y, double s) {
    if (y < 0) throw std::invalid_argument("eval_u0: y must be >= 0");
    const double q = std::hypot(z, y);
    const double base = q + z;
    // base = 0 only for y = 0, z <= 0, where the trace vanishes.
    if (base <= 0.0) return 0.0;
    return std::pow(2.0, -s) / (1.0 - s) * std::pow(base, s) * (z - s * q);
}

double eval_subsolution_phi(double x, const ConeParams& cone, double s) {
    if (std::abs(std::abs(cone.e) - 1.0) > 1e-14)
        throw std::invalid_argument("eval_subsolution_phi: |e| must be 1");
    if (!(cone.gamma > 0 && cone.gamma < s))
        throw std::invalid_argument("eval_subsolution_phi: gamma must lie in (0, s)");
    if (x == 0.0) return 0.0;  // continuity; homogeneity degree s + gamma > 0
    const double r = std::abs(x);
    const double ex = cone.e * x;
    const double arg = ex - 0.25 * cone.eta * r * (1.0 - (ex * ex) / (r * r));
    return arg > 0.0 ? std::pow(arg, s + cone.gamma) : 0.0;
}

double eval_barrier_br(double x, double y, double R, int n, double a) {
    if (!(R > 0)) throw std::invalid_argument("eval_barrier_br: R must be > 0");
    return -(n + 1.0) / (1.0 - a) * std::pow(y, 1.0 + a) -
           (x * x - n / (1.0 - a) * y * y) / std::pow(R, 1.0 - a);
}

double eval_polynomial_p(double x, double y, double t, double x0, double t0, int n,
                         double s) {
    const double a = 1.0 - 2.0 * s;
    return (x - x0) * (x - x0) + 2.0 * s * (t0 - t) - n / (a + 1.0) * y * y -
           std::pow(y, 2.0 * s);
}

double constant_cna(int n, double a, double s) {
    const double first = 0.125 * std::sqrt(s * (1.0 + a) / n);
    const double second = std::pow(std::sqrt(s) / 8.0, 1.0 / s);
    return std::min(first, second);
}

double weighted_operator_at(const HalfPlaneGrid& grid, std::span<const double> f,
                            double b, int i, int j) {
    if (f.size() != grid.size())
        throw std::invalid_argument("weighted_operator_at: field size mismatch");
    if (j == 0)
        throw std::invalid_argument("weighted_operator_at: weight degenerates at y = 0");
    if (i <= 0 || i >= grid.nx - 1 || j >= grid.ny - 1)
        throw std::invalid_argument("weighted_operator_at: interior nodes only");
    return detail::div_grad_at(f, grid.nx, grid.hx(), grid.hy(), b, i, j);
}

std::vector<double> apply_weighted_operator(const HalfPlaneGrid& grid,
                                            std::span<const double> f, double b) {
    if (f.size() != grid.size())
        throw std::invalid_argument("apply_weighted_operator: field size mismatch");
    std::vector<double> out(grid.size(), 0.0);
    kernels::weighted_div_grad(f, grid.nx, grid.ny, grid.hx(), grid.hy(), b, out);
    return out;
}

}  // namespace fpo
