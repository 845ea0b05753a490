#include "fpo/numerics.hpp"

#include <algorithm>

namespace fpo::num {

namespace {

// Nodes/weights for 16-point Gauss-Legendre on [-1, 1] (positive half; rule is symmetric).
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double simpson(const std::function<double(double)>& f, double a, double m, double b,
               double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, lm, m, fa, flm, fm);
    const double right = simpson(f, m, rm, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double gauss16(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < 8; ++k)
        acc += kGlWeights[k] * (f(c + hw * kGlNodes[k]) + f(c - hw * kGlNodes[k]));
    return acc * hw;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(f, a, m, b, fa, fm, fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double euler_alternating_sum(std::span<const double> terms) {
    const size_t n = terms.size();
    if (n == 0) return 0.0;
    // Partial sums of sum (-1)^k a_k.
    std::vector<double> row(n);
    double acc = 0.0;
    double sign = 1.0;
    for (size_t k = 0; k < n; ++k) {
        acc += sign * terms[k];
        row[k] = acc;
        sign = -sign;
    }
    // Repeated averaging; the diagonal converges rapidly for algebraic tails.
    while (row.size() > 1) {
        for (size_t k = 0; k + 1 < row.size(); ++k) row[k] = 0.5 * (row[k] + row[k + 1]);
        row.pop_back();
    }
    return row[0];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - fit.slope * x[k] - fit.intercept;
        ss += e * e;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double richardson(std::span<const double> y, std::span<const double> v,
                  std::span<const double> exponents) {
    const size_t m = y.size();
    if (v.size() != m || m == 0) throw std::invalid_argument("richardson: size mismatch");
    for (size_t k = 0; k + 1 < m; ++k)
        if (!(y[k] > y[k + 1])) throw std::invalid_argument("richardson: steps must decrease");
    std::vector<double> t(v.begin(), v.end());
    const size_t stages = std::min(exponents.size(), m - 1);
    // Neville-type tableau; stage j removes the exponents[j] error term.
    for (size_t j = 0; j < stages; ++j) {
        for (size_t k = 0; k + j + 1 < m; ++k) {
            const double pa = std::pow(y[k], exponents[j]);
            const double pb = std::pow(y[k + j + 1], exponents[j]);
            t[k] = (pa * t[k + 1] - pb * t[k]) / (pa - pb);
        }
    }
    return t[0];
}

}  // namespace fpo::num
