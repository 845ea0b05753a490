#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fpo/params.hpp"

namespace fpo {

/// Grid on the upper half plane {y >= 0}: nx columns over [x_min, x_max],
/// ny rows over [0, y_max]; the y = 0 row is row j = 0.
struct HalfPlaneGrid {
    double x_min, x_max;
    int nx;
    double y_max;
    int ny;

    HalfPlaneGrid(double x_min_, double x_max_, int nx_, double y_max_, int ny_)
        : x_min(x_min_), x_max(x_max_), nx(nx_), y_max(y_max_), ny(ny_) {
        if (nx < 8 || ny < 8) throw std::invalid_argument("HalfPlaneGrid: too few nodes");
        if (!(y_max > 0)) throw std::invalid_argument("HalfPlaneGrid: y_max must be > 0");
        if (!(x_min < x_max)) throw std::invalid_argument("HalfPlaneGrid: empty x range");
    }

    double hx() const { return (x_max - x_min) / (nx - 1); }
    double hy() const { return y_max / (ny - 1); }
    double x(int i) const { return x_min + i * hx(); }
    double y(int j) const { return j * hy(); }
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    size_t size() const { return static_cast<size_t>(nx) * ny; }
};

/// Cone data for the homogeneous subsolution: direction e (a unit vector;
/// +-1 in one dimension), opening eta > 0, homogeneity shift gamma in (0, s).
struct ConeParams {
    double e;
    double eta;
    double gamma;
};

/// Global convex profile of the classification theorem:
///   u0(z, y) = 2^{-s}/(1-s) (sqrt(z^2+y^2) + z)^s (z - s sqrt(z^2+y^2)),
/// whose trace is u0(z, 0) = (z_+)^{1+s}.
double eval_u0(double z, double y, double s);

/// Positive subsolution vanishing outside the cone C_eta:
///   Phi(x) = (e.x - eta/4 |x| (1 - (e.x)^2/|x|^2))_+^{s+gamma},
/// with Phi(0) = 0 by continuity. In one dimension the transverse term
/// vanishes identically and Phi reduces to ((e x)_+)^{s+gamma}.
double eval_subsolution_phi(double x, const ConeParams& cone, double s);

/// Barrier from the Liouville argument:
///   b_R(x, y) = -(n+1)/(1-a) y^{1+a} - (|x|^2 - n/(1-a) y^2) / R^{1-a},
/// annihilated by L_{-a}.
double eval_barrier_br(double x, double y, double R, int n, double a);

/// The a-harmonic comparison polynomial
///   P(x, y, t) = |x-x0|^2 + 2s(t0-t) - n/(a+1) y^2 - y^{2s},
/// satisfying dP/dt = lim_{y->0} y^a dP/dy = -2s.
double eval_polynomial_p(double x, double y, double t, double x0, double t0, int n,
                         double s);

/// min{ 1/8 sqrt(s(1+a)/n), (sqrt(s)/8)^{1/s} }.
double constant_cna(int n, double a, double s);

/// Residual field of the conservative discretization of div(y^b grad f) on
/// interior nodes (boundary entries are zero). b must be a or -a; evaluation
/// touches the y = 0 row only through the stored field values, never through
/// the degenerate weight. Throws if asked to treat j = 0 as interior.
std::vector<double> apply_weighted_operator(const HalfPlaneGrid& grid,
                                            std::span<const double> f, double b);

/// Pointwise interior evaluation; throws "weight degenerates" at the y = 0 row.
double weighted_operator_at(const HalfPlaneGrid& grid, std::span<const double> f,
                            double b, int i, int j);

}  // namespace fpo
