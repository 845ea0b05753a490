#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fpo/grid.hpp"
#include "fpo/params.hpp"

namespace fpo {

/// How a field is declared to continue beyond the grid.
enum class FarField {
    ZeroExtension,  ///< field vanishes outside the domain; analytic power tail
    Periodic        ///< field repeats with period n * h; periodized kernel
};

/// Fourier-multiplier form of (-Delta)^s on a periodic grid of n points with
/// spacing h (period L = n * h). The multiplier table is |xi_k|^{2s} with
/// xi_k = 2 pi k / L; the zero mode is annihilated.
class SpectralOperator {
public:
    SpectralOperator(FracParams p, int n, double h);
    ~SpectralOperator();
    SpectralOperator(const SpectralOperator&) = delete;
    SpectralOperator& operator=(const SpectralOperator&) = delete;

    /// (-Delta)^s f. Throws on size mismatch with the operator grid.
    std::vector<double> apply(std::span<const double> f) const;

    /// (I + dt (-Delta)^s)^{-1} f, the backward-Euler resolvent.
    std::vector<double> solve_shifted(std::span<const double> f, double dt) const;

    int size() const { return n_; }
    double spacing() const { return h_; }
    double period() const { return n_ * h_; }
    double s() const { return s_; }
    std::span<const double> multipliers() const { return mult_; }

private:
    std::vector<double> transform_multiplied(std::span<const double> f,
                                             std::span<const double> factor) const;

    int n_;
    double h_;
    double s_;
    std::vector<double> mult_;  // |xi_k|^{2s}, k = 0..n/2
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

/// Discrete singular-integral form of (-Delta)^s on a uniform grid:
/// symmetric second differences against midpoint weights h (k h)^{-1-2s},
/// a closed-form cell at the origin that cancels the O(z^2) singularity, and
/// an analytic far tail determined by the declared extension.
class QuadratureOperator {
public:
    QuadratureOperator(FracParams p, const SpaceGrid& grid,
                       FarField mode = FarField::ZeroExtension);

    /// Pointwise value at an interior node. Throws "needs interior node" on
    /// the boundary (the near-field second difference uses both neighbors).
    double apply_at(std::span<const double> f, int i) const;

    /// Matrix-semantics application on all nodes (rows at the boundary use
    /// the declared extension for the missing neighbor).
    std::vector<double> apply(std::span<const double> f) const;

    double normalization() const { return c1s_; }
    double near_field_cutoff() const { return rho_; }
    FarField far_field() const { return mode_; }
    int size() const { return n_; }
    double spacing() const { return h_; }
    double s() const { return s_; }

    /// Scaled matrix data for LCP assembly: entry (i, j), i != j, equals
    /// -offdiag()[|i-j|]; the diagonal is diag()[i]. Both include c_{1,s}.
    std::span<const double> offdiag() const { return offdiag_; }
    std::span<const double> diag() const { return diag_; }

private:
    int n_;
    double h_;
    double s_;
    double c1s_;
    double rho_;
    FarField mode_;
    std::vector<double> weights_;    // c-scaled offset weights fed to the kernels
    std::vector<double> diag_tail_;  // c-scaled analytic tail per node (zero ext)
    std::vector<double> offdiag_;    // matrix off-diagonals by offset
    std::vector<double> diag_;       // matrix diagonal
};

/// Normalization constant of the 1-D kernel, computed by matching the
/// singular integral to the Fourier symbol |k|^{2s} on the pure mode
/// cos(k x): c = k^{2s} / int_R (1 - cos(k z)) |z|^{-1-2s} dz. Homogeneity
/// makes the result k-independent; `mode` selects k for the cross-check.
double calibrate_constant(double s, double mode = 1.0);

/// Closed form 4^s Gamma(1/2 + s) / (sqrt(pi) |Gamma(-s)|) used to audit the
/// calibrated constant.
double c1s_closed_form(double s);

}  // namespace fpo
