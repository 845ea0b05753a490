#pragma once

#include <span>
#include <string>
#include <vector>

#include "fpo/closed_forms.hpp"
#include "fpo/frac_ops.hpp"
#include "fpo/params.hpp"

namespace fpo {

/// Poisson kernel of the degenerate extension problem,
///   P_y(x) = C_{1,s} y^{2s} (x^2 + y^2)^{-(1+2s)/2},
/// normalized to unit mass (int P_y = 1 at every height). Discrete weights
/// integrate the kernel over grid cells and are renormalized to unit discrete
/// mass, so constants extend to constants exactly.
class PoissonKernel {
public:
    PoissonKernel(FracParams p, int n, double h, FarField mode = FarField::ZeroExtension);

    /// Centered convolution weights at height y (odd length 2c+1, sum = 1).
    std::vector<double> weights(double y) const;

    /// Unit-mass normalization constant (numerically integrated, not quoted).
    double mass_constant() const { return c_mass_; }

    /// Deviation of the analytic kernel mass from 1 at height y, integrating
    /// the continuum kernel with its power tail; audits the normalization.
    double mass_deviation(double y) const;

    double s() const { return s_; }
    double spacing() const { return h_; }
    int size() const { return n_; }
    FarField far_field() const { return mode_; }

private:
    double cell_integral(double x_lo, double x_hi, double y) const;

    int n_;
    double h_;
    double s_;
    double c_mass_;
    FarField mode_;
};

/// Extension slice at one height: discrete convolution of the boundary field
/// with the unit-mass kernel. Throws for y <= 0.
std::vector<double> poisson_extend(std::span<const double> f, double y,
                                   const PoissonKernel& kernel);

/// Extension sampled on a half-plane grid; row 0 is the boundary field itself.
struct ExtensionField {
    HalfPlaneGrid grid;
    std::vector<double> values;
    std::string provenance;
};
ExtensionField extend_to_half_plane(std::span<const double> f, const PoissonKernel& kernel,
                                    const HalfPlaneGrid& grid, std::string provenance);

/// Weighted normal derivative recovered from the boundary layer model
///   u(x, y) ~ u(x, 0) + L(x) y^{1-a}/(1-a):
/// raw per-height estimates L_hat = (1-a)(u(x,y) - u(x,0))/y^{1-a}, then
/// Richardson extrapolation across the heights with the exponent ladder
/// {2-2s, 2, 4-2s, 4}. Heights must be strictly decreasing.
struct NormalDerivative {
    std::vector<double> extrapolated;
    std::vector<std::vector<double>> per_height;
    std::vector<double> heights;
};
NormalDerivative weighted_normal_derivative(std::span<const double> f,
                                            const PoissonKernel& kernel,
                                            std::span<const double> heights);

/// Empirical sign and constant relating the weighted normal derivative to the
/// spectral operator: least squares of sigma*kappa over the test fields so
/// that sigma*kappa*L_hat ~ (-Delta)^s f. Residual is the worst relative
/// L-infinity mismatch over the test set.
struct ExtensionCalibration {
    double sigma;  // +1 or -1
    double kappa;  // > 0
    double residual;
};
ExtensionCalibration calibrate_extension_sign_constant(
    const PoissonKernel& kernel, const SpectralOperator& spectral,
    std::span<const std::vector<double>> test_fields, std::span<const double> heights);

}  // namespace fpo
