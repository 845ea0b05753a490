#pragma once

#include <string>
#include <vector>

namespace fpo {

/// One named check with a measured value against a threshold.
struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// max over a z-grid of |u0(z, 0) - (z_+)^{1+s}|.
CheckResult check_u0_trace(double s, int n_points);

/// u0(z,0) >= 0 for all z and u0(0,y) < 0 for y > 0 (sampled).
CheckResult check_u0_sign(double s);

/// Exactness of Phi(lambda x) = lambda^{s+gamma} Phi(x) on sampled points.
CheckResult check_phi_homogeneity(double s, double gamma);

/// Evaluates both branches of c_{n,a} and confirms the min is <= 1/8.
CheckResult check_cna(double s);

/// dP/dt = lim y^a dP/dy = -2s for the comparison polynomial.
CheckResult check_polynomial_flux(double s);

/// Convergence factor of the discrete L_b residual of a closed form under one
/// grid halving, measured on a fixed interior subregion. `which` is one of
/// "u0" (weight a), "P" (weight a), "bR" (weight -a). Returns the factor; the
/// order-2 target is a factor in [3.2, 4.8].
struct OrderResult {
    std::string name;
    double coarse_residual = 0.0;
    double fine_residual = 0.0;
    double factor = 0.0;
    bool pass = false;
};
OrderResult check_aharmonic_order(const std::string& which, double s, int coarse_nodes);

/// Calibrated c_{1,s} against the closed Gamma-function form.
CheckResult check_c1s(double s);

}  // namespace fpo
