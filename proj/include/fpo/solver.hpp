#pragma once

#include <span>
#include <vector>

#include "fpo/frac_ops.hpp"
#include "fpo/grid.hpp"
#include "fpo/obstacle.hpp"
#include "fpo/params.hpp"

namespace fpo {

struct SolverConfig {
    double eps_pen = 1e-3;      ///< penalty scale in beta(z) = exp(-z/eps)
    double penalty_tol = 1e-10; ///< Newton sub-iteration tolerance (sup norm of F)
    double omega = 1.5;         ///< PSOR relaxation, in (0, 2)
    double tol_c = 1e-7;        ///< complementarity tolerance
    int max_iters = 20000;      ///< PSOR sweeps / Newton iterations per step
    double half_width = 0.0;    ///< truncation half-width L (0 = take from grid)
    // Far-field rule is fixed: u = phi outside [-L, L], i.e. the gap v = u - phi
    // is zero-extended; the quadrature tail is then exact.

    void validate() const;
};

struct SolveResult {
    enum class Scheme { Penalized, Lcp };

    SpaceTimeField u;                  ///< solution trace on the grid
    std::vector<double> step_residual; ///< per-step complementarity / Newton residual
    std::vector<int> step_iterations;  ///< PSOR sweeps or Newton iterations per step
    double wall_seconds = 0.0;
    Scheme scheme = Scheme::Lcp;
    bool far_field_contact_ok = true;  ///< contact held near +-L (warn otherwise)

    SolveResult(const SpaceGrid& sg, const TimeGrid& tg) : u(sg, tg) {}
};

/// Node is counted in contact when u - phi <= max(10 tol_c, h^{1+s}).
double contact_threshold(double tol_c, double h, double s);

/// (-Delta)^s phi by singular-integral quadrature with analytic obstacle
/// samples on a window of width 3L each side and a linear-model tail beyond.
std::vector<double> moving_term(const ObstacleSpec& obs, FracParams p,
                                const SpaceGrid& grid);

/// Exponential penalization: u(., 0) = phi + eps, each step solves
///   (I + dt (-Delta)^s) u^{k+1} = u^k + dt beta_eps(u^k - phi)
/// with the implicit operator inverted spectrally; when the explicit penalty
/// is stiff (dt max |beta'| > 1) the step switches to damped Newton on the
/// semi-implicit system. Throws on Newton non-convergence, carrying the step.
SolveResult solve_penalized(const ObstacleSpec& obs, FracParams p, const SpaceGrid& sg,
                            const TimeGrid& tg, const SolverConfig& cfg);

/// Backward-Euler linear complementarity per step, solved by projected SOR on
/// the symmetric quadrature matrix: find w >= phi with
///   (w - u^k)/dt + (-Delta)^s w >= 0,   (w - phi) . ( ... ) <= tol_c.
/// Throws on a PSOR stall, carrying a residual snapshot.
SolveResult solve_lcp(const ObstacleSpec& obs, FracParams p, const SpaceGrid& sg,
                      const TimeGrid& tg, const SolverConfig& cfg);

/// Projected SOR on the symmetric system A w = b, w >= lb, with A given by
/// its diagonal and Toeplitz off-diagonal band A_{ij} = -off[|i-j|] (i != j).
/// Sweeps until both the max update and the complementarity measure
/// max_i |min((A w - b)_i / residual_scale, w_i - lb0_i)| fall below tol.
/// lb0 is the complementarity reference bound (the obstacle); lb may sit
/// above it when a tighter valid bound is known. Returns the iterate; throws
/// on a stall or on hitting max_iters, embedding a residual snapshot.
struct PsorStats {
    int sweeps = 0;
    double max_update = 0.0;
    double complementarity = 0.0;
};
std::vector<double> psor_solve(std::span<const double> diagA, std::span<const double> offA,
                               std::span<const double> b, std::span<const double> lb,
                               std::span<const double> lb0, std::span<const double> w0,
                               double omega, double tol, int max_iters,
                               double residual_scale, PsorStats* stats = nullptr);

enum class OperatorChoice { Quadrature, Spectral };

/// Audit fields r1 = du/dt + (-Delta)^s u, r2 = u - phi and min(r1, r2),
/// with backward time differences; defined on levels j = 1..n_t.
struct ComplementarityResidual {
    int n_x = 0;
    int n_t = 0;
    std::vector<double> r1, r2, rmin;

    double at_r1(int i, int j) const { return r1[static_cast<size_t>(j - 1) * n_x + i]; }
    double at_r2(int i, int j) const { return r2[static_cast<size_t>(j - 1) * n_x + i]; }
    double at_rmin(int i, int j) const { return rmin[static_cast<size_t>(j - 1) * n_x + i]; }
    double max_abs_rmin() const;
};
ComplementarityResidual residual_complementarity(const SpaceTimeField& u,
                                                 const ObstacleSpec& obs, FracParams p,
                                                 OperatorChoice choice);

}  // namespace fpo
