#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpo/grid.hpp"
#include "fpo/obstacle.hpp"
#include "fpo/params.hpp"

namespace fpo {

/// Boolean contact indicator {u = phi} on the space x time grid.
class ContactMask {
public:
    ContactMask(int n_x, int n_levels)
        : n_x_(n_x), n_levels_(n_levels), bits_(static_cast<size_t>(n_x) * n_levels, 0) {}

    bool at(int i, int j) const { return bits_[static_cast<size_t>(j) * n_x_ + i] != 0; }
    void set(int i, int j, bool v) { bits_[static_cast<size_t>(j) * n_x_ + i] = v ? 1 : 0; }
    int n_x() const { return n_x_; }
    int n_levels() const { return n_levels_; }

    /// Number of nodes that are in contact at a later time but not earlier
    /// (zero when the masks shrink monotonically).
    int nestedness_violations() const;

private:
    int n_x_;
    int n_levels_;
    std::vector<uint8_t> bits_;
};

ContactMask contact_mask(const SpaceTimeField& u, const ObstacleSpec& obs, double tol);

/// One free-boundary endpoint tracked across time slices, with sub-grid
/// positions from linear interpolation of u - phi against the contact
/// threshold. Topology changes terminate trajectories and are recorded.
struct FreeBoundaryTrajectory {
    enum class Side { Left, Right };
    Side side = Side::Right;       ///< which end of its contact interval
    std::vector<double> t;          ///< sample times
    std::vector<double> g;          ///< boundary positions G(t)
    bool touches_domain_edge = false;

    /// Restriction to samples with t in [t_lo, t_hi]; regularity audits are
    /// local statements, so they run on a window around the analysis point.
    FreeBoundaryTrajectory window(double t_lo, double t_hi) const;
};

struct TrajectoryEvent {
    int level;           ///< time level where the topology changed
    std::string what;    ///< e.g. "interval count 3 -> 2"
};

struct TrajectorySet {
    std::vector<FreeBoundaryTrajectory> trajectories;
    std::vector<TrajectoryEvent> events;
};

TrajectorySet boundary_trajectories(const SpaceTimeField& u, const ObstacleSpec& obs,
                                    double tol, double s);

/// Growth-exponent fit at a free boundary point: least-squares slope of
/// log sup_{Q_r}(u - phi) against log r over a geometric radius list.
struct GrowthFit {
    enum class Class { Regular, Degenerate, Unresolved };
    double mu_hat = 0.0;
    double slope_stderr = 0.0;
    double fit_rms = 0.0;
    Class cls = Class::Unresolved;
    std::vector<double> radii;
    std::vector<double> sups;
};

GrowthFit growth_exponent(const SpaceTimeField& u, const ObstacleSpec& obs, double x0,
                          double t0, std::span<const double> radii, double s,
                          double eps_reg = 0.1, double residual_threshold = 0.2);

/// Trace-version parabolic blow-up: v(x0 + r x, t0 + r^{2s} t) / sup_{Q_r}|v|
/// resampled onto the unit cylinder by bilinear interpolation.
struct BlowupField {
    int nx = 0, nt = 0;
    double r = 0.0;
    double r_time = 0.0;       ///< temporal half-extent r^{2s}
    double sup = 0.0;          ///< the normalizing sup over Q_r
    bool nondegenerate = false; ///< sup >= r^{2-eps_reg}/2
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<size_t>(j) * nx + i]; }
    double x_hat(int i) const { return -1.0 + 2.0 * i / (nx - 1); }
    double t_hat(int j) const { return -1.0 + 2.0 * j / (nt - 1); }
};

BlowupField blowup_rescale(const SpaceTimeField& u, const ObstacleSpec& obs, double x0,
                           double t0, double r, double s, double eps_reg = 0.1,
                           int nx_out = 65, int nt_out = 65);

/// Nonlinear least squares of v over Q_r against the regular-point model
/// c0 ((x - x0) e + a (t - t0))_+^{1+s}; c0 is profiled out, a >= 0 by
/// golden-section search, e by trying both signs.
struct ExpansionFit {
    double c0 = 0.0;
    int e = +1;
    double a = 0.0;
    double residual = 1.0;   ///< relative l2 misfit over the cylinder
    bool converged = false;
    bool stationary = false; ///< a at the zero boundary (degenerate control)
    bool pass = false;       ///< c0 > 0 and a > 0
};

ExpansionFit fit_expansion(const SpaceTimeField& u, const ObstacleSpec& obs, double x0,
                           double t0, double r, double s);

/// Lipschitz and second-difference exponent audit of a boundary trajectory.
struct GraphAudit {
    double lip_t = 0.0;        ///< max |dG/dt| over a short-stride window
    double beta_hat = 0.0;     ///< fitted slope minus 1 of log |d2 G| vs log tau
    bool smooth = false;       ///< second differences at the noise floor
    bool pass = false;         ///< beta_hat > 0.05 (or smooth)
    std::vector<double> taus;
    std::vector<double> second_diffs;
};

GraphAudit lipschitz_and_c1beta_audit(const FreeBoundaryTrajectory& traj);

/// Directional monotonicity checks on a rescaled trace near the boundary.
struct ConeAudit {
    double de_min = 0.0;       ///< min of d_e v over the checked set
    double dt_min = 0.0;       ///< min of d_t v
    double kappa_hat = 0.0;    ///< max d_t v / d_e v (empirical kappa)
    double gamma_hat = 0.0;    ///< min positive ratio (reported, never enforced)
    int sign_violations = 0;   ///< nodes where d_e v != |d_x v| on the positivity set
    bool stationary = false;
    bool pass = false;
};

ConeAudit monotonicity_cone_audit(const BlowupField& v_r, int e, double tol = 1e-6);

/// Empirical C^s seminorms of d_t u and d_x u over dyadic increments.
struct TimeRegularityAudit {
    std::vector<double> deltas_x, seminorm_dtu_x, seminorm_dxu_x;
    std::vector<double> deltas_t, seminorm_dtu_t, seminorm_dxu_t;
    bool pass = false;
    std::string verdict;  ///< "holder", "smoother than C^s", or "blow-up"
};

TimeRegularityAudit time_regularity_audit(const SpaceTimeField& u, const ObstacleSpec& obs,
                                          double x0, double t0, double r, double s);

/// Space-time semiconvexity audit: discrete u_xi_xi over a direction fan
/// against the bound -(C_hat + 0.1), C_hat = M1 + M2 + M3 + M4.
struct SemiconvexityAudit {
    double min_second_difference = 0.0;
    double bound = 0.0;        ///< C_hat + 0.1
    bool ok = false;           ///< no direction below -(C_hat + 0.1)
    bool flagged = false;      ///< exceeded by less than 10x (reported, not fatal)
};

SemiconvexityAudit semiconvexity_audit(const SpaceTimeField& u, const ObstacleSpec& obs,
                                       int n_directions = 8);

}  // namespace fpo
