#include "fpo/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fpo/kernels.hpp"

namespace fpo {

namespace {

double beta_eps(double z, double eps) {
    // exp(-z/eps), clamped so line-search excursions cannot overflow.
    return std::exp(std::min(-z / eps, 60.0));
}

std::vector<double> obstacle_samples(const ObstacleSpec& obs, const SpaceGrid& sg) {
    std::vector<double> phi(sg.n_x);
    for (int i = 0; i < sg.n_x; ++i) phi[i] = obs.phi(sg.x(i));
    return phi;
}

bool far_field_contact(std::span<const double> v, double threshold, int margin = 4) {
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < margin; ++i)
        if (v[i] > threshold || v[n - 1 - i] > threshold) return false;
    return true;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(omega > 0.0 && omega < 2.0))
        throw std::invalid_argument("SolverConfig: relaxation omega must lie in (0, 2)");
    if (!(tol_c > 0.0)) throw std::invalid_argument("SolverConfig: tol_c must be > 0");
    if (!(eps_pen > 0.0)) throw std::invalid_argument("SolverConfig: eps_pen must be > 0");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
}

double contact_threshold(double tol_c, double h, double s) {
    return std::max(10.0 * tol_c, std::pow(h, 1.0 + s));
}

std::vector<double> moving_term(const ObstacleSpec& obs, FracParams p,
                                const SpaceGrid& grid) {
    const double s = p.s;
    const double twos = 2.0 * s;
    const double h = grid.h;
    const double c = calibrate_constant(s);
    const double L = 0.5 * (grid.x_max - grid.x_min);
    const int k3 = std::max(8, static_cast<int>(std::lround(3.0 * L / h)));
    const double z_far = (k3 + 0.5) * h;
    const double near =
        std::pow(0.5 * h, 2.0 - twos) / ((2.0 - twos) * h * h);

    std::vector<double> out(grid.n_x);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < grid.n_x; ++i) {
        const double x = grid.x(i);
        const double px = obs.phi(x);
        double acc = near * (2.0 * px - obs.phi(x + h) - obs.phi(x - h));
        for (int k = 1; k <= k3; ++k) {
            const double z = k * h;
            acc += h * std::pow(z, -1.0 - twos) *
                   (2.0 * px - obs.phi(x + z) - obs.phi(x - z));
        }
        // Tail beyond z_far on the linear extrapolation of phi at x +- z_far.
        const double alpha = 2.0 * px - obs.phi(x + z_far) - obs.phi(x - z_far);
        const double slope = obs.derivative(1, x + z_far) - obs.derivative(1, x - z_far);
        acc += alpha * std::pow(z_far, -twos) / twos -
               slope * std::pow(z_far, 1.0 - twos) / ((twos - 1.0) * twos);
        out[i] = c * acc;
    }
    return out;
}

SolveResult solve_penalized(const ObstacleSpec& obs, FracParams p, const SpaceGrid& sg,
                            const TimeGrid& tg, const SolverConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const int n = sg.n_x;
    const double dt = tg.dt;
    const double eps = cfg.eps_pen;

    const SpectralOperator spectral(p, n, sg.h);
    const std::vector<double> psi = moving_term(obs, p, sg);
    const std::vector<double> phi = obstacle_samples(obs, sg);

    SolveResult res(sg, tg);
    res.scheme = SolveResult::Scheme::Penalized;
    res.step_residual.assign(tg.n_t, 0.0);
    res.step_iterations.assign(tg.n_t, 0);

    // March the gap v = u - phi: identical update, but v decays at the edges
    // so the periodic spectral inversion sees no obstacle wraparound.
    std::vector<double> v(n, eps);
    for (int i = 0; i < n; ++i) res.u.at(i, 0) = phi[i] + eps;

    std::vector<double> rhs(n), fvec(n), wtrial(n), grad(n);
    for (int step = 0; step < tg.n_t; ++step) {
        double vmin = v[0];
        for (double vi : v) vmin = std::min(vmin, vi);
        const bool stiff = dt / eps * beta_eps(vmin, eps) > 1.0;

        if (!stiff) {
            for (int i = 0; i < n; ++i) rhs[i] = v[i] + dt * (beta_eps(v[i], eps) - psi[i]);
            v = spectral.solve_shifted(rhs, dt);
            res.step_iterations[step] = 0;
            res.step_residual[step] = 0.0;
        } else {
            // Damped Newton on F(w) = (I + dt L) w - dt beta(w) - (v^k - dt psi).
            std::vector<double> w = v;
            for (int i = 0; i < n; ++i) rhs[i] = v[i] - dt * psi[i];
            auto eval_F = [&](const std::vector<double>& ww, std::vector<double>& out) {
                auto Lw = spectral.apply(ww);
                double norm = 0.0;
                for (int i = 0; i < n; ++i) {
                    out[i] = ww[i] + dt * Lw[i] - dt * beta_eps(ww[i], eps) - rhs[i];
                    norm = std::max(norm, std::abs(out[i]));
                }
                return norm;
            };
            double fnorm = eval_F(w, fvec);
            int it = 0;
            const int newton_cap = std::min(cfg.max_iters, 200);
            while (fnorm > cfg.penalty_tol && it < newton_cap) {
                // J = (I + dt L) + dt diag(exp(-w/eps)/eps), SPD; solve by PCG
                // with the spectral resolvent as preconditioner.
                std::vector<double> dpen(n);
                for (int i = 0; i < n; ++i) dpen[i] = dt * beta_eps(w[i], eps) / eps;
                std::vector<double> x(n, 0.0), r(n), z(n), pdir(n), Jp(n);
                for (int i = 0; i < n; ++i) r[i] = -fvec[i];
                z = spectral.solve_shifted(r, dt);
                pdir = z;
                double rz = 0.0;
                for (int i = 0; i < n; ++i) rz += r[i] * z[i];
                for (int cg = 0; cg < 64; ++cg) {
                    auto Lp = spectral.apply(pdir);
                    double pJp = 0.0;
                    for (int i = 0; i < n; ++i) {
                        Jp[i] = pdir[i] + dt * Lp[i] + dpen[i] * pdir[i];
                        pJp += pdir[i] * Jp[i];
                    }
                    const double alpha = rz / pJp;
                    double rmax = 0.0;
                    for (int i = 0; i < n; ++i) {
                        x[i] += alpha * pdir[i];
                        r[i] -= alpha * Jp[i];
                        rmax = std::max(rmax, std::abs(r[i]));
                    }
                    if (rmax < 1e-13 * (1.0 + fnorm)) break;
                    z = spectral.solve_shifted(r, dt);
                    double rz_new = 0.0;
                    for (int i = 0; i < n; ++i) rz_new += r[i] * z[i];
                    for (int i = 0; i < n; ++i) pdir[i] = z[i] + (rz_new / rz) * pdir[i];
                    rz = rz_new;
                }
                double tstep = 1.0;
                double fnew = fnorm;
                while (tstep > 1.0 / 1024.0) {
                    for (int i = 0; i < n; ++i) wtrial[i] = w[i] + tstep * x[i];
                    fnew = eval_F(wtrial, grad);
                    if (fnew <= (1.0 - 0.25 * tstep) * fnorm) break;
                    tstep *= 0.5;
                }
                if (fnew >= fnorm && fnorm > cfg.penalty_tol)
                    throw std::runtime_error("solve_penalized: Newton stalled at step " +
                                             std::to_string(step) +
                                             " (|F| = " + std::to_string(fnorm) + ")");
                w = wtrial;
                fvec = grad;
                fnorm = fnew;
                ++it;
            }
            if (fnorm > cfg.penalty_tol)
                throw std::runtime_error(
                    "solve_penalized: Newton did not converge at step " +
                    std::to_string(step) + " (|F| = " + std::to_string(fnorm) + ")");
            v = w;
            res.step_iterations[step] = it;
            res.step_residual[step] = fnorm;
        }
        for (int i = 0; i < n; ++i) res.u.at(i, step + 1) = phi[i] + v[i];
    }

    // The penalty keeps v an O(eps) distance from the constraint, so the
    // edge-contact check carries an eps allowance.
    const double theta = contact_threshold(cfg.tol_c, sg.h, p.s);
    res.far_field_contact_ok = far_field_contact(v, theta + 2.0 * eps, 4);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

std::vector<double> psor_solve(std::span<const double> diagA, std::span<const double> offA,
                               std::span<const double> b, std::span<const double> lb,
                               std::span<const double> lb0, std::span<const double> w0,
                               double omega, double tol, int max_iters,
                               double residual_scale, PsorStats* stats) {
    const int n = static_cast<int>(b.size());
    std::vector<double> w(w0.begin(), w0.end());
    // Maintained residual r = b - A w; column updates use the symmetry of A.
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
        double acc = diagA[i] * w[i];
        for (int k = 1; k <= i; ++k) acc -= offA[k] * w[i - k];
        for (int k = 1; k <= n - 1 - i; ++k) acc -= offA[k] * w[i + k];
        r[i] = b[i] - acc;
    }

    int sweep = 0;
    double maxupd = 0.0, comp = 0.0;
    double best = std::numeric_limits<double>::max();
    int since_best = 0;
    for (; sweep < max_iters; ++sweep) {
        maxupd = 0.0;
        for (int i = 0; i < n; ++i) {
            const double delta = omega * r[i] / diagA[i];
            const double wn = std::max(lb[i], w[i] + delta);
            const double d = wn - w[i];
            if (d != 0.0) {
                w[i] = wn;
                r[i] -= d * diagA[i];
                for (int k = 1; k <= i; ++k) r[i - k] += d * offA[k];
                for (int k = 1; k <= n - 1 - i; ++k) r[i + k] += d * offA[k];
            }
            maxupd = std::max(maxupd, std::abs(d));
        }
        comp = 0.0;
        for (int i = 0; i < n; ++i)
            comp = std::max(comp,
                            std::abs(std::min(-r[i] / residual_scale, w[i] - lb0[i])));
        if (maxupd < tol && comp <= tol) break;
        if (maxupd < best * 0.999) {
            best = maxupd;
            since_best = 0;
        } else if (++since_best > 512) {
            throw std::runtime_error("psor_solve: stalled at sweep " +
                                     std::to_string(sweep) + " (max update " +
                                     std::to_string(maxupd) +
                                     ", complementarity residual " +
                                     std::to_string(comp) + ")");
        }
    }
    if (sweep == max_iters)
        throw std::runtime_error("psor_solve: hit the sweep cap (max update " +
                                 std::to_string(maxupd) +
                                 ", complementarity residual " + std::to_string(comp) +
                                 ")");
    if (stats) {
        stats->sweeps = sweep + 1;
        stats->max_update = maxupd;
        stats->complementarity = comp;
    }
    return w;
}

SolveResult solve_lcp(const ObstacleSpec& obs, FracParams p, const SpaceGrid& sg,
                      const TimeGrid& tg, const SolverConfig& cfg) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const int n = sg.n_x;
    const double dt = tg.dt;

    const QuadratureOperator quad(p, sg, FarField::ZeroExtension);
    const std::vector<double> psi = moving_term(obs, p, sg);
    const std::vector<double> phi = obstacle_samples(obs, sg);

    // A = I + dt K in gap variables, symmetric Toeplitz + positional diagonal.
    std::vector<double> offA(n, 0.0), diagA(n);
    for (int k = 1; k < n; ++k) offA[k] = dt * quad.offdiag()[k];
    for (int i = 0; i < n; ++i) diagA[i] = 1.0 + dt * quad.diag()[i];

    SolveResult res(sg, tg);
    res.scheme = SolveResult::Scheme::Lcp;
    res.step_residual.assign(tg.n_t, 0.0);
    res.step_iterations.assign(tg.n_t, 0);

    std::vector<double> v(n, 0.0);  // u(., 0) = phi
    const std::vector<double> zeros(n, 0.0);
    for (int i = 0; i < n; ++i) res.u.at(i, 0) = phi[i];

    std::vector<double> b(n);
    for (int step = 0; step < tg.n_t; ++step) {
        for (int i = 0; i < n; ++i) b[i] = v[i] - dt * psi[i];
        // Warm start at the previous slice. The LCP solution is monotone in b
        // (A is an M-matrix, b nondecreasing step to step), so the previous
        // slice is also a valid lower bound; projecting onto it keeps the
        // discrete solution nondecreasing in time exactly.
        PsorStats stats;
        try {
            v = psor_solve(diagA, offA, b, v, zeros, v, cfg.omega, cfg.tol_c,
                           cfg.max_iters, dt, &stats);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("solve_lcp: step " + std::to_string(step) + ": " +
                                     e.what());
        }
        res.step_iterations[step] = stats.sweeps;
        res.step_residual[step] = stats.complementarity;
        for (int i = 0; i < n; ++i) res.u.at(i, step + 1) = phi[i] + v[i];
    }

    const double theta = contact_threshold(cfg.tol_c, sg.h, p.s);
    res.far_field_contact_ok = far_field_contact(v, theta, 4);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

double ComplementarityResidual::max_abs_rmin() const {
    double m = 0.0;
    for (double v : rmin) m = std::max(m, std::abs(v));
    return m;
}

ComplementarityResidual residual_complementarity(const SpaceTimeField& u,
                                                 const ObstacleSpec& obs, FracParams p,
                                                 OperatorChoice choice) {
    const SpaceGrid& sg = u.space();
    const TimeGrid& tg = u.time();
    if (tg.n_levels() < 2)
        throw std::invalid_argument("residual_complementarity: need >= 2 time slices");
    const int n = sg.n_x;
    const double dt = tg.dt;
    const std::vector<double> psi = moving_term(obs, p, sg);
    const std::vector<double> phi = obstacle_samples(obs, sg);

    const QuadratureOperator quad(p, sg, FarField::ZeroExtension);
    const SpectralOperator spectral(p, n, sg.h);

    ComplementarityResidual out;
    out.n_x = n;
    out.n_t = tg.n_t;
    out.r1.resize(static_cast<size_t>(n) * tg.n_t);
    out.r2.resize(out.r1.size());
    out.rmin.resize(out.r1.size());

    std::vector<double> vj(n), vjm(n);
    for (int j = 1; j <= tg.n_t; ++j) {
        for (int i = 0; i < n; ++i) {
            vj[i] = u.at(i, j) - phi[i];
            vjm[i] = u.at(i, j - 1) - phi[i];
        }
        const std::vector<double> Kv =
            choice == OperatorChoice::Quadrature ? quad.apply(vj) : spectral.apply(vj);
        for (int i = 0; i < n; ++i) {
            const size_t idx = static_cast<size_t>(j - 1) * n + i;
            out.r1[idx] = (vj[i] - vjm[i]) / dt + Kv[i] + psi[i];
            out.r2[idx] = vj[i];
            out.rmin[idx] = std::min(out.r1[idx], out.r2[idx]);
        }
    }
    return out;
}

}  // namespace fpo
