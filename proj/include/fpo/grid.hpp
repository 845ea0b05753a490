#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fpo {

/// Uniform spatial grid on [x_min, x_max], both endpoints included.
struct SpaceGrid {
    double x_min;
    double x_max;
    int n_x;
    double h;

    SpaceGrid(double x_min_, double x_max_, int n_x_)
        : x_min(x_min_), x_max(x_max_), n_x(n_x_),
          h((x_max_ - x_min_) / (n_x_ - 1)) {
        if (n_x < 16) throw std::invalid_argument("SpaceGrid: n_x must be >= 16");
        if (!(x_min < x_max)) throw std::invalid_argument("SpaceGrid: x_min must be < x_max");
    }

    double x(int i) const { return x_min + i * h; }

    /// Nearest node index, clamped to the grid.
    int nearest(double x0) const {
        int i = static_cast<int>(std::lround((x0 - x_min) / h));
        return std::clamp(i, 0, n_x - 1);
    }
};

/// Uniform time grid: n_t steps of size dt = t_final / n_t, levels t_j = j dt,
/// j = 0..n_t (so n_t + 1 stored levels).
struct TimeGrid {
    double t_final;
    int n_t;
    double dt;

    TimeGrid(double t_final_, int n_t_)
        : t_final(t_final_), n_t(n_t_), dt(t_final_ / n_t_) {
        if (n_t < 2) throw std::invalid_argument("TimeGrid: n_t must be >= 2");
        if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
    }

    double t(int j) const { return j * dt; }
    int n_levels() const { return n_t + 1; }

    int nearest(double t0) const {
        int j = static_cast<int>(std::lround(t0 / dt));
        return std::clamp(j, 0, n_t);
    }
};

/// Sampled values on a space x time grid. Slices are contiguous in space:
/// value(i, j) = values[j * n_x + i].
class SpaceTimeField {
public:
    SpaceTimeField(const SpaceGrid& sg, const TimeGrid& tg)
        : sg_(sg), tg_(tg), values_(static_cast<size_t>(sg.n_x) * tg.n_levels(), 0.0) {}

    const SpaceGrid& space() const { return sg_; }
    const TimeGrid& time() const { return tg_; }

    double& at(int i, int j) { return values_[static_cast<size_t>(j) * sg_.n_x + i]; }
    double at(int i, int j) const { return values_[static_cast<size_t>(j) * sg_.n_x + i]; }

    std::span<double> slice(int j) {
        return {values_.data() + static_cast<size_t>(j) * sg_.n_x, static_cast<size_t>(sg_.n_x)};
    }
    std::span<const double> slice(int j) const {
        return {values_.data() + static_cast<size_t>(j) * sg_.n_x, static_cast<size_t>(sg_.n_x)};
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    /// Bilinear interpolation in (x, t); arguments must lie inside the grid box.
    double interp(double x, double t) const {
        const double fx = (x - sg_.x_min) / sg_.h;
        const double ft = t / tg_.dt;
        int i = std::clamp(static_cast<int>(std::floor(fx)), 0, sg_.n_x - 2);
        int j = std::clamp(static_cast<int>(std::floor(ft)), 0, tg_.n_t - 1);
        const double ax = std::clamp(fx - i, 0.0, 1.0);
        const double at_ = std::clamp(ft - j, 0.0, 1.0);
        return (1 - ax) * (1 - at_) * at(i, j) + ax * (1 - at_) * at(i + 1, j) +
               (1 - ax) * at_ * at(i, j + 1) + ax * at_ * at(i + 1, j + 1);
    }

private:
    SpaceGrid sg_;
    TimeGrid tg_;
    std::vector<double> values_;
};

/// Parabolic cylinder Q_r(x0, t0) = [x0 - r, x0 + r] x [t0 - r^{2s}, t0 + r^{2s}].
struct ParabolicCylinder {
    double x0;
    double t0;
    double r;
    double s;

    ParabolicCylinder(double x0_, double t0_, double r_, double s_)
        : x0(x0_), t0(t0_), r(r_), s(s_) {
        if (!(r > 0.0)) throw std::invalid_argument("ParabolicCylinder: r must be positive");
    }

    double t_extent() const { return std::pow(r, 2.0 * s); }
};

/// Inclusive index ranges of the grid nodes inside a cylinder; empty() when
/// the cylinder misses the grid entirely.
struct IndexBox {
    int i_lo = 0, i_hi = -1;
    int j_lo = 0, j_hi = -1;
    bool empty() const { return i_lo > i_hi || j_lo > j_hi; }
};

/// All grid nodes (x_i, t_j) with |x_i - x0| <= r and |t_j - t0| <= r^{2s},
/// clipped to the grid. Membership uses closed inequalities with tolerance
/// min(h, dt)/2 so nodes on the rim are kept under rounding.
inline IndexBox cylinder_indices(const ParabolicCylinder& cyl, const SpaceGrid& sg,
                                 const TimeGrid& tg) {
    const double tol = 0.5 * std::min(sg.h, tg.dt);
    const double rt = cyl.t_extent();
    IndexBox box;
    box.i_lo = static_cast<int>(std::ceil((cyl.x0 - cyl.r - tol - sg.x_min) / sg.h - 1e-12));
    box.i_hi = static_cast<int>(std::floor((cyl.x0 + cyl.r + tol - sg.x_min) / sg.h + 1e-12));
    box.j_lo = static_cast<int>(std::ceil((cyl.t0 - rt - tol) / tg.dt - 1e-12));
    box.j_hi = static_cast<int>(std::floor((cyl.t0 + rt + tol) / tg.dt + 1e-12));
    box.i_lo = std::max(box.i_lo, 0);
    box.i_hi = std::min(box.i_hi, sg.n_x - 1);
    box.j_lo = std::max(box.j_lo, 0);
    box.j_hi = std::min(box.j_hi, tg.n_t);
    return box;
}

/// Maximum of |f| over the clipped cylinder index set.
inline double sup_on_cylinder(const SpaceTimeField& f, const ParabolicCylinder& cyl) {
    const IndexBox box = cylinder_indices(cyl, f.space(), f.time());
    if (box.empty()) throw std::runtime_error("sup_on_cylinder: cylinder outside domain");
    double m = 0.0;
    for (int j = box.j_lo; j <= box.j_hi; ++j)
        for (int i = box.i_lo; i <= box.i_hi; ++i)
            m = std::max(m, std::abs(f.at(i, j)));
    return m;
}

}  // namespace fpo
