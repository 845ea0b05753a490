#pragma once

#include <stdexcept>

namespace fpo {

/// Fractional exponent s and the extension weight a = 1 - 2s.
///
/// The whole code base assumes s in (1/2, 1): space then scales slower than
/// time under the parabolic rescaling (x, t) -> (rx, r^{2s} t), and payoffs
/// with linear growth stay integrable against the kernel |z|^{-1-2s}.
struct FracParams {
    double s;  ///< exponent of (-Delta)^s
    double a;  ///< extension weight, a = 1 - 2s, in (-1, 0)

    explicit FracParams(double s_) : s(s_), a(1.0 - 2.0 * s_) {
        if (!(s > 0.5 && s < 1.0))
            throw std::invalid_argument("FracParams: s must lie in (1/2, 1)");
    }
};

}  // namespace fpo
