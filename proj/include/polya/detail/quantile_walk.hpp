#pragma once

#include <cmath>
#include <vector>

#include "polya/special_functions.hpp"

namespace polya::detail {

// Beta quantiles at an increasing grid of probabilities, walked left to
// right with secant warm starts so each Newton solve needs only a couple of
// CDF evaluations.  levels.back() == 1 yields exactly 1.
inline std::vector<double> quantile_walk(const BetaParams& p, const std::vector<double>& levels) {
    std::vector<double> x(levels.size());
    double xp = 0.0, up = 0.0;   // previous point
    double xpp = 0.0, upp = 0.0; // point before that
    bool have_two = false;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double u = levels[k];
        double xk;
        if (u <= 0.0) {
            xk = 0.0;
        } else if (u >= 1.0) {
            xk = 1.0;
        } else if (!have_two || !(up > upp) || !(u > up)) {
            xk = beta_quantile(p, u);
        } else {
            double guess = xp + (xp - xpp) * (u - up) / (up - upp);
            if (!(guess > xp) || !(guess < 1.0)) guess = 0.5 * (xp + 1.0);
            xk = beta_quantile(p, u, xp, 1.0, guess);
        }
        if (k > 0 && xk < x[k - 1]) xk = x[k - 1]; // guard against tolerance jitter
        x[k] = xk;
        xpp = xp;
        upp = up;
        xp = xk;
        up = u;
        have_two = k > 0;
    }
    return x;
}

} // namespace polya::detail
