#pragma once

#include <cmath>
#include <cstddef>

namespace polya::detail {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK nodes).
// All nodes are interior, so the integrand is never evaluated at the
// endpoints -- important for densities that blow up there.
template <class F>
QuadResult gauss_kronrod_15(F&& f, double a, double b) {
    static const double xgk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static const double wgk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const double fc = f(c);
    double kron = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * xgk[j];
        const double fsum = f(c - x) + f(c + x);
        kron += wgk[j] * fsum;
        if (j % 2 == 1) gauss += wg[j / 2] * fsum;
    }
    QuadResult r;
    r.value = kron * h;
    r.error = std::fabs((kron - gauss) * h);
    return r;
}

// Adaptive bisection refinement until the local panel error meets
// max(abs_tol scaled by panel share, rel_tol * |panel value|).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                              int max_depth = 30) {
    struct Rec {
        static QuadResult go(F& f, double a, double b, double abs_tol, double rel_tol,
                             int depth) {
            QuadResult r = gauss_kronrod_15(f, a, b);
            if (depth <= 0 ||
                r.error <= abs_tol + rel_tol * std::fabs(r.value))
                return r;
            const double m = 0.5 * (a + b);
            QuadResult left = go(f, a, m, 0.5 * abs_tol, rel_tol, depth - 1);
            QuadResult right = go(f, m, b, 0.5 * abs_tol, rel_tol, depth - 1);
            return {left.value + right.value, left.error + right.error};
        }
    };
    if (!(a < b)) return {0.0, 0.0};
    return Rec::go(f, a, b, abs_tol, rel_tol, max_depth);
}

} // namespace polya::detail
