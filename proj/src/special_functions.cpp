#include "polya/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace polya {

namespace {

constexpr double half_log_two_pi = 0.91893853320467274178032973640562;

// Stirling tail S(y) = sum c_k / y^{2k-1}; accurate to ~1e-16 for y >= 10.
double stirling_tail(double y) {
    static const double c[8] = {
        1.0 / 12.0,   -1.0 / 360.0,     1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,  -3617.0 / 122400.0};
    const double inv = 1.0 / y;
    const double inv2 = inv * inv;
    double s = 0.0;
    for (int k = 7; k >= 0; --k) s = s * inv2 + c[k];
    return s * inv;
}

// log Gamma via Stirling, valid for x >= 10.
double log_gamma_big(double x) {
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + stirling_tail(x);
}

// log [Gamma(x+a)/Gamma(x+b)] for x+a, x+b >= 10, rearranged through log1p
// so the leading terms never cancel.
double log_gamma_ratio_big(double x, double a, double b) {
    const double d = a - b;
    const double xb = x + b;
    return (x + a - 0.5) * std::log1p(d / xb) + d * std::log(xb) - d +
           stirling_tail(x + a) - stirling_tail(xb);
}

double sample_normal(SplitMix64& rng) {
    for (;;) {
        const double u = 2.0 * rng.next_double_open() - 1.0;
        const double v = 2.0 * rng.next_double_open() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps) return h;
    }
    throw std::runtime_error("beta_cdf: continued fraction did not converge in 300 iterations");
}

} // namespace

void validate(const BetaParams& p) {
    if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
        throw std::invalid_argument("BetaParams: alpha must be positive and finite");
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
        throw std::invalid_argument("BetaParams: beta must be positive and finite");
}

void validate(const DirichletParams& p) {
    if (p.alphas.size() < 2)
        throw std::invalid_argument("DirichletParams: alphas must have at least two entries");
    for (std::size_t i = 0; i < p.alphas.size(); ++i)
        if (!(p.alphas[i] > 0.0) || !std::isfinite(p.alphas[i]))
            throw std::invalid_argument("DirichletParams: alphas[" + std::to_string(i) +
                                        "] must be positive and finite");
}

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: x must be positive");
    if (x >= 10.0) return log_gamma_big(x);
    // Shift up: Gamma(x) = Gamma(x+k) / (x (x+1) ... (x+k-1)); one log of the
    // accumulated product keeps the absolute error at a few ulps.
    double prod = 1.0;
    double y = x;
    while (y < 10.0) {
        prod *= y;
        y += 1.0;
    }
    return log_gamma_big(y) - std::log(prod);
}

double log_gamma_ratio(double x, double a, double b) {
    if (!(x + a > 0.0) || !(x + b > 0.0))
        throw std::domain_error("log_gamma_ratio: x+a and x+b must be positive");
    if (a == b) return 0.0;
    const double lo = std::min(a, b);
    double shift = 0.0;
    double factor = 1.0; // accumulates (x+b+j)/(x+a+j)
    while (x + lo + shift < 10.0) {
        factor *= (x + b + shift) / (x + a + shift);
        shift += 1.0;
    }
    return log_gamma_ratio_big(x + shift, a, b) + std::log(factor);
}

double log_beta(const BetaParams& p) {
    validate(p);
    return log_gamma(p.alpha) + log_gamma(p.beta) - log_gamma(p.alpha + p.beta);
}

double beta_pdf(const BetaParams& p, double x) {
    validate(p);
    if (!(x > 0.0) || !(x < 1.0))
        throw std::domain_error("beta_pdf: x must lie strictly inside (0,1)");
    return std::exp((p.alpha - 1.0) * std::log(x) + (p.beta - 1.0) * std::log1p(-x) -
                    log_beta(p));
}

double beta_cdf(const BetaParams& p, double x) {
    validate(p);
    if (std::isnan(x)) throw std::domain_error("beta_cdf: x is NaN");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = p.alpha, b = p.beta;
    const double lfront = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    // Symmetry switch keeps the continued fraction in its fast-converging
    // region on either side of the mean.
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(lfront) * beta_cf(a, b, x) / a;
    return 1.0 - std::exp(lfront) * beta_cf(b, a, 1.0 - x) / b;
}

double beta_quantile(const BetaParams& p, double u) {
    validate(p);
    if (!(u >= 0.0) || !(u <= 1.0))
        throw std::domain_error("beta_quantile: u must lie in [0,1]");
    return beta_quantile(p, u, 0.0, 1.0, p.alpha / (p.alpha + p.beta));
}

double beta_quantile(const BetaParams& p, double u, double lo, double hi, double guess) {
    validate(p);
    if (!(u >= 0.0) || !(u <= 1.0))
        throw std::domain_error("beta_quantile: u must lie in [0,1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    if (!(lo >= 0.0) || !(hi <= 1.0) || !(lo < hi))
        throw std::invalid_argument("beta_quantile: bracket [lo,hi] must be ordered within [0,1]");

    constexpr double f_tol = 1e-14;
    const double eps = std::numeric_limits<double>::epsilon();
    const double lbet = log_beta(p);
    double x = guess;
    if (!(x > lo) || !(x < hi)) x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = beta_cdf(p, x) - u;
        if (std::fabs(f) <= f_tol) return x;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        if (hi - lo <= eps * hi + 1e-300) return 0.5 * (lo + hi);
        double xn;
        const double den = (x > 0.0 && x < 1.0)
                               ? std::exp((p.alpha - 1.0) * std::log(x) +
                                          (p.beta - 1.0) * std::log1p(-x) - lbet)
                               : 0.0;
        if (den > 0.0 && std::isfinite(den))
            xn = x - f / den;
        else
            xn = 0.5 * (lo + hi);
        if (!(xn > lo) || !(xn < hi) || xn == x) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return x;
}

double sample_gamma(double shape, SplitMix64& rng) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw std::domain_error("sample_gamma: shape must be positive and finite");
    if (shape < 1.0) {
        // Boost: draw at shape+1 and thin by U^{1/shape}.
        const double u = rng.next_double_open();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze method.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = sample_normal(rng);
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_double_open();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
        if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_beta(const BetaParams& p, SplitMix64& rng) {
    validate(p);
    for (;;) {
        const double g1 = sample_gamma(p.alpha, rng);
        const double g2 = sample_gamma(p.beta, rng);
        const double s = g1 + g2;
        if (s > 0.0) return g1 / s;
    }
}

std::vector<double> sample_dirichlet(const DirichletParams& p, SplitMix64& rng) {
    validate(p);
    std::vector<double> g(p.alphas.size());
    for (;;) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = sample_gamma(p.alphas[i], rng);
            s += g[i];
        }
        if (s > 0.0) {
            for (double& v : g) v /= s;
            return g;
        }
    }
}

} // namespace polya
