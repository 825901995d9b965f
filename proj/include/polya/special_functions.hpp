#pragma once

#include <vector>

#include "polya/rng.hpp"

namespace polya {

// Parameters of a Beta(alpha, beta) distribution.
struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
};

// Parameters of a Dirichlet distribution on the simplex.
struct DirichletParams {
    std::vector<double> alphas;
};

// Throw std::invalid_argument naming the offending field if the parameters
// are not finite and strictly positive.
void validate(const BetaParams& p);
void validate(const DirichletParams& p);

// log Gamma(x) for x > 0.  Stirling series for large arguments, recurrence
// shift below; absolute error < 1e-13 on [1e-3, 32] and relative error
// < 1e-13 beyond.
double log_gamma(double x);

// log [ Gamma(x + a) / Gamma(x + b) ], computed without cancellation when
// x is large.  Requires x + a > 0 and x + b > 0.
double log_gamma_ratio(double x, double a, double b);

// log B(alpha, beta) = log Gamma(alpha) + log Gamma(beta) - log Gamma(alpha+beta).
double log_beta(const BetaParams& p);

// Density of Beta(alpha, beta) at x strictly inside (0,1); endpoints throw
// std::domain_error (the density may be unbounded there).
double beta_pdf(const BetaParams& p, double x);

// Regularized incomplete beta function I_x(alpha, beta); x outside [0,1]
// is clamped.  Continued-fraction evaluation, absolute error ~1e-14.
double beta_cdf(const BetaParams& p, double x);

// Inverse of beta_cdf in its first argument: smallest x with I_x >= u.
// u must lie in [0,1].  Safeguarded Newton iteration.
double beta_quantile(const BetaParams& p, double u);

// Warm-start variant: caller supplies a bracket [lo, hi] known to contain
// the root and an initial guess inside it.  Used by quadrature loops that
// walk through ordered quantiles.
double beta_quantile(const BetaParams& p, double u, double lo, double hi, double guess);

// Gamma(shape, 1) variate; shape must be finite and positive.
double sample_gamma(double shape, SplitMix64& rng);

// Beta(alpha, beta) variate via two gamma draws.
double sample_beta(const BetaParams& p, SplitMix64& rng);

// Dirichlet variate: normalized vector of independent gamma draws.
std::vector<double> sample_dirichlet(const DirichletParams& p, SplitMix64& rng);

} // namespace polya
