#pragma once

#include <cstdint>
#include <string>

#include "polya/discrete_law.hpp"
#include "polya/rng.hpp"
#include "polya/urn_model.hpp"

namespace polya {

enum class Metric { lp, ks, levy };

// One computed distance between a draw-count law (scaled to [0,1]) and its
// Beta limit, with an honest bound on the numerical error of the value.
struct DistanceReport {
    Metric metric = Metric::lp;
    double p = 1.0; // order of the lp metric; ignored for ks/levy
    std::int64_t n = 0;
    BetaParams params;
    double value = 0.0;
    double error_bound = 0.0;
    std::string notes;
};

// Canonical short name: l1, l2, linf, lp, ks, levy.
std::string metric_token(Metric m, double p);

// Minimal-Lp distance realized by the comonotone (quantile) coupling:
// ( integral_0^1 |Q_X(u) - Q_W(u)|^p du )^{1/p} for finite p, the segment
// supremum for p = infinity.  p = 1 and p = 2 are evaluated exactly through
// partial-moment identities of the Beta CDF; other finite p fall back to
// adaptive quadrature in the quantile domain, where the integrand is
// bounded even when the density is not.
DistanceReport minimal_lp(const DiscreteLaw& law, const BetaParams& limit, double p);

// Independent cross-check of the p = 1 value through the classical identity
// l1 = integral |F_X - F_W| over [0,1], evaluated cell by cell in x with
// adaptive quadrature split at the sign change.
DistanceReport wasserstein_l1_via_cdf(const DiscreteLaw& law, const BetaParams& limit);

// Exact Kolmogorov-Smirnov distance: the supremum lives at the jump points,
// max_k max(|P_k - Q_k|, |P_k - Q_{k+1}|) with Q_{n+1} = 1.
DistanceReport ks_distance(const DiscreteLaw& law, const BetaParams& limit);

// Levy distance by bisection on [0, d_KS]; feasibility of a candidate
// epsilon is checked only at the jump points and their epsilon-shifts.
DistanceReport levy_distance(const DiscreteLaw& law, const BetaParams& limit);

// Empirical upper bound on the vector l-infinity transport cost: the
// largest |Y - nW|_1 deviation seen across coupled replicates.  This is a
// coupling witness, not the exact metric.
double vector_linf_mc(const UrnParams& params, std::int64_t n, std::int64_t replicates,
                      SplitMix64& rng);

// JSON record {metric, p?, n, alpha, beta, value, error_bound}; "p" is
// emitted only for finite-p lp metrics.
std::string to_json_record(const DistanceReport& r);

namespace detail {
// Quadrature route for any finite p >= 1 (the dispatch target for generic
// p, exposed so tests can cross-validate it against the exact p = 1, 2
// paths).
DistanceReport minimal_lp_quadrature(const DiscreteLaw& law, const BetaParams& limit, double p);
} // namespace detail

} // namespace polya
