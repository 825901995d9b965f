#include "polya/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "polya/coupling.hpp"
#include "polya/detail/compensated.hpp"
#include "polya/detail/quadrature.hpp"
#include "polya/detail/quantile_walk.hpp"

namespace polya {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_inputs(const DiscreteLaw& law, const BetaParams& limit) {
    validate(limit);
    if (law.n < 1)
        throw std::invalid_argument("metrics: the law must cover at least one draw (n >= 1)");
    if (law.cum.size() != static_cast<std::size_t>(law.n) + 1)
        throw std::invalid_argument("metrics: malformed law (cum size mismatch)");
}

// Partial first moment: integral of t f(t) over (0, x].
double partial_m1(const BetaParams& p, double x) {
    return p.alpha / (p.alpha + p.beta) * beta_cdf({p.alpha + 1.0, p.beta}, x);
}

// Partial second moment: integral of t^2 f(t) over (0, x].
double partial_m2(const BetaParams& p, double x) {
    return p.alpha * (p.alpha + 1.0) / ((p.alpha + p.beta) * (p.alpha + p.beta + 1.0)) *
           beta_cdf({p.alpha + 2.0, p.beta}, x);
}

// Supremum over the quantile domain: on each segment the discrete quantile
// is k/n while the Beta quantile sweeps [x_{k-1}, x_k], so the segment sup
// sits at an endpoint.
double linf_from_walk(const DiscreteLaw& law, const std::vector<double>& x) {
    const double nd = static_cast<double>(law.n);
    double worst = 0.0;
    for (std::int64_t k = 0; k <= law.n; ++k) {
        const double a = static_cast<double>(k) / nd;
        const double xlo = k == 0 ? 0.0 : x[static_cast<std::size_t>(k) - 1];
        const double xhi = x[static_cast<std::size_t>(k)];
        worst = std::max({worst, std::fabs(a - xlo), std::fabs(a - xhi)});
    }
    return worst;
}

DistanceReport minimal_l1_exact(const DiscreteLaw& law, const BetaParams& limit,
                                const std::vector<double>& x) {
    const std::int64_t n = law.n;
    const double nd = static_cast<double>(n);
    detail::NeumaierSum sum;
    double m1_lo = 0.0; // partial_m1 at the segment's lower x endpoint
    for (std::int64_t k = 0; k <= n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        const double ulo = k == 0 ? 0.0 : law.cum[ks - 1];
        const double uhi = law.cum[ks];
        const double xhi = x[ks];
        const double m1_hi = partial_m1(limit, xhi);
        if (uhi > ulo) {
            const double a = static_cast<double>(k) / nd;
            const double xlo = k == 0 ? 0.0 : x[ks - 1];
            if (xhi <= a) {
                sum.add(a * (uhi - ulo) - (m1_hi - m1_lo));
            } else if (xlo >= a) {
                sum.add((m1_hi - m1_lo) - a * (uhi - ulo));
            } else {
                double ustar = beta_cdf(limit, a);
                ustar = std::min(std::max(ustar, ulo), uhi);
                const double m1_a = partial_m1(limit, a);
                sum.add(a * (ustar - ulo) - (m1_a - m1_lo));
                sum.add((m1_hi - m1_a) - a * (uhi - ustar));
            }
        }
        m1_lo = m1_hi;
    }
    DistanceReport r;
    r.metric = Metric::lp;
    r.p = 1.0;
    r.n = n;
    r.params = limit;
    r.value = std::max(sum.value(), 0.0);
    r.error_bound = (2.0 * static_cast<double>(n) + 4.0) * 5e-14;
    r.notes = "comonotone coupling; exact partial-moment integration";
    return r;
}

DistanceReport minimal_l2_exact(const DiscreteLaw& law, const BetaParams& limit,
                                const std::vector<double>& x) {
    const std::int64_t n = law.n;
    const double nd = static_cast<double>(n);
    detail::NeumaierSum sum;
    double m1_lo = 0.0, m2_lo = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        const double ulo = k == 0 ? 0.0 : law.cum[ks - 1];
        const double uhi = law.cum[ks];
        const double xhi = x[ks];
        const double m1_hi = partial_m1(limit, xhi);
        const double m2_hi = partial_m2(limit, xhi);
        if (uhi > ulo) {
            const double a = static_cast<double>(k) / nd;
            // integral of (a - Q(u))^2 du expands into partial moments of W
            sum.add(a * a * (uhi - ulo) - 2.0 * a * (m1_hi - m1_lo) + (m2_hi - m2_lo));
        }
        m1_lo = m1_hi;
        m2_lo = m2_hi;
    }
    DistanceReport r;
    r.metric = Metric::lp;
    r.p = 2.0;
    r.n = n;
    r.params = limit;
    const double s = std::max(sum.value(), 0.0);
    r.value = std::sqrt(s);
    const double err_s = 1e-13;
    r.error_bound = r.value > 0.0 ? 0.5 * err_s / r.value : err_s;
    r.notes = "comonotone coupling; exact partial-moment integration";
    return r;
}

} // namespace

std::string metric_token(Metric m, double p) {
    switch (m) {
    case Metric::ks:
        return "ks";
    case Metric::levy:
        return "levy";
    case Metric::lp:
        if (p == 1.0) return "l1";
        if (p == 2.0) return "l2";
        if (std::isinf(p)) return "linf";
        return "lp";
    }
    return "lp";
}

DistanceReport minimal_lp(const DiscreteLaw& law, const BetaParams& limit, double p) {
    check_inputs(law, limit);
    if (!(p >= 1.0))
        throw std::domain_error("minimal_lp: p must lie in [1, inf]");
    if (std::isinf(p)) {
        const std::vector<double> x = detail::quantile_walk(limit, law.cum);
        DistanceReport r;
        r.metric = Metric::lp;
        r.p = inf;
        r.n = law.n;
        r.params = limit;
        r.value = linf_from_walk(law, x);
        r.error_bound = 1e-10;
        r.notes = "comonotone coupling; segment-endpoint supremum";
        return r;
    }
    if (p == 1.0) {
        const std::vector<double> x = detail::quantile_walk(limit, law.cum);
        return minimal_l1_exact(law, limit, x);
    }
    if (p == 2.0) {
        const std::vector<double> x = detail::quantile_walk(limit, law.cum);
        return minimal_l2_exact(law, limit, x);
    }
    return detail::minimal_lp_quadrature(law, limit, p);
}

namespace detail {

DistanceReport minimal_lp_quadrature(const DiscreteLaw& law, const BetaParams& limit, double p) {
    check_inputs(law, limit);
    if (!(p >= 1.0) || std::isinf(p))
        throw std::domain_error("minimal_lp_quadrature: p must be finite and >= 1");
    const std::int64_t n = law.n;
    const double nd = static_cast<double>(n);
    const std::vector<double> x = quantile_walk(limit, law.cum);
    // Scale by the supremum so |d|^p never underflows for large p.
    const double scale = std::max(linf_from_walk(law, x), 1e-300);
    NeumaierSum sum;
    double err_total = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        const double ulo = k == 0 ? 0.0 : law.cum[ks - 1];
        const double uhi = law.cum[ks];
        if (!(uhi > ulo)) continue;
        const double a = static_cast<double>(k) / nd;
        const double xlo = k == 0 ? 0.0 : x[ks - 1];
        const double xhi = x[ks];
        // Quantile of the limit law inside this segment, warm-started from
        // linear interpolation between the known segment endpoints.
        const auto qw = [&](double u) {
            const double t = (u - ulo) / (uhi - ulo);
            double guess = xlo + t * (xhi - xlo);
            const double lo = std::max(xlo * (1.0 - 1e-12), 0.0);
            if (!(guess > lo) || !(guess < 1.0)) guess = 0.5 * (lo + 1.0);
            return beta_quantile(limit, u, lo, 1.0, guess);
        };
        const auto integrand = [&](double u) {
            return std::pow(std::fabs(a - qw(u)) / scale, p);
        };
        // Split at the crossing so each panel sees a smooth integrand.
        double usplit = ulo;
        if (xlo < a && a < xhi) {
            usplit = beta_cdf(limit, a);
            usplit = std::min(std::max(usplit, ulo), uhi);
        }
        const double abs_tol = 1e-12 * (uhi - ulo) + 1e-18;
        for (const auto& [s0, s1] : {std::pair{ulo, usplit}, std::pair{usplit, uhi}}) {
            if (!(s1 > s0)) continue;
            const QuadResult qr = integrate_adaptive(integrand, s0, s1, abs_tol, 5e-11);
            sum.add(qr.value);
            err_total += qr.error;
        }
    }
    DistanceReport r;
    r.metric = Metric::lp;
    r.p = p;
    r.n = n;
    r.params = limit;
    const double s = std::max(sum.value(), 0.0);
    r.value = scale * std::pow(s, 1.0 / p);
    // delta method: d(value)/d(s) = value / (p s)
    r.error_bound = s > 0.0 ? r.value * err_total / (p * s) + 1e-12 : 1e-12;
    r.notes = "comonotone coupling; adaptive Gauss-Kronrod in the quantile domain";
    return r;
}

} // namespace detail

DistanceReport wasserstein_l1_via_cdf(const DiscreteLaw& law, const BetaParams& limit) {
    check_inputs(law, limit);
    const std::int64_t n = law.n;
    const double nd = static_cast<double>(n);
    detail::NeumaierSum sum;
    double err_total = 0.0;
    double q_lo = 0.0; // beta_cdf at the cell's left edge
    for (std::int64_t k = 0; k < n; ++k) {
        const double a = law.cum[static_cast<std::size_t>(k)];
        const double xl = static_cast<double>(k) / nd;
        const double xr = static_cast<double>(k + 1) / nd;
        const double q_hi = beta_cdf(limit, xr);
        const auto above = [&](double t) { return a - beta_cdf(limit, t); };
        const auto below = [&](double t) { return beta_cdf(limit, t) - a; };
        const double abs_tol = 1e-13;
        if (a >= q_hi) {
            const detail::QuadResult qr = detail::integrate_adaptive(above, xl, xr, abs_tol, 1e-9);
            sum.add(qr.value);
            err_total += qr.error;
        } else if (a <= q_lo) {
            const detail::QuadResult qr = detail::integrate_adaptive(below, xl, xr, abs_tol, 1e-9);
            sum.add(qr.value);
            err_total += qr.error;
        } else {
            const double xstar = beta_quantile(limit, a, xl, xr, 0.5 * (xl + xr));
            const detail::QuadResult q1 = detail::integrate_adaptive(above, xl, xstar, abs_tol, 1e-9);
            const detail::QuadResult q2 = detail::integrate_adaptive(below, xstar, xr, abs_tol, 1e-9);
            sum.add(q1.value);
            sum.add(q2.value);
            err_total += q1.error + q2.error;
        }
        q_lo = q_hi;
    }
    DistanceReport r;
    r.metric = Metric::lp;
    r.p = 1.0;
    r.n = n;
    r.params = limit;
    r.value = std::max(sum.value(), 0.0);
    r.error_bound = err_total + static_cast<double>(n) * 2e-14;
    r.notes = "CDF-difference quadrature per lattice cell";
    return r;
}

DistanceReport ks_distance(const DiscreteLaw& law, const BetaParams& limit) {
    check_inputs(law, limit);
    const std::int64_t n = law.n;
    const double nd = static_cast<double>(n);
    double worst = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        const double q = k == 0 ? 0.0 : (k == n ? 1.0 : beta_cdf(limit, static_cast<double>(k) / nd));
        worst = std::max(worst, std::fabs(law.cum[static_cast<std::size_t>(k)] - q));
        if (k >= 1)
            worst = std::max(worst, std::fabs(law.cum[static_cast<std::size_t>(k) - 1] - q));
    }
    DistanceReport r;
    r.metric = Metric::ks;
    r.n = n;
    r.params = limit;
    r.value = worst;
    r.error_bound = 5e-13;
    r.notes = "exact supremum over jump points";
    return r;
}

DistanceReport levy_distance(const DiscreteLaw& law, const BetaParams& limit) {
    check_inputs(law, limit);
    const std::int64_t n = law.n;
    const double nd = static_cast<double>(n);
    // Feasibility of the diagonal band of half-width eps, checked at the
    // discrete jump points (sufficient: the discrete CDF is a step function
    // and the Beta CDF is continuous and monotone).
    const auto feasible = [&](double eps) {
        for (std::int64_t k = 0; k <= n; ++k) {
            const double fw = beta_cdf(limit, std::min(static_cast<double>(k) / nd + eps, 1.0));
            if (law.cum[static_cast<std::size_t>(k)] - fw > eps) return false;
        }
        for (std::int64_t j = 1; j <= n; ++j) {
            const double fw = beta_cdf(limit, static_cast<double>(j) / nd - eps);
            if (fw - law.cum[static_cast<std::size_t>(j) - 1] > eps) return false;
        }
        return true;
    };
    double lo = 0.0;
    double hi = ks_distance(law, limit).value + 1e-12; // d_L <= d_KS
    while (!feasible(hi) && hi < 1.0) hi *= 2.0;       // absorb rounding at the bracket edge
    hi = std::min(hi, 1.0);                            // eps = 1 is always feasible
    int iters = 0;
    while (hi - lo > 1e-10 && iters++ < 60) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    DistanceReport r;
    r.metric = Metric::levy;
    r.n = n;
    r.params = limit;
    r.value = hi;
    r.error_bound = (hi - lo) + 1e-12;
    r.notes = "bisection on [0, ks] with jump-point feasibility checks";
    return r;
}

double vector_linf_mc(const UrnParams& params, std::int64_t n, std::int64_t replicates,
                      SplitMix64& rng) {
    if (replicates < 1)
        throw std::invalid_argument("vector_linf_mc: replicates must be at least 1");
    const MulticolourCoupler coupler(params, n);
    double worst = 0.0;
    for (std::int64_t r = 0; r < replicates; ++r)
        worst = std::max(worst, coupler.sample(rng).deviation);
    return worst;
}

std::string to_json_record(const DistanceReport& r) {
    nlohmann::ordered_json j;
    j["metric"] = metric_token(r.metric, r.p);
    if (r.metric == Metric::lp && !std::isinf(r.p)) j["p"] = r.p;
    j["n"] = r.n;
    j["alpha"] = r.params.alpha;
    j["beta"] = r.params.beta;
    j["value"] = r.value;
    j["error_bound"] = r.error_bound;
    return j.dump();
}

} // namespace polya
