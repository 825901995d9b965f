#include "polya/law_tables.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "polya/detail/format.hpp"
#include "polya/urn_model.hpp"

namespace polya {

namespace {

double q_clamped(const ResidualTable& r, std::int64_t j) {
    if (j <= 0) return 0.0;
    if (j >= r.n) return 1.0;
    return r.Q[static_cast<std::size_t>(j)];
}

void require_n(const LawTables& t, std::int64_t least, const char* who) {
    if (t.law.n < least)
        throw std::invalid_argument(std::string(who) + ": n must be at least " +
                                    std::to_string(least));
}

} // namespace

LawTables build_tables(const BetaParams& p, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("build_tables: n must be at least 1");
    LawTables t;
    t.law = exact_pmf_two_colour(p, n);
    ResidualTable& r = t.residual;
    r.n = n;
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    r.Q.resize(m);
    r.R.resize(m);
    r.deltaR.assign(m, 0.0);
    r.deltaQ.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        r.Q[k] = beta_cdf(p, static_cast<double>(k) / static_cast<double>(n));
        r.R[k] = t.law.cum[k] - r.Q[k];
        if (k > 0) {
            r.deltaR[k] = r.R[k] - r.R[k - 1];
            r.deltaQ[k] = r.Q[k] - r.Q[k - 1];
        }
    }
    return t;
}

double probe_lemma_L1(const BetaParams& p, std::int64_t n) {
    return probe_lemma_L1(build_tables(p, n));
}

double probe_lemma_L1(const LawTables& t) {
    require_n(t, 4, "probe_lemma_L1");
    const std::int64_t n = t.law.n;
    const double alpha = t.law.params.alpha, beta = t.law.params.beta;
    const double na = std::pow(static_cast<double>(n), alpha);
    const double nb = std::pow(static_cast<double>(n), beta);
    double worst = 0.0;
    for (std::int64_t k = 1; k <= 3 * n / 4; ++k) {
        const double dr = std::fabs(t.residual.deltaR[static_cast<std::size_t>(k)]);
        worst = std::max(worst, dr * na * std::pow(static_cast<double>(k), 2.0 - alpha));
    }
    for (std::int64_t k = (n + 3) / 4; k <= n; ++k) {
        const double dr = std::fabs(t.residual.deltaR[static_cast<std::size_t>(k)]);
        worst = std::max(worst, dr * nb * std::pow(static_cast<double>(n - k + 1), 2.0 - beta));
    }
    return worst;
}

double probe_lemma_L2(const BetaParams& p, std::int64_t n) {
    return probe_lemma_L2(build_tables(p, n));
}

double probe_lemma_L2(const LawTables& t) {
    require_n(t, 4, "probe_lemma_L2");
    const std::int64_t n = t.law.n;
    const double alpha = t.law.params.alpha, beta = t.law.params.beta;
    const double na = std::pow(static_cast<double>(n), alpha);
    const double nb = std::pow(static_cast<double>(n), beta);
    double worst = 0.0;
    for (std::int64_t k = 0; k <= n / 2; ++k) {
        const double rr = std::fabs(t.residual.R[static_cast<std::size_t>(k)]);
        worst = std::max(worst, rr * na / std::pow(static_cast<double>(k + 1), alpha - 1.0));
    }
    for (std::int64_t k = (n + 1) / 2; k <= n; ++k) {
        const double rr = std::fabs(t.residual.R[static_cast<std::size_t>(k)]);
        worst = std::max(worst, rr * nb / std::pow(static_cast<double>(n - k + 1), beta - 1.0));
    }
    for (std::int64_t k = 1; k <= n - 1; ++k) {
        const double f = beta_pdf(t.law.params, static_cast<double>(k) / static_cast<double>(n));
        if (f < 1e-300) continue;
        const double rr = std::fabs(t.residual.R[static_cast<std::size_t>(k)]);
        worst = std::max(worst, rr * static_cast<double>(n) / f);
    }
    return worst;
}

std::int64_t min_K_lemma_L3(const BetaParams& p, std::int64_t n) {
    return min_K_lemma_L3(build_tables(p, n));
}

std::int64_t min_K_lemma_L3(const LawTables& t) {
    require_n(t, 1, "min_K_lemma_L3");
    const std::int64_t n = t.law.n;
    for (std::int64_t K = 0; K <= n; ++K) {
        bool ok = true;
        for (std::int64_t k = 0; k <= n && ok; ++k) {
            const double P = t.law.cum[static_cast<std::size_t>(k)];
            ok = q_clamped(t.residual, k - K) <= P && P <= q_clamped(t.residual, k + K);
        }
        if (ok) return K;
    }
    return n; // unreachable: K = n always satisfies the clamped sandwich
}

void write_csv(const LawTables& t, std::ostream& out) {
    out << "k,p,P,Q,R,dR\n";
    for (std::size_t k = 0; k < t.law.probs.size(); ++k) {
        out << k << ',' << detail::format_double(t.law.probs[k]) << ','
            << detail::format_double(t.law.cum[k]) << ','
            << detail::format_double(t.residual.Q[k]) << ','
            << detail::format_double(t.residual.R[k]) << ','
            << detail::format_double(t.residual.deltaR[k]) << '\n';
    }
}

} // namespace polya
