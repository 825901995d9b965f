#include "polya/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "polya/detail/compensated.hpp"
#include "polya/detail/format.hpp"
#include "polya/detail/quantile_walk.hpp"

namespace polya {

namespace {

// Smallest k with P_{m,k} >= u, by a forward scan of the two-colour count
// law driven by the pmf ratio recurrence
//   p_{m,k+1}/p_{m,k} = (m-k)(alpha+k) / ((k+1)(beta+m-k-1)).
// Runs in O(m) time and O(1) memory; the log-domain fallback kicks in when
// the first atom underflows linear scale.
std::int64_t scan_count_law(std::int64_t m, double alpha, double beta, double u) {
    if (m <= 0) return 0;
    const double md = static_cast<double>(m);
    const double lp0 = log_gamma_ratio(md, beta, alpha + beta) + log_gamma(alpha + beta) -
                       log_gamma(beta);
    std::int64_t k = 0;
    if (lp0 > -644.0) {
        double pk = std::exp(lp0);
        double cum = pk;
        while (cum < u && k < m) {
            const double kd = static_cast<double>(k);
            pk *= (md - kd) * (alpha + kd) / ((kd + 1.0) * (beta + md - kd - 1.0));
            ++k;
            cum += pk;
        }
        return k;
    }
    double lpk = lp0;
    double cum = std::exp(lpk);
    while (cum < u && k < m) {
        const double kd = static_cast<double>(k);
        lpk += std::log((md - kd) * (alpha + kd)) - std::log((kd + 1.0) * (beta + md - kd - 1.0));
        ++k;
        cum += std::exp(lpk);
    }
    return k;
}

} // namespace

MonotoneCoupling monotone_thresholds(const DiscreteLaw& law, const BetaParams& limit) {
    validate(limit);
    if (law.params.alpha != limit.alpha || law.params.beta != limit.beta)
        throw std::invalid_argument("monotone_thresholds: law and limit parameters disagree");
    MonotoneCoupling c;
    c.n = law.n;
    c.source = limit;
    const std::vector<double> x = detail::quantile_walk(limit, law.cum);
    c.thresholds.resize(x.size());
    const double nd = static_cast<double>(law.n);
    for (std::size_t k = 0; k < x.size(); ++k)
        c.thresholds[k] = nd * x[k];
    c.thresholds.back() = nd; // quantile(1) = 1 exactly
    return c;
}

std::int64_t coupling_atom(const MonotoneCoupling& c, double w) {
    const double target = static_cast<double>(c.n) * w;
    const auto it = std::lower_bound(c.thresholds.begin(), c.thresholds.end(), target);
    if (it == c.thresholds.end()) return c.n;
    return static_cast<std::int64_t>(it - c.thresholds.begin());
}

CoupledSample couple_two_colour(const MonotoneCoupling& c, SplitMix64& rng) {
    const double w = sample_beta(c.source, rng);
    const std::int64_t k = coupling_atom(c, w);
    const double nd = static_cast<double>(c.n);
    CoupledSample s;
    s.Y = {k, c.n - k};
    s.W = {w, 1.0 - w};
    s.deviation = std::fabs(static_cast<double>(k) - nd * s.W[0]) +
                  std::fabs(static_cast<double>(c.n - k) - nd * s.W[1]);
    return s;
}

MulticolourCoupler::MulticolourCoupler(const UrnParams& params, std::int64_t n)
    : params_(validate_and_normalize(params)), n_(n) {
    if (n < 0) throw std::invalid_argument("MulticolourCoupler: n must be nonnegative");
    suffix_.assign(params_.x0.size() + 1, 0.0);
    for (std::size_t j = params_.x0.size(); j-- > 0;)
        suffix_[j] = suffix_[j + 1] + params_.x0[j];
    top_ = exact_pmf_two_colour(BetaParams{params_.x0[0], suffix_[1]}, n_);
}

CoupledSample MulticolourCoupler::sample(SplitMix64& rng) const {
    const std::size_t q = params_.x0.size();
    CoupledSample s;
    s.Y.resize(q);
    s.W.resize(q);
    std::int64_t m = n_;  // draws left for colours j..q-1
    double scale = 1.0;   // limit mass left for colours j..q-1
    for (std::size_t j = 0; j + 1 < q; ++j) {
        const BetaParams level{params_.x0[j], suffix_[j + 1]};
        const double z = sample_beta(level, rng);
        const double u = beta_cdf(level, z);
        std::int64_t k;
        if (j == 0) {
            const auto it = std::lower_bound(top_.cum.begin(), top_.cum.end(), u);
            k = it == top_.cum.end() ? n_ : static_cast<std::int64_t>(it - top_.cum.begin());
        } else {
            k = scan_count_law(m, level.alpha, level.beta, u);
        }
        s.Y[j] = k;
        s.W[j] = scale * z;
        m -= k;
        scale *= 1.0 - z;
    }
    s.Y[q - 1] = m;
    s.W[q - 1] = scale;
    const double nd = static_cast<double>(n_);
    double dev = 0.0;
    for (std::size_t i = 0; i < q; ++i)
        dev += std::fabs(static_cast<double>(s.Y[i]) - nd * s.W[i]);
    s.deviation = dev;
    return s;
}

CoupledSample couple_multicolour(const UrnParams& params, std::int64_t n, SplitMix64& rng) {
    return MulticolourCoupler(params, n).sample(rng);
}

double frac_diagnostic(const BetaParams& limit, std::int64_t n) {
    validate(limit);
    if (n < 1) throw std::invalid_argument("frac_diagnostic: n must be at least 1");
    const double nd = static_cast<double>(n);
    detail::NeumaierSum sum;
    for (std::int64_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        sum.add(beta_cdf(limit, (kd + 0.75) / nd) - beta_cdf(limit, (kd + 0.25) / nd));
    }
    return sum.value();
}

double l1_lower_bound(const BetaParams& limit, std::int64_t n) {
    return 0.25 * frac_diagnostic(limit, n);
}

void write_csv(const std::vector<CoupledSample>& samples, std::int64_t n, std::ostream& out) {
    const std::size_t q = samples.empty() ? 0 : samples.front().Y.size();
    out << "replicate,n";
    for (std::size_t i = 1; i <= q; ++i) out << ",Y" << i;
    for (std::size_t i = 1; i <= q; ++i) out << ",W" << i;
    out << ",deviation\n";
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const CoupledSample& s = samples[r];
        out << r << ',' << n;
        for (std::int64_t y : s.Y) out << ',' << y;
        for (double w : s.W) out << ',' << detail::format_double(w);
        out << ',' << detail::format_double(s.deviation) << '\n';
    }
}

} // namespace polya
