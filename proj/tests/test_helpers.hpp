#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "polya/discrete_law.hpp"

// |a - b| <= tol with a readable failure message.
#define CHECK_CLOSE(a, b, tol) CHECK(std::fabs((a) - (b)) <= (tol))

namespace testutil {

// Critical sup-CDF discrepancy at significance 0.001 (framework-level false
// positives are tuned to be rare, not impossible).
inline double ks_crit_one(std::size_t n) { return 1.9495 / std::sqrt(static_cast<double>(n)); }

inline double ks_crit_two(std::size_t n1, std::size_t n2) {
    const double a = static_cast<double>(n1), b = static_cast<double>(n2);
    return 1.9495 * std::sqrt((a + b) / (a * b));
}

// Sup distance between the empirical CDF of integer draw counts and the
// exact law's CDF, evaluated at the lattice points.
inline double sup_cdf_discrepancy(const std::vector<std::int64_t>& sample,
                                  const polya::DiscreteLaw& law) {
    std::vector<std::int64_t> hist(static_cast<std::size_t>(law.n) + 1, 0);
    for (const std::int64_t v : sample) ++hist[static_cast<std::size_t>(v)];
    double worst = 0.0, run = 0.0;
    const double total = static_cast<double>(sample.size());
    for (std::size_t k = 0; k < hist.size(); ++k) {
        run += static_cast<double>(hist[k]) / total;
        worst = std::max(worst, std::fabs(run - law.cum[k]));
    }
    return worst;
}

// One-sample sup-CDF statistic of a continuous sample against a CDF.
inline double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        worst = std::max({worst, f - static_cast<double>(i) / n,
                          static_cast<double>(i + 1) / n - f});
    }
    return worst;
}

// Two-sample sup-CDF statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        worst = std::max(worst, std::fabs(static_cast<double>(i) / static_cast<double>(a.size()) -
                                          static_cast<double>(j) / static_cast<double>(b.size())));
    }
    return worst;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// The 25-point (alpha, beta) grid used across the suite.
inline std::vector<polya::BetaParams> parameter_grid() {
    const double vals[] = {0.5, 1.0, 1.5, 2.0, 3.0};
    std::vector<polya::BetaParams> grid;
    for (const double a : vals)
        for (const double b : vals) grid.push_back({a, b});
    return grid;
}

} // namespace testutil
