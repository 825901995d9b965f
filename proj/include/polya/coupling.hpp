#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "polya/discrete_law.hpp"
#include "polya/rng.hpp"
#include "polya/urn_model.hpp"

namespace polya {

// Monotone (comonotone) coupling of a two-colour draw-count law with its
// Beta limit: thresholds 0 < t_0 < ... < t_n = n chosen so that
// P(n W <= t_k) = P_k; the count is read off as g(n W) with cells
// (t_{k-1}, t_k] (left-open, right-closed; ties land on the lower atom).
struct MonotoneCoupling {
    std::int64_t n = 0;
    std::vector<double> thresholds; // t_0 .. t_n
    BetaParams source;
};

// thresholds t_k = n * beta_quantile(P_k); requires limit == law.params.
MonotoneCoupling monotone_thresholds(const DiscreteLaw& law, const BetaParams& limit);

// g(n*w): index of the threshold cell containing n*w; w = 1 maps to n.
std::int64_t coupling_atom(const MonotoneCoupling& c, double w);

// One coupled draw: Y integer counts, W the limit proportion vector,
// deviation = sum_i |Y_i - n W_i|.
struct CoupledSample {
    std::vector<std::int64_t> Y;
    std::vector<double> W;
    double deviation = 0.0;
};

// Sample W ~ Beta(source), push it through g; Y = (g(nW), n - g(nW)).
CoupledSample couple_two_colour(const MonotoneCoupling& c, SplitMix64& rng);

// Recursive multicolour coupling: colour 1 against the merged remainder via
// the monotone coupling, then, conditional on the remainder total m, the
// reduced (q-1)-colour urn coupled at time m; the limit vector is assembled
// as W = (Z, (1-Z) W*).  Only the top-level law is cached; conditional
// levels run an O(m) cumulative scan of the count law, so no per-m tables
// are stored.
class MulticolourCoupler {
public:
    MulticolourCoupler(const UrnParams& params, std::int64_t n);

    CoupledSample sample(SplitMix64& rng) const;

    const UrnParams& params() const { return params_; }
    std::int64_t n() const { return n_; }

private:
    UrnParams params_; // normalized, a = 1
    std::int64_t n_ = 0;
    std::vector<double> suffix_; // suffix_[j] = sum of x0[j..q-1]
    DiscreteLaw top_;            // law of the colour-1 count at time n
};

// One-shot convenience wrapper around MulticolourCoupler.
CoupledSample couple_multicolour(const UrnParams& params, std::int64_t n, SplitMix64& rng);

// Exact value of P(1/4 < frac(n W) < 3/4) =
// sum_{k=0}^{n-1} [F((k+3/4)/n) - F((k+1/4)/n)]; tends to 1/2 as n grows
// (exactly 1/2 for the uniform limit).
double frac_diagnostic(const BetaParams& limit, std::int64_t n);

// Lower bound on the unscaled l1 distance between the count law and n W in
// any coupling: frac_diagnostic / 4.  Dividing by n certifies the Theta(1/n)
// lower rate.
double l1_lower_bound(const BetaParams& limit, std::int64_t n);

// CSV export, columns replicate,n,Y1..Yq,W1..Wq,deviation.
void write_csv(const std::vector<CoupledSample>& samples, std::int64_t n, std::ostream& out);

} // namespace polya
