#pragma once

#include <cstdint>
#include <vector>

#include "polya/discrete_law.hpp"
#include "polya/rng.hpp"
#include "polya/special_functions.hpp"

namespace polya {

// Replacement urn: q colours with initial weights x0; each draw returns the
// ball and adds weight a to the drawn colour.
struct UrnParams {
    double a = 1.0;
    std::vector<double> x0;

    std::size_t colours() const { return x0.size(); }
    double total() const; // sum of x0
};

// Throw std::invalid_argument naming the offending field unless a > 0,
// q >= 2, and every initial weight is positive and finite.  Returns a copy
// rescaled so a = 1 (divide a and x0 by a); the law of the draw counts is
// unchanged.
UrnParams validate_and_normalize(const UrnParams& params);

// State after n draws: current weights and per-colour draw counts.
// Invariants: weights = x0 + a*draws and sum(draws) = n.
struct UrnState {
    std::int64_t n = 0;
    std::vector<double> weights;
    std::vector<std::int64_t> draws;
};

UrnState make_initial_state(const UrnParams& params);

// One transition: colour i is drawn with probability weights[i]/total and
// reinforced by a.
UrnState step(UrnState state, const UrnParams& params, SplitMix64& rng);

// n transitions from a fresh state; deterministic under a fixed generator.
UrnState simulate(const UrnParams& params, std::int64_t n, SplitMix64& rng);

// Beta limit of the draw fraction of one colour (0-based index):
// Beta(x0[i]/a, (|x0| - x0[i])/a).
BetaParams marginal_beta(const UrnParams& params, std::size_t colour);

// Dirichlet limit of the draw-fraction vector: Dir(x0/a).
DirichletParams limit_dirichlet(const UrnParams& params);

// Exact law of the colour-1 draw count of a two-colour urn after n draws,
// evaluated atom by atom in the log domain through cancellation-free Gamma
// ratios; the linear-scale mass is verified to sum to 1.
DiscreteLaw exact_pmf_two_colour(const UrnParams& params, std::int64_t n);
DiscreteLaw exact_pmf_two_colour(const BetaParams& limit, std::int64_t n);

// Joint law of the draw-count composition, by exchangeability: one chained
// sequence probability per composition times the multinomial count.
// Compositions are listed in lexicographic order.
struct CompositionTable {
    std::int64_t n = 0;
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<double> probs;
};

// Guarded oracle: refuses n > 12 or q > 4 (table size grows too fast).
CompositionTable exact_pmf_enumeration(const UrnParams& params, std::int64_t n);

// Probability of one explicit draw sequence (0-based colour indices),
// chained straight from the transition rule.
double sequence_probability(const UrnParams& params, const std::vector<std::size_t>& seq);

// Colour-blind observer: group colours and sum their weights.  The result
// is again an urn with the same a.  groups must partition 0..q-1 into at
// least two groups.
UrnParams merge_colours(const UrnParams& params,
                        const std::vector<std::vector<std::size_t>>& groups);

// E[draws after n steps] = n * x0_i / |x0| (martingale mean identity).
std::vector<double> expected_draws(const UrnParams& params, std::int64_t n);

} // namespace polya
