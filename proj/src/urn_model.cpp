#include "polya/urn_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "polya/detail/compensated.hpp"

namespace polya {

namespace {

void validate_structure(const UrnParams& p) {
    if (!(p.a > 0.0) || !std::isfinite(p.a))
        throw std::invalid_argument("UrnParams: a must be positive and finite");
    if (p.x0.size() < 2)
        throw std::invalid_argument("UrnParams: x0 must contain at least two colours");
    for (std::size_t i = 0; i < p.x0.size(); ++i)
        if (!(p.x0[i] > 0.0) || !std::isfinite(p.x0[i]))
            throw std::invalid_argument("UrnParams: x0[" + std::to_string(i) +
                                        "] must be positive and finite");
}

// Colour drawn when the uniform variate u lands in the weight partition.
std::size_t pick_colour(const std::vector<double>& weights, double total, double u) {
    const double target = u * total;
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        c += weights[i];
        if (target < c) return i;
    }
    return weights.size() - 1;
}

void enumerate_compositions(const UrnParams& p, std::int64_t n, std::size_t colour,
                            std::vector<std::int64_t>& counts, CompositionTable& out) {
    if (colour + 1 == p.x0.size()) {
        counts[colour] = n;
        // Multinomial count of sequences with this composition.
        double multi = 1.0;
        {
            std::int64_t total = 0;
            for (std::int64_t k : counts)
                for (std::int64_t j = 1; j <= k; ++j) {
                    ++total;
                    multi *= static_cast<double>(total) / static_cast<double>(j);
                }
        }
        // One representative sequence: colour 0 first, then colour 1, ...
        double seq = 1.0;
        double total_weight = 0.0;
        for (double w : p.x0) total_weight += w;
        double t = total_weight;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            double w = p.x0[i];
            for (std::int64_t j = 0; j < counts[i]; ++j) {
                seq *= w / t;
                w += p.a;
                t += p.a;
            }
        }
        out.counts.push_back(counts);
        out.probs.push_back(multi * seq);
        return;
    }
    for (std::int64_t k = 0; k <= n; ++k) {
        counts[colour] = k;
        enumerate_compositions(p, n - k, colour + 1, counts, out);
    }
}

} // namespace

double UrnParams::total() const {
    double s = 0.0;
    for (double w : x0) s += w;
    return s;
}

UrnParams validate_and_normalize(const UrnParams& params) {
    validate_structure(params);
    UrnParams out = params;
    if (out.a != 1.0) {
        for (double& w : out.x0) w /= out.a;
        out.a = 1.0;
    }
    return out;
}

UrnState make_initial_state(const UrnParams& params) {
    validate_structure(params);
    UrnState s;
    s.n = 0;
    s.weights = params.x0;
    s.draws.assign(params.x0.size(), 0);
    return s;
}

UrnState step(UrnState state, const UrnParams& params, SplitMix64& rng) {
    validate_structure(params);
    if (state.weights.size() != params.x0.size() ||
        state.draws.size() != params.x0.size())
        throw std::invalid_argument("step: state dimensions do not match params");
    const double total = params.total() + params.a * static_cast<double>(state.n);
    const std::size_t i = pick_colour(state.weights, total, rng.next_double());
    state.weights[i] += params.a;
    state.draws[i] += 1;
    state.n += 1;
    return state;
}

UrnState simulate(const UrnParams& params, std::int64_t n, SplitMix64& rng) {
    if (n < 0) throw std::invalid_argument("simulate: n must be nonnegative");
    UrnState s = make_initial_state(params);
    const double total0 = params.total();
    double total = total0;
    for (std::int64_t t = 0; t < n; ++t) {
        const std::size_t i = pick_colour(s.weights, total, rng.next_double());
        s.weights[i] += params.a;
        s.draws[i] += 1;
        total += params.a;
    }
    s.n = n;
    return s;
}

BetaParams marginal_beta(const UrnParams& params, std::size_t colour) {
    const UrnParams p = validate_and_normalize(params);
    if (colour >= p.x0.size())
        throw std::invalid_argument("marginal_beta: colour index out of range");
    return {p.x0[colour], p.total() - p.x0[colour]};
}

DirichletParams limit_dirichlet(const UrnParams& params) {
    const UrnParams p = validate_and_normalize(params);
    return {p.x0};
}

DiscreteLaw exact_pmf_two_colour(const UrnParams& params, std::int64_t n) {
    const UrnParams p = validate_and_normalize(params);
    if (p.x0.size() != 2)
        throw std::invalid_argument("exact_pmf_two_colour: params must have exactly two colours");
    return exact_pmf_two_colour(BetaParams{p.x0[0], p.x0[1]}, n);
}

DiscreteLaw exact_pmf_two_colour(const BetaParams& limit, std::int64_t n) {
    validate(limit);
    if (n < 0) throw std::invalid_argument("exact_pmf_two_colour: n must be nonnegative");
    DiscreteLaw law;
    law.n = n;
    law.params = limit;
    law.probs.resize(static_cast<std::size_t>(n) + 1);
    law.cum.resize(static_cast<std::size_t>(n) + 1);
    if (n == 0) {
        law.probs[0] = 1.0;
        law.cum[0] = 1.0;
        return law;
    }
    const double a = limit.alpha, b = limit.beta;
    const double lbet = log_beta(limit);
    detail::NeumaierSum run;
    for (std::int64_t i = 0; i <= n; ++i) {
        // p_{n,i} = [G(i+a)/G(i+1)] [G(n-i+b)/G(n-i+1)] [G(n+1)/G(n+a+b)] / B(a,b)
        const double lp = log_gamma_ratio(static_cast<double>(i), a, 1.0) +
                          log_gamma_ratio(static_cast<double>(n - i), b, 1.0) +
                          log_gamma_ratio(static_cast<double>(n), 1.0, a + b) - lbet;
        const double pi = std::exp(lp);
        law.probs[static_cast<std::size_t>(i)] = pi;
        run.add(pi);
        law.cum[static_cast<std::size_t>(i)] = std::min(run.value(), 1.0);
    }
    if (std::fabs(run.value() - 1.0) > 1e-9)
        throw std::runtime_error("exact_pmf_two_colour: probability mass check failed");
    law.cum[static_cast<std::size_t>(n)] = 1.0;
    return law;
}

CompositionTable exact_pmf_enumeration(const UrnParams& params, std::int64_t n) {
    validate_structure(params);
    if (n < 0) throw std::invalid_argument("exact_pmf_enumeration: n must be nonnegative");
    if (n > 12 || params.x0.size() > 4)
        throw std::invalid_argument(
            "exact_pmf_enumeration: refusing n > 12 or q > 4 (composition table too large); "
            "use exact_pmf_two_colour for large n");
    CompositionTable out;
    out.n = n;
    std::vector<std::int64_t> counts(params.x0.size(), 0);
    enumerate_compositions(params, n, 0, counts, out);
    return out;
}

double sequence_probability(const UrnParams& params, const std::vector<std::size_t>& seq) {
    validate_structure(params);
    std::vector<double> w = params.x0;
    double total = params.total();
    double prob = 1.0;
    for (std::size_t c : seq) {
        if (c >= w.size())
            throw std::invalid_argument("sequence_probability: colour index out of range");
        prob *= w[c] / total;
        w[c] += params.a;
        total += params.a;
    }
    return prob;
}

UrnParams merge_colours(const UrnParams& params,
                        const std::vector<std::vector<std::size_t>>& groups) {
    validate_structure(params);
    if (groups.size() < 2)
        throw std::invalid_argument("merge_colours: partition must contain at least two groups");
    std::vector<bool> seen(params.x0.size(), false);
    UrnParams out;
    out.a = params.a;
    out.x0.reserve(groups.size());
    for (const auto& g : groups) {
        if (g.empty())
            throw std::invalid_argument("merge_colours: partition contains an empty group");
        double s = 0.0;
        for (std::size_t c : g) {
            if (c >= params.x0.size())
                throw std::invalid_argument("merge_colours: colour index " + std::to_string(c) +
                                            " out of range");
            if (seen[c])
                throw std::invalid_argument("merge_colours: colour " + std::to_string(c) +
                                            " appears in more than one group");
            seen[c] = true;
            s += params.x0[c];
        }
        out.x0.push_back(s);
    }
    for (std::size_t c = 0; c < seen.size(); ++c)
        if (!seen[c])
            throw std::invalid_argument("merge_colours: colour " + std::to_string(c) +
                                        " is missing from the partition");
    return out;
}

std::vector<double> expected_draws(const UrnParams& params, std::int64_t n) {
    validate_structure(params);
    if (n < 0) throw std::invalid_argument("expected_draws: n must be nonnegative");
    const double total = params.total();
    std::vector<double> m(params.x0.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = static_cast<double>(n) * params.x0[i] / total;
    return m;
}

} // namespace polya
