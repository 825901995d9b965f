#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "polya/detail/compensated.hpp"
#include "polya/rng.hpp"
#include "polya/urn_model.hpp"

#include "test_helpers.hpp"

using namespace polya;

TEST_CASE("urn parameter validation names the offending field") {
    try {
        validate_and_normalize({0.0, {1.0, 1.0}});
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("a must") != std::string::npos);
    }
    try {
        validate_and_normalize({1.0, {1.0}});
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("x0") != std::string::npos);
    }
    try {
        validate_and_normalize({1.0, {1.0, -2.0, 1.0}});
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("x0[1]") != std::string::npos);
    }
}

TEST_CASE("normalization rescales to unit reinforcement without changing ratios") {
    const UrnParams p = validate_and_normalize({2.0, {1.0, 3.0}});
    CHECK(p.a == 1.0);
    CHECK_CLOSE(p.x0[0], 0.5, 1e-15);
    CHECK_CLOSE(p.x0[1], 1.5, 1e-15);
    CHECK_CLOSE(p.total(), 2.0, 1e-15);
    CHECK(p.colours() == 2);
}

TEST_CASE("initial state and step preserve the weight bookkeeping") {
    const UrnParams p{1.5, {1.0, 2.0, 3.0}};
    UrnState s = make_initial_state(p);
    CHECK(s.n == 0);
    CHECK(s.weights == p.x0);
    SplitMix64 rng(11);
    for (int t = 0; t < 200; ++t) s = step(std::move(s), p, rng);
    CHECK(s.n == 200);
    std::int64_t total_draws = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        total_draws += s.draws[i];
        CHECK_CLOSE(s.weights[i], p.x0[i] + p.a * static_cast<double>(s.draws[i]), 1e-12);
    }
    CHECK(total_draws == 200);
}

TEST_CASE("step rejects mismatched state dimensions") {
    const UrnParams p{1.0, {1.0, 1.0}};
    UrnState s = make_initial_state({1.0, {1.0, 1.0, 1.0}});
    SplitMix64 rng(1);
    CHECK_THROWS_AS(step(std::move(s), p, rng), std::invalid_argument);
}

TEST_CASE("simulate is deterministic under a fixed seed and matches stepwise runs") {
    const UrnParams p{2.0, {1.0, 3.0, 2.0}};
    SplitMix64 r1(123), r2(123), r3(123);
    const UrnState a = simulate(p, 500, r1);
    const UrnState b = simulate(p, 500, r2);
    CHECK(a.draws == b.draws);
    UrnState c = make_initial_state(p);
    for (int t = 0; t < 500; ++t) c = step(std::move(c), p, r3);
    CHECK(a.draws == c.draws);
}

TEST_CASE("simulated draw counts follow the exact two-colour law") {
    const UrnParams p{1.5, {1.5, 4.5}};
    const DiscreteLaw law = exact_pmf_two_colour(p, 5);
    SplitMix64 rng(2718);
    std::vector<std::int64_t> sample(10000);
    for (auto& v : sample) v = simulate(p, 5, rng).draws[0];
    CHECK(testutil::sup_cdf_discrepancy(sample, law) <= testutil::ks_crit_one(sample.size()));
}

TEST_CASE("limit parameters come out of the weights") {
    const UrnParams p{2.0, {1.0, 3.0}};
    const BetaParams m0 = marginal_beta(p, 0);
    CHECK_CLOSE(m0.alpha, 0.5, 1e-15);
    CHECK_CLOSE(m0.beta, 1.5, 1e-15);
    const BetaParams m1 = marginal_beta(p, 1);
    CHECK_CLOSE(m1.alpha, 1.5, 1e-15);
    CHECK_CLOSE(m1.beta, 0.5, 1e-15);
    CHECK_THROWS_AS(marginal_beta(p, 2), std::invalid_argument);
    const DirichletParams d = limit_dirichlet({2.0, {1.0, 3.0, 4.0}});
    REQUIRE(d.alphas.size() == 3);
    CHECK_CLOSE(d.alphas[0], 0.5, 1e-15);
    CHECK_CLOSE(d.alphas[1], 1.5, 1e-15);
    CHECK_CLOSE(d.alphas[2], 2.0, 1e-15);
}

TEST_CASE("exact pmf closed-form spot values") {
    // uniform limit collapses to equal atoms
    const DiscreteLaw u = exact_pmf_two_colour(BetaParams{1.0, 1.0}, 5);
    for (const double pk : u.probs) CHECK_CLOSE(pk, 1.0 / 6.0, 1e-15);
    // (alpha, beta) = (1, 2), n = 2: atoms 1/2, 1/3, 1/6
    const DiscreteLaw law = exact_pmf_two_colour(BetaParams{1.0, 2.0}, 2);
    CHECK_CLOSE(law.probs[0], 0.5, 1e-14);
    CHECK_CLOSE(law.probs[1], 1.0 / 3.0, 1e-14);
    CHECK_CLOSE(law.probs[2], 1.0 / 6.0, 1e-14);
    // n = 0 is a point mass
    const DiscreteLaw z = exact_pmf_two_colour(BetaParams{2.0, 3.0}, 0);
    CHECK(z.probs.size() == 1);
    CHECK(z.probs[0] == 1.0);
    CHECK(z.cum[0] == 1.0);
}

TEST_CASE("exact pmf mass, mean, and cumulative structure") {
    for (const auto& p : {BetaParams{2.0, 3.0}, BetaParams{0.5, 1.5}, BetaParams{3.0, 0.5}}) {
        const std::int64_t n = 1000;
        const DiscreteLaw law = exact_pmf_two_colour(p, n);
        polya::detail::NeumaierSum mass, mean;
        double prev = 0.0;
        for (std::int64_t k = 0; k <= n; ++k) {
            const double pk = law.probs[static_cast<std::size_t>(k)];
            CHECK(pk >= 0.0);
            mass.add(pk);
            mean.add(static_cast<double>(k) * pk);
            CHECK(law.cum[static_cast<std::size_t>(k)] >= prev);
            prev = law.cum[static_cast<std::size_t>(k)];
        }
        CHECK_CLOSE(mass.value(), 1.0, 1e-12);
        const double want = static_cast<double>(n) * p.alpha / (p.alpha + p.beta);
        CHECK_CLOSE(mean.value(), want, 1e-10 * want);
        CHECK(law.cum[static_cast<std::size_t>(n)] == 1.0);
    }
}

TEST_CASE("exact pmf satisfies the neighbour-ratio recurrence") {
    const BetaParams p{2.5, 0.5};
    const std::int64_t n = 50;
    const DiscreteLaw law = exact_pmf_two_colour(p, n);
    for (std::int64_t i = 0; i + 1 <= n; ++i) {
        const double pi = law.probs[static_cast<std::size_t>(i)];
        if (pi < 1e-250) continue;
        const double want = pi * (static_cast<double>(n - i) * (p.alpha + static_cast<double>(i))) /
                            ((static_cast<double>(i) + 1.0) *
                             (p.beta + static_cast<double>(n - i) - 1.0));
        CHECK_CLOSE(law.probs[static_cast<std::size_t>(i) + 1], want, 1e-10 * want);
    }
}

TEST_CASE("enumeration oracle: uniform two-colour compositions are lexicographic and flat") {
    const CompositionTable t = exact_pmf_enumeration({1.0, {1.0, 1.0}}, 3);
    REQUIRE(t.counts.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(t.counts[i][0] == static_cast<std::int64_t>(i));
        CHECK(t.counts[i][1] == static_cast<std::int64_t>(3 - i));
        CHECK_CLOSE(t.probs[i], 0.25, 1e-14);
    }
}

TEST_CASE("enumeration oracle: three flat colours give a flat composition law") {
    const CompositionTable t = exact_pmf_enumeration({1.0, {1.0, 1.0, 1.0}}, 2);
    REQUIRE(t.counts.size() == 6);
    double sum = 0.0;
    for (std::size_t i = 0; i < t.probs.size(); ++i) {
        std::int64_t row = 0;
        for (const std::int64_t c : t.counts[i]) row += c;
        CHECK(row == 2);
        CHECK_CLOSE(t.probs[i], 1.0 / 6.0, 1e-14);
        sum += t.probs[i];
    }
    CHECK_CLOSE(sum, 1.0, 1e-13);
}

TEST_CASE("enumeration oracle agrees with the closed-form two-colour pmf") {
    for (const auto& p : {BetaParams{0.5, 2.0}, BetaParams{1.5, 0.5}}) {
        const std::int64_t n = 6;
        const CompositionTable t = exact_pmf_enumeration({1.0, {p.alpha, p.beta}}, n);
        const DiscreteLaw law = exact_pmf_two_colour(p, n);
        REQUIRE(t.probs.size() == law.probs.size());
        for (std::size_t k = 0; k < t.probs.size(); ++k)
            CHECK_CLOSE(t.probs[k], law.probs[k], 1e-13);
    }
}

TEST_CASE("enumeration oracle refuses oversized tables") {
    try {
        exact_pmf_enumeration({1.0, {1.0, 1.0}}, 13);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("refusing") != std::string::npos);
    }
    CHECK_THROWS_AS(exact_pmf_enumeration({1.0, {1.0, 1.0, 1.0, 1.0, 1.0}}, 2),
                    std::invalid_argument);
    CHECK_NOTHROW(exact_pmf_enumeration({1.0, {1.0, 1.0, 1.0, 1.0}}, 12));
}

TEST_CASE("the law only depends on weights up to scale (homogeneity)") {
    const UrnParams raw{2.0, {1.0, 3.0}};
    const UrnParams norm = validate_and_normalize(raw);
    const CompositionTable a = exact_pmf_enumeration(raw, 8);
    const CompositionTable b = exact_pmf_enumeration(norm, 8);
    REQUIRE(a.probs.size() == b.probs.size());
    for (std::size_t i = 0; i < a.probs.size(); ++i) CHECK_CLOSE(a.probs[i], b.probs[i], 1e-14);
}

TEST_CASE("sequence probabilities chain the transition rule and are exchangeable") {
    const UrnParams p{1.0, {1.0, 1.0}};
    CHECK_CLOSE(sequence_probability(p, {0, 1}), 1.0 / 6.0, 1e-15);
    const double p001 = sequence_probability(p, {0, 0, 1});
    const double p010 = sequence_probability(p, {0, 1, 0});
    const double p100 = sequence_probability(p, {1, 0, 0});
    CHECK_CLOSE(p001, p010, 1e-15);
    CHECK_CLOSE(p010, p100, 1e-15);
    const UrnParams q{0.7, {0.4, 1.1, 2.0}};
    const double s1 = sequence_probability(q, {2, 0, 1, 2});
    const double s2 = sequence_probability(q, {0, 2, 2, 1});
    CHECK_CLOSE(s1, s2, 1e-15 + 1e-12 * s1);
    CHECK_THROWS_AS(sequence_probability(q, {0, 3}), std::invalid_argument);
}

TEST_CASE("merge_colours sums group weights and validates the partition") {
    const UrnParams p{1.0, {1.0, 2.0, 3.0}};
    const UrnParams merged = merge_colours(p, {{0}, {1, 2}});
    REQUIRE(merged.colours() == 2);
    CHECK(merged.a == 1.0);
    CHECK_CLOSE(merged.x0[0], 1.0, 1e-15);
    CHECK_CLOSE(merged.x0[1], 5.0, 1e-15);
    CHECK_THROWS_AS(merge_colours(p, {{0, 1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(merge_colours(p, {{}, {0, 1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(merge_colours(p, {{0, 1}, {1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(merge_colours(p, {{0}, {1}}), std::invalid_argument);
    CHECK_THROWS_AS(merge_colours(p, {{0}, {1, 7}}), std::invalid_argument);
}

TEST_CASE("a colour-blind observer sees the merged urn, path by path") {
    const UrnParams full{1.0, {1.0, 2.0, 3.0}};
    const UrnParams merged = merge_colours(full, {{0}, {1, 2}});
    SplitMix64 r1(77), r2(77);
    const UrnState a = simulate(full, 200, r1);
    const UrnState b = simulate(merged, 200, r2);
    CHECK(b.draws[0] == a.draws[0]);
    CHECK(b.draws[1] == a.draws[1] + a.draws[2]);
}

TEST_CASE("expected draw counts follow the fixed colour proportions") {
    const std::vector<double> m = expected_draws({2.0, {1.0, 3.0}}, 10);
    REQUIRE(m.size() == 2);
    CHECK_CLOSE(m[0], 2.5, 1e-15);
    CHECK_CLOSE(m[1], 7.5, 1e-15);
    // consistency with the exact law's first moment
    const BetaParams p{2.0, 3.0};
    const DiscreteLaw law = exact_pmf_two_colour(p, 200);
    polya::detail::NeumaierSum mean;
    for (std::int64_t k = 0; k <= 200; ++k)
        mean.add(static_cast<double>(k) * law.probs[static_cast<std::size_t>(k)]);
    const std::vector<double> e = expected_draws({1.0, {2.0, 3.0}}, 200);
    CHECK_CLOSE(mean.value(), e[0], 1e-10 * e[0]);
}
