#pragma once

#include <cstdint>
#include <vector>

#include "polya/special_functions.hpp"

namespace polya {

// Law of the colour-1 draw count after n steps of a two-colour urn whose
// draw fraction converges to Beta(alpha, beta).
struct DiscreteLaw {
    std::int64_t n = 0;
    BetaParams params;         // the Beta limit this law converges to
    std::vector<double> probs; // probs[k] = P(count = k), k = 0..n
    std::vector<double> cum;   // compensated running sums, clamped to [0,1];
                               // cum[n] is pinned to exactly 1
};

} // namespace polya
