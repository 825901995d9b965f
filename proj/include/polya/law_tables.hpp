#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "polya/discrete_law.hpp"

namespace polya {

// Lattice ledger for one (alpha, beta, n): limit CDF Q_k = I_{k/n}(alpha,beta),
// residual R_k = P_k - Q_k, and their first differences.  deltaR[0] and
// deltaQ[0] are 0 so that X[k] = X[k-1] + deltaX[k] holds for k >= 1.
struct ResidualTable {
    std::int64_t n = 0;
    std::vector<double> Q;
    std::vector<double> R;
    std::vector<double> deltaR;
    std::vector<double> deltaQ;
};

struct LawTables {
    DiscreteLaw law;
    ResidualTable residual;
};

// Build the exact law and its residual ledger; requires n >= 1.  Q comes
// straight from the Beta CDF at lattice points, so R carries only pmf and
// CDF rounding (~2e-13 combined).
LawTables build_tables(const BetaParams& p, std::int64_t n);

// Empirical constant for the residual-increment envelope: the largest
// |deltaR_k| / envelope(k) over the lower range 1 <= k <= 3n/4 with envelope
// k^(alpha-2) n^(-alpha), and over the upper range n/4 <= k <= n with the
// mirrored envelope (n-k+1)^(beta-2) n^(-beta).  Requires n >= 4.
double probe_lemma_L1(const BetaParams& p, std::int64_t n);
double probe_lemma_L1(const LawTables& t);

// Empirical constant for the residual envelope itself: |R_k| normalized by
// (k+1)^(alpha-1) n^(-alpha) on k <= n/2, by (n-k+1)^(beta-1) n^(-beta) on
// k >= n/2, and by f(k/n)/n on 1 <= k <= n-1.  Requires n >= 4.
double probe_lemma_L2(const BetaParams& p, std::int64_t n);
double probe_lemma_L2(const LawTables& t);

// Smallest integer K with Q_{k-K} <= P_k <= Q_{k+K} for every 0 <= k <= n,
// where Q is clamped to 0 below the lattice and 1 above it.
std::int64_t min_K_lemma_L3(const BetaParams& p, std::int64_t n);
std::int64_t min_K_lemma_L3(const LawTables& t);

// CSV export, columns k,p,P,Q,R,dR (header row, LF line endings).
void write_csv(const LawTables& t, std::ostream& out);

} // namespace polya
