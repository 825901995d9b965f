#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "polya/metrics.hpp"
#include "polya/urn_model.hpp"

namespace polya {

// A metric requested by token: l1, l2, linf, lp (with explicit order),
// ks, levy, or vlinf (Monte Carlo sup-deviation of the vector coupling).
struct MetricSpec {
    Metric metric = Metric::lp;
    double p = 1.0;
    bool vector_mc = false;
    std::string token = "l1";
};

MetricSpec parse_metric_token(const std::string& token,
                              double p = std::numeric_limits<double>::quiet_NaN());

struct SweepConfig {
    UrnParams params;                  // urn under study
    std::int64_t colour = 0;           // target colour (0-based) for scalar metrics
    std::vector<MetricSpec> metrics;   // row blocks, in this order
    std::vector<std::int64_t> n_grid;  // horizon values, in this order
    std::uint64_t seed = 1;            // base seed for Monte Carlo cells
    std::int64_t replicates = 1000;    // Monte Carlo sample size per cell
};

struct SweepRow {
    std::string metric;   // token
    double p = std::numeric_limits<double>::quiet_NaN(); // order for lp rows
    std::int64_t n = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    double error_bound = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok"; // "ok" or "error: ..."
};

// Computes every (metric, n) cell; a failing cell is flagged in its status
// field and the sweep continues. Exact count laws are cached across metrics.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::ostream* log = nullptr);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);

struct RateFit {
    std::string metric;       // token the fit was computed for
    double slope = 0.0;       // least-squares slope of log value vs log n
    double intercept = 0.0;
    double max_residual = 0.0;
    double expected = 0.0;    // exponent the theory predicts
    double tolerance = 0.0;
    bool pass = false;        // |slope - expected| <= tolerance
};

// Least-squares fit over the rows carrying the given token. Throws when a
// row is flagged, a value is nonpositive, or fewer than 4 points remain;
// the message names the offending row.
RateFit fit_rate(const std::vector<SweepRow>& rows, const std::string& token,
                 double expected, double tolerance);

// -1 for minimal-lp and Levy; -min(alpha, beta, 1) for Kolmogorov-Smirnov;
// 0 for the vector coupling deviation (bounded, not decaying).
double expected_exponent(const MetricSpec& spec, const BetaParams& marginal);

struct VerdictReport {
    std::vector<SweepRow> rows;
    std::vector<RateFit> fits;
    bool overall = false;
};

// Runs the sweep, fits each decaying metric against its predicted exponent,
// and aggregates the verdict. vlinf rows are computed but not fitted.
VerdictReport check_theorems(const SweepConfig& cfg, double tolerance,
                             std::ostream* log = nullptr);

std::string to_json_record(const SweepRow& row);
std::string to_json_record(const RateFit& fit);
std::string to_json_report(const VerdictReport& report);

} // namespace polya
