#include "polya/rate_harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "polya/coupling.hpp"
#include "polya/detail/format.hpp"
#include "polya/rng.hpp"

namespace polya {

namespace {

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';'); // keep the CSV parseable
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

void validate_config(const SweepConfig& cfg) {
    if (cfg.metrics.empty())
        throw std::invalid_argument("sweep: metrics must not be empty");
    if (cfg.n_grid.empty())
        throw std::invalid_argument("sweep: n_grid must not be empty");
    for (const std::int64_t n : cfg.n_grid)
        if (n < 1) throw std::invalid_argument("sweep: every n in n_grid must be at least 1");
    if (cfg.colour < 0 || static_cast<std::size_t>(cfg.colour) >= cfg.params.colours())
        throw std::invalid_argument("sweep: colour index out of range");
    if (cfg.replicates < 1)
        throw std::invalid_argument("sweep: replicates must be at least 1");
}

nlohmann::ordered_json row_json(const SweepRow& row) {
    nlohmann::ordered_json j;
    j["metric"] = row.metric;
    if (std::isfinite(row.p)) j["p"] = row.p;
    j["n"] = row.n;
    j["value"] = row.value;
    j["error_bound"] = row.error_bound;
    j["status"] = row.status;
    return j;
}

nlohmann::ordered_json fit_json(const RateFit& fit) {
    nlohmann::ordered_json j;
    j["metric"] = fit.metric;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["max_residual"] = fit.max_residual;
    j["expected"] = fit.expected;
    j["tolerance"] = fit.tolerance;
    j["verdict"] = fit.pass ? "pass" : "fail";
    return j;
}

} // namespace

MetricSpec parse_metric_token(const std::string& token, double p) {
    MetricSpec s;
    s.token = token;
    if (token == "l1") {
        s.metric = Metric::lp;
        s.p = 1.0;
    } else if (token == "l2") {
        s.metric = Metric::lp;
        s.p = 2.0;
    } else if (token == "linf") {
        s.metric = Metric::lp;
        s.p = std::numeric_limits<double>::infinity();
    } else if (token == "lp") {
        if (!(p >= 1.0) || std::isinf(p))
            throw std::invalid_argument("metric 'lp' needs a finite order p >= 1");
        s.metric = Metric::lp;
        s.p = p;
    } else if (token == "ks") {
        s.metric = Metric::ks;
    } else if (token == "levy") {
        s.metric = Metric::levy;
    } else if (token == "vlinf") {
        s.metric = Metric::lp;
        s.p = std::numeric_limits<double>::infinity();
        s.vector_mc = true;
    } else {
        throw std::invalid_argument("unknown metric token '" + token +
                                    "' (expected l1, l2, linf, lp, ks, levy, or vlinf)");
    }
    return s;
}

double expected_exponent(const MetricSpec& spec, const BetaParams& marginal) {
    if (spec.vector_mc) return 0.0;
    if (spec.metric == Metric::ks) return -std::min({marginal.alpha, marginal.beta, 1.0});
    return -1.0;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::ostream* log) {
    validate_config(cfg);
    const UrnParams params = validate_and_normalize(cfg.params);
    const BetaParams marginal = marginal_beta(params, static_cast<std::size_t>(cfg.colour));
    std::map<std::int64_t, DiscreteLaw> laws; // shared across metrics
    const auto law_for = [&](std::int64_t n) -> const DiscreteLaw& {
        auto it = laws.find(n);
        if (it == laws.end()) it = laws.emplace(n, exact_pmf_two_colour(marginal, n)).first;
        return it->second;
    };
    std::vector<SweepRow> rows;
    rows.reserve(cfg.metrics.size() * cfg.n_grid.size());
    for (std::size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
        const MetricSpec& spec = cfg.metrics[mi];
        for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
            const std::int64_t n = cfg.n_grid[ni];
            SweepRow row;
            row.metric = spec.token;
            if (spec.metric == Metric::lp && !spec.vector_mc) row.p = spec.p;
            row.n = n;
            try {
                if (spec.vector_mc) {
                    SplitMix64 rng(mix_seed(cfg.seed, mi * 4096 + ni));
                    row.value = vector_linf_mc(params, n, cfg.replicates, rng);
                    row.error_bound = 0.0; // sampled supremum, exact per draw
                } else {
                    const DiscreteLaw& law = law_for(n);
                    DistanceReport rep;
                    switch (spec.metric) {
                    case Metric::lp: rep = minimal_lp(law, marginal, spec.p); break;
                    case Metric::ks: rep = ks_distance(law, marginal); break;
                    case Metric::levy: rep = levy_distance(law, marginal); break;
                    }
                    row.value = rep.value;
                    row.error_bound = rep.error_bound;
                }
            } catch (const std::exception& e) {
                row.status = sanitize(std::string("error: ") + e.what());
            }
            if (log)
                *log << row.metric << " n=" << row.n << " value=" << detail::format_double(row.value)
                     << " status=" << row.status << '\n';
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "metric,p,n,value,error_bound,status\n";
    for (const SweepRow& row : rows) {
        out << row.metric << ',';
        if (std::isfinite(row.p) || std::isinf(row.p)) out << detail::format_double(row.p);
        out << ',' << row.n << ',' << detail::format_double(row.value) << ','
            << detail::format_double(row.error_bound) << ',' << row.status << '\n';
    }
}

RateFit fit_rate(const std::vector<SweepRow>& rows, const std::string& token,
                 double expected, double tolerance) {
    std::vector<double> lx, ly;
    for (const SweepRow& row : rows) {
        if (row.metric != token) continue;
        if (row.status != "ok")
            throw std::runtime_error("fit_rate: row (" + token + ", n=" + std::to_string(row.n) +
                                     ") is flagged: " + row.status);
        if (!(row.value > 0.0) || !std::isfinite(row.value))
            throw std::runtime_error("fit_rate: row (" + token + ", n=" + std::to_string(row.n) +
                                     ") has nonpositive value " + detail::format_double(row.value));
        lx.push_back(std::log(static_cast<double>(row.n)));
        ly.push_back(std::log(row.value));
    }
    const std::size_t m = lx.size();
    if (m < 4)
        throw std::invalid_argument("fit_rate: need at least 4 usable points for '" + token +
                                    "', got " + std::to_string(m));
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("fit_rate: n_grid for '" + token + "' has no spread");
    RateFit fit;
    fit.metric = token;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < m; ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::fabs(ly[i] - (fit.intercept + fit.slope * lx[i])));
    fit.expected = expected;
    fit.tolerance = tolerance;
    fit.pass = std::fabs(fit.slope - expected) <= tolerance;
    return fit;
}

VerdictReport check_theorems(const SweepConfig& cfg, double tolerance, std::ostream* log) {
    if (!(tolerance > 0.0))
        throw std::invalid_argument("check_theorems: tolerance must be positive");
    VerdictReport report;
    report.rows = run_sweep(cfg, log);
    const UrnParams params = validate_and_normalize(cfg.params);
    const BetaParams marginal = marginal_beta(params, static_cast<std::size_t>(cfg.colour));
    report.overall = true;
    for (const MetricSpec& spec : cfg.metrics) {
        if (spec.vector_mc) continue; // bounded-deviation metric: no decay law to fit
        const RateFit fit =
            fit_rate(report.rows, spec.token, expected_exponent(spec, marginal), tolerance);
        report.overall = report.overall && fit.pass;
        report.fits.push_back(fit);
    }
    return report;
}

std::string to_json_record(const SweepRow& row) { return row_json(row).dump(); }

std::string to_json_record(const RateFit& fit) { return fit_json(fit).dump(); }

std::string to_json_report(const VerdictReport& report) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const SweepRow& row : report.rows) j["rows"].push_back(row_json(row));
    j["fits"] = nlohmann::ordered_json::array();
    for (const RateFit& fit : report.fits) j["fits"].push_back(fit_json(fit));
    j["overall"] = report.overall ? "pass" : "fail";
    return j.dump(2);
}

} // namespace polya
