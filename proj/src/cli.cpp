#include "polya/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polya/coupling.hpp"
#include "polya/detail/format.hpp"
#include "polya/law_tables.hpp"
#include "polya/metrics.hpp"
#include "polya/rate_harness.hpp"
#include "polya/rng.hpp"
#include "polya/urn_model.hpp"

namespace polya {

namespace {

constexpr double nan_d = std::numeric_limits<double>::quiet_NaN();

struct Options {
    double alpha = nan_d;
    double beta = nan_d;
    std::vector<double> x0;
    double a = 1.0;
    std::int64_t colour = 1; // 1-based on the command line
    std::int64_t n = -1;
    std::string grid = "256:16384";
    std::vector<std::string> metrics;
    std::string metric;
    double p = nan_d;
    std::uint64_t seed = 1;
    std::int64_t replicates = 1000;
    std::string out_path;
    double tolerance = 0.07;
    std::string fit_input = "-";
};

struct Flags {
    CLI::Option* alpha = nullptr;
    CLI::Option* beta = nullptr;
    CLI::Option* x0 = nullptr;
    CLI::Option* n = nullptr;
    CLI::Option* metric = nullptr;
    CLI::Option* p = nullptr;
};

// Writes to --out when given, stdout otherwise; opened in binary mode so
// line endings are LF everywhere.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<std::int64_t> parse_grid(const std::string& text) {
    const auto fail = [&]() {
        throw std::invalid_argument("grid must be 'lo:hi' with both endpoints powers of two, "
                                    "e.g. 256:16384 (got '" + text + "')");
    };
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size()) fail();
    std::int64_t lo = 0, hi = 0;
    try {
        std::size_t used = 0;
        lo = std::stoll(text.substr(0, colon), &used);
        if (used != colon) fail();
        const std::string rest = text.substr(colon + 1);
        hi = std::stoll(rest, &used);
        if (used != rest.size()) fail();
    } catch (const std::invalid_argument&) {
        fail();
    } catch (const std::out_of_range&) {
        fail();
    }
    const auto pow2 = [](std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; };
    if (!pow2(lo) || !pow2(hi) || lo > hi) fail();
    std::vector<std::int64_t> grid;
    for (std::int64_t v = lo; v <= hi; v *= 2) grid.push_back(v);
    return grid;
}

UrnParams resolve_urn(const Options& o, const Flags& f) {
    const bool have_ab = f.alpha->count() > 0 && f.beta->count() > 0;
    const bool have_x0 = f.x0->count() > 0;
    if (have_x0 && (f.alpha->count() > 0 || f.beta->count() > 0))
        throw std::invalid_argument("give either --x0 or --alpha/--beta, not both");
    UrnParams params;
    params.a = o.a;
    if (have_x0)
        params.x0 = o.x0;
    else if (have_ab)
        params.x0 = {o.alpha, o.beta};
    else
        throw std::invalid_argument("urn parameters required: --alpha and --beta, or --x0");
    return validate_and_normalize(params);
}

std::size_t colour_index(const Options& o, const UrnParams& params) {
    if (o.colour < 1 || static_cast<std::size_t>(o.colour) > params.colours())
        throw std::invalid_argument("--colour must lie in 1.." +
                                    std::to_string(params.colours()));
    return static_cast<std::size_t>(o.colour - 1);
}

std::int64_t require_n(const Options& o, const Flags& f, std::int64_t least) {
    if (f.n->count() == 0)
        throw std::invalid_argument("--n is required for this subcommand");
    if (o.n < least)
        throw std::invalid_argument("--n must be at least " + std::to_string(least));
    return o.n;
}

std::vector<MetricSpec> resolve_metrics(const Options& o) {
    std::vector<std::string> tokens = o.metrics;
    if (tokens.empty()) tokens = {"l1", "l2", "linf", "ks", "levy"};
    std::vector<MetricSpec> specs;
    specs.reserve(tokens.size());
    for (const std::string& t : tokens) specs.push_back(parse_metric_token(t, o.p));
    return specs;
}

SweepConfig make_sweep_config(const Options& o, const Flags& f) {
    SweepConfig cfg;
    cfg.params = resolve_urn(o, f);
    cfg.colour = static_cast<std::int64_t>(colour_index(o, cfg.params));
    cfg.metrics = resolve_metrics(o);
    cfg.n_grid = parse_grid(o.grid);
    cfg.seed = o.seed;
    cfg.replicates = o.replicates;
    return cfg;
}

int run_pmf(const Options& o, const Flags& f) {
    const UrnParams urn = resolve_urn(o, f);
    const BetaParams marginal = marginal_beta(urn, colour_index(o, urn));
    const DiscreteLaw law = exact_pmf_two_colour(marginal, require_n(o, f, 0));
    OutputTarget target(o.out_path);
    std::ostream& out = target.stream();
    out << "k,p\n";
    for (std::size_t k = 0; k < law.probs.size(); ++k)
        out << k << ',' << detail::format_double(law.probs[k]) << '\n';
    return 0;
}

int run_tables(const Options& o, const Flags& f) {
    const UrnParams urn = resolve_urn(o, f);
    const BetaParams marginal = marginal_beta(urn, colour_index(o, urn));
    const LawTables tables = build_tables(marginal, require_n(o, f, 1));
    OutputTarget target(o.out_path);
    write_csv(tables, target.stream());
    return 0;
}

int run_distance(const Options& o, const Flags& f) {
    if (f.metric->count() == 0)
        throw std::invalid_argument("--metric is required (l1, l2, linf, lp, ks, levy, vlinf)");
    const MetricSpec spec = parse_metric_token(o.metric, o.p);
    const std::int64_t n = require_n(o, f, 1);
    const UrnParams urn = resolve_urn(o, f);
    OutputTarget target(o.out_path);
    std::ostream& out = target.stream();
    if (spec.vector_mc) {
        if (o.replicates < 1) throw std::invalid_argument("--replicates must be at least 1");
        SplitMix64 rng(o.seed);
        nlohmann::ordered_json j;
        j["metric"] = "vlinf";
        j["n"] = n;
        j["replicates"] = o.replicates;
        j["seed"] = o.seed;
        j["value"] = vector_linf_mc(urn, n, o.replicates, rng);
        out << j.dump() << '\n';
        return 0;
    }
    const BetaParams marginal = marginal_beta(urn, colour_index(o, urn));
    const DiscreteLaw law = exact_pmf_two_colour(marginal, n);
    DistanceReport rep;
    switch (spec.metric) {
    case Metric::lp: rep = minimal_lp(law, marginal, spec.p); break;
    case Metric::ks: rep = ks_distance(law, marginal); break;
    case Metric::levy: rep = levy_distance(law, marginal); break;
    }
    out << to_json_record(rep) << '\n';
    return 0;
}

int run_couple(const Options& o, const Flags& f) {
    const UrnParams urn = resolve_urn(o, f);
    const std::int64_t n = require_n(o, f, 1);
    if (o.replicates < 1) throw std::invalid_argument("--replicates must be at least 1");
    const MulticolourCoupler coupler(urn, n);
    SplitMix64 rng(o.seed);
    std::vector<CoupledSample> samples;
    samples.reserve(static_cast<std::size_t>(o.replicates));
    for (std::int64_t r = 0; r < o.replicates; ++r) samples.push_back(coupler.sample(rng));
    OutputTarget target(o.out_path);
    write_csv(samples, n, target.stream());
    return 0;
}

int run_sweep_cmd(const Options& o, const Flags& f) {
    const SweepConfig cfg = make_sweep_config(o, f);
    const std::vector<SweepRow> rows = run_sweep(cfg);
    OutputTarget target(o.out_path);
    write_csv(rows, target.stream());
    return 0;
}

std::vector<SweepRow> read_sweep_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("fit: empty table in " + source);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "metric,p,n,value,error_bound,status")
        throw std::invalid_argument("fit: unexpected CSV header in " + source + ": " + line);
    std::vector<SweepRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (int i = 0; i < 5; ++i) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos)
                throw std::invalid_argument("fit: malformed row " + std::to_string(lineno) +
                                            " in " + source);
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        fields.push_back(line.substr(start)); // status keeps any remaining text
        SweepRow row;
        row.metric = fields[0];
        try {
            if (!fields[1].empty()) row.p = std::stod(fields[1]);
            row.n = std::stoll(fields[2]);
            row.value = std::stod(fields[3]);
            row.error_bound = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw std::invalid_argument("fit: malformed row " + std::to_string(lineno) + " in " +
                                        source);
        }
        row.status = fields[5];
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_fit(const Options& o, const Flags& f) {
    std::vector<SweepRow> rows;
    if (o.fit_input == "-") {
        rows = read_sweep_csv(std::cin, "stdin");
    } else {
        std::ifstream in(o.fit_input, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open input file: " + o.fit_input);
        rows = read_sweep_csv(in, o.fit_input);
    }
    // one fit per token, in first-appearance order; the lp order comes from
    // the table itself
    std::vector<MetricSpec> specs;
    for (const SweepRow& row : rows) {
        bool seen = false;
        for (const MetricSpec& s : specs) seen = seen || s.token == row.metric;
        if (!seen) specs.push_back(parse_metric_token(row.metric, row.p));
    }
    if (specs.empty()) throw std::invalid_argument("fit: no rows in " + o.fit_input);
    bool need_params = false;
    for (const MetricSpec& s : specs) need_params = need_params || s.metric == Metric::ks;
    BetaParams marginal;
    if (need_params) {
        const UrnParams urn = resolve_urn(o, f);
        marginal = marginal_beta(urn, colour_index(o, urn));
    }
    bool all_pass = true;
    OutputTarget target(o.out_path);
    std::ostream& out = target.stream();
    out << "[\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const RateFit fit = fit_rate(rows, specs[i].token,
                                     expected_exponent(specs[i], marginal), o.tolerance);
        all_pass = all_pass && fit.pass;
        out << "  " << to_json_record(fit) << (i + 1 < specs.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return all_pass ? 0 : 1;
}

int run_verify(const Options& o, const Flags& f) {
    const SweepConfig cfg = make_sweep_config(o, f);
    const VerdictReport report = check_theorems(cfg, o.tolerance);
    OutputTarget target(o.out_path);
    target.stream() << to_json_report(report) << '\n';
    return report.overall ? 0 : 1;
}

int run_oracle(const Options& o, const Flags& f) {
    const UrnParams urn = resolve_urn(o, f);
    const CompositionTable table = exact_pmf_enumeration(urn, require_n(o, f, 0));
    OutputTarget target(o.out_path);
    std::ostream& out = target.stream();
    for (std::size_t c = 0; c < urn.colours(); ++c) out << 'c' << c + 1 << ',';
    out << "prob\n";
    for (std::size_t r = 0; r < table.counts.size(); ++r) {
        for (const std::int64_t c : table.counts[r]) out << c << ',';
        out << detail::format_double(table.probs[r]) << '\n';
    }
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    Options o;
    Flags f;
    CLI::App app{"Polya urn draw-count laws, their Beta/Dirichlet limits, probability "
                 "distances between them, and empirical convergence-rate verdicts"};
    app.footer("Examples:\n"
               "  polya pmf --alpha 1 --beta 1 --n 4\n"
               "  polya distance --metric ks --alpha 1 --beta 1 --n 99\n"
               "  polya sweep --alpha 2 --beta 3 --grid 256:16384 --out rates.csv\n"
               "  polya verify --alpha 2 --beta 3 --grid 256:16384");
    app.set_config("--config", "", "flat key=value file; command-line flags override it");
    app.require_subcommand(1);

    f.alpha = app.add_option("--alpha", o.alpha, "initial weight of the first colour");
    f.beta = app.add_option("--beta", o.beta, "initial weight of the second colour");
    f.x0 = app.add_option("--x0", o.x0, "comma list of initial weights (q >= 2 colours)")
               ->delimiter(',');
    app.add_option("--a", o.a, "reinforcement added to the drawn colour")->capture_default_str();
    app.add_option("--colour", o.colour, "1-based target colour index")->capture_default_str();
    f.n = app.add_option("--n", o.n, "number of draws");
    app.add_option("--grid", o.grid, "n grid lo:hi, powers of two, doubling")
        ->capture_default_str();
    app.add_option("--metrics", o.metrics,
                   "comma list of metrics (l1, l2, linf, lp, ks, levy, vlinf)")
        ->delimiter(',');
    f.metric = app.add_option("--metric", o.metric, "single metric token");
    f.p = app.add_option("--p", o.p, "order for the lp metric (finite, >= 1)");
    app.add_option("--seed", o.seed, "RNG seed")->envname("POLYA_SEED")->capture_default_str();
    app.add_option("--replicates", o.replicates, "Monte Carlo sample count")
        ->capture_default_str();
    app.add_option("--out", o.out_path, "output file (default: stdout)");
    app.add_option("--tolerance", o.tolerance, "slope tolerance for rate verdicts")
        ->capture_default_str();

    CLI::App* pmf = app.add_subcommand("pmf", "exact draw-count probabilities");
    CLI::App* tables = app.add_subcommand("tables", "law/limit/residual lattice tables (CSV)");
    CLI::App* distance = app.add_subcommand("distance", "one distance between law and limit");
    CLI::App* couple = app.add_subcommand("couple", "coupled (Y, W) samples (CSV)");
    CLI::App* sweep = app.add_subcommand("sweep", "distances over an n grid (CSV)");
    CLI::App* fit = app.add_subcommand("fit", "log-log slope fits of a sweep table");
    CLI::App* verify = app.add_subcommand("verify", "sweep + fit + rate verdict (JSON)");
    CLI::App* oracle = app.add_subcommand("oracle", "enumerated composition law (small n)");
    for (CLI::App* sub : {pmf, tables, distance, couple, sweep, fit, verify, oracle})
        sub->fallthrough();
    fit->add_option("input", o.fit_input, "sweep CSV path, '-' for stdin")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (pmf->parsed()) return run_pmf(o, f);
        if (tables->parsed()) return run_tables(o, f);
        if (distance->parsed()) return run_distance(o, f);
        if (couple->parsed()) return run_couple(o, f);
        if (sweep->parsed()) return run_sweep_cmd(o, f);
        if (fit->parsed()) return run_fit(o, f);
        if (verify->parsed()) return run_verify(o, f);
        if (oracle->parsed()) return run_oracle(o, f);
        throw std::invalid_argument("no subcommand selected");
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace polya
