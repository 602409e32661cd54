#include "fhn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <CLI11.hpp>

#include "fhn/config.hpp"
#include "fhn/io.hpp"
#include "fhn/metrics.hpp"
#include "fhn/network.hpp"
#include "fhn/theory.hpp"
#include "fhn/verify.hpp"

namespace fhn::cli {

namespace fs = std::filesystem;

namespace {

/// Raised for bad arguments or unusable inputs; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tail_fraction;
    bool log_y = false;
    std::vector<std::string> columns;
    std::string csv;
};

// Published constants of the 32x32 example, for side-by-side comparison.
struct PublishedValue {
    const char* name;
    double value;
};
constexpr PublishedValue kPublished[] = {
    {"C1", 437.5},         {"C2", 876.4},  {"mu", 0.175}, {"K", 41345645.6},
    {"1+Q", 1220899.6},    {"Gamma", 0.45}, {"alpha", 0.35},
};

// Grid point sampled by the published point-value tables (0-based).
constexpr int kSampleX = 10;
constexpr int kSampleY = 10;

ConfigDocument load_doc(const Options& opt) {
    if (opt.config.empty()) throw UsageError("--config PATH is required");
    ConfigDocument doc = load_config(opt.config);
    if (opt.seed) doc.run.seed = *opt.seed;
    if (opt.tail_fraction) doc.tail_fraction = *opt.tail_fraction;
    if (!opt.out_dir.empty()) doc.out_dir = opt.out_dir;
    return doc;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir, ec.message()));
    return fs::path(dir);
}

double constant_value(const TheoryConstants& c, const std::string& name) {
    if (name == "C1") return c.C1;
    if (name == "C2") return c.C2;
    if (name == "mu") return c.mu;
    if (name == "K") return c.K;
    if (name == "1+Q") return 1.0 + c.Q;
    if (name == "Gamma") return c.Gamma;
    return c.alpha;
}

void print_constants(std::ostream& out, const ThresholdReport& report) {
    const TheoryConstants& c = report.constants;
    fmt::print(out, "conventions: ||phi||^2 = {:.10g}, |Omega|_K = {:.10g}, |Omega|_Q = {:.10g}\n",
               c.conventions.phi_norm_sq, c.conventions.omega_measure_K,
               c.conventions.omega_measure_Q);
    fmt::print(out, "  {:<6} {:>22.12g}\n", "C*", c.C_star);
    for (const char* name : {"C1", "C2", "mu", "K", "1+Q", "Gamma", "alpha"}) {
        fmt::print(out, "  {:<6} {:>22.12g}\n", name, constant_value(c, name));
    }
    fmt::print(out, "{}\n", report.verdict());
}

void write_constants_csv(const fs::path& path, const ThresholdReport& report) {
    std::ofstream csv(path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    const TheoryConstants& c = report.constants;
    csv << "name,value\n";
    auto row = [&](const char* name, double v) { csv << fmt::format("{},{:.17g}\n", name, v); };
    row("C1", c.C1);
    row("C2", c.C2);
    row("mu", c.mu);
    row("K", c.K);
    row("Q", c.Q);
    row("Gamma", c.Gamma);
    row("alpha", c.alpha);
    row("C_star", c.C_star);
    row("phi_norm_sq", c.conventions.phi_norm_sq);
    row("omega_measure_K", c.conventions.omega_measure_K);
    row("omega_measure_Q", c.conventions.omega_measure_Q);
    row("P", report.P);
    row("guaranteed", report.guaranteed ? 1.0 : 0.0);
}

int cmd_constants(const Options& opt, std::ostream& out) {
    const ConfigDocument doc = load_doc(opt);
    const ThresholdReport report =
        threshold_report(doc.run.params, doc.run.bounds, doc.C_star, doc.conventions());
    print_constants(out, report);
    if (!opt.out_dir.empty()) {
        const fs::path path = prepare_dir(opt.out_dir) / "constants.csv";
        write_constants_csv(path, report);
        fmt::print(out, "wrote {}\n", path.string());
    }
    return kExitOk;
}

void print_run_checks(std::ostream& out, const ConfigDocument& doc, const RunResult& result,
                      const ThresholdReport& theory) {
    const MetricsSeries& series = result.metrics;
    fmt::print(out, "asynchronous degree surrogate (trailing {:.0f}% of samples): {:.6e}\n",
               100.0 * doc.tail_fraction, asynchronous_degree_estimate(series, doc.tail_fraction));
    const AbsorbingReport ab = absorbing_check(series, theory.constants.K);
    fmt::print(out, "energy vs K = {:.6g}: {} (entry t = {}, max after entry {:.6g})\n",
               theory.constants.K, ab.passed ? "inside" : "OUTSIDE",
               ab.entry_time ? fmt::format("{:.6g}", *ab.entry_time) : std::string("never"),
               ab.max_energy_after_entry);
    const BoundReport l4 = l4_bound_check(series, theory.constants.Q);
    fmt::print(out, "trailing sum ||u_i||^4_L4 vs 1+Q = {:.6g}: {} (max {:.6g})\n", l4.bound,
               l4.passed ? "below" : "ABOVE", l4.max_value);
    const double t0 = doc.transient_time();
    if (series.size() >= 2 && t0 >= series.rows().front().t && t0 <= series.back().t) {
        if (theory.guaranteed) {
            const EnvelopeReport env =
                sync_envelope_check(series, theory.constants.alpha, t0, doc.envelope_slack);
            fmt::print(out, "envelope exp(-{:.6g} (t - {:.6g})) x {:.3g}: {} (worst ratio {:.4g})\n",
                       theory.constants.alpha, env.reference_time, doc.envelope_slack,
                       env.passed ? "held" : "BROKEN", env.worst_ratio);
        }
        try {
            const DecayFit fit = fit_decay_rate(series, std::nullopt, {t0, series.back().t});
            fmt::print(out, "fitted decay rate of sum D_ij over [{:.6g}, {:.6g}]: {:.6g} (r^2 {:.6f})\n",
                       t0, series.back().t, fit.rate, fit.r_squared);
        } catch (const MetricsError& e) {
            fmt::print(out, "decay rate not fitted: {}\n", e.what());
        }
    }
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
    const ConfigDocument doc = load_doc(opt);
    const fs::path dir = prepare_dir(doc.out_dir);
    CsvMetricsWriter csv(dir / "metrics.csv", doc.run.params.m);
    std::optional<SnapshotWriter> snaps;
    if (doc.run.snapshot_every > 0) snaps.emplace(dir / "snapshots");

    RunResult result;
    try {
        result = integrate(doc.run, Sinks{&csv, snaps ? &*snaps : nullptr});
    } catch (const NumericalError& e) {
        fmt::print(err, "simulation failed: {}\nmetrics up to the failure are in {}\n", e.what(),
                   (dir / "metrics.csv").string());
        return kExitCheckFailed;
    }
    fmt::print(out, "ran {} steps to t = {:.6g}; metrics in {}\n", doc.run.n_steps,
               result.final_state.t, (dir / "metrics.csv").string());
    const ThresholdReport theory =
        threshold_report(doc.run.params, doc.run.bounds, doc.C_star, doc.conventions());
    fmt::print(out, "{}\n", theory.verdict());
    print_run_checks(out, doc, result, theory);
    return kExitOk;
}

int cmd_verify(std::ostream& out) {
    bool ok = true;
    for (const auto& check : verify::run_suite()) {
        fmt::print(out, "[{}] {}: {}\n", check.passed ? "PASS" : "FAIL", check.name, check.detail);
        ok = ok && check.passed;
    }
    fmt::print(out, "{}\n", ok ? "all checks passed" : "verification FAILED");
    return ok ? kExitOk : kExitCheckFailed;
}

struct PointSamples {
    std::vector<double> u;
    std::vector<double> w;
    std::vector<double> rho;
};

PointSamples sample(const NetworkState& s, int ix, int iy) {
    PointSamples p;
    for (int i = 0; i < s.neurons(); ++i) {
        p.u.push_back(s.u[i](ix, iy));
        p.w.push_back(s.w[i](ix, iy));
        p.rho.push_back(s.rho[i](ix, iy));
    }
    return p;
}

double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

int cmd_reproduce(const Options& opt, std::ostream& out) {
    ConfigDocument constants_doc = paper_config();
    ConfigDocument sim_doc = paper_tables_config();
    if (opt.seed) sim_doc.run.seed = *opt.seed;
    if (opt.tail_fraction) sim_doc.tail_fraction = *opt.tail_fraction;
    const fs::path dir = prepare_dir(opt.out_dir.empty() ? "paper-out" : opt.out_dir);

    // constants
    const auto& p = constants_doc.run.params;
    const ThresholdReport reconciled = threshold_report(p, constants_doc.run.bounds,
                                                        constants_doc.C_star,
                                                        constants_doc.conventions());
    const ThresholdReport integral = threshold_report(
        p, constants_doc.run.bounds, constants_doc.C_star,
        NormConventions::integral(constants_doc.run.bounds, constants_doc.run.grid));
    fmt::print(out, "== constants (k = {}, lambda = {}, phi = {}, beta = {:.6g}, C* = {})\n", p.k,
               constants_doc.run.bounds.lambda, constants_doc.run.bounds.phi_bar,
               constants_doc.run.bounds.beta, constants_doc.C_star);
    fmt::print(out, "  {:<6} {:>20} {:>20} {:>12} {:>20}\n", "name", "published", "reconciled",
               "rel. error", "integral conv.");
    for (const auto& pub : kPublished) {
        const double v = constant_value(reconciled.constants, pub.name);
        fmt::print(out, "  {:<6} {:>20.10g} {:>20.10g} {:>12.3e} {:>20.10g}\n", pub.name,
                   pub.value, v, std::abs(v - pub.value) / std::abs(pub.value),
                   constant_value(integral.constants, pub.name));
    }
    fmt::print(out, "reconciled: {}\nintegral:   {}\n", reconciled.verdict(), integral.verdict());
    write_constants_csv(dir / "constants.csv", reconciled);

    // simulation
    const RunConfig& run = sim_doc.run;
    fmt::print(out,
               "\n== simulation: {}x{} grid, dx = {}, dt = {}, {} steps, m = {}, k = {}, seed {}\n",
               run.grid.nx, run.grid.ny, run.grid.dx, run.dt, run.n_steps, run.params.m,
               run.params.k, run.seed);
    const ThresholdReport sim_theory =
        threshold_report(run.params, run.bounds, sim_doc.C_star, sim_doc.conventions());
    fmt::print(out, "theorem at the simulated k: {}\n", sim_theory.verdict());

    const NetworkState init = init_random(run.grid, run.params, run.amplitude, run.seed);
    CsvMetricsWriter csv(dir / "metrics.csv", run.params.m);
    const RunResult result = integrate(run, init, Sinks{&csv, nullptr});

    const PointSamples first = sample(init, kSampleX, kSampleY);
    const PointSamples last = sample(result.final_state, kSampleX, kSampleY);
    auto table = [&](const char* name, const std::vector<double>& a, const std::vector<double>& b) {
        fmt::print(out, "\n{} at grid index ({}, {}), 0-based\n", name, kSampleX, kSampleY);
        fmt::print(out, "  {:<6} {:>22} {:>22}\n", "", "initial", fmt::format("step {}", run.n_steps));
        for (std::size_t i = 0; i < a.size(); ++i) {
            fmt::print(out, "  {:<6} {:>22.17g} {:>22.17g}\n", fmt::format("{}_{}", name, i + 1),
                       a[i], b[i]);
        }
        fmt::print(out, "  {:<6} {:>22.6e} {:>22.6e}\n", "spread", spread(a), spread(b));
    };
    table("u", first.u, last.u);
    table("w", first.w, last.w);
    table("rho", first.rho, last.rho);

    // checks
    fmt::print(out, "\n== checks\n");
    bool ok = true;
    auto check = [&](bool pass, const std::string& what) {
        fmt::print(out, "[{}] {}\n", pass ? "PASS" : "FAIL", what);
        ok = ok && pass;
    };
    const double u_ratio = spread(first.u) / spread(last.u);
    const double rho_ratio = spread(first.rho) / spread(last.rho);
    check(u_ratio >= 100.0, fmt::format("u spread shrinks {:.4g}x (>= 100x)", u_ratio));
    check(rho_ratio >= 1000.0, fmt::format("rho spread shrinks {:.4g}x (>= 1000x)", rho_ratio));
    const auto [ulo, uhi] = std::minmax_element(last.u.begin(), last.u.end());
    check(*ulo >= 0.85 && *uhi <= 0.95,
          fmt::format("final u in [0.85, 0.95] (got {:.6f} .. {:.6f})", *ulo, *uhi));
    const auto [rlo, rhi] = std::minmax_element(last.rho.begin(), last.rho.end());
    check(*rlo >= 0.025 && *rhi <= 0.035,
          fmt::format("final rho in [0.025, 0.035] (got {:.6f} .. {:.6f})", *rlo, *rhi));

    const MetricsSeries& series = result.metrics;
    const TheoryConstants& tc = reconciled.constants;
    const AbsorbingReport ab = absorbing_check(series, tc.K);
    check(ab.passed, fmt::format("total energy stays <= K = {:.10g} (max {:.6g})", tc.K,
                                 ab.max_energy_after_entry));
    const BoundReport l4 = l4_bound_check(series, tc.Q);
    check(l4.passed, fmt::format("trailing sum ||u_i||^4_L4 < 1+Q = {:.10g} (max {:.6g})", l4.bound,
                                 l4.max_value));
    const double t0 = sim_doc.transient_time();
    const EnvelopeReport env = sync_envelope_check(series, tc.alpha, t0, sim_doc.envelope_slack);
    check(env.passed, fmt::format("every D_ij under {:.3g} D_ij({}) exp(-{} (t - {})) (worst ratio {:.4g})",
                                  sim_doc.envelope_slack, env.reference_time, tc.alpha,
                                  env.reference_time, env.worst_ratio));
    const DecayFit fit = fit_decay_rate(series, std::nullopt, {0.5, 2.5});
    check(fit.rate >= tc.alpha, fmt::format("fitted decay rate of sum D_ij over [0.5, 2.5] = {:.6g} "
                                            ">= alpha = {} (r^2 {:.6f})",
                                            fit.rate, tc.alpha, fit.r_squared));
    fmt::print(out, "asynchronous degree surrogate (trailing {:.0f}%): {:.6e}\n",
               100.0 * sim_doc.tail_fraction,
               asynchronous_degree_estimate(series, sim_doc.tail_fraction));

    // same data at the constants' k, for comparison
    {
        RunConfig alt = run;
        alt.params.k = p.k;
        alt.record_every = static_cast<int>(alt.n_steps);
        alt.record_initial = false;
        const RunResult other = integrate(alt, init);
        const PointSamples s = sample(other.final_state, kSampleX, kSampleY);
        fmt::print(out,
                   "for comparison, k = {}: final u_1 = {:.6f}, rho_1 = {:.6f}, u spread {:.3e}\n",
                   p.k, s.u[0], s.rho[0], spread(s.u));
    }

    // figures
    const Table data = to_table(series);
    auto cols = [&](const char* stem) {
        std::vector<std::string> names;
        for (int i = 1; i <= run.params.m; ++i) names.push_back(fmt::format("{}_{}", stem, i));
        return names;
    };
    std::vector<std::string> pairs;
    for (const auto& n : data.names) {
        if (n.rfind("D_", 0) == 0) pairs.push_back(n);
    }
    struct Figure {
        const char* file;
        std::vector<std::string> columns;
        const char* title;
        bool log_y;
    };
    const Figure figures[] = {
        {"fig1_u_norm.svg", cols("u_norm"), "L2 norm of u_i", false},
        {"fig2_w_norm.svg", cols("w_norm"), "L2 norm of w_i", false},
        {"fig3_rho_norm.svg", cols("rho_norm"), "L2 norm of rho_i", false},
        {"fig4_g_norm_sq.svg", cols("g_norm_sq"), "energy norm ||g_i||^2", false},
        {"fig5_pair_differences.svg", pairs, "pairwise differences D_ij", true},
    };
    for (const Figure& f : figures) {
        PlotOptions po;
        po.title = f.title;
        po.log_y = f.log_y;
        render_plot_svg(data, f.columns, dir / f.file, po);
    }
    fmt::print(out, "\nwrote metrics.csv, constants.csv and {} figures to {}\n", std::size(figures),
               dir.string());
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_plot(const Options& opt, std::ostream& out) {
    if (opt.csv.empty()) throw UsageError("plot needs a CSV path");
    if (opt.columns.empty()) throw UsageError("plot needs --columns");
    const Table table = read_csv_table(opt.csv);
    PlotOptions po;
    po.log_y = opt.log_y;
    po.title = fs::path(opt.csv).filename().string();
    const fs::path target = opt.out_dir.empty() ? fs::path("plot.svg") : fs::path(opt.out_dir);
    render_plot_svg(table, opt.columns, target, po);
    fmt::print(out, "wrote {}\n", target.string());
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Memristive FitzHugh-Nagumo network simulator and synchronization checker",
                 "fhnsync"};
    app.require_subcommand(1);
    Options opt;

    auto add_seed = [&](CLI::App* sub) {
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& s) { opt.seed = s; },
            "override the initial-data seed");
    };
    auto add_tail = [&](CLI::App* sub) {
        sub->add_option_function<double>(
               "--tail-fraction", [&](const double& x) { opt.tail_fraction = x; },
               "trailing fraction of samples for the asynchronous-degree surrogate")
            ->check(CLI::Range(0.0, 1.0));
    };

    auto* constants = app.add_subcommand("constants", "theory constants and threshold verdict");
    constants->add_option("--config", opt.config, "JSON config")->required();
    constants->add_option("--out", opt.out_dir, "directory for constants.csv");

    auto* simulate = app.add_subcommand("simulate", "run a configuration");
    simulate->add_option("--config", opt.config, "JSON config")->required();
    simulate->add_option("--out", opt.out_dir, "output directory (overrides out_dir)");
    add_seed(simulate);
    add_tail(simulate);

    auto* verify_cmd = app.add_subcommand("verify", "run the oracle suite");

    auto* reproduce = app.add_subcommand("reproduce-paper", "the published 32x32 example");
    reproduce->add_option("--out", opt.out_dir, "output directory (default paper-out)");
    add_seed(reproduce);
    add_tail(reproduce);

    auto* plot = app.add_subcommand("plot", "SVG line chart from a CSV");
    plot->add_option("csv", opt.csv, "input CSV")->required();
    plot->add_option("--columns", opt.columns, "comma-separated column names")
        ->delimiter(',')
        ->required();
    plot->add_option("--out", opt.out_dir, "output SVG path (default plot.svg)");
    plot->add_flag("--log-y", opt.log_y, "logarithmic y axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*constants) return cmd_constants(opt, out);
        if (*simulate) return cmd_simulate(opt, out, err);
        if (*verify_cmd) return cmd_verify(out);
        if (*reproduce) return cmd_reproduce(opt, out);
        if (*plot) return cmd_plot(opt, out);
    } catch (const ConfigError& e) {
        fmt::print(err, "{}\n", e.what());
        return kExitUsage;
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const IoError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const NumericalError& e) {
        fmt::print(err, "numerical failure: {}\n", e.what());
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace fhn::cli
