// Command-line driver: single solves, experiment sweeps, the verification
// suite, and figure-style data export. All numeric output is CSV with
// 17-significant-digit floats so runs can be diffed across machines.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <dsm/harness.hpp>

namespace {

using Config = dsm::ExperimentConfig<double>;
using Record = dsm::ExperimentRecord<double>;

struct CliOptions {
    std::string problem = "wiener";
    std::string target = "one";
    int n_points = 100;
    std::vector<double> delta_rel{0.01};
    std::vector<std::string> methods{"dsmg"};
    std::vector<std::uint64_t> seeds{1};
    double c1 = 1.01;
    double zeta = 0.99;
    std::optional<double> c0;
    std::optional<double> b;
    double c = 1.0;
    long max_iter = 20000;
    double alpha = 1.0;
    std::string alpha_mode = "capped";
    double alpha_floor = 1e-6;
    double dt = 0.1;
    double t_max = 2000.0;
    std::optional<double> m1;
    double ball_radius = 2.0;
    double schedule_d = 2.0;
    double newton_tol = 1e-10;
    std::string out;
};

void add_common_flags(CLI::App& cmd, CliOptions& o) {
    cmd.add_option("--problem", o.problem, "Problem name (wiener)");
    cmd.add_option("--target", o.target, "Target solution: one, sin-pi, sin-2pi");
    cmd.add_option("--n-points", o.n_points, "Number of grid nodes");
    cmd.add_option("--delta-rel", o.delta_rel, "Relative noise level(s), comma separated")
        ->delimiter(',');
    cmd.add_option("--method", o.methods, "Method(s): dsmg, dsmg-flow, dsmn")->delimiter(',');
    cmd.add_option("--seed", o.seeds, "Noise seed(s), comma separated")->delimiter(',');
    cmd.add_option("--c1", o.c1, "Discrepancy constant C1 > 1");
    cmd.add_option("--zeta", o.zeta, "Discrepancy exponent zeta in (0,1]");
    cmd.add_option("--c0", o.c0, "Initial-strength multiplier a0 = C0 delta^zeta "
                                 "(default 0.5 for dsmg, 1 for dsmn)");
    cmd.add_option("--b", o.b, "Schedule decay exponent (default 0.25 for dsmg, 1 for dsmn)");
    cmd.add_option("--c", o.c, "Schedule shift c >= 1");
    cmd.add_option("--max-iter", o.max_iter, "Iteration cap");
    cmd.add_option("--alpha", o.alpha, "Requested gradient step size");
    cmd.add_option("--alpha-mode", o.alpha_mode, "Step policy: capped or constant")
        ->check(CLI::IsMember({"capped", "constant"}));
    cmd.add_option("--alpha-floor", o.alpha_floor, "Step-size floor");
    cmd.add_option("--dt", o.dt, "Flow time step");
    cmd.add_option("--t-max", o.t_max, "Flow time horizon");
    cmd.add_option("--m1", o.m1, "Override the derivative bound M1");
    cmd.add_option("--ball-radius", o.ball_radius, "Working-ball radius for the bounds");
    cmd.add_option("--out", o.out, "Output CSV basename");
    cmd.set_config("--config", "", "Flat key = value config file; command-line flags win");
}

Config to_config(const CliOptions& o, const std::string& method, double delta_rel,
                 std::uint64_t seed) {
    Config cfg;
    cfg.problem = o.problem;
    cfg.target = o.target;
    cfg.n_points = o.n_points;
    cfg.delta_rel = delta_rel;
    cfg.method = method;
    cfg.c1 = o.c1;
    cfg.zeta = o.zeta;
    cfg.c0 = o.c0;
    cfg.b = o.b;
    cfg.c = o.c;
    cfg.seed = seed;
    cfg.max_iterations = o.max_iter;
    cfg.alpha = o.alpha;
    cfg.alpha_mode = o.alpha_mode;
    cfg.alpha_floor = o.alpha_floor;
    cfg.dt = o.dt;
    cfg.t_max = o.t_max;
    cfg.m1 = o.m1;
    cfg.ball_radius = o.ball_radius;
    return cfg;
}

void print_summary_table(const std::vector<Record>& rows) {
    std::printf("%-9s %6s %10s %6s %8s %10s %12s %12s %10s %8s %s\n", "method", "N",
                "delta_rel", "seed", "n_delta", "t_delta", "residual", "threshold",
                "rel_err", "time_s", "status");
    for (const auto& r : rows) {
        char t_delta[32] = "-";
        if (r.t_delta) {
            std::snprintf(t_delta, sizeof(t_delta), "%.4g", *r.t_delta);
        }
        char rel_err[32] = "-";
        if (r.rel_error_vs_y) {
            std::snprintf(rel_err, sizeof(rel_err), "%.4g", *r.rel_error_vs_y);
        }
        std::printf("%-9s %6d %10.4g %6llu %8ld %10s %12.5g %12.5g %10s %8.3f %s\n",
                    r.config.method.c_str(), r.config.n_points, r.config.delta_rel,
                    static_cast<unsigned long long>(r.config.seed), r.n_delta, t_delta,
                    r.residual_at_stop, r.threshold, rel_err, r.wall_time_s,
                    r.status.c_str());
    }
}

std::string run_tag(const Record& r) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s_%s_d%g_s%llu", r.config.method.c_str(),
                  r.config.target.c_str(), r.config.delta_rel,
                  static_cast<unsigned long long>(r.config.seed));
    return buf;
}

int cmd_solve(const CliOptions& o) {
    if (o.methods.size() != 1 || o.delta_rel.size() != 1 || o.seeds.size() != 1) {
        throw dsm::ParameterError("solve: runs a single configuration; use the experiment "
                                  "subcommand for sweeps");
    }
    Record record = dsm::run_experiment(to_config(o, o.methods[0], o.delta_rel[0], o.seeds[0]));
    print_summary_table({record});
    if (!o.out.empty()) {
        dsm::write_summary_csv(o.out + "_summary.csv", std::vector<Record>{record});
        if (record.status == "ok") {
            dsm::write_solution_csv(o.out + "_solution.csv", record);
        }
        std::printf("wrote %s_summary.csv and %s_solution.csv\n", o.out.c_str(), o.out.c_str());
    }
    return record.status == "ok" ? 0 : 1;
}

int cmd_experiment(const CliOptions& o) {
    std::vector<Record> rows;
    for (const auto& method : o.methods) {
        for (double delta_rel : o.delta_rel) {
            for (std::uint64_t seed : o.seeds) {
                rows.push_back(dsm::run_experiment(to_config(o, method, delta_rel, seed)));
            }
        }
    }
    print_summary_table(rows);
    if (!o.out.empty()) {
        dsm::write_summary_csv(o.out + "_summary.csv", rows);
        for (const auto& r : rows) {
            if (r.status == "ok") {
                dsm::write_solution_csv(o.out + "_" + run_tag(r) + "_solution.csv", r);
            }
        }
        std::printf("wrote %s_summary.csv and %zu solution tables\n", o.out.c_str(),
                    rows.size());
    }
    for (const auto& r : rows) {
        if (r.status != "ok") {
            return 1;
        }
    }
    return 0;
}

int cmd_verify(const CliOptions& o) {
    auto setup = dsm::build_setup<double>(o.problem, o.target, o.n_points, o.m1,
                                          o.ball_radius);
    dsm::LemmaSuiteOptions<double> options;
    options.delta_rel = o.delta_rel.front();
    options.seed = o.seeds.front();
    options.newton_tol = o.newton_tol;
    options.schedule_d = o.schedule_d;
    options.schedule_c = o.c;
    options.schedule_b = o.b.value_or(0.25);
    options.alpha_floor = o.alpha_floor >= 1e-4 ? o.alpha_floor : 1.0;

    auto outcomes = dsm::run_lemma_suite(setup, options);
    std::size_t failed = 0;
    std::printf("%-26s %-6s %s\n", "oracle", "result", "detail");
    for (const auto& oc : outcomes) {
        if (!oc.pass) {
            ++failed;
        }
        std::printf("%-26s %-6s %s\n", oc.name.c_str(), oc.pass ? "pass" : "FAIL",
                    oc.detail.c_str());
    }
    std::printf("%zu/%zu oracles passed\n", outcomes.size() - failed, outcomes.size());
    return failed == 0 ? 0 : 1;
}

int cmd_plot_data(const CliOptions& o) {
    if (o.out.empty()) {
        throw dsm::ParameterError("plot-data: --out is required");
    }
    if (o.delta_rel.size() != 1 || o.seeds.size() != 1) {
        throw dsm::ParameterError("plot-data: one delta-rel and one seed at a time");
    }
    std::vector<Record> rows;
    for (const auto& method : o.methods) {
        Record r = dsm::run_experiment(to_config(o, method, o.delta_rel[0], o.seeds[0]));
        if (r.status != "ok") {
            throw dsm::SolveError("plot-data: " + method + " failed: " + r.status);
        }
        rows.push_back(std::move(r));
    }
    const auto& grid = *rows.front().u_exact->grid();
    const std::string path = o.out + "_plot.csv";
    std::ofstream file(path);
    if (!file) {
        throw dsm::Error("plot-data: cannot open '" + path + "'");
    }
    file << "x,exact";
    for (const auto& r : rows) {
        file << ',' << r.config.method;
    }
    file << '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", grid.nodes()(i));
        file << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", rows.front().u_exact->values()(i));
        file << ',' << buf;
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%.17g",
                          r.report->final_iterate->values()(i));
            file << ',' << buf;
        }
        file << '\n';
    }
    print_summary_table(rows);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stable solver for ill-posed monotone operator equations: gradient and "
                 "Newton-type dynamical-systems iterations with a discrepancy-principle "
                 "stopping rule"};
    app.require_subcommand(1);

    CliOptions solve_opts;
    CLI::App* solve = app.add_subcommand("solve", "Run one solve and report the outcome");
    add_common_flags(*solve, solve_opts);

    CliOptions exp_opts;
    CLI::App* experiment = app.add_subcommand(
        "experiment", "Sweep methods, noise levels and seeds; write summary CSV");
    add_common_flags(*experiment, exp_opts);

    CliOptions verify_opts;
    CLI::App* verify = app.add_subcommand(
        "verify-lemmas", "Run the executable oracle suite on the model problem");
    add_common_flags(*verify, verify_opts);
    verify->add_option("--schedule-d", verify_opts.schedule_d,
                       "Schedule multiplier d for the integral checks");
    verify->add_option("--newton-tol", verify_opts.newton_tol,
                       "Inner Newton tolerance for the oracle solves");

    CliOptions plot_opts;
    plot_opts.methods = {"dsmg", "dsmn"};
    CLI::App* plot = app.add_subcommand(
        "plot-data", "Emit x/u columns (exact plus one column per method)");
    add_common_flags(*plot, plot_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            return cmd_solve(solve_opts);
        }
        if (experiment->parsed()) {
            return cmd_experiment(exp_opts);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_opts);
        }
        if (plot->parsed()) {
            return cmd_plot_data(plot_opts);
        }
    } catch (const dsm::ParameterError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
