#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsm/solver.hpp"

namespace dsm {

/// Standard normal deviates from mt19937_64 through an explicit Box-Muller
/// transform. Both pieces are pinned so that the same seed reproduces the
/// same noise bit-for-bit on any platform; std::normal_distribution is not
/// specified tightly enough for that.
template <typename Scalar = double>
class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}

    Scalar next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const Scalar u1 = Scalar(1) - uniform(); // in (0, 1], safe for log
        const Scalar u2 = uniform();
        const Scalar radius = std::sqrt(Scalar(-2) * std::log(u1));
        const Scalar angle = 2 * std::numbers::pi_v<Scalar> * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    DenseVector<Scalar> vector(Eigen::Index n) {
        DenseVector<Scalar> v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = next();
        }
        return v;
    }

private:
    Scalar uniform() {
        // 53 top bits -> [0, 1)
        return Scalar(engine_() >> 11) * Scalar(1.0 / 9007199254740992.0);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    Scalar spare_ = 0;
};

template <typename Scalar = double>
struct NoisyRhs {
    GridFunction<Scalar> f_delta;
    Scalar delta; // ||f_delta - f|| = delta_rel * ||f||, exact by scaling
};

/// f_delta = f + kappa * noise with kappa = delta_rel ||f|| / ||noise||.
template <typename Scalar>
NoisyRhs<Scalar> make_noisy_rhs(const GridFunction<Scalar>& f, Scalar delta_rel,
                                std::uint64_t seed) {
    if (delta_rel < 0) {
        throw ParameterError("make_noisy_rhs: need delta_rel >= 0");
    }
    if (delta_rel == 0) {
        return NoisyRhs<Scalar>{f, 0};
    }
    const Grid<Scalar>& grid = *f.grid();
    const Scalar f_norm = grid.norm(f.values());
    if (f_norm == 0) {
        throw ParameterError("make_noisy_rhs: ||f|| = 0");
    }
    GaussianNoise<Scalar> noise(seed);
    DenseVector<Scalar> e = noise.vector(grid.size());
    Scalar e_norm = grid.norm(e);
    if (e_norm == 0) {
        e = noise.vector(grid.size());
        e_norm = grid.norm(e);
        if (e_norm == 0) {
            throw SolveError("make_noisy_rhs: drew a zero noise vector twice");
        }
    }
    const Scalar kappa = delta_rel * f_norm / e_norm;
    return NoisyRhs<Scalar>{GridFunction<Scalar>(f.grid(), f.values() + kappa * e),
                            delta_rel * f_norm};
}

/// A named problem with its target solution and the matching right-hand side.
template <typename Scalar = double>
struct ProblemSetup {
    MonotoneProblem<Scalar> problem;
    GridFunction<Scalar> u_exact;
    GridFunction<Scalar> f;
};

/// Builds the named problem ("wiener") for a target solution ("one",
/// "sin-pi", "sin-2pi"). For u = 1 the right-hand side is closed-form; for
/// the sin targets it is produced by applying the operator on a 4x finer
/// grid and restricting to the coarse nodes, so the data carry less
/// discretization error than the solver's own quadrature.
template <typename Scalar = double>
ProblemSetup<Scalar> build_setup(const std::string& problem_name,
                                 const std::string& target,
                                 Eigen::Index n_points,
                                 std::optional<Scalar> m1_override = std::nullopt,
                                 Scalar ball_radius = Scalar(2)) {
    if (problem_name != "wiener") {
        throw ParameterError("build_setup: unknown problem '" + problem_name + "'");
    }
    GridPtr<Scalar> grid = make_grid<Scalar>(n_points);
    MonotoneProblem<Scalar> problem = make_wiener_problem<Scalar>(grid, ball_radius, m1_override);

    if (target == "one") {
        return ProblemSetup<Scalar>{problem, *problem.exact_solution(), *problem.rhs_exact()};
    }

    Scalar frequency;
    if (target == "sin-pi") {
        frequency = std::numbers::pi_v<Scalar>;
    } else if (target == "sin-2pi") {
        frequency = 2 * std::numbers::pi_v<Scalar>;
    } else {
        throw ParameterError("build_setup: unknown target '" + target + "'");
    }

    auto u_exact = GridFunction<Scalar>::sample(grid, [frequency](Scalar x) {
        return std::sin(frequency * x);
    });

    const Eigen::Index n_fine = 4 * (n_points - 1) + 1;
    GridPtr<Scalar> fine_grid = make_grid<Scalar>(n_fine);
    MonotoneProblem<Scalar> fine = make_wiener_problem<Scalar>(fine_grid, ball_radius);
    DenseVector<Scalar> u_fine(n_fine);
    for (Eigen::Index i = 0; i < n_fine; ++i) {
        u_fine(i) = std::sin(frequency * fine_grid->nodes()(i));
    }
    DenseVector<Scalar> f_fine = fine.apply(u_fine);
    DenseVector<Scalar> f_coarse(n_points);
    for (Eigen::Index i = 0; i < n_points; ++i) {
        f_coarse(i) = f_fine(4 * i);
    }
    GridFunction<Scalar> f(grid, std::move(f_coarse));
    MonotoneProblem<Scalar> with_data = problem.with_exact_data(u_exact, f);
    return ProblemSetup<Scalar>{std::move(with_data), std::move(u_exact), std::move(f)};
}

/// One experiment: problem/target, noise level, method, and the method's
/// tuning knobs. Omitted c0/b fall back to the method defaults
/// (dsmg: C0 = 0.5, b = 1/4; dsmn: C0 = 1, b = 1).
template <typename Scalar = double>
struct ExperimentConfig {
    std::string problem = "wiener";
    std::string target = "one";
    int n_points = 100;
    Scalar delta_rel = Scalar(0.01);
    std::string method = "dsmg"; // dsmg | dsmg-flow | dsmn
    Scalar c1 = Scalar(1.01);
    Scalar zeta = Scalar(0.99);
    std::optional<Scalar> c0;
    std::optional<Scalar> b;
    Scalar c = 1;
    std::uint64_t seed = 1;
    long max_iterations = 20000;
    Scalar alpha = 1;
    std::string alpha_mode = "capped"; // capped | constant
    Scalar alpha_floor = Scalar(1e-6);
    Scalar dt = Scalar(0.1);
    Scalar t_max = Scalar(2000);
    std::optional<Scalar> m1;
    Scalar ball_radius = 2;

    Scalar resolved_c0() const {
        if (c0) {
            return *c0;
        }
        return method == "dsmn" ? Scalar(1) : Scalar(0.5);
    }
    Scalar resolved_b() const {
        if (b) {
            return *b;
        }
        return method == "dsmn" ? Scalar(1) : Scalar(0.25);
    }
};

template <typename Scalar = double>
struct ExperimentRecord {
    ExperimentConfig<Scalar> config;
    std::string status = "ok"; // solver failures recorded here, not thrown
    Scalar delta = 0;
    Scalar threshold = 0;
    long n_delta = -1;
    std::optional<Scalar> t_delta;
    Scalar residual_at_stop = std::numeric_limits<Scalar>::quiet_NaN();
    std::optional<Scalar> error_vs_y;     // ||u - y||
    std::optional<Scalar> rel_error_vs_y; // ||u - y|| / ||y||
    Scalar wall_time_s = 0;
    std::string stopped_by;
    std::optional<SolveReport<Scalar>> report;
    std::optional<GridFunction<Scalar>> u_exact;
};

/// Runs one configured experiment. Config errors throw; solver failures are
/// recorded in the status field so sweeps keep going.
template <typename Scalar>
ExperimentRecord<Scalar> run_experiment(const ExperimentConfig<Scalar>& config) {
    if (config.method != "dsmg" && config.method != "dsmg-flow" && config.method != "dsmn") {
        throw ParameterError("run_experiment: unknown method '" + config.method + "'");
    }
    if (config.delta_rel <= 0) {
        throw ParameterError("run_experiment: delta_rel must be positive; the discrepancy "
                             "stop is undefined without noise");
    }

    ProblemSetup<Scalar> setup = build_setup<Scalar>(config.problem, config.target,
                                                     config.n_points, config.m1,
                                                     config.ball_radius);
    NoisyRhs<Scalar> data = make_noisy_rhs(setup.f, config.delta_rel, config.seed);

    ExperimentRecord<Scalar> record;
    record.config = config;
    record.u_exact = setup.u_exact;
    record.delta = data.delta;

    StopRule<Scalar> stop{config.c1, config.zeta, data.delta, config.max_iterations};
    record.threshold = stop.threshold();

    const Scalar a0 = heuristic_a0(data.delta, config.zeta, config.resolved_c0());
    GridFunction<Scalar> u0 = GridFunction<Scalar>::zero(setup.problem.grid());

    const auto t_start = std::chrono::steady_clock::now();
    try {
        SolveReport<Scalar> report;
        if (config.method == "dsmn") {
            report = dsmn_iterate(setup.problem, data.f_delta, a0, stop, u0);
        } else {
            PowerSchedule<Scalar> schedule(a0, config.c, config.resolved_b());
            if (config.method == "dsmg") {
                StepSizePolicy<Scalar> steps = config.alpha_mode == "constant"
                    ? StepSizePolicy<Scalar>::constant(config.alpha, config.alpha_floor)
                    : StepSizePolicy<Scalar>::capped(config.alpha, config.alpha_floor);
                report = dsmg_iterate(setup.problem, data.f_delta, schedule, steps, stop, u0);
            } else {
                report = dsmg_flow(setup.problem, data.f_delta, schedule, stop, u0,
                                   config.dt, config.t_max);
            }
        }
        record.n_delta = report.n_delta;
        record.t_delta = report.t_delta;
        record.residual_at_stop = report.residual_at_stop();
        record.error_vs_y = report.error_vs_y;
        if (report.error_vs_y) {
            const Scalar y_norm = norm(setup.u_exact);
            if (y_norm > 0) {
                record.rel_error_vs_y = *report.error_vs_y / y_norm;
            }
        }
        record.stopped_by = to_string(report.stopped_by);
        record.report = std::move(report);
    } catch (const Error& err) {
        record.status = err.what();
        record.stopped_by = "error";
    }
    const auto t_end = std::chrono::steady_clock::now();
    record.wall_time_s = std::chrono::duration<Scalar>(t_end - t_start).count();
    return record;
}

namespace detail {

template <typename Scalar>
std::string csv_number(Scalar v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(v));
    return buf;
}

template <typename Scalar>
std::string csv_optional(const std::optional<Scalar>& v) {
    return v ? csv_number(*v) : std::string("nan");
}

} // namespace detail

inline const char* summary_csv_header() {
    return "method,n_points,delta_rel,n_delta,residual_at_stop,error_vs_y,wall_time_s,"
           "status,rel_error_vs_y,t_delta,threshold,delta,seed,target,stopped_by";
}

template <typename Scalar>
std::string summary_csv_row(const ExperimentRecord<Scalar>& r) {
    std::ostringstream out;
    out << r.config.method << ',' << r.config.n_points << ','
        << detail::csv_number(r.config.delta_rel) << ',' << r.n_delta << ','
        << detail::csv_number(r.residual_at_stop) << ','
        << detail::csv_optional(r.error_vs_y) << ','
        << detail::csv_number(r.wall_time_s) << ','
        << (r.status == "ok" ? "ok" : "error") << ','
        << detail::csv_optional(r.rel_error_vs_y) << ','
        << detail::csv_optional(r.t_delta) << ','
        << detail::csv_number(r.threshold) << ','
        << detail::csv_number(r.delta) << ','
        << r.config.seed << ',' << r.config.target << ','
        << r.stopped_by;
    return out.str();
}

template <typename Scalar>
void write_summary_csv(const std::string& path, const std::vector<ExperimentRecord<Scalar>>& rows) {
    std::ofstream out(path);
    if (!out) {
        throw Error("write_summary_csv: cannot open '" + path + "'");
    }
    out << summary_csv_header() << '\n';
    for (const auto& r : rows) {
        out << summary_csv_row(r) << '\n';
    }
    if (!out) {
        throw Error("write_summary_csv: write failed for '" + path + "'");
    }
}

/// Solution table x, u_exact, u_numeric (the figure data).
template <typename Scalar>
void write_solution_csv(const std::string& path, const ExperimentRecord<Scalar>& record) {
    if (!record.report || !record.report->final_iterate || !record.u_exact) {
        throw Error("write_solution_csv: record holds no solution");
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("write_solution_csv: cannot open '" + path + "'");
    }
    const auto& u = *record.report->final_iterate;
    const auto& y = *record.u_exact;
    const auto& x = u.grid()->nodes();
    out << "x,u_exact,u_numeric\n";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out << detail::csv_number(x(i)) << ',' << detail::csv_number(y.values()(i)) << ','
            << detail::csv_number(u.values()(i)) << '\n';
    }
    if (!out) {
        throw Error("write_solution_csv: write failed for '" + path + "'");
    }
}

/// Outcome of one verification oracle.
struct OracleOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

template <typename Scalar = double>
struct LemmaSuiteOptions {
    Scalar delta_rel = Scalar(0.01);
    std::uint64_t seed = 1;
    Scalar newton_tol = Scalar(1e-10);
    int monotonicity_samples = 200;
    int derivative_samples = 20;
    // Schedule the integral inequalities and the continuous validator run on.
    Scalar schedule_d = 2;
    Scalar schedule_c = 1;
    Scalar schedule_b = Scalar(0.25);
    Scalar alpha_floor = 1;
};

/// Executable oracle suite for the auxiliary results: monotonicity and
/// derivative checks of the operator, monotone discrepancy curve,
/// perturbation bounds, schedule validators with rescaling, the two
/// integral inequalities, and the initial-condition checks. Individual
/// failures are reported, never swallowed.
template <typename Scalar>
std::vector<OracleOutcome> run_lemma_suite(const ProblemSetup<Scalar>& setup,
                                           const LemmaSuiteOptions<Scalar>& options = {}) {
    using Vector = DenseVector<Scalar>;
    std::vector<OracleOutcome> outcomes;
    const MonotoneProblem<Scalar>& problem = setup.problem;
    const Grid<Scalar>& grid = *problem.grid();
    const Eigen::Index n = grid.size();

    auto guard = [&outcomes](const std::string& name, auto&& body) {
        OracleOutcome o;
        o.name = name;
        try {
            body(o);
        } catch (const std::exception& err) {
            o.pass = false;
            o.detail = err.what();
        }
        outcomes.push_back(std::move(o));
    };

    NoisyRhs<Scalar> data = make_noisy_rhs(setup.f, options.delta_rel, options.seed);
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    auto uniform_vec = [&rng, n](Scalar lo, Scalar hi) {
        std::uniform_real_distribution<Scalar> dist(lo, hi);
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = dist(rng);
        }
        return v;
    };

    guard("monotonicity", [&](OracleOutcome& o) {
        Scalar worst = std::numeric_limits<Scalar>::infinity();
        for (int k = 0; k < options.monotonicity_samples; ++k) {
            Vector u = uniform_vec(-2, 2);
            Vector v = uniform_vec(-2, 2);
            const Scalar q = grid.dot(problem.apply(u) - problem.apply(v), u - v);
            worst = std::min(worst, q);
        }
        o.pass = worst >= Scalar(-1e-12);
        o.detail = "min <F(u)-F(v),u-v> = " + detail::format_number(worst);
    });

    guard("derivative_fd", [&](OracleOutcome& o) {
        const Scalar eps = Scalar(1e-5);
        Scalar worst = 0;
        for (int k = 0; k < options.derivative_samples; ++k) {
            Vector u = uniform_vec(-1, 1);
            Vector h = uniform_vec(-1, 1);
            u /= std::max(Scalar(1), grid.norm(u));
            h /= std::max(Scalar(1), grid.norm(h));
            Vector fd = (problem.apply(u + eps * h) - problem.apply(u - eps * h)) / (2 * eps);
            Vector an = problem.derivative_apply(u, h);
            worst = std::max(worst, grid.norm(fd - an) / std::max(grid.norm(an), Scalar(1e-30)));
        }
        o.pass = worst <= Scalar(1e-6);
        o.detail = "max relative FD mismatch = " + detail::format_number(worst);
    });

    guard("adjoint_identity", [&](OracleOutcome& o) {
        Scalar worst = 0;
        for (int k = 0; k < options.derivative_samples; ++k) {
            Vector u = uniform_vec(-1, 1);
            Vector h = uniform_vec(-1, 1);
            Vector g = uniform_vec(-1, 1);
            const Scalar lhs = grid.dot(problem.derivative_apply(u, h), g);
            const Scalar rhs = grid.dot(h, problem.adjoint_derivative_apply(u, g));
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), Scalar(1e-30)));
        }
        o.pass = worst <= Scalar(1e-10);
        o.detail = "max relative adjoint defect = " + detail::format_number(worst);
    });

    std::vector<Scalar> a_grid;
    {
        const int points = 25;
        const Scalar a_hi = 10;
        const Scalar a_lo = Scalar(1e-3);
        for (int i = 0; i < points; ++i) {
            a_grid.push_back(a_hi * std::pow(a_lo / a_hi, Scalar(i) / (points - 1)));
        }
    }

    guard("discrepancy_curve_monotone", [&](OracleOutcome& o) {
        const auto curve = discrepancy_curve(problem, data.f_delta, a_grid, options.newton_tol);
        const Scalar slack = 10 * options.newton_tol;
        bool phi_down = true;
        bool psi_up = true;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            phi_down = phi_down
                       && curve[i].residual_norm < curve[i - 1].residual_norm + slack;
            psi_up = psi_up && curve[i].solution_norm > curve[i - 1].solution_norm - slack;
        }
        o.pass = phi_down && psi_up;
        o.detail = std::string("residual norm ") + (phi_down ? "decreasing" : "NOT decreasing")
                   + ", solution norm " + (psi_up ? "increasing" : "NOT increasing")
                   + " over " + std::to_string(curve.size()) + " solves";
    });

    guard("large_a_limit", [&](OracleOutcome& o) {
        const Scalar a_max = a_grid.front();
        const auto sol = solve_regularized(problem, a_max, data.f_delta, options.newton_tol);
        const Scalar phi = grid.norm(problem.apply(sol.solution.values()) - data.f_delta.values());
        const Scalar f0_gap = grid.norm(problem.apply(Vector::Zero(n)) - data.f_delta.values());
        const Scalar bound = grid.norm(data.f_delta.values()) * problem.bounds().m1 / a_max;
        o.pass = std::abs(phi - f0_gap) <= bound;
        o.detail = "|phi(a_max) - ||F(0)-f_delta||| = " + detail::format_number(std::abs(phi - f0_gap))
                   + " vs bound " + detail::format_number(bound);
    });

    guard("perturbation_bound", [&](OracleOutcome& o) {
        bool ok = true;
        std::string worst;
        for (Scalar a : {Scalar(1e-1), Scalar(1e-2), Scalar(1e-3)}) {
            const auto chk = perturbation_bound_check(problem, setup.f, data.f_delta, a,
                                                      options.newton_tol);
            if (chk.lhs > chk.rhs + Scalar(1e-8)) {
                ok = false;
                worst = "violated at a = " + detail::format_number(a);
            }
            if (problem.exact_solution()) {
                const Scalar y_norm = grid.norm(problem.exact_solution()->values());
                if (chk.v_norm > y_norm + Scalar(1e-8)) {
                    ok = false;
                    worst = "||V|| > ||y|| at a = " + detail::format_number(a);
                }
            }
        }
        o.pass = ok;
        o.detail = ok ? "||V_delta - V|| <= delta/a and ||V|| <= ||y|| at a in {1e-1,1e-2,1e-3}"
                      : worst;
    });

    const PowerSchedule<Scalar> schedule(options.schedule_d, options.schedule_c,
                                         options.schedule_b);

    guard("schedule_continuous", [&](OracleOutcome& o) {
        const auto v = validate_continuous(schedule);
        o.pass = v.ok();
        o.detail = o.pass ? "admissible" : ("violated: " + v.failed_names());
    });

    const std::vector<Scalar> t_grid{Scalar(0.5), Scalar(1), Scalar(5), Scalar(20)};

    guard("decay_integral", [&](OracleOutcome& o) {
        const auto checks = check_decay_integral(schedule, t_grid);
        Scalar min_margin = std::numeric_limits<Scalar>::infinity();
        bool ok = true;
        for (const auto& c : checks) {
            ok = ok && c.ok;
            min_margin = std::min(min_margin, c.margin);
        }
        o.pass = ok && min_margin > 0;
        o.detail = "min margin = " + detail::format_number(min_margin);
    });

    guard("drift_integral", [&](OracleOutcome& o) {
        PsiSamples<Scalar> psi;
        std::optional<Vector> warm;
        const int samples = 33;
        const Scalar t_end = t_grid.back();
        for (int i = 0; i < samples; ++i) {
            const Scalar s = t_end * Scalar(i) / (samples - 1);
            const Scalar a = schedule.value(s);
            auto sol = solve_regularized(problem, a, data.f_delta, options.newton_tol,
                                         warm ? &*warm : nullptr);
            warm = sol.solution.values();
            psi.s.push_back(s);
            psi.value.push_back(grid.norm(*warm));
        }
        const auto checks = check_drift_integral(schedule, t_grid, std::optional(psi));
        Scalar min_margin = std::numeric_limits<Scalar>::infinity();
        bool ok = true;
        for (const auto& c : checks) {
            ok = ok && c.ok;
            min_margin = std::min(min_margin, c.margin);
        }
        o.pass = ok;
        o.detail = "min margin = " + detail::format_number(min_margin);
    });

    guard("schedule_discrete_scaled", [&](OracleOutcome& o) {
        const OperatorBounds<Scalar>& bounds = problem.bounds();
        const Scalar c0 = bounds.curvature_c0();
        const Scalar y_norm = problem.exact_solution()
                                  ? grid.norm(problem.exact_solution()->values())
                                  : grid.norm(data.f_delta.values());
        const Scalar lambda = bounds.m1 * (1 / y_norm + 4 * c0);
        const Scalar f0_gap_exact = grid.norm(problem.apply(Vector::Zero(n)) - setup.f.values());
        const Scalar f_norm = grid.norm(setup.f.values());
        const Scalar a0 = std::cbrt(lambda * (f0_gap_exact + f_norm));
        const PowerSchedule<Scalar> base(a0, 1, Scalar(0.25));
        DiscreteScheduleParams<Scalar> params;
        params.lambda = lambda;
        params.y_norm = y_norm;
        params.alpha_floor = options.alpha_floor;
        params.big_c = Scalar(1.005);
        const Scalar f0_gap = grid.norm(problem.apply(Vector::Zero(n)) - data.f_delta.values());
        const auto scaled = scale_to_admissible(base, bounds, params, f0_gap);
        o.pass = scaled.validation.ok();
        o.detail = "scale factor = " + detail::format_number(scaled.factor)
                   + (o.pass ? ", all five conditions hold to n = 10^4" : ", re-validation failed");
    });

    guard("initial_condition", [&](OracleOutcome& o) {
        const Scalar a0 = heuristic_a0(data.delta, Scalar(0.99), Scalar(0.5));
        const auto reg = solve_regularized(problem, a0, data.f_delta, options.newton_tol);
        const auto at_v0 = check_initial_condition(problem, data.f_delta, a0, reg.solution,
                                                   options.newton_tol);
        const auto at_zero = check_initial_condition(problem, data.f_delta, a0,
                                                     GridFunction<Scalar>::zero(problem.grid()),
                                                     options.newton_tol);
        o.pass = at_v0.h0_ok && at_zero.g0_ok;
        o.detail = "h0(V0) = " + detail::format_number(at_v0.h0) + " <= "
                   + detail::format_number(at_v0.h0_bound) + "; g0(0) = "
                   + detail::format_number(at_zero.g0) + " <= "
                   + detail::format_number(at_zero.g0_bound);
    });

    return outcomes;
}

} // namespace dsm
