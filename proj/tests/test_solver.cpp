#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <dsm/solver.hpp>

#include "oracles.hpp"

using dsm::GridFunction;
using dsm::PowerSchedule;
using dsm::StepSizePolicy;
using dsm::StopRule;
using dsm::make_grid;
using dsm::make_wiener_problem;

namespace {

struct Setup {
    dsm::GridPtr<double> grid = make_grid<double>(100);
    dsm::MonotoneProblem<double> problem = make_wiener_problem<double>(grid);
    GridFunction<double> f = *problem.rhs_exact();
    double f_norm = grid->norm(f.values());

    struct Data {
        GridFunction<double> f_delta;
        double delta;
    };

    Data noisy(double delta_rel, std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        Eigen::VectorXd e = oracles::random_vector(rng, grid->size(), -1.0, 1.0);
        e /= grid->norm(e);
        const double delta = delta_rel * f_norm;
        return Data{GridFunction<double>(grid, f.values() + delta * e), delta};
    }

    PowerSchedule<double> dsmg_schedule(double delta) const {
        return PowerSchedule<double>(dsm::heuristic_a0(delta, 0.99, 0.5), 1.0, 0.25);
    }
};

void check_stop_contract(const dsm::SolveReport<double>& report, double threshold) {
    REQUIRE(report.stopped_by == dsm::StopCause::Discrepancy);
    REQUIRE(report.residual_history.size() == std::size_t(report.n_delta) + 1);
    for (long n = 0; n < report.n_delta; ++n) {
        CHECK(report.residual_history[std::size_t(n)] > threshold);
    }
    CHECK(report.residual_history.back() <= threshold);
}

} // namespace

TEST_CASE("gradient iteration stops by the discrepancy principle") {
    Setup s;
    auto data = s.noisy(0.01, 1);
    StopRule<double> stop{1.01, 0.99, data.delta, 20000};
    auto report = dsm::dsmg_iterate(s.problem, data.f_delta, s.dsmg_schedule(data.delta),
                                    StepSizePolicy<double>::capped(1.0), stop,
                                    GridFunction<double>::zero(s.grid));

    check_stop_contract(report, stop.threshold());
    CHECK(report.n_delta >= 15);
    CHECK(report.n_delta <= 250);
    REQUIRE(report.error_vs_y.has_value());
    CHECK(*report.error_vs_y <= 0.1);
    CHECK(report.a_history.size() == std::size_t(report.n_delta));
    REQUIRE(!report.kept_indices.empty());
    CHECK(report.kept_indices.front() == 0);
    CHECK(report.kept_iterates.size() == report.kept_indices.size());
    CHECK(report.kept_iterates.size() <= 64);

    // soft sanity: residuals nonincreasing after the first few steps
    int violations = 0;
    for (std::size_t n = 4; n < report.residual_history.size(); ++n) {
        if (report.residual_history[n] > report.residual_history[n - 1]) {
            ++violations;
        }
    }
    WARN_LE(violations, 0);
}

TEST_CASE("immediate stop when the initial residual already satisfies the rule") {
    Setup s;
    auto y = *s.problem.exact_solution();
    auto fy = s.problem.apply(y);
    std::mt19937_64 rng(2);
    Eigen::VectorXd e = oracles::random_vector(rng, 100, -1.0, 1.0);
    e /= s.grid->norm(e);
    const double delta = 1e-3;
    GridFunction<double> f_delta(s.grid, fy.values() + delta * e);
    StopRule<double> stop{1.01, 0.99, delta, 100};

    auto report = dsm::dsmg_iterate(s.problem, f_delta, s.dsmg_schedule(delta),
                                    StepSizePolicy<double>::capped(1.0), stop, y);
    CHECK(report.n_delta == 0);
    CHECK(report.stopped_by == dsm::StopCause::Discrepancy);
    CHECK((report.final_iterate->values() - y.values()).cwiseAbs().maxCoeff() == 0.0);

    auto newton = dsm::dsmn_iterate(s.problem, f_delta, 0.1, stop, y);
    CHECK(newton.n_delta == 0);
}

TEST_CASE("zero noise level is rejected") {
    Setup s;
    StopRule<double> stop{1.01, 0.99, 0.0, 100};
    CHECK_THROWS_AS(dsm::dsmg_iterate(s.problem, s.f, s.dsmg_schedule(0.01),
                                      StepSizePolicy<double>::capped(1.0), stop,
                                      GridFunction<double>::zero(s.grid)),
                    dsm::ParameterError);
}

TEST_CASE("divergent step sizes surface as a divergence error with history") {
    Setup s;
    auto data = s.noisy(0.01, 3);
    StopRule<double> stop{1.01, 0.99, data.delta, 100};
    try {
        dsm::dsmg_iterate(s.problem, data.f_delta, s.dsmg_schedule(data.delta),
                          StepSizePolicy<double>::constant(1e8), stop,
                          GridFunction<double>::zero(s.grid));
        FAIL("expected divergence");
    } catch (const dsm::DivergenceError<double>& err) {
        CHECK(!err.partial_report.residual_history.empty());
    }
}

TEST_CASE("iteration cap is honored and recorded") {
    Setup s;
    auto data = s.noisy(0.01, 4);
    StopRule<double> stop{1.01, 0.99, data.delta, 5};
    auto report = dsm::dsmg_iterate(s.problem, data.f_delta, s.dsmg_schedule(data.delta),
                                    StepSizePolicy<double>::capped(1.0), stop,
                                    GridFunction<double>::zero(s.grid));
    CHECK(report.stopped_by == dsm::StopCause::IterationLimit);
    CHECK(report.n_delta == 5);
    CHECK(report.residual_history.size() == 6);
}

TEST_CASE("Newton-type baseline stops within the expected range") {
    Setup s;
    auto data = s.noisy(0.01, 1);
    StopRule<double> stop{1.01, 0.99, data.delta, 20000};
    const double a0 = dsm::heuristic_a0(data.delta, 0.99, 1.0);
    auto report = dsm::dsmn_iterate(s.problem, data.f_delta, a0, stop,
                                    GridFunction<double>::zero(s.grid));
    check_stop_contract(report, stop.threshold());
    CHECK(report.n_delta >= 4);
    CHECK(report.n_delta <= 25);
    REQUIRE(report.error_vs_y.has_value());
    CHECK(*report.error_vs_y <= 0.1);
    CHECK_THROWS_AS(dsm::dsmn_iterate(s.problem, data.f_delta, -1.0, stop,
                                      GridFunction<double>::zero(s.grid)),
                    dsm::ParameterError);
}

TEST_CASE("flow crosses the threshold and agrees with the iterate endpoint") {
    Setup s;
    auto data = s.noisy(0.01, 1);
    StopRule<double> stop{1.01, 0.99, data.delta, 20000};
    auto schedule = s.dsmg_schedule(data.delta);
    auto u0 = GridFunction<double>::zero(s.grid);

    auto flow = dsm::dsmg_flow(s.problem, data.f_delta, schedule, stop, u0, 0.1, 2000.0);
    REQUIRE(flow.stopped_by == dsm::StopCause::Discrepancy);
    REQUIRE(flow.t_delta.has_value());
    CHECK(*flow.t_delta > 0.0);
    const double threshold = stop.threshold();
    CHECK(std::abs(flow.residual_at_stop() - threshold) <= 1e-5 * threshold);
    CHECK_FALSE(flow.schedule_admissible); // heuristic schedule, recorded not enforced

    auto iter = dsm::dsmg_iterate(s.problem, data.f_delta, schedule,
                                  StepSizePolicy<double>::capped(1.0), stop, u0);
    const double y_norm = s.grid->norm(s.problem.exact_solution()->values());
    CHECK(s.grid->norm((flow.final_iterate->values() - iter.final_iterate->values()).eval())
          <= 0.1 * y_norm);
}

TEST_CASE("flow records a max-time stop") {
    Setup s;
    auto data = s.noisy(0.01, 5);
    StopRule<double> stop{1.01, 0.99, data.delta, 20000};
    auto report = dsm::dsmg_flow(s.problem, data.f_delta, s.dsmg_schedule(data.delta), stop,
                                 GridFunction<double>::zero(s.grid), 0.1, 0.5);
    CHECK(report.stopped_by == dsm::StopCause::IterationLimit);
    CHECK(report.t_delta.has_value());
    CHECK(*report.t_delta == doctest::Approx(0.5));
    CHECK_THROWS_AS(dsm::dsmg_flow(s.problem, data.f_delta, s.dsmg_schedule(data.delta), stop,
                                   GridFunction<double>::zero(s.grid), -0.1, 1.0),
                    dsm::ParameterError);
}

TEST_CASE("admissible schedule is recognized by the flow") {
    Setup s;
    auto data = s.noisy(0.1, 6);
    StopRule<double> stop{3.0, 0.99, data.delta, 20000};
    PowerSchedule<double> admissible(2.0, 1.0, 0.25);
    auto report = dsm::dsmg_flow(s.problem, data.f_delta, admissible, stop,
                                 GridFunction<double>::zero(s.grid), 0.05, 2.0);
    CHECK(report.schedule_admissible);
}

TEST_CASE("initial condition checks") {
    Setup s;
    auto data = s.noisy(0.01, 7);
    const double a0 = dsm::heuristic_a0(data.delta, 0.99, 0.5);

    auto reg = dsm::solve_regularized(s.problem, a0, data.f_delta, 1e-10);
    auto at_v0 = dsm::check_initial_condition(s.problem, data.f_delta, a0, reg.solution);
    CHECK(at_v0.h0 <= 1e-8);
    CHECK(at_v0.h0_ok);

    auto at_zero = dsm::check_initial_condition(s.problem, data.f_delta, a0,
                                                GridFunction<double>::zero(s.grid));
    CHECK(at_zero.g0_ok); // ||V_0|| <= ||F(0)-f_delta||/a_0 always

    std::mt19937_64 rng(8);
    GridFunction<double> far(s.grid, 50.0 * oracles::random_vector(rng, 100, 0.5, 1.0));
    auto at_far = dsm::check_initial_condition(s.problem, data.f_delta, a0, far);
    CHECK_FALSE(at_far.h0_ok); // reported, not thrown
    CHECK_THROWS_AS(dsm::check_initial_condition(s.problem, data.f_delta, 0.0, far),
                    dsm::ParameterError);
}

TEST_CASE("gap diagnostic under the rescaled schedule") {
    Setup s;
    auto data = s.noisy(0.01, 9);

    const auto& bounds = s.problem.bounds();
    const double y_norm = s.grid->norm(s.problem.exact_solution()->values());
    const double lambda = bounds.m1 * (1.0 / y_norm + 4.0 * bounds.curvature_c0());
    const double f0_gap_exact = s.f_norm; // F(0) = 0
    const double a0 = std::cbrt(lambda * (f0_gap_exact + s.f_norm));
    dsm::DiscreteScheduleParams<double> params;
    params.lambda = lambda;
    params.y_norm = y_norm;
    params.alpha_floor = 1.0;
    params.big_c = 1.005;
    const double f0_gap = s.grid->norm(data.f_delta.values());
    auto scaled = dsm::scale_to_admissible(PowerSchedule<double>(a0, 1.0, 0.25), bounds,
                                           params, f0_gap);
    REQUIRE(scaled.validation.ok());

    StopRule<double> stop{1.01, 0.99, data.delta, 150};
    auto report = dsm::dsmg_iterate(s.problem, data.f_delta, scaled.schedule,
                                    StepSizePolicy<double>::capped(1.0), stop,
                                    GridFunction<double>::zero(s.grid));
    REQUIRE(!report.kept_indices.empty());

    auto gaps = dsm::gap_diagnostic(s.problem, data.f_delta, scaled.schedule, report,
                                    scaled.params.lambda);
    REQUIRE(gaps.size() == report.kept_indices.size());
    for (const auto& g : gaps) {
        CHECK(g.gap < g.bound);
    }

    dsm::SolveReport<double> empty;
    CHECK_THROWS_AS(dsm::gap_diagnostic(s.problem, data.f_delta, scaled.schedule, empty,
                                        scaled.params.lambda),
                    dsm::ParameterError);
}
