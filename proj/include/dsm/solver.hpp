#pragma once

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsm/regularized.hpp"
#include "dsm/schedule.hpp"

namespace dsm {

enum class StopCause { Discrepancy, IterationLimit };

inline const char* to_string(StopCause cause) {
    return cause == StopCause::Discrepancy ? "discrepancy" : "max_iterations";
}

/// Discrepancy-principle stopping rule: stop at the first iterate whose data
/// residual falls to C1 * delta^zeta.
template <typename Scalar = double>
struct StopRule {
    Scalar c1 = Scalar(1.01);
    Scalar zeta = Scalar(0.99);
    Scalar delta = 0; // noise level, must be > 0
    long max_iterations = 20000;

    Scalar threshold() const {
        if (c1 <= 1) {
            throw ParameterError("StopRule: need C1 > 1");
        }
        if (!(zeta > 0 && zeta <= 1)) {
            throw ParameterError("StopRule: need zeta in (0, 1]");
        }
        if (delta <= 0) {
            throw ParameterError("StopRule: need delta > 0; exact-data runs must stop on "
                                 "max_iterations instead of the discrepancy threshold");
        }
        return c1 * std::pow(delta, zeta);
    }
};

template <typename Scalar = double>
struct SolveReport {
    /// ||F(u_n) - f_delta|| for every visited iterate n = 0..n_last.
    std::vector<Scalar> residual_history;
    /// a_n used for the update n -> n+1 (one entry per performed step).
    std::vector<Scalar> a_history;
    long n_delta = 0;              // stopping index (step count for the flow)
    std::optional<Scalar> t_delta; // flow stopping time
    std::optional<GridFunction<Scalar>> final_iterate;
    StopCause stopped_by = StopCause::IterationLimit;
    std::optional<Scalar> error_vs_y; // ||final - y|| when y is known
    std::vector<long> kept_indices;
    std::vector<DenseVector<Scalar>> kept_iterates;
    long alpha_clip_count = 0;
    bool schedule_admissible = true; // flow only: validate_continuous outcome

    Scalar residual_at_stop() const {
        return residual_history.empty() ? std::numeric_limits<Scalar>::quiet_NaN()
                                        : residual_history.back();
    }
};

/// Iteration produced a non-finite state; carries what was computed so far.
template <typename Scalar = double>
class DivergenceError : public SolveError {
public:
    DivergenceError(const std::string& message, SolveReport<Scalar> partial)
        : SolveError(message), partial_report(std::move(partial)) {}

    SolveReport<Scalar> partial_report;
};

namespace detail {

/// Downsampled iterate storage: stride doubles whenever the buffer fills,
/// keeping at most ~64 snapshots at indices n = 0, stride, 2*stride, ...
template <typename Scalar>
class IterateKeeper {
public:
    void offer(long n, const DenseVector<Scalar>& u) {
        if (n % stride_ != 0) {
            return;
        }
        indices_.push_back(n);
        iterates_.push_back(u);
        if (indices_.size() >= capacity) {
            std::vector<long> thinned_idx;
            std::vector<DenseVector<Scalar>> thinned_val;
            for (std::size_t k = 0; k < indices_.size(); k += 2) {
                thinned_idx.push_back(indices_[k]);
                thinned_val.push_back(std::move(iterates_[k]));
            }
            indices_ = std::move(thinned_idx);
            iterates_ = std::move(thinned_val);
            stride_ *= 2;
        }
    }

    void move_into(SolveReport<Scalar>& report) {
        report.kept_indices = std::move(indices_);
        report.kept_iterates = std::move(iterates_);
    }

private:
    static constexpr std::size_t capacity = 64;
    long stride_ = 1;
    std::vector<long> indices_;
    std::vector<DenseVector<Scalar>> iterates_;
};

template <typename Scalar>
void attach_error_vs_y(const MonotoneProblem<Scalar>& problem, SolveReport<Scalar>& report) {
    if (problem.exact_solution() && report.final_iterate) {
        report.error_vs_y = problem.grid()->norm(report.final_iterate->values()
                                                 - problem.exact_solution()->values());
    }
}

} // namespace detail

/// Gradient iteration u_{n+1} = u_n - alpha_n A_n^*[F(u_n) + a_n u_n - f_delta]
/// with A_n = F'(u_n) + a_n I, stopped by the discrepancy principle. The
/// adjoint is applied matrix-free; no linear system is ever solved.
template <typename Scalar>
SolveReport<Scalar> dsmg_iterate(const MonotoneProblem<Scalar>& problem,
                                 const GridFunction<Scalar>& f_delta,
                                 const PowerSchedule<Scalar>& schedule,
                                 const StepSizePolicy<Scalar>& steps,
                                 const StopRule<Scalar>& stop,
                                 const GridFunction<Scalar>& u0) {
    using Vector = DenseVector<Scalar>;

    problem.require_grid(f_delta);
    problem.require_grid(u0);
    const Scalar threshold = stop.threshold();
    const Grid<Scalar>& grid = *problem.grid();
    const Scalar m1 = problem.bounds().m1;

    SolveReport<Scalar> report;
    detail::IterateKeeper<Scalar> keeper;
    Vector u = u0.values();
    const Vector& f = f_delta.values();

    for (long n = 0;; ++n) {
        Vector fu;
        try {
            fu = problem.apply(u);
        } catch (const NonFiniteError&) {
            keeper.move_into(report);
            throw DivergenceError<Scalar>("dsmg_iterate: non-finite iterate at n = "
                                          + std::to_string(n), std::move(report));
        }
        const Scalar res = grid.norm(fu - f);
        report.residual_history.push_back(res);
        keeper.offer(n, u);

        if (res <= threshold) {
            report.n_delta = n;
            report.stopped_by = StopCause::Discrepancy;
            report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u));
            break;
        }
        if (n >= stop.max_iterations) {
            report.n_delta = n;
            report.stopped_by = StopCause::IterationLimit;
            report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u));
            break;
        }

        const Scalar a_n = schedule.value_at(n);
        const auto step = steps.step(a_n, m1);
        if (step.clipped) {
            ++report.alpha_clip_count;
        }
        report.a_history.push_back(a_n);

        Vector r = fu + a_n * u - f;
        Vector update = problem.adjoint_derivative_apply(u, r) + a_n * r;
        u -= step.alpha * update;
        if (!u.allFinite()) {
            keeper.move_into(report);
            throw DivergenceError<Scalar>("dsmg_iterate: non-finite iterate at n = "
                                          + std::to_string(n + 1), std::move(report));
        }
    }

    keeper.move_into(report);
    detail::attach_error_vs_y(problem, report);
    return report;
}

/// Newton-type baseline u_{n+1} = u_n - (F'(u_n) + a_n I)^{-1}
/// [F(u_n) + a_n u_n - f_delta] with a_n = a_0/(1+n) and the same
/// discrepancy stop; one dense LU solve per step.
template <typename Scalar>
SolveReport<Scalar> dsmn_iterate(const MonotoneProblem<Scalar>& problem,
                                 const GridFunction<Scalar>& f_delta,
                                 Scalar a0,
                                 const StopRule<Scalar>& stop,
                                 const GridFunction<Scalar>& u0) {
    using Vector = DenseVector<Scalar>;
    using Matrix = DenseMatrix<Scalar>;

    problem.require_grid(f_delta);
    problem.require_grid(u0);
    if (a0 <= 0) {
        throw ParameterError("dsmn_iterate: need a0 > 0");
    }
    const Scalar threshold = stop.threshold();
    const Grid<Scalar>& grid = *problem.grid();
    const PowerSchedule<Scalar> schedule(a0, 1, 1); // a_n = a0/(1+n)

    SolveReport<Scalar> report;
    detail::IterateKeeper<Scalar> keeper;
    Vector u = u0.values();
    const Vector& f = f_delta.values();

    for (long n = 0;; ++n) {
        Vector fu;
        try {
            fu = problem.apply(u);
        } catch (const NonFiniteError&) {
            keeper.move_into(report);
            throw DivergenceError<Scalar>("dsmn_iterate: non-finite iterate at n = "
                                          + std::to_string(n), std::move(report));
        }
        const Scalar res = grid.norm(fu - f);
        report.residual_history.push_back(res);
        keeper.offer(n, u);

        if (res <= threshold) {
            report.n_delta = n;
            report.stopped_by = StopCause::Discrepancy;
            report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u));
            break;
        }
        if (n >= stop.max_iterations) {
            report.n_delta = n;
            report.stopped_by = StopCause::IterationLimit;
            report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u));
            break;
        }

        const Scalar a_n = schedule.value_at(n);
        report.a_history.push_back(a_n);

        Matrix jac = problem.jacobian(u);
        jac.diagonal().array() += a_n;
        Vector r = fu + a_n * u - f;
        Vector step = jac.partialPivLu().solve(r);
        if (!step.allFinite()) {
            keeper.move_into(report);
            throw DivergenceError<Scalar>("dsmn_iterate: singular or non-finite linear solve "
                                          "at n = " + std::to_string(n), std::move(report));
        }
        u -= step;
        if (!u.allFinite()) {
            keeper.move_into(report);
            throw DivergenceError<Scalar>("dsmn_iterate: non-finite iterate at n = "
                                          + std::to_string(n + 1), std::move(report));
        }
    }

    keeper.move_into(report);
    detail::attach_error_vs_y(problem, report);
    return report;
}

/// Gradient flow du/dt = -A_{a(t)}^*[F(u) + a(t)u - f_delta] integrated with
/// classical fixed-step RK4. The residual is monitored each step; on the
/// first step where it falls to the threshold, the stopping time is refined
/// by bisection inside that step. A schedule that fails validate_continuous
/// is still integrated, with the outcome recorded in the report.
template <typename Scalar>
SolveReport<Scalar> dsmg_flow(const MonotoneProblem<Scalar>& problem,
                              const GridFunction<Scalar>& f_delta,
                              const PowerSchedule<Scalar>& schedule,
                              const StopRule<Scalar>& stop,
                              const GridFunction<Scalar>& u0,
                              Scalar dt,
                              Scalar t_max) {
    using Vector = DenseVector<Scalar>;

    problem.require_grid(f_delta);
    problem.require_grid(u0);
    if (dt <= 0 || t_max <= 0) {
        throw ParameterError("dsmg_flow: need dt > 0 and t_max > 0");
    }
    const Scalar threshold = stop.threshold();
    const Grid<Scalar>& grid = *problem.grid();
    const Vector& f = f_delta.values();

    SolveReport<Scalar> report;
    report.schedule_admissible = validate_continuous(schedule).ok();
    detail::IterateKeeper<Scalar> keeper;

    auto velocity = [&](Scalar t, const Vector& u) -> Vector {
        const Scalar a = schedule.value(t);
        Vector r = problem.apply(u) + a * u - f;
        return -(problem.adjoint_derivative_apply(u, r) + a * r);
    };
    auto rk4_step = [&](const Vector& u, Scalar t, Scalar h) -> Vector {
        Vector k1 = velocity(t, u);
        Vector k2 = velocity(t + h / 2, u + (h / 2) * k1);
        Vector k3 = velocity(t + h / 2, u + (h / 2) * k2);
        Vector k4 = velocity(t + h, u + h * k3);
        return u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    auto residual_of = [&](const Vector& u) { return grid.norm(problem.apply(u) - f); };

    Vector u = u0.values();
    Scalar t = 0;
    long n = 0;
    Scalar res;
    try {
        res = residual_of(u);
    } catch (const NonFiniteError&) {
        throw DivergenceError<Scalar>("dsmg_flow: non-finite initial state", std::move(report));
    }
    report.residual_history.push_back(res);
    keeper.offer(0, u);

    if (res <= threshold) {
        report.n_delta = 0;
        report.t_delta = Scalar(0);
        report.stopped_by = StopCause::Discrepancy;
        report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u));
        keeper.move_into(report);
        detail::attach_error_vs_y(problem, report);
        return report;
    }

    while (t < t_max) {
        const Scalar h = std::min(dt, t_max - t);
        report.a_history.push_back(schedule.value(t));
        Vector u_next;
        Scalar res_next;
        try {
            u_next = rk4_step(u, t, h);
            if (!u_next.allFinite()) {
                throw NonFiniteError("state");
            }
            res_next = residual_of(u_next);
        } catch (const NonFiniteError&) {
            keeper.move_into(report);
            throw DivergenceError<Scalar>("dsmg_flow: non-finite state at t = "
                                          + std::to_string(static_cast<double>(t + h)),
                                          std::move(report));
        }
        ++n;
        report.residual_history.push_back(res_next);
        keeper.offer(n, u_next);

        if (res_next <= threshold) {
            // Crossing inside (t, t+h]: bisect the sub-step length.
            Scalar lo = 0;
            Scalar hi = h;
            Vector u_cross = u_next;
            Scalar res_cross = res_next;
            for (int i = 0; i < 80; ++i) {
                if (std::abs(res_cross - threshold) <= Scalar(1e-6) * threshold) {
                    break;
                }
                const Scalar mid = (lo + hi) / 2;
                Vector u_mid = mid == 0 ? u : rk4_step(u, t, mid);
                const Scalar res_mid = residual_of(u_mid);
                if (res_mid <= threshold) {
                    hi = mid;
                    u_cross = std::move(u_mid);
                    res_cross = res_mid;
                } else {
                    lo = mid;
                }
            }
            report.residual_history.back() = res_cross;
            report.n_delta = n;
            report.t_delta = t + hi;
            report.stopped_by = StopCause::Discrepancy;
            report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u_cross));
            keeper.move_into(report);
            detail::attach_error_vs_y(problem, report);
            return report;
        }

        u = std::move(u_next);
        t += h;
    }

    report.n_delta = n;
    report.t_delta = t;
    report.stopped_by = StopCause::IterationLimit;
    report.final_iterate = GridFunction<Scalar>(problem.grid(), std::move(u));
    keeper.move_into(report);
    detail::attach_error_vs_y(problem, report);
    return report;
}

/// Quality of an initial guess u0 at regularization strength a0:
/// h0 = ||F(u0) + a0 u0 - f_delta|| against the bound a0 ||V(a0)||/4, and
/// the gap ||u0 - V(a0)|| against ||F(0) - f_delta||/a0.
template <typename Scalar = double>
struct InitialConditionCheck {
    Scalar h0;
    Scalar h0_bound;
    bool h0_ok;
    Scalar g0;
    Scalar g0_bound;
    bool g0_ok;
};

template <typename Scalar>
InitialConditionCheck<Scalar> check_initial_condition(const MonotoneProblem<Scalar>& problem,
                                                      const GridFunction<Scalar>& f_delta,
                                                      Scalar a0,
                                                      const GridFunction<Scalar>& u0,
                                                      Scalar newton_tol = Scalar(1e-10)) {
    using Vector = DenseVector<Scalar>;

    if (a0 <= 0) {
        throw ParameterError("check_initial_condition: need a0 > 0");
    }
    problem.require_grid(f_delta);
    problem.require_grid(u0);
    const Grid<Scalar>& grid = *problem.grid();

    const auto reg = solve_regularized(problem, a0, f_delta, newton_tol);
    const Vector& v0 = reg.solution.values();

    InitialConditionCheck<Scalar> out{};
    out.h0 = grid.norm(problem.apply(u0.values()) + a0 * u0.values() - f_delta.values());
    out.h0_bound = a0 * grid.norm(v0) / 4;
    out.h0_ok = out.h0 <= out.h0_bound + 10 * newton_tol;
    out.g0 = grid.norm(u0.values() - v0);
    out.g0_bound = grid.norm(problem.apply(Vector::Zero(grid.size())) - f_delta.values()) / a0;
    out.g0_ok = out.g0 <= out.g0_bound + 10 * newton_tol;
    return out;
}

/// Gap between a kept iterate and the regularized solution at the same a_n,
/// against the tracking bound a_n^2 / lambda.
template <typename Scalar = double>
struct GapSample {
    long n;
    Scalar a_n;
    Scalar gap;   // ||u_n - V_n||
    Scalar bound; // a_n^2 / lambda
};

template <typename Scalar>
std::vector<GapSample<Scalar>> gap_diagnostic(const MonotoneProblem<Scalar>& problem,
                                              const GridFunction<Scalar>& f_delta,
                                              const PowerSchedule<Scalar>& schedule,
                                              const SolveReport<Scalar>& report,
                                              Scalar lambda,
                                              Scalar newton_tol = Scalar(1e-10)) {
    if (lambda <= 0) {
        throw ParameterError("gap_diagnostic: need lambda > 0");
    }
    if (report.kept_iterates.empty()) {
        throw ParameterError("gap_diagnostic: report holds no kept iterates");
    }
    const Grid<Scalar>& grid = *problem.grid();
    std::vector<GapSample<Scalar>> out;
    out.reserve(report.kept_iterates.size());
    std::optional<DenseVector<Scalar>> warm;
    for (std::size_t k = 0; k < report.kept_iterates.size(); ++k) {
        const long n = report.kept_indices[k];
        const Scalar a_n = schedule.value_at(n);
        const auto reg = solve_regularized(problem, a_n, f_delta, newton_tol,
                                           warm ? &*warm : nullptr);
        warm = reg.solution.values();
        out.push_back(GapSample<Scalar>{n, a_n,
                                        grid.norm(report.kept_iterates[k] - *warm),
                                        a_n * a_n / lambda});
    }
    return out;
}

} // namespace dsm
