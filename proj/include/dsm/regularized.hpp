#pragma once

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "dsm/operator.hpp"

namespace dsm {

template <typename Scalar = double>
struct NewtonOptions {
    int max_iterations = 200;
    int max_backtracks = 40;
};

/// Solution of the regularized equation F(V) + aV = f_delta.
template <typename Scalar = double>
struct RegularizedSolution {
    Scalar a;
    GridFunction<Scalar> solution;
    Scalar residual; // achieved ||F(V) + aV - f_delta||
    int newton_iterations;
};

/// Newton failure carrying the last iterate for diagnostics.
template <typename Scalar = double>
class NewtonFailure : public SolveError {
public:
    NewtonFailure(const std::string& message, DenseVector<Scalar> last_iterate,
                  Scalar last_residual, int iterations)
        : SolveError(message),
          last_iterate(std::move(last_iterate)),
          last_residual(last_residual),
          iterations(iterations) {}

    DenseVector<Scalar> last_iterate;
    Scalar last_residual;
    int iterations;
};

/// Solves F(V) + aV = f_delta by damped Newton with dense LU steps.
///
/// The Jacobian F'(V) + aI is invertible because F is monotone and a > 0;
/// backtracking halves the step until the residual norm decreases. Cold
/// starts from V = 0 unless a warm start is given.
template <typename Scalar>
RegularizedSolution<Scalar> solve_regularized(const MonotoneProblem<Scalar>& problem,
                                              Scalar a,
                                              const GridFunction<Scalar>& f_delta,
                                              Scalar tol,
                                              const std::type_identity_t<DenseVector<Scalar>>*
                                                  warm_start = nullptr,
                                              const std::type_identity_t<NewtonOptions<Scalar>>&
                                                  options = {}) {
    using Vector = DenseVector<Scalar>;
    using Matrix = DenseMatrix<Scalar>;

    if (a <= 0) {
        throw ParameterError("solve_regularized: need a > 0");
    }
    if (tol <= 0) {
        throw ParameterError("solve_regularized: need tol > 0");
    }
    problem.require_grid(f_delta);

    const Grid<Scalar>& grid = *problem.grid();
    Vector v = warm_start ? *warm_start : Vector::Zero(grid.size());
    Vector g = problem.apply(v) + a * v - f_delta.values();
    Scalar gnorm = grid.norm(g);

    int iterations = 0;
    while (gnorm > tol) {
        if (iterations >= options.max_iterations) {
            throw NewtonFailure<Scalar>("solve_regularized: no convergence after max Newton iterations",
                                        std::move(v), gnorm, iterations);
        }
        Matrix jac = problem.jacobian(v);
        jac.diagonal().array() += a;
        Vector step = jac.partialPivLu().solve(-g);
        if (!step.allFinite()) {
            throw NewtonFailure<Scalar>("solve_regularized: singular Newton system",
                                        std::move(v), gnorm, iterations);
        }

        Scalar damping = 1;
        Vector v_next;
        Vector g_next;
        Scalar gnorm_next = gnorm;
        bool accepted = false;
        for (int bt = 0; bt < options.max_backtracks; ++bt) {
            v_next = v + damping * step;
            g_next = problem.apply(v_next) + a * v_next - f_delta.values();
            gnorm_next = grid.norm(g_next);
            if (gnorm_next < gnorm) {
                accepted = true;
                break;
            }
            damping /= 2;
        }
        if (!accepted) {
            throw NewtonFailure<Scalar>("solve_regularized: line search stalled",
                                        std::move(v), gnorm, iterations);
        }
        v = std::move(v_next);
        g = std::move(g_next);
        gnorm = gnorm_next;
        ++iterations;
    }

    return RegularizedSolution<Scalar>{a, GridFunction<Scalar>(problem.grid(), std::move(v)),
                                       gnorm, iterations};
}

/// One point of the discrepancy curve: the residual norm ||F(V)-f_delta||
/// (decreasing in t, i.e. increasing in a) and the solution norm ||V||
/// (increasing in t) at regularization strength a.
template <typename Scalar = double>
struct CurvePoint {
    Scalar a;
    Scalar residual_norm; // ||F(V) - f_delta||, equals a*||V|| up to solver tol
    Scalar solution_norm; // ||V||
    int newton_iterations;
};

/// Sweeps the regularized solve over a strictly decreasing a-grid,
/// warm-starting each solve from the previous solution.
template <typename Scalar>
std::vector<CurvePoint<Scalar>> discrepancy_curve(const MonotoneProblem<Scalar>& problem,
                                                  const GridFunction<Scalar>& f_delta,
                                                  const std::vector<Scalar>& a_grid,
                                                  Scalar tol) {
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        if (a_grid[i] <= 0 || (i > 0 && a_grid[i] >= a_grid[i - 1])) {
            throw ParameterError("discrepancy_curve: a_grid must be strictly decreasing and positive");
        }
    }
    std::vector<CurvePoint<Scalar>> curve;
    curve.reserve(a_grid.size());
    std::optional<DenseVector<Scalar>> warm;
    for (Scalar a : a_grid) {
        auto sol = solve_regularized(problem, a, f_delta, tol, warm ? &*warm : nullptr);
        const Grid<Scalar>& grid = *problem.grid();
        Scalar psi = grid.norm(sol.solution.values());
        Scalar phi = grid.norm(problem.apply(sol.solution.values()) - f_delta.values());
        curve.push_back(CurvePoint<Scalar>{a, phi, psi, sol.newton_iterations});
        warm = sol.solution.values();
    }
    return curve;
}

/// Finds a* with ||F(V_a*) - f_delta|| = C*delta by bisection on a; the
/// residual norm is monotone in a, so the crossing is unique. The bracket
/// (a_lo, a_hi) must satisfy phi(a_hi) > C*delta > phi(a_lo).
template <typename Scalar>
Scalar find_discrepancy_crossing(const MonotoneProblem<Scalar>& problem,
                                 const GridFunction<Scalar>& f_delta,
                                 Scalar big_c,
                                 Scalar delta,
                                 std::pair<Scalar, Scalar> a_bracket,
                                 Scalar tol) {
    if (big_c <= 1 || delta <= 0) {
        throw ParameterError("find_discrepancy_crossing: need C > 1 and delta > 0");
    }
    const Scalar target = big_c * delta;
    const Grid<Scalar>& grid = *problem.grid();

    Scalar zero_residual = grid.norm(problem.apply(DenseVector<Scalar>::Zero(grid.size()))
                                     - f_delta.values());
    if (zero_residual <= target) {
        throw NoCrossingError("find_discrepancy_crossing: data already compatible, "
                              "||F(0)-f_delta|| <= C*delta");
    }

    Scalar a_lo = a_bracket.first;
    Scalar a_hi = a_bracket.second;
    if (!(0 < a_lo && a_lo < a_hi)) {
        throw ParameterError("find_discrepancy_crossing: invalid bracket");
    }

    auto phi_at = [&](Scalar a, const DenseVector<Scalar>* warm) {
        auto sol = solve_regularized(problem, a, f_delta, tol, warm);
        return std::make_pair(grid.norm(problem.apply(sol.solution.values()) - f_delta.values()),
                              sol.solution.values());
    };

    auto [phi_lo, v_lo] = phi_at(a_lo, nullptr);
    auto [phi_hi, v_hi] = phi_at(a_hi, nullptr);
    if (!(phi_hi > target && target > phi_lo)) {
        throw BracketError("find_discrepancy_crossing: bracket does not straddle C*delta");
    }

    const Scalar crossing_tol = std::max(tol, Scalar(1e-8) * target);
    Scalar a_mid = a_lo;
    Scalar phi_mid = phi_lo;
    DenseVector<Scalar> warm = v_lo;
    for (int i = 0; i < 200; ++i) {
        a_mid = std::sqrt(a_lo * a_hi); // bisect in log space, a spans decades
        std::tie(phi_mid, warm) = phi_at(a_mid, &warm);
        if (std::abs(phi_mid - target) <= crossing_tol) {
            return a_mid;
        }
        if (phi_mid > target) {
            a_hi = a_mid;
        } else {
            a_lo = a_mid;
        }
    }
    throw SolveError("find_discrepancy_crossing: bisection did not reach tolerance");
}

/// Left- and right-hand side of the data-perturbation estimate
/// ||V_delta - V|| <= ||f_delta - f||/a, plus the norms needed for the
/// companion bound ||V|| <= ||y||.
template <typename Scalar = double>
struct PerturbationCheck {
    Scalar lhs;          // ||V_delta - V||
    Scalar rhs;          // ||f_delta - f|| / a
    Scalar v_norm;       // ||V|| (exact-data solution)
    Scalar v_delta_norm; // ||V_delta||
};

template <typename Scalar>
PerturbationCheck<Scalar> perturbation_bound_check(const MonotoneProblem<Scalar>& problem,
                                                   const GridFunction<Scalar>& f,
                                                   const GridFunction<Scalar>& f_delta,
                                                   Scalar a,
                                                   Scalar tol) {
    if (a <= 0) {
        throw ParameterError("perturbation_bound_check: need a > 0");
    }
    auto exact = solve_regularized(problem, a, f, tol);
    auto noisy = solve_regularized(problem, a, f_delta, tol);
    const Grid<Scalar>& grid = *problem.grid();
    return PerturbationCheck<Scalar>{
        grid.norm(noisy.solution.values() - exact.solution.values()),
        grid.norm(f_delta.values() - f.values()) / a,
        grid.norm(exact.solution.values()),
        grid.norm(noisy.solution.values()),
    };
}

} // namespace dsm
