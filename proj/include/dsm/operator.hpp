#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dsm/hilbert.hpp"

namespace dsm {

/// Derivative bounds of the operator over the working ball |u_i| <= radius
/// around the initial guess, plus the constants derived from them.
template <typename Scalar = double>
struct OperatorBounds {
    Scalar m1 = 0;     // bound on ||F'(u)||
    Scalar m2 = 0;     // bound on ||F''(u)||
    Scalar radius = 1; // nodal working-ball radius

    OperatorBounds() = default;
    OperatorBounds(Scalar m1_, Scalar m2_, Scalar radius_)
        : m1(m1_), m2(m2_), radius(radius_) {
        if (m1 < 0 || m2 < 0 || radius <= 0) {
            throw ParameterError("OperatorBounds: need m1 >= 0, m2 >= 0, radius > 0");
        }
    }

    Scalar curvature_c0() const { return m2 / 2; }

    /// Drift constant ||y||(1 + 1/(C-1)) entering the discrete-schedule
    /// recursion; C > 1 is the halved discrepancy constant.
    Scalar drift_c1(Scalar y_norm, Scalar big_c) const {
        if (big_c <= 1) {
            throw ParameterError("drift_c1: need C > 1");
        }
        return y_norm * (1 + 1 / (big_c - 1));
    }
};

/// A monotone operator F together with its derivative, the adjoint of the
/// derivative with respect to the weighted inner product, and an optional
/// dense Jacobian for direct solvers. Immutable after construction.
template <typename Scalar = double>
class MonotoneProblem {
public:
    using Vector = DenseVector<Scalar>;
    using Matrix = DenseMatrix<Scalar>;
    using ApplyFn = std::function<Vector(const Vector&)>;
    using DirectionalFn = std::function<Vector(const Vector&, const Vector&)>;
    using JacobianFn = std::function<Matrix(const Vector&)>;

    MonotoneProblem(GridPtr<Scalar> grid,
                    ApplyFn apply,
                    DirectionalFn derivative,
                    DirectionalFn adjoint_derivative,
                    OperatorBounds<Scalar> bounds,
                    JacobianFn jacobian = nullptr)
        : grid_(std::move(grid)),
          apply_(std::move(apply)),
          derivative_(std::move(derivative)),
          adjoint_derivative_(std::move(adjoint_derivative)),
          jacobian_(std::move(jacobian)),
          bounds_(bounds) {
        if (!grid_ || !apply_ || !derivative_ || !adjoint_derivative_) {
            throw ParameterError("MonotoneProblem: missing grid or operator callbacks");
        }
    }

    const GridPtr<Scalar>& grid() const { return grid_; }
    const OperatorBounds<Scalar>& bounds() const { return bounds_; }

    /// F(u) on nodal values.
    Vector apply(const Vector& u) const {
        check_size(u);
        Vector out = apply_(u);
        if (!out.allFinite()) {
            throw NonFiniteError("MonotoneProblem::apply: non-finite result");
        }
        return out;
    }

    /// F'(u) h.
    Vector derivative_apply(const Vector& u, const Vector& h) const {
        check_size(u);
        check_size(h);
        return derivative_(u, h);
    }

    /// F'(u)* h, adjoint taken in the weighted inner product.
    Vector adjoint_derivative_apply(const Vector& u, const Vector& h) const {
        check_size(u);
        check_size(h);
        return adjoint_derivative_(u, h);
    }

    /// Dense F'(u). Falls back to column-by-column assembly through
    /// derivative_apply when no analytic Jacobian was supplied.
    Matrix jacobian(const Vector& u) const {
        check_size(u);
        if (jacobian_) {
            return jacobian_(u);
        }
        const Eigen::Index n = grid_->size();
        Matrix j(n, n);
        Vector e = Vector::Zero(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            e(k) = 1;
            j.col(k) = derivative_(u, e);
            e(k) = 0;
        }
        return j;
    }

    GridFunction<Scalar> apply(const GridFunction<Scalar>& u) const {
        require_grid(u);
        return GridFunction<Scalar>(grid_, apply(u.values()));
    }

    GridFunction<Scalar> derivative_apply(const GridFunction<Scalar>& u,
                                          const GridFunction<Scalar>& h) const {
        require_grid(u);
        require_grid(h);
        return GridFunction<Scalar>(grid_, derivative_apply(u.values(), h.values()));
    }

    GridFunction<Scalar> adjoint_derivative_apply(const GridFunction<Scalar>& u,
                                                  const GridFunction<Scalar>& h) const {
        require_grid(u);
        require_grid(h);
        return GridFunction<Scalar>(grid_, adjoint_derivative_apply(u.values(), h.values()));
    }

    const std::optional<GridFunction<Scalar>>& rhs_exact() const { return rhs_exact_; }
    const std::optional<GridFunction<Scalar>>& exact_solution() const { return exact_solution_; }

    /// Copy of the problem with exact data attached (target solution and the
    /// right-hand side it generates).
    MonotoneProblem with_exact_data(GridFunction<Scalar> exact_solution,
                                    GridFunction<Scalar> rhs) const {
        require_grid(exact_solution);
        require_grid(rhs);
        MonotoneProblem copy = *this;
        copy.exact_solution_ = std::move(exact_solution);
        copy.rhs_exact_ = std::move(rhs);
        return copy;
    }

    void require_grid(const GridFunction<Scalar>& u) const {
        if (!same_grid(u.grid(), grid_)) {
            throw DimensionError("MonotoneProblem: function lives on a different grid");
        }
    }

private:
    void check_size(const Vector& u) const {
        if (u.size() != grid_->size()) {
            throw DimensionError("MonotoneProblem: nodal vector size mismatch");
        }
    }

    GridPtr<Scalar> grid_;
    ApplyFn apply_;
    DirectionalFn derivative_;
    DirectionalFn adjoint_derivative_;
    JacobianFn jacobian_;
    OperatorBounds<Scalar> bounds_;
    std::optional<GridFunction<Scalar>> rhs_exact_;
    std::optional<GridFunction<Scalar>> exact_solution_;
};

/// Data residual ||F(u) - f_delta|| in the weighted norm.
template <typename Scalar>
Scalar residual_norm(const MonotoneProblem<Scalar>& problem,
                     const GridFunction<Scalar>& u,
                     const GridFunction<Scalar>& f_delta) {
    problem.require_grid(u);
    problem.require_grid(f_delta);
    return problem.grid()->norm(problem.apply(u.values()) - f_delta.values());
}

template <typename Scalar>
Scalar residual_norm(const MonotoneProblem<Scalar>& problem,
                     const DenseVector<Scalar>& u,
                     const DenseVector<Scalar>& f_delta) {
    return problem.grid()->norm(problem.apply(u) - f_delta);
}

namespace detail {

/// Largest eigenvalue of the kernel matrix as an operator on the weighted
/// space, by power iteration. K = B W is similar to the symmetric positive
/// semidefinite W^{1/2} B W^{1/2}, so the iteration converges.
template <typename Scalar>
Scalar weighted_operator_norm(const Grid<Scalar>& grid, const DenseMatrix<Scalar>& k,
                              int iterations = 200) {
    DenseVector<Scalar> v = DenseVector<Scalar>::Constant(grid.size(), Scalar(1));
    v /= grid.norm(v);
    Scalar lambda = 0;
    for (int i = 0; i < iterations; ++i) {
        DenseVector<Scalar> w = k * v;
        Scalar n = grid.norm(w);
        if (n == 0) {
            return 0;
        }
        w /= n;
        Scalar next = grid.dot(k * w, w);
        if (i > 10 && std::abs(next - lambda) <= Scalar(1e-14) * std::abs(next)) {
            lambda = next;
            break;
        }
        lambda = next;
        v = std::move(w);
    }
    return lambda;
}

} // namespace detail

/// Closed-form right-hand side 13/6 - e^{-x} - e^{x-1} generated by the
/// constant-one solution of the Wiener filtering model problem.
template <typename Scalar>
GridFunction<Scalar> wiener_exact_rhs(GridPtr<Scalar> grid) {
    return GridFunction<Scalar>::sample(std::move(grid), [](Scalar x) {
        return Scalar(13) / Scalar(6) - std::exp(-x) - std::exp(x - 1);
    });
}

/// Monotone model problem from nonlinear Wiener-type filtering:
///
///   F(u)(x) = \int_0^1 e^{-|x-y|} u(y) dy + u(x)^3/6,
///
/// discretized with trapezoidal quadrature. The kernel part is stored as the
/// dense matrix K with K(i,j) = w_j e^{-|x_i-x_j|}; the adjoint slot applies
/// the weighted adjoint W^{-1} K^T W, which for this symmetric kernel equals
/// K up to rounding. Exact solution u = 1 and its closed-form right-hand
/// side are attached.
///
/// Bounds default: m1 = ||K|| + radius^2/2 with ||K|| from power iteration,
/// m2 = radius (the sup of |u| over the nodal working ball). An m1_override
/// replaces the estimate when the caller has a better value.
template <typename Scalar = double>
MonotoneProblem<Scalar> make_wiener_problem(GridPtr<Scalar> grid,
                                            Scalar ball_radius = Scalar(2),
                                            std::optional<Scalar> m1_override = std::nullopt) {
    using Vector = DenseVector<Scalar>;
    using Matrix = DenseMatrix<Scalar>;

    const Eigen::Index n = grid->size();
    const Vector& x = grid->nodes();
    const Vector& w = grid->weights();

    auto kernel = std::make_shared<Matrix>(n, n);
    auto kernel_adjoint = std::make_shared<Matrix>(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            (*kernel)(i, j) = w(j) * std::exp(-std::abs(x(i) - x(j)));
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            (*kernel_adjoint)(i, j) = (*kernel)(j, i) * w(j) / w(i);
        }
    }

    Scalar kernel_norm = detail::weighted_operator_norm(*grid, *kernel);
    Scalar m1 = m1_override.value_or(kernel_norm + ball_radius * ball_radius / 2);
    OperatorBounds<Scalar> bounds(m1, ball_radius, ball_radius);

    auto apply = [kernel](const Vector& u) -> Vector {
        return (*kernel) * u + u.array().cube().matrix() / 6;
    };
    auto derivative = [kernel](const Vector& u, const Vector& h) -> Vector {
        return (*kernel) * h + (u.array().square() * h.array()).matrix() / 2;
    };
    auto adjoint_derivative = [kernel_adjoint](const Vector& u, const Vector& h) -> Vector {
        return (*kernel_adjoint) * h + (u.array().square() * h.array()).matrix() / 2;
    };
    auto jacobian = [kernel](const Vector& u) -> Matrix {
        Matrix j = *kernel;
        j.diagonal() += (u.array().square() / 2).matrix();
        return j;
    };

    MonotoneProblem<Scalar> problem(grid, std::move(apply), std::move(derivative),
                                    std::move(adjoint_derivative), bounds, std::move(jacobian));
    return problem.with_exact_data(GridFunction<Scalar>::constant(grid, Scalar(1)),
                                   wiener_exact_rhs<Scalar>(grid));
}

} // namespace dsm
