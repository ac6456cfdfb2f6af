#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <utility>

#include "dsm/errors.hpp"

namespace dsm {

template <typename Scalar = double>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform grid on [0,1] with trapezoidal quadrature weights.
///
/// Nodes are x_i = i/(n-1); weights are h/2 at the endpoints and h in the
/// interior, h = 1/(n-1), so they sum to 1 and the weighted dot product
/// approximates the L^2[0,1] inner product.
template <typename Scalar = double>
class Grid {
public:
    using Vector = DenseVector<Scalar>;

    explicit Grid(Eigen::Index n_points) {
        if (n_points < 2) {
            throw ParameterError("Grid: need at least 2 nodes");
        }
        const Scalar h = Scalar(1) / Scalar(n_points - 1);
        nodes_ = Vector::LinSpaced(n_points, Scalar(0), Scalar(1));
        weights_ = Vector::Constant(n_points, h);
        weights_(0) = h / 2;
        weights_(n_points - 1) = h / 2;
    }

    Eigen::Index size() const { return nodes_.size(); }
    Scalar spacing() const { return Scalar(1) / Scalar(size() - 1); }
    const Vector& nodes() const { return nodes_; }
    const Vector& weights() const { return weights_; }

    /// Weighted inner product of raw nodal vectors.
    Scalar dot(const Vector& a, const Vector& b) const {
        return weights_.cwiseProduct(a).dot(b);
    }

    /// Weighted norm of a raw nodal vector.
    Scalar norm(const Vector& a) const {
        return std::sqrt(dot(a, a));
    }

private:
    Vector nodes_;
    Vector weights_;
};

template <typename Scalar = double>
using GridPtr = std::shared_ptr<const Grid<Scalar>>;

template <typename Scalar = double>
GridPtr<Scalar> make_grid(Eigen::Index n_points) {
    return std::make_shared<const Grid<Scalar>>(n_points);
}

/// Uniform grids on [0,1] are fully determined by their node count.
template <typename Scalar>
bool same_grid(const GridPtr<Scalar>& a, const GridPtr<Scalar>& b) {
    return a == b || (a && b && a->size() == b->size());
}

/// A real-valued function sampled on a grid, with value semantics.
template <typename Scalar = double>
class GridFunction {
public:
    using Vector = DenseVector<Scalar>;

    GridFunction(GridPtr<Scalar> grid, Vector values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (!grid_) {
            throw ParameterError("GridFunction: null grid");
        }
        if (values_.size() != grid_->size()) {
            throw DimensionError("GridFunction: value count does not match grid");
        }
        if (!values_.allFinite()) {
            throw NonFiniteError("GridFunction: non-finite values");
        }
    }

    static GridFunction constant(GridPtr<Scalar> grid, Scalar value) {
        Vector v = Vector::Constant(grid->size(), value);
        return GridFunction(std::move(grid), std::move(v));
    }

    static GridFunction zero(GridPtr<Scalar> grid) {
        return constant(std::move(grid), Scalar(0));
    }

    template <typename Fn>
    static GridFunction sample(GridPtr<Scalar> grid, Fn&& fn) {
        Vector v(grid->size());
        for (Eigen::Index i = 0; i < grid->size(); ++i) {
            v(i) = fn(grid->nodes()(i));
        }
        return GridFunction(std::move(grid), std::move(v));
    }

    const GridPtr<Scalar>& grid() const { return grid_; }
    const Vector& values() const { return values_; }
    Eigen::Index size() const { return values_.size(); }

private:
    GridPtr<Scalar> grid_;
    Vector values_;
};

namespace detail {

template <typename Scalar>
void require_same_grid(const GridFunction<Scalar>& u, const GridFunction<Scalar>& v) {
    if (!same_grid(u.grid(), v.grid())) {
        throw DimensionError("grid mismatch");
    }
}

} // namespace detail

/// Trapezoidal approximation of the L^2 inner product <u,v>.
template <typename Scalar>
Scalar inner_product(const GridFunction<Scalar>& u, const GridFunction<Scalar>& v) {
    detail::require_same_grid(u, v);
    return u.grid()->dot(u.values(), v.values());
}

/// Weighted norm sqrt(<u,u>).
template <typename Scalar>
Scalar norm(const GridFunction<Scalar>& u) {
    return u.grid()->norm(u.values());
}

template <typename Scalar>
GridFunction<Scalar> operator+(const GridFunction<Scalar>& u, const GridFunction<Scalar>& v) {
    detail::require_same_grid(u, v);
    return GridFunction<Scalar>(u.grid(), u.values() + v.values());
}

template <typename Scalar>
GridFunction<Scalar> operator-(const GridFunction<Scalar>& u, const GridFunction<Scalar>& v) {
    detail::require_same_grid(u, v);
    return GridFunction<Scalar>(u.grid(), u.values() - v.values());
}

template <typename Scalar>
GridFunction<Scalar> operator*(Scalar s, const GridFunction<Scalar>& u) {
    return GridFunction<Scalar>(u.grid(), s * u.values());
}

template <typename Scalar>
GridFunction<Scalar> operator*(const GridFunction<Scalar>& u, Scalar s) {
    return s * u;
}

} // namespace dsm
