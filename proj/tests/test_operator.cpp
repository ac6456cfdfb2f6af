#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <dsm/operator.hpp>

#include "oracles.hpp"

using dsm::GridFunction;
using dsm::make_grid;
using dsm::make_wiener_problem;

TEST_CASE("operator bounds constants") {
    dsm::OperatorBounds<double> bounds(1.5, 1.0, 2.0);
    CHECK(bounds.curvature_c0() == doctest::Approx(0.5));
    CHECK(bounds.drift_c1(1.0, 1.005) == doctest::Approx(1.0 + 1.0 / 0.005));
    CHECK_THROWS_AS(bounds.drift_c1(1.0, 1.0), dsm::ParameterError);
    CHECK_THROWS_AS(dsm::OperatorBounds<double>(-1.0, 0.0, 1.0), dsm::ParameterError);
}

TEST_CASE("constant-one solution reproduces the closed-form data") {
    auto grid = make_grid<double>(100);
    auto problem = make_wiener_problem<double>(grid);
    auto one = GridFunction<double>::constant(grid, 1.0);
    auto fu = problem.apply(one);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        worst = std::max(worst, std::abs(fu.values()(i)
                                         - oracles::wiener_rhs_one(grid->nodes()(i))));
    }
    CHECK(worst <= 1e-3);

    auto zero = GridFunction<double>::zero(grid);
    CHECK(problem.apply(zero).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact-solution identity converges at second order") {
    auto error_at = [](Eigen::Index n) {
        auto grid = make_grid<double>(n);
        auto problem = make_wiener_problem<double>(grid);
        auto fu = problem.apply(GridFunction<double>::constant(grid, 1.0));
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(fu.values()(i)
                                             - oracles::wiener_rhs_one(grid->nodes()(i))));
        }
        return worst;
    };
    const double ratio = error_at(100) / error_at(200);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("apply matches a high-resolution quadrature oracle") {
    auto grid = make_grid<double>(200);
    auto problem = make_wiener_problem<double>(grid);
    auto u = GridFunction<double>::sample(grid, [](double x) {
        return std::sin(std::numbers::pi * x);
    });
    auto fu = problem.apply(u);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < grid->size(); ++i) {
        const double x = grid->nodes()(i);
        const double exact = oracles::kernel_apply(x, [](double y) {
                                 return std::sin(std::numbers::pi * y);
                             })
                             + std::pow(std::sin(std::numbers::pi * x), 3) / 6.0;
        worst = std::max(worst, std::abs(fu.values()(i) - exact));
    }
    CHECK(worst <= 5e-4);
}

TEST_CASE("derivative at zero is the pure kernel part") {
    auto grid = make_grid<double>(60);
    auto problem = make_wiener_problem<double>(grid);
    std::mt19937_64 rng(7);
    auto h = oracles::random_vector(rng, 60, -1.0, 1.0);
    Eigen::VectorXd lhs = problem.derivative_apply(Eigen::VectorXd::Zero(60), h);
    // F(h+0) - u^3 part is cubic, so K h equals the derivative at zero; check
    // against the apply of a scaled copy: F(eps h)/eps -> K h as eps -> 0.
    const double eps = 1e-7;
    Eigen::VectorXd scaled = problem.apply((eps * h).eval()) / eps;
    CHECK((lhs - scaled).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("derivative matches central finite differences") {
    auto grid = make_grid<double>(100);
    auto problem = make_wiener_problem<double>(grid);
    std::mt19937_64 rng(11);
    const double eps = 1e-5;
    for (int k = 0; k < 25; ++k) {
        Eigen::VectorXd u = oracles::random_vector(rng, 100, -1.0, 1.0);
        Eigen::VectorXd h = oracles::random_vector(rng, 100, -1.0, 1.0);
        u /= std::max(1.0, grid->norm(u));
        h /= std::max(1.0, grid->norm(h));
        Eigen::VectorXd fd = (problem.apply((u + eps * h).eval())
                              - problem.apply((u - eps * h).eval())) / (2.0 * eps);
        Eigen::VectorXd an = problem.derivative_apply(u, h);
        CHECK(grid->norm((fd - an).eval()) / grid->norm(an) <= 1e-6);
    }
}

TEST_CASE("adjoint identity in the weighted inner product") {
    auto grid = make_grid<double>(100);
    auto problem = make_wiener_problem<double>(grid);
    std::mt19937_64 rng(13);
    for (int k = 0; k < 25; ++k) {
        Eigen::VectorXd u = oracles::random_vector(rng, 100, -1.0, 1.0);
        Eigen::VectorXd h = oracles::random_vector(rng, 100, -1.0, 1.0);
        Eigen::VectorXd g = oracles::random_vector(rng, 100, -1.0, 1.0);
        const double lhs = grid->dot(problem.derivative_apply(u, h), g);
        const double rhs = grid->dot(h, problem.adjoint_derivative_apply(u, g));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("adjoint columns and self-adjointness of the model derivative") {
    const Eigen::Index n = 40;
    auto grid = make_grid<double>(n);
    auto problem = make_wiener_problem<double>(grid);
    const auto& x = grid->nodes();
    const auto& w = grid->weights();

    // u = 0, h = e_j: the adjoint apply is column j of W^{-1} K^T W.
    const Eigen::Index j = 17;
    Eigen::VectorXd ej = Eigen::VectorXd::Zero(n);
    ej(j) = 1.0;
    Eigen::VectorXd col = problem.adjoint_derivative_apply(Eigen::VectorXd::Zero(n), ej);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double kji = w(i) * std::exp(-std::abs(x(j) - x(i)));
        CHECK(col(i) == doctest::Approx(kji * w(j) / w(i)).epsilon(1e-13));
    }

    // For this kernel the adjoint equals the derivative nodewise.
    std::mt19937_64 rng(17);
    Eigen::VectorXd u = oracles::random_vector(rng, n, -1.0, 1.0);
    Eigen::VectorXd h = oracles::random_vector(rng, n, -1.0, 1.0);
    Eigen::VectorXd a = problem.derivative_apply(u, h);
    Eigen::VectorXd b = problem.adjoint_derivative_apply(u, h);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("residual norm") {
    auto grid = make_grid<double>(100);
    auto problem = make_wiener_problem<double>(grid);
    auto y = *problem.exact_solution();
    auto fy = problem.apply(y);

    CHECK(dsm::residual_norm(problem, y, fy) <= 1e-12);

    // zero iterate against the exact data: the residual is ||f||
    const double f_norm_oracle = oracles::l2_norm(oracles::wiener_rhs_one);
    CHECK(f_norm_oracle == doctest::Approx(0.9035983).epsilon(1e-6));
    auto zero = GridFunction<double>::zero(grid);
    CHECK(dsm::residual_norm(problem, zero, *problem.rhs_exact())
          == doctest::Approx(f_norm_oracle).epsilon(2e-4));

    // unit-norm perturbation of exact data gives residual delta exactly
    std::mt19937_64 rng(23);
    Eigen::VectorXd e = oracles::random_vector(rng, 100, -1.0, 1.0);
    e /= grid->norm(e);
    const double delta = 0.037;
    GridFunction<double> f_delta(grid, fy.values() + delta * e);
    CHECK(std::abs(dsm::residual_norm(problem, y, f_delta) - delta) <= 1e-12);
}

TEST_CASE("monotonicity sweep") {
    auto grid = make_grid<double>(100);
    auto problem = make_wiener_problem<double>(grid);
    std::mt19937_64 rng(29);
    double worst = 1.0;
    for (int k = 0; k < 300; ++k) {
        Eigen::VectorXd u = oracles::random_vector(rng, 100, -2.0, 2.0);
        Eigen::VectorXd v = oracles::random_vector(rng, 100, -2.0, 2.0);
        const double q = grid->dot((problem.apply(u) - problem.apply(v)).eval(),
                                   (u - v).eval());
        worst = std::min(worst, q);
    }
    CHECK(worst >= -1e-12);
}

TEST_CASE("linear part is positive semidefinite in the weighted product") {
    auto grid = make_grid<double>(100);
    auto problem = make_wiener_problem<double>(grid);
    std::mt19937_64 rng(31);
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd h = oracles::random_vector(rng, 100, -1.0, 1.0);
        Eigen::VectorXd kh = problem.derivative_apply(Eigen::VectorXd::Zero(100), h);
        CHECK(grid->dot(kh, h) >= -1e-12);
    }
}

TEST_CASE("non-finite inputs are rejected, not clamped") {
    auto grid = make_grid<double>(50);
    auto problem = make_wiener_problem<double>(grid);
    Eigen::VectorXd huge = Eigen::VectorXd::Constant(50, 1e200);
    CHECK_THROWS_AS(problem.apply(huge), dsm::NonFiniteError);
}

TEST_CASE("grid mismatch raises") {
    auto problem = make_wiener_problem<double>(make_grid<double>(50));
    auto other = GridFunction<double>::constant(make_grid<double>(51), 1.0);
    CHECK_THROWS_AS(problem.apply(other), dsm::DimensionError);
}

TEST_CASE("bound estimate is stable across resolutions") {
    auto p100 = make_wiener_problem<double>(make_grid<double>(100));
    auto p200 = make_wiener_problem<double>(make_grid<double>(200));
    CHECK(p100.bounds().m1 == doctest::Approx(p200.bounds().m1).epsilon(1e-3));
    // ||K|| + radius^2/2 with the default radius 2: kernel norm plus 2
    CHECK(p100.bounds().m1 > 2.5);
    CHECK(p100.bounds().m1 < 3.0);
    auto forced = make_wiener_problem<double>(make_grid<double>(50), 1.0, 3.25);
    CHECK(forced.bounds().m1 == 3.25);
}
