#pragma once

// Test-side oracles, kept independent of the library's own quadrature and
// solver paths: plain composite Simpson on fixed panel counts and helpers
// built on it.

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracles {

/// Composite Simpson with n panels (n made even internally).
template <typename Fn>
double simpson(Fn&& f, double a, double b, int n = 2000) {
    if (n % 2 != 0) {
        ++n;
    }
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return sum * h / 3.0;
}

/// L^2[0,1] norm of a callable by high-resolution quadrature.
template <typename Fn>
double l2_norm(Fn&& f, int n = 20000) {
    return std::sqrt(simpson([&](double x) { return f(x) * f(x); }, 0.0, 1.0, n));
}

/// (Kf)(x) = int_0^1 e^{-|x-y|} f(y) dy, split at the kink y = x so each
/// piece is smooth and Simpson converges at full order.
template <typename Fn>
double kernel_apply(double x, Fn&& f, int n = 4000) {
    auto integrand = [&](double y) { return std::exp(-std::abs(x - y)) * f(y); };
    double left = x > 0.0 ? simpson(integrand, 0.0, x, n) : 0.0;
    double right = x < 1.0 ? simpson(integrand, x, 1.0, n) : 0.0;
    return left + right;
}

/// Closed-form right-hand side for the constant-one solution.
inline double wiener_rhs_one(double x) {
    return 13.0 / 6.0 - std::exp(-x) - std::exp(x - 1.0);
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n,
                                     double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = dist(rng);
    }
    return v;
}

} // namespace oracles
