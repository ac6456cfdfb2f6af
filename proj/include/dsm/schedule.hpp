#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "dsm/operator.hpp"

namespace dsm {

namespace detail {

template <typename Scalar, typename Fn>
Scalar adaptive_simpson_rec(Fn&& f, Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb,
                            Scalar whole, Scalar tol, int depth) {
    const Scalar m = (a + b) / 2;
    const Scalar lm = (a + m) / 2;
    const Scalar rm = (m + b) / 2;
    const Scalar flm = f(lm);
    const Scalar frm = f(rm);
    const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
    const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
    const Scalar delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15 * tol) {
        return left + right + delta / 15;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1)
         + adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

/// Adaptive Simpson quadrature with absolute tolerance tol.
template <typename Scalar, typename Fn>
Scalar adaptive_simpson(Fn&& f, Scalar a, Scalar b, Scalar tol, int max_depth = 40) {
    if (a == b) {
        return 0;
    }
    const Scalar fa = f(a);
    const Scalar fb = f(b);
    const Scalar m = (a + b) / 2;
    const Scalar fm = f(m);
    const Scalar whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

template <typename Scalar>
std::string format_number(Scalar v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(v));
    return buf;
}

} // namespace detail

/// Regularization schedule a(t) = d/(c+t)^b, decreasing to zero.
///
/// The discrete sequence is a_n = a(n). Admissibility (b in (0,1/4],
/// c >= 1, derivative-ratio bound) is the validators' business; the
/// constructor only requires positive parameters so that faster-decaying
/// schedules such as a_0/(1+n) remain expressible.
template <typename Scalar = double>
class PowerSchedule {
public:
    PowerSchedule(Scalar d, Scalar c, Scalar b) : d_(d), c_(c), b_(b) {
        if (d <= 0 || c <= 0 || b <= 0) {
            throw ParameterError("PowerSchedule: need d > 0, c > 0, b > 0");
        }
    }

    Scalar d() const { return d_; }
    Scalar c() const { return c_; }
    Scalar b() const { return b_; }

    /// a(t) for t >= 0.
    Scalar value(Scalar t) const {
        if (t < 0) {
            throw ParameterError("PowerSchedule::value: need t >= 0");
        }
        return d_ / std::pow(c_ + t, b_);
    }

    /// a_n = a(n) for n >= 0.
    Scalar value_at(long n) const {
        if (n < 0) {
            throw ParameterError("PowerSchedule::value_at: need n >= 0");
        }
        return value(Scalar(n));
    }

    /// da/dt (negative).
    Scalar derivative(Scalar t) const {
        return -b_ * d_ / std::pow(c_ + t, b_ + 1);
    }

    /// Closed form of the integrating-factor exponent int_0^t a(s)^2/2 ds.
    Scalar integrating_factor_exponent(Scalar t) const {
        if (std::abs(Scalar(1) - 2 * b_) < Scalar(1e-12)) {
            return d_ * d_ / 2 * std::log((c_ + t) / c_);
        }
        const Scalar theta = 1 - 2 * b_;
        const Scalar p = d_ * d_ / (2 * theta);
        return p * (std::pow(c_ + t, theta) - std::pow(c_, theta));
    }

    /// With the same unitless parameters scaled: a -> factor*a.
    PowerSchedule scaled(Scalar factor) const {
        return PowerSchedule(factor * d_, c_, b_);
    }

private:
    Scalar d_;
    Scalar c_;
    Scalar b_;
};

struct ScheduleCondition {
    std::string name;
    bool ok = false;
    bool advisory = false; // informational only, excluded from overall ok()
    std::string detail;
    long first_violation = -1;
};

struct ScheduleValidation {
    std::vector<ScheduleCondition> conditions;

    bool ok() const {
        for (const auto& c : conditions) {
            if (!c.advisory && !c.ok) {
                return false;
            }
        }
        return true;
    }

    const ScheduleCondition* find(const std::string& name) const {
        for (const auto& c : conditions) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }

    std::string failed_names() const {
        std::string out;
        for (const auto& c : conditions) {
            if (!c.advisory && !c.ok) {
                if (!out.empty()) {
                    out += ", ";
                }
                out += c.name;
            }
        }
        return out;
    }
};

/// Admissibility of a(t) for the continuous flow: b in (0,1/4], c >= 1, and
/// sup_t |da/dt|/a^3 = b/(d^2 c^{1-2b}) <= 1/4. Also reports (advisory)
/// whether the stronger decay premise c^{1-2b} d^2 >= 6b holds, which the
/// drift-integral inequality needs.
template <typename Scalar>
ScheduleValidation validate_continuous(const PowerSchedule<Scalar>& s) {
    ScheduleValidation v;
    const Scalar b = s.b();
    const Scalar c = s.c();
    const Scalar d = s.d();

    {
        ScheduleCondition cond;
        cond.name = "b_range";
        cond.ok = b > 0 && b <= Scalar(0.25);
        cond.detail = "b = " + detail::format_number(b) + ", admissible range (0, 1/4]";
        v.conditions.push_back(cond);
    }
    {
        ScheduleCondition cond;
        cond.name = "c_range";
        cond.ok = c >= 1;
        cond.detail = "c = " + detail::format_number(c) + ", need c >= 1";
        v.conditions.push_back(cond);
    }
    {
        const Scalar ratio = b / (d * d * std::pow(c, 1 - 2 * b));
        ScheduleCondition cond;
        cond.name = "derivative_ratio";
        cond.ok = ratio <= Scalar(0.25);
        cond.detail = "sup |da/dt|/a^3 = " + detail::format_number(ratio) + ", need <= 0.25";
        v.conditions.push_back(cond);
    }
    {
        const Scalar lhs = std::pow(c, 1 - 2 * b) * d * d;
        ScheduleCondition cond;
        cond.name = "strong_decay_premise";
        cond.advisory = true;
        cond.ok = lhs >= 6 * b;
        cond.detail = "c^(1-2b) d^2 = " + detail::format_number(lhs) + " vs 6b = "
                      + detail::format_number(6 * b);
        v.conditions.push_back(cond);
    }
    return v;
}

/// Parameters entering the discrete-schedule admissibility conditions.
template <typename Scalar = double>
struct DiscreteScheduleParams {
    Scalar lambda = 1;            // gap-tracking constant
    Scalar y_norm = 1;            // estimate of ||y||
    Scalar alpha_floor = 1;       // step-size floor
    Scalar big_c = Scalar(1.005); // C = (C1+1)/2 > 1
    long n_check = 10000;         // range for the numeric recursion check
};

/// Checks the five admissibility conditions of the discrete schedule
/// a_n (ratio bound, initial-data bound, lambda lower bound, curvature
/// margin, decay recursion); the recursion is verified numerically for
/// n = 0..n_check with the first violating index recorded.
template <typename Scalar>
ScheduleValidation validate_discrete(const PowerSchedule<Scalar>& s,
                                     const OperatorBounds<Scalar>& bounds,
                                     const DiscreteScheduleParams<Scalar>& params,
                                     Scalar f0_gap) {
    ScheduleValidation v;
    const Scalar a0 = s.value_at(0);
    const Scalar lambda = params.lambda;
    const Scalar c0 = bounds.curvature_c0();
    const Scalar c1 = bounds.drift_c1(params.y_norm, params.big_c);
    if (lambda <= 0 || params.alpha_floor <= 0 || params.y_norm <= 0) {
        throw ParameterError("validate_discrete: need lambda, alpha_floor, y_norm > 0");
    }

    {
        ScheduleCondition cond;
        cond.name = "ratio_bound";
        cond.ok = true;
        for (long n = 0; n <= params.n_check; ++n) {
            if (s.value_at(n) / s.value_at(n + 1) > 2) {
                cond.ok = false;
                cond.first_violation = n;
                break;
            }
        }
        cond.detail = "a_n/a_{n+1} <= 2 for n <= " + std::to_string(params.n_check);
        v.conditions.push_back(cond);
    }
    {
        ScheduleCondition cond;
        cond.name = "initial_data_bound";
        const Scalar rhs = a0 * a0 * a0 / lambda;
        cond.ok = f0_gap <= rhs;
        cond.detail = "||f_delta - F(0)|| = " + detail::format_number(f0_gap)
                      + " vs a_0^3/lambda = " + detail::format_number(rhs);
        v.conditions.push_back(cond);
    }
    {
        ScheduleCondition cond;
        cond.name = "lambda_lower_bound";
        cond.ok = bounds.m1 / lambda <= params.y_norm;
        cond.detail = "M1/lambda = " + detail::format_number(bounds.m1 / lambda)
                      + " vs ||y|| = " + detail::format_number(params.y_norm);
        v.conditions.push_back(cond);
    }
    {
        ScheduleCondition cond;
        cond.name = "curvature_margin";
        const Scalar lhs = c0 * (bounds.m1 + a0) / lambda;
        cond.ok = lhs <= Scalar(0.5);
        cond.detail = "c0(M1 + a_0)/lambda = " + detail::format_number(lhs) + ", need <= 1/2";
        v.conditions.push_back(cond);
    }
    {
        ScheduleCondition cond;
        cond.name = "decay_recursion";
        cond.ok = true;
        for (long n = 0; n <= params.n_check; ++n) {
            const Scalar an = s.value_at(n);
            const Scalar an1 = s.value_at(n + 1);
            const Scalar lhs = an * an / lambda
                               - params.alpha_floor * an * an * an * an / (2 * lambda)
                               + c1 * (an - an1) / an1;
            if (lhs > an1 * an1 / lambda) {
                cond.ok = false;
                cond.first_violation = n;
                break;
            }
        }
        cond.detail = cond.ok ? ("holds for n <= " + std::to_string(params.n_check))
                              : ("violated at n = " + std::to_string(cond.first_violation));
        v.conditions.push_back(cond);
    }
    return v;
}

template <typename Scalar = double>
struct ScaledSchedule {
    PowerSchedule<Scalar> schedule;
    DiscreteScheduleParams<Scalar> params; // lambda replaced by factor^2 * lambda
    Scalar factor;                         // the applied multiplier, >= 1
    ScheduleValidation validation;         // post-scaling re-validation, all five
};

/// Rescales (a_n, lambda) -> (k a_n, k^2 lambda) with the smallest k >= 1
/// for which the curvature margin and decay recursion follow; requires the
/// ratio, initial-data and lambda bounds to hold already. Re-validates the
/// scaled pair numerically and refuses to return an inconsistent result.
template <typename Scalar>
ScaledSchedule<Scalar> scale_to_admissible(const PowerSchedule<Scalar>& s,
                                           const OperatorBounds<Scalar>& bounds,
                                           const DiscreteScheduleParams<Scalar>& params,
                                           Scalar f0_gap) {
    const ScheduleValidation base = validate_discrete(s, bounds, params, f0_gap);
    for (const char* required : {"ratio_bound", "initial_data_bound", "lambda_lower_bound"}) {
        const ScheduleCondition* cond = base.find(required);
        if (!cond || !cond->ok) {
            throw ParameterError(std::string("scale_to_admissible: base schedule violates ")
                                 + required);
        }
    }

    const Scalar a0 = s.value_at(0);
    const Scalar lambda = params.lambda;
    const Scalar c0 = bounds.curvature_c0();
    const Scalar c1 = bounds.drift_c1(params.y_norm, params.big_c);
    const Scalar alpha = params.alpha_floor;

    const Scalar k1 = 4 * c0 * a0 / lambda;
    const Scalar k2 = std::sqrt(4 / (alpha * a0 * a0 * 2 * std::sqrt(Scalar(2))));
    const Scalar k3 = std::sqrt(lambda * c1 / (alpha * a0 * a0 * a0 * a0));
    const Scalar kappa = std::max({Scalar(1), k1, k2, k3});

    ScaledSchedule<Scalar> out{s.scaled(kappa), params, kappa, {}};
    out.params.lambda = kappa * kappa * lambda;
    out.validation = validate_discrete(out.schedule, bounds, out.params, f0_gap);
    if (!out.validation.ok()) {
        throw SolveError("scale_to_admissible: re-validation failed ("
                         + out.validation.failed_names()
                         + "); the operator bounds are likely inconsistent");
    }
    return out;
}

/// Data-driven initial regularization strength a_0 = C0 * delta^zeta.
template <typename Scalar>
Scalar heuristic_a0(Scalar delta, Scalar zeta, Scalar c0) {
    if (delta <= 0) {
        throw ParameterError("heuristic_a0: need delta > 0");
    }
    if (!(zeta > 0 && zeta <= 1)) {
        throw ParameterError("heuristic_a0: need zeta in (0, 1]");
    }
    if (c0 <= 0) {
        throw ParameterError("heuristic_a0: need C0 > 0");
    }
    return c0 * std::pow(delta, zeta);
}

/// Step sizes for the gradient iteration. The admissible band at step n is
/// [alpha_floor, 2/(a_n^2 + (M1+a_n)^2)]; capped mode clips the requested
/// alpha to the band's upper endpoint, constant mode emits it unchanged.
template <typename Scalar = double>
struct StepSizePolicy {
    enum class Mode { Constant, Capped };

    Mode mode = Mode::Capped;
    Scalar alpha = 1;
    Scalar alpha_floor = Scalar(1e-6);

    static StepSizePolicy constant(Scalar alpha, Scalar floor = Scalar(1e-6)) {
        return StepSizePolicy{Mode::Constant, alpha, floor};
    }
    static StepSizePolicy capped(Scalar alpha, Scalar floor = Scalar(1e-6)) {
        return StepSizePolicy{Mode::Capped, alpha, floor};
    }

    Scalar band_upper(Scalar a_n, Scalar m1) const {
        return 2 / (a_n * a_n + (m1 + a_n) * (m1 + a_n));
    }

    struct Step {
        Scalar alpha;
        bool clipped;
    };

    Step step(Scalar a_n, Scalar m1) const {
        if (mode == Mode::Constant) {
            return {alpha, false};
        }
        const Scalar cap = band_upper(a_n, m1);
        if (alpha <= cap) {
            return {alpha, false};
        }
        return {cap, true};
    }
};

/// One evaluation of an integral inequality: both sides and the margin.
template <typename Scalar = double>
struct InequalityCheck {
    Scalar t;
    Scalar lhs;
    Scalar rhs;
    Scalar margin; // rhs - lhs
    bool ok;
};

namespace detail {

/// Integrates fn over [0,t], splitting at the supplied knots.
template <typename Scalar, typename Fn>
Scalar integrate_with_knots(Fn&& fn, Scalar t, const std::vector<Scalar>& knots, Scalar tol) {
    std::vector<Scalar> cuts{Scalar(0)};
    for (Scalar k : knots) {
        if (k > 0 && k < t) {
            cuts.push_back(k);
        }
    }
    cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    Scalar total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += adaptive_simpson(fn, cuts[i], cuts[i + 1], tol / Scalar(cuts.size()));
    }
    return total;
}

} // namespace detail

/// Checks, at each t in t_grid, the weighted-decay integral inequality
///
///   (d^2/2)(1 - 2b/(c^theta d^2)) int_0^t e^{phi(s)} (s+c)^{-3b} ds
///       < e^{phi(t)} (c+t)^{-b},        phi = int_0^t a^2/2,
///
/// with both sides scaled by e^{-phi(t)} for conditioning. Requires the
/// schedule to pass validate_continuous.
template <typename Scalar>
std::vector<InequalityCheck<Scalar>> check_decay_integral(const PowerSchedule<Scalar>& s,
                                                          const std::vector<Scalar>& t_grid) {
    const ScheduleValidation v = validate_continuous(s);
    if (!v.ok()) {
        throw ParameterError("check_decay_integral: schedule inadmissible (" + v.failed_names()
                             + ")");
    }
    const Scalar b = s.b();
    const Scalar c = s.c();
    const Scalar d = s.d();
    const Scalar theta = 1 - 2 * b;
    const Scalar factor = d * d / 2 * (1 - 2 * b / (std::pow(c, theta) * d * d));

    std::vector<InequalityCheck<Scalar>> out;
    out.reserve(t_grid.size());
    for (Scalar t : t_grid) {
        if (t <= 0) {
            throw ParameterError("check_decay_integral: need t > 0");
        }
        const Scalar phi_t = s.integrating_factor_exponent(t);
        auto integrand = [&](Scalar x) {
            return std::exp(s.integrating_factor_exponent(x) - phi_t)
                   / std::pow(x + c, 3 * b);
        };
        const Scalar lhs = factor * detail::adaptive_simpson(integrand, Scalar(0), t,
                                                             Scalar(1e-12));
        const Scalar rhs = std::pow(c + t, -b);
        out.push_back(InequalityCheck<Scalar>{t, lhs, rhs, rhs - lhs, lhs < rhs});
    }
    return out;
}

/// Monotone samples of the regularized-solution norm along the schedule,
/// used by the drift-integral check. Left of the first sample the value is
/// extended as a constant, which can only enlarge the integral side.
template <typename Scalar = double>
struct PsiSamples {
    std::vector<Scalar> s;
    std::vector<Scalar> value;

    void validate() const {
        if (s.size() != value.size() || s.size() < 2) {
            throw ParameterError("PsiSamples: need matching s/value arrays with >= 2 entries");
        }
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] <= s[i - 1]) {
                throw ParameterError("PsiSamples: s must be strictly increasing");
            }
            if (value[i] < value[i - 1] - Scalar(1e-12)) {
                throw ParameterError("PsiSamples: values must be nondecreasing");
            }
        }
    }

    Scalar at(Scalar t) const {
        if (t <= s.front()) {
            return value.front();
        }
        if (t > s.back()) {
            throw ParameterError("PsiSamples: query beyond the sampled range");
        }
        const auto it = std::upper_bound(s.begin(), s.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - s.begin());
        const Scalar w = (t - s[i - 1]) / (s[i] - s[i - 1]);
        return value[i - 1] + w * (value[i] - value[i - 1]);
    }
};

/// Checks, at each t in t_grid, the damped drift inequality
///
///   e^{-phi(t)} int_0^t e^{phi(s)} |da/ds| psi(s) ds <= (1/2) a(t) psi(t),
///
/// with psi given by samples (or psi = 1 when absent). Requires the
/// admissible schedule and the stronger decay premise c^{1-2b} d^2 >= 6b.
template <typename Scalar>
std::vector<InequalityCheck<Scalar>> check_drift_integral(
    const PowerSchedule<Scalar>& s,
    const std::vector<Scalar>& t_grid,
    const std::optional<std::type_identity_t<PsiSamples<Scalar>>>& psi = std::nullopt) {
    const ScheduleValidation v = validate_continuous(s);
    if (!v.ok()) {
        throw ParameterError("check_drift_integral: schedule inadmissible (" + v.failed_names()
                             + ")");
    }
    const ScheduleCondition* premise = v.find("strong_decay_premise");
    if (!premise || !premise->ok) {
        throw ParameterError("check_drift_integral: strong decay premise c^(1-2b) d^2 >= 6b "
                             "violated");
    }
    if (psi) {
        psi->validate();
    }

    auto psi_at = [&](Scalar x) { return psi ? psi->at(x) : Scalar(1); };
    const std::vector<Scalar> knots = psi ? psi->s : std::vector<Scalar>{};

    std::vector<InequalityCheck<Scalar>> out;
    out.reserve(t_grid.size());
    for (Scalar t : t_grid) {
        if (t < 0) {
            throw ParameterError("check_drift_integral: need t >= 0");
        }
        const Scalar phi_t = s.integrating_factor_exponent(t);
        auto integrand = [&](Scalar x) {
            return std::exp(s.integrating_factor_exponent(x) - phi_t)
                   * std::abs(s.derivative(x)) * psi_at(x);
        };
        const Scalar lhs = t == 0 ? Scalar(0)
                                  : detail::integrate_with_knots(integrand, t, knots,
                                                                 Scalar(1e-12));
        const Scalar rhs = s.value(t) * psi_at(t) / 2;
        out.push_back(InequalityCheck<Scalar>{t, lhs, rhs, rhs - lhs, lhs <= rhs});
    }
    return out;
}

} // namespace dsm
