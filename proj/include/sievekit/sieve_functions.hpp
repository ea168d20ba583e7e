#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "sievekit/errors.hpp"
#include "sievekit/quadrature.hpp"

namespace sievekit {

/// Euler's constant, the single source of truth for e^gamma below.
inline constexpr double euler_gamma = 0.5772156649015329;

/// e^gamma, computed once from euler_gamma rather than hardcoded.
inline const double exp_euler_gamma = std::exp(euler_gamma);

/// Which piecewise formula produced a sieve-function value. Numbering matches
/// the conventional branch order: F uses 1..3 over (0,3], [3,5], [5,7];
/// f uses 0..3 over (0,2], [2,4], [4,6], [6,8].
enum class SieveBranch : int {
    zero = 0,
    closed_form = 1,
    first_iterate = 2,
    second_iterate = 3,
};

struct SieveFunctionValue {
    double s = 0.0;
    double value = 0.0;
    double error_bound = 0.0;
    SieveBranch branch = SieveBranch::closed_form;
};

namespace detail {

// \int_2^x log(t-1)/t dt; exactly 0 for x <= 2. The integrand vanishes at
// t = 2, so no endpoint handling is needed.
inline IntegralEstimate log_shift_integral(double x, const QuadratureConfig& cfg) {
    return integrate([](double t) { return std::log(t - 1.0) / t; }, 2.0, x, cfg);
}

// F correction on [5,7]:
//   \int_2^{s-3} log(t-1)/t * \int_{t+2}^{s-1} log((u-1)/(t+1))/u du dt
inline IntegralEstimate F_second_correction(double s, const QuadratureConfig& cfg) {
    const QuadratureConfig inner = inner_config(cfg);
    double inner_err = 0.0;
    auto outer = integrate(
        [&](double t) {
            const auto h = integrate(
                [&](double u) { return std::log((u - 1.0) / (t + 1.0)) / u; },
                t + 2.0, s - 1.0, inner);
            inner_err = std::max(inner_err, h.error);
            return std::log(t - 1.0) / t * h.value;
        },
        2.0, s - 3.0, cfg);
    outer.error += inner_err * std::max(0.0, s - 5.0);
    return outer;
}

// f iterate on [4,6]: \int_3^{s-1} (1/t) \int_2^{t-1} log(u-1)/u du dt
inline IntegralEstimate f_first_correction(double s, const QuadratureConfig& cfg) {
    const QuadratureConfig inner = inner_config(cfg);
    double inner_err = 0.0;
    auto outer = integrate(
        [&](double t) {
            const auto g = log_shift_integral(t - 1.0, inner);
            inner_err = std::max(inner_err, g.error);
            return g.value / t;
        },
        3.0, s - 1.0, cfg);
    outer.error += inner_err * std::max(0.0, s - 4.0);
    return outer;
}

// f correction on [6,8]:
//   \int_2^{s-4} log(t-1)/t * \int_{t+2}^{s-2} log((u-1)/(t+1)) log(s/(u+2))/u du dt
inline IntegralEstimate f_second_correction(double s, const QuadratureConfig& cfg) {
    const QuadratureConfig inner = inner_config(cfg);
    double inner_err = 0.0;
    auto outer = integrate(
        [&](double t) {
            const auto h = integrate(
                [&](double u) {
                    return std::log((u - 1.0) / (t + 1.0)) *
                           std::log(s / (u + 2.0)) / u;
                },
                t + 2.0, s - 2.0, inner);
            inner_err = std::max(inner_err, h.error);
            return std::log(t - 1.0) / t * h.value;
        },
        2.0, s - 4.0, cfg);
    outer.error += inner_err * std::max(0.0, s - 6.0);
    return outer;
}

inline SieveFunctionValue eval_F_branch_impl(double s, SieveBranch branch,
                                             const QuadratureConfig& cfg,
                                             double gamma) {
    const double pre = 2.0 * std::exp(gamma) / s;
    switch (branch) {
    case SieveBranch::closed_form:
        if (!(s > 0.0 && s <= 3.0))
            throw domain_error("F branch 1 requires 0 < s <= 3");
        return {s, pre, 0.0, branch};
    case SieveBranch::first_iterate: {
        if (!(s >= 3.0 && s <= 5.0))
            throw domain_error("F branch 2 requires 3 <= s <= 5");
        const auto g = log_shift_integral(s - 1.0, cfg);
        return {s, pre * (1.0 + g.value), pre * g.error, branch};
    }
    case SieveBranch::second_iterate: {
        if (!(s >= 5.0 && s <= 7.0))
            throw domain_error("F branch 3 requires 5 <= s <= 7");
        const auto g = log_shift_integral(s - 1.0, cfg);
        const auto c = F_second_correction(s, cfg);
        return {s, pre * (1.0 + g.value + c.value), pre * (g.error + c.error),
                branch};
    }
    default:
        throw domain_error("F has no zero branch");
    }
}

inline SieveFunctionValue eval_f_branch_impl(double s, SieveBranch branch,
                                             const QuadratureConfig& cfg,
                                             double gamma) {
    const double pre = 2.0 * std::exp(gamma) / s;
    switch (branch) {
    case SieveBranch::zero:
        if (!(s > 0.0 && s <= 2.0))
            throw domain_error("f branch 0 requires 0 < s <= 2");
        return {s, 0.0, 0.0, branch};
    case SieveBranch::closed_form:
        if (!(s >= 2.0 && s <= 4.0))
            throw domain_error("f branch 1 requires 2 <= s <= 4");
        return {s, pre * std::log(s - 1.0), 0.0, branch};
    case SieveBranch::first_iterate: {
        if (!(s >= 4.0 && s <= 6.0))
            throw domain_error("f branch 2 requires 4 <= s <= 6");
        const auto c = f_first_correction(s, cfg);
        return {s, pre * (std::log(s - 1.0) + c.value), pre * c.error, branch};
    }
    case SieveBranch::second_iterate: {
        if (!(s >= 6.0 && s <= 8.0))
            throw domain_error("f branch 3 requires 6 <= s <= 8");
        const auto c1 = f_first_correction(s, cfg);
        const auto c2 = f_second_correction(s, cfg);
        return {s, pre * (std::log(s - 1.0) + c1.value + c2.value),
                pre * (c1.error + c2.error), branch};
    }
    }
    throw domain_error("unknown f branch");
}

// Breakpoint ownership: an s sitting exactly on a breakpoint evaluates
// through the lower (simpler) branch.
inline SieveBranch F_branch_for(double s) {
    if (s <= 3.0) return SieveBranch::closed_form;
    if (s <= 5.0) return SieveBranch::first_iterate;
    return SieveBranch::second_iterate;
}

inline SieveBranch f_branch_for(double s) {
    if (s <= 2.0) return SieveBranch::zero;
    if (s <= 4.0) return SieveBranch::closed_form;
    if (s <= 6.0) return SieveBranch::first_iterate;
    return SieveBranch::second_iterate;
}

inline SieveFunctionValue eval_F_gamma(double s, const QuadratureConfig& cfg,
                                       double gamma) {
    if (!(s > 0.0) || s > 7.0)
        throw domain_error("F(s) is defined for s in (0, 7]");
    validate(cfg);
    return eval_F_branch_impl(s, F_branch_for(s), cfg, gamma);
}

inline SieveFunctionValue eval_f_gamma(double s, const QuadratureConfig& cfg,
                                       double gamma) {
    if (!(s > 0.0) || s > 8.0)
        throw domain_error("f(s) is defined for s in (0, 8]");
    validate(cfg);
    return eval_f_branch_impl(s, f_branch_for(s), cfg, gamma);
}

} // namespace detail

/// Upper linear-sieve function F(s) on (0, 7].
inline SieveFunctionValue eval_F(double s, const QuadratureConfig& cfg = {}) {
    return detail::eval_F_gamma(s, cfg, euler_gamma);
}

/// Lower linear-sieve function f(s) on (0, 8]; identically 0 on (0, 2].
inline SieveFunctionValue eval_f(double s, const QuadratureConfig& cfg = {}) {
    return detail::eval_f_gamma(s, cfg, euler_gamma);
}

/// Evaluate F through a specific piecewise formula (for continuity checks
/// straddling a breakpoint). s must lie in that branch's closed range.
inline SieveFunctionValue eval_F_branch(double s, SieveBranch branch,
                                        const QuadratureConfig& cfg = {}) {
    validate(cfg);
    return detail::eval_F_branch_impl(s, branch, cfg, euler_gamma);
}

inline SieveFunctionValue eval_f_branch(double s, SieveBranch branch,
                                        const QuadratureConfig& cfg = {}) {
    validate(cfg);
    return detail::eval_f_branch_impl(s, branch, cfg, euler_gamma);
}

/// Central-difference residual of the delay system
///   (s F(s))' = f(s-1),  (s f(s))' = F(s-1),  s >= 2.
/// Returns the max residual over the identities whose evaluations stay in
/// domain; s must keep 2h clear of every formula breakpoint.
inline double dde_residual(double s, double h, const QuadratureConfig& cfg = {}) {
    if (!(h > 0.0) || h > 1e-3)
        throw domain_error("dde_residual requires 0 < h <= 1e-3");
    validate(cfg);
    if (s < 2.0 + 2.0 * h)
        throw domain_error("dde_residual requires s >= 2 + 2h");
    for (double b : {3.0, 4.0, 5.0, 6.0, 7.0})
        if (std::abs(s - b) < 2.0 * h)
            throw domain_error("dde_residual: s within 2h of breakpoint " +
                               std::to_string(b));
    auto F = [&](double x) { return eval_F(x, cfg).value; };
    auto f = [&](double x) { return eval_f(x, cfg).value; };
    double residual = -1.0;
    if (s + h <= 7.0) {
        const double dF = ((s + h) * F(s + h) - (s - h) * F(s - h)) / (2.0 * h);
        residual = std::max(residual, std::abs(dF - f(s - 1.0)));
    }
    if (s + h <= 8.0) {
        const double df = ((s + h) * f(s + h) - (s - h) * f(s - h)) / (2.0 * h);
        residual = std::max(residual, std::abs(df - F(s - 1.0)));
    }
    if (residual < 0.0)
        throw domain_error("dde_residual: neither identity evaluable at s = " +
                           std::to_string(s));
    return residual;
}

} // namespace sievekit
