#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "sievekit/errors.hpp"

namespace sievekit {

/// Tolerances and depth limit governing every integral evaluation.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 40;
};

inline void validate(const QuadratureConfig& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0))
        throw domain_error("quadrature tolerances must be positive");
    if (cfg.max_depth < 10)
        throw domain_error("quadrature max_depth must be at least 10");
}

/// Tolerance pair for an inner integral evaluated inside an outer integrand,
/// tightened by 10x so the inner error stays negligible against the outer budget.
inline QuadratureConfig inner_config(const QuadratureConfig& cfg) {
    return {cfg.abs_tol / 10.0, cfg.rel_tol / 10.0, cfg.max_depth};
}

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half; symmetric).
// Odd Kronrod indices are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> gk_nodes = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993945, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr std::array<double, 8> gk_weights_kronrod = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr std::array<double, 4> gk_weights_gauss = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694};

struct PanelEstimate {
    double kronrod;
    double gauss;
};

template <typename F>
PanelEstimate gk15_panel(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kronrod = gk_weights_kronrod[7] * f(mid);
    double gauss = gk_weights_gauss[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_nodes[i];
        const double pair = f(mid - dx) + f(mid + dx);
        kronrod += gk_weights_kronrod[i] * pair;
        if (i % 2 == 1)
            gauss += gk_weights_gauss[i / 2] * pair;
    }
    return {kronrod * half, gauss * half};
}

template <typename F>
IntegralEstimate gk_adaptive(F&& f, double a, double b, double tol, int depth,
                             int max_depth) {
    const auto panel = gk15_panel(f, a, b);
    const double err = std::abs(panel.kronrod - panel.gauss);
    if (err <= tol || b - a <= 1e-14 * (std::abs(a) + 1.0))
        return {panel.kronrod, err};
    if (depth >= max_depth)
        throw nonconvergence_error(
            "adaptive quadrature depth exhausted on [" + std::to_string(a) +
            ", " + std::to_string(b) + "], panel error " + std::to_string(err));
    const double mid = 0.5 * (a + b);
    const auto left = gk_adaptive(f, a, mid, 0.5 * tol, depth + 1, max_depth);
    const auto right = gk_adaptive(f, mid, b, 0.5 * tol, depth + 1, max_depth);
    return {left.value + right.value, left.error + right.error};
}

} // namespace detail

/// Adaptive Gauss-Kronrod 7/15 integration of f over [a, b].
///
/// Panels are bisected until the Kronrod/Gauss difference meets the local
/// budget. Empty ranges (b <= a) integrate to exactly 0. Throws
/// nonconvergence_error if the certified error cannot be brought below
/// max(abs_tol, rel_tol * |value|).
template <typename F>
IntegralEstimate integrate(F&& f, double a, double b,
                           const QuadratureConfig& cfg = {}) {
    validate(cfg);
    if (!(b > a))
        return {0.0, 0.0};
    const auto result =
        detail::gk_adaptive(f, a, b, cfg.abs_tol, 0, cfg.max_depth);
    const double bound =
        std::max(cfg.abs_tol, cfg.rel_tol * std::abs(result.value));
    if (result.error > bound)
        throw nonconvergence_error("integral error estimate " +
                                   std::to_string(result.error) +
                                   " exceeds tolerance " + std::to_string(bound));
    return result;
}

} // namespace sievekit
