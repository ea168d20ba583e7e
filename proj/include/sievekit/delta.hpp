#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "sievekit/errors.hpp"
#include "sievekit/quadrature.hpp"

namespace sievekit {

/// Sieve-level exponent denominator: the sifting limit is z = N^{1/lambda}.
inline constexpr double default_lambda = 11.99;

enum class DeltaMode {
    small_primes,   // parameter is theta, the exponent of the summation limit N^theta
    short_interval, // parameter is kappa, the exponent of the interval half-width N^kappa
};

struct DeltaParams {
    DeltaMode mode = DeltaMode::small_primes;
    double param = 1.0;
    double lambda = default_lambda;
    /// Delta formulas for lambda != 11.99 use an extrapolated constant map that
    /// is not independently derived; they must be opted into explicitly.
    bool exploratory = false;
};

inline void validate(const DeltaParams& p) {
    if (!(p.lambda >= 9.0 && p.lambda <= 16.0))
        throw domain_error("lambda must lie in [9, 16]");
    if (p.lambda != default_lambda && !p.exploratory)
        throw domain_error(
            "non-default lambda requires the exploratory flag");
    if (p.mode == DeltaMode::small_primes) {
        if (!(p.param > 2.0 / 3.0 && p.param <= 1.0))
            throw domain_error("theta must lie in (2/3, 1]");
    } else {
        if (!(p.param > 5.0 / 6.0 && p.param <= 1.0))
            throw domain_error("kappa must lie in (5/6, 1]");
        const double half = p.lambda / 2.0;
        if (!(p.lambda * p.param - (half + 1.0) > 1.0))
            throw domain_error("kappa too small: log argument not positive");
    }
}

struct DeltaReport {
    DeltaParams params;
    double delta_a = 0.0; // Delta_1 (small_primes) or Delta_3 (short_interval)
    double delta_b = 0.0; // Delta_2 or Delta_4
    double margin = 0.0;  // delta_a - delta_b / 2
    double error_bound = 0.0; // certified quadrature error of the margin
};

struct ThresholdResult {
    DeltaMode mode = DeltaMode::small_primes;
    double threshold = 0.0;
    double margin_at_threshold = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
};

namespace detail {

struct DeltaConstants {
    double log_arg;     // A: argument of the leading logarithm
    double upper;       // U: upper limit of both integrals
    double ratio_num;   // numerator of delta_b's logarithm
    double ratio_den;   // denominator of delta_b's logarithm
};

// With the default lambda the literal constants 5.995, 11.99, 6.995, 7.995,
// 13.99, 23.98 are used verbatim; otherwise they are generated from lambda
// as lambda/2, lambda, lambda/2+1, lambda/2+2, lambda+2, 2*lambda.
inline DeltaConstants delta_constants(const DeltaParams& p) {
    const double t = p.param;
    if (p.mode == DeltaMode::small_primes) {
        if (p.lambda == default_lambda)
            return {5.995 * t - 1.0, 5.995 * t - 2.0, 11.99 * t - 2.0,
                    3.0 * t - 2.0};
        const double half = p.lambda / 2.0;
        return {half * t - 1.0, half * t - 2.0, p.lambda * t - 2.0,
                3.0 * t - 2.0};
    }
    if (p.lambda == default_lambda)
        return {11.99 * t - 6.995, 11.99 * t - 7.995, 23.98 * t - 13.99,
                6.0 * t - 5.0};
    const double half = p.lambda / 2.0;
    return {p.lambda * t - (half + 1.0), p.lambda * t - (half + 2.0),
            2.0 * p.lambda * t - (p.lambda + 2.0), 6.0 * t - 5.0};
}

} // namespace detail

/// The pair (Delta_a, Delta_b) and the decisive margin Delta_a - Delta_b/2:
///   Delta_a = log A + \int_2^U log(s-1)/s * log(A/(s+1)) ds
///   Delta_b = log(num/den) + \int_2^U log(s-1)/s * log(A(A-s)/(s+1)) ds
/// Integrals with U <= 2 are exactly 0.
inline DeltaReport delta_pair(const DeltaParams& params,
                              const QuadratureConfig& cfg = {}) {
    validate(params);
    validate(cfg);
    const auto c = detail::delta_constants(params);
    const double A = c.log_arg;
    IntegralEstimate ia{0.0, 0.0}, ib{0.0, 0.0};
    if (c.upper > 2.0) {
        ia = integrate(
            [&](double s) {
                return std::log(s - 1.0) / s * std::log(A / (s + 1.0));
            },
            2.0, c.upper, cfg);
        ib = integrate(
            [&](double s) {
                return std::log(s - 1.0) / s *
                       std::log(A * (A - s) / (s + 1.0));
            },
            2.0, c.upper, cfg);
    }
    DeltaReport report;
    report.params = params;
    report.delta_a = std::log(A) + ia.value;
    report.delta_b = std::log(c.ratio_num / c.ratio_den) + ib.value;
    report.margin = report.delta_a - report.delta_b / 2.0;
    report.error_bound = ia.error + ib.error / 2.0;
    return report;
}

/// Bisect for the parameter at which the margin changes sign. Initial
/// bracket [0.70, 1.0] for theta, [0.86, 1.0] for kappa; the margin must be
/// negative at the lower end and positive at the upper end.
inline ThresholdResult find_threshold(DeltaMode mode, double lambda = default_lambda,
                                      const QuadratureConfig& cfg = {},
                                      bool exploratory = false) {
    double lo = (mode == DeltaMode::small_primes) ? 0.70 : 0.86;
    double hi = 1.0;
    auto margin_at = [&](double x) {
        return delta_pair({mode, x, lambda, exploratory}, cfg).margin;
    };
    if (!(margin_at(lo) < 0.0 && margin_at(hi) > 0.0))
        throw bracket_error("margin does not change sign over the initial bracket");
    int iterations = 0;
    while (hi - lo > 1e-7 && iterations < 50) {
        const double mid = 0.5 * (lo + hi);
        (margin_at(mid) < 0.0 ? lo : hi) = mid;
        ++iterations;
    }
    ThresholdResult result;
    result.mode = mode;
    result.threshold = 0.5 * (lo + hi);
    result.margin_at_threshold = margin_at(result.threshold);
    result.iterations = iterations;
    result.bracket_width = hi - lo;
    return result;
}

/// Main term of the representation-count lower bound:
///   small_primes:   (8 / theta^2) * (Delta_1 - Delta_2/2) * C_N * N^theta / (log N)^2
///   short_interval: (16 / (2 kappa - 1)) * (Delta_3 - Delta_4/2) * C_N * N^kappa / (log N)^2
/// All o(1) factors are dropped.
inline double main_term_bound(std::int64_t N, const DeltaParams& params,
                              double c_n, const QuadratureConfig& cfg = {}) {
    if (N < 4 || N % 2 != 0)
        throw domain_error("main_term_bound requires even N >= 4");
    if (!(c_n > 0.0))
        throw domain_error("main_term_bound requires C(N) > 0");
    const DeltaReport report = delta_pair(params, cfg);
    const double n = static_cast<double>(N);
    const double log_n = std::log(n);
    const double t = params.param;
    const double prefactor = (params.mode == DeltaMode::small_primes)
                                 ? 8.0 / (t * t)
                                 : 16.0 / (2.0 * t - 1.0);
    return prefactor * report.margin * c_n * std::pow(n, t) / (log_n * log_n);
}

} // namespace sievekit
