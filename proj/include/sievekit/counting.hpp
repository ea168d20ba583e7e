#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sievekit/arithmetic.hpp"
#include "sievekit/delta.hpp"
#include "sievekit/errors.hpp"
#include "sievekit/factor.hpp"
#include "sievekit/primes.hpp"

namespace sievekit {

/// Largest N accepted for exact desk-scale counting.
inline constexpr std::int64_t desk_limit = 1'000'000'000;

enum class CountMode {
    full,           // p <= N
    small_primes,   // p <= N^theta
    short_interval, // both p and N - p within N/2 +- N^kappa
};

struct CountQuery {
    std::int64_t N = 0;
    int r = 3;
    CountMode mode = CountMode::full;
    double param = 1.0;        // theta or kappa; ignored in full mode
    bool include_unit = false; // count p = N - 1 (so N - p = 1, a unit)
};

inline void validate(const CountQuery& q) {
    if (q.N < 6 || q.N % 2 != 0)
        throw domain_error("count query requires even N >= 6");
    if (q.r < 1 || q.r > 4)
        throw domain_error("count query requires 1 <= r <= 4");
    if (q.mode != CountMode::full && !(q.param > 0.0 && q.param <= 1.0))
        throw domain_error("count query requires the exponent in (0, 1]");
    if (q.N > desk_limit)
        throw resource_error("count query beyond the desk limit of 1e9");
}

struct CountReport {
    CountQuery query;
    std::int64_t count = 0;
    double predicted_main_term = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN(); // count / predicted
};

struct SiftReport {
    std::int64_t N = 0;
    double z = 0.0;
    std::int64_t s1 = 0;
    std::int64_t s2 = 0;
    double weighted = 0.0; // s1 - s2/2
    std::int64_t d13 = 0;
    std::int64_t exceptions = 0;
    bool holds = false; // d13 >= weighted - exceptions
};

namespace detail {

struct PrimeRange {
    std::int64_t lo;
    std::int64_t hi; // inclusive; empty if hi < lo
};

inline PrimeRange prime_range_for(const CountQuery& q) {
    const double n = static_cast<double>(q.N);
    switch (q.mode) {
    case CountMode::full:
        return {2, q.N};
    case CountMode::small_primes: {
        if (q.param == 1.0)
            return {2, q.N};
        const auto hi = static_cast<std::int64_t>(std::floor(std::pow(n, q.param)));
        return {2, std::min(hi, q.N)};
    }
    case CountMode::short_interval: {
        const double w = std::pow(n, q.param);
        const std::int64_t half = q.N / 2;
        const auto lo = (w >= static_cast<double>(half))
                            ? std::int64_t{2}
                            : static_cast<std::int64_t>(
                                  std::ceil(static_cast<double>(half) - w));
        const auto hi = (w >= static_cast<double>(half))
                            ? q.N
                            : static_cast<std::int64_t>(
                                  std::floor(static_cast<double>(half) + w));
        return {std::max<std::int64_t>(2, lo), std::min(hi, q.N)};
    }
    }
    return {2, 1};
}

// Theorem-range check used to decide whether a predicted main term applies.
inline std::optional<DeltaParams> theorem_params(const CountQuery& q) {
    if (q.r != 3)
        return std::nullopt;
    if (q.mode == CountMode::short_interval) {
        if (q.param >= 0.919 && q.param <= 1.0)
            return DeltaParams{DeltaMode::short_interval, q.param};
        return std::nullopt;
    }
    const double theta = (q.mode == CountMode::full) ? 1.0 : q.param;
    if (theta >= 0.838 && theta <= 1.0)
        return DeltaParams{DeltaMode::small_primes, theta};
    return std::nullopt;
}

} // namespace detail

/// Exact count of primes p in the query's range with N - p = P_r, by a
/// streaming segmented factor table over the N - p values. The predicted
/// main term is attached when (mode, r) fall inside the proven range.
inline CountReport count_representations(const CountQuery& q,
                                         const PrimeSieve& sieve) {
    validate(q);
    const auto range = detail::prime_range_for(q);
    const std::uint64_t root = integer_sqrt(static_cast<std::uint64_t>(q.N));
    if (sieve.limit() < std::max<std::uint64_t>(range.hi, root))
        throw domain_error("count_representations: sieve limit too small for N");

    CountReport report;
    report.query = q;
    if (range.hi < range.lo)
        return report;

    const std::uint64_t a_lo =
        static_cast<std::uint64_t>(std::max<std::int64_t>(1, q.N - range.hi));
    const std::uint64_t a_hi = static_cast<std::uint64_t>(q.N - range.lo);
    constexpr std::uint64_t chunk = std::uint64_t{1} << 22;
    for (std::uint64_t lo = a_lo; lo <= a_hi; lo += chunk) {
        const std::uint64_t hi = std::min(a_hi, lo + chunk - 1);
        const FactorTable table(lo, hi, sieve);
        for (std::uint64_t a = lo; a <= hi; ++a) {
            const auto p = static_cast<std::uint64_t>(q.N) - a;
            if (!sieve.is_prime(p))
                continue;
            if (a == 1) {
                if (q.include_unit)
                    ++report.count;
            } else if (table.omega(a) <= q.r) {
                ++report.count;
            }
        }
    }

    if (const auto params = detail::theorem_params(q)) {
        const double c_n = singular_series(q.N, 10'000'000).value;
        report.predicted_main_term = main_term_bound(q.N, *params, c_n);
        if (report.predicted_main_term > 0.0)
            report.ratio = static_cast<double>(report.count) /
                           report.predicted_main_term;
    }
    return report;
}

/// Slow reference counter: identical semantics, but Omega(N - p) comes from
/// naive trial division by 2, 3, 4, ... for each p independently. Used by the
/// verification pipeline as an in-process oracle for the fast path.
inline std::int64_t count_naive(const CountQuery& q, const PrimeSieve& sieve) {
    validate(q);
    const auto range = detail::prime_range_for(q);
    if (sieve.limit() < static_cast<std::uint64_t>(range.hi))
        throw domain_error("count_naive: sieve limit too small for N");
    std::int64_t count = 0;
    sieve.for_each_prime(
        static_cast<std::uint64_t>(range.lo), static_cast<std::uint64_t>(range.hi),
        [&](std::uint64_t p) {
            const std::uint64_t a = static_cast<std::uint64_t>(q.N) - p;
            if (a < 1)
                return;
            if (a == 1) {
                if (q.include_unit)
                    ++count;
                return;
            }
            int om = 0;
            std::uint64_t m = a;
            for (std::uint64_t d = 2; d * d <= m; ++d)
                while (m % d == 0) {
                    m /= d;
                    ++om;
                }
            if (m > 1)
                ++om;
            if (om <= q.r)
                ++count;
        });
    return count;
}

/// Exact evaluation of the weighted sieve decomposition at level z = N^{1/lambda}:
///   s1 = #{admissible p : (N-p, P(z)) = 1}
///   s2 = sum over primes q in [z, N^{1/3}), q coprime to N, of the survivors
///        divisible by q
///   d13 = P_3 count over the same p-range
///   exceptions = survivors whose N-p has a repeated prime factor in [z, N^{1/3})
/// holds reports d13 >= (s1 - s2/2) - exceptions.
inline SiftReport sift_weighted(std::int64_t N, const DeltaParams& params,
                                const PrimeSieve& sieve) {
    validate(params);
    if (N < 6 || N % 2 != 0)
        throw domain_error("sift_weighted requires even N >= 6");
    if (N > desk_limit)
        throw resource_error("sift_weighted beyond the desk limit of 1e9");
    if (sieve.limit() < static_cast<std::uint64_t>(N))
        throw domain_error("sift_weighted: sieve limit must cover N");
    const double z = std::pow(static_cast<double>(N), 1.0 / params.lambda);
    if (!(z >= 3.0))
        throw domain_error("sift_weighted requires z = N^(1/lambda) >= 3");

    SiftReport report;
    report.N = N;
    report.z = z;
    auto finalize = [&report]() {
        report.weighted =
            static_cast<double>(report.s1) - static_cast<double>(report.s2) / 2.0;
        report.holds = static_cast<double>(report.d13) >=
                       report.weighted - static_cast<double>(report.exceptions);
        return report;
    };

    // integer cube-root boundary; q < N^(1/3) strictly
    std::uint64_t cb = static_cast<std::uint64_t>(
        std::cbrt(static_cast<double>(N)));
    while ((cb + 1) * (cb + 1) * (cb + 1) <= static_cast<std::uint64_t>(N)) ++cb;
    while (cb * cb * cb > static_cast<std::uint64_t>(N)) --cb;
    const bool exact_cube = (cb * cb * cb == static_cast<std::uint64_t>(N));

    CountQuery base_query;
    base_query.N = N;
    base_query.r = 3;
    base_query.mode = (params.mode == DeltaMode::small_primes)
                          ? CountMode::small_primes
                          : CountMode::short_interval;
    base_query.param = params.param;
    const auto range = detail::prime_range_for(base_query);
    if (range.hi < range.lo)
        return finalize();

    // odd base primes up to the cube root, with their roles precomputed
    struct SievePrime {
        std::uint64_t q;
        bool kills;    // q < z and q coprime to N: survivor filter
        bool in_range; // z <= q < N^{1/3} and q coprime to N: s2 contributor
        bool rep_range; // z <= q < N^{1/3} regardless of gcd: exception witness
    };
    std::vector<SievePrime> qs;
    sieve.for_each_prime(3, cb, [&](std::uint64_t q) {
        if (exact_cube && q == cb)
            return; // q must stay strictly below N^{1/3}
        SievePrime sp;
        sp.q = q;
        const bool coprime = (N % static_cast<std::int64_t>(q) != 0);
        const bool below_z = static_cast<double>(q) < z;
        sp.kills = below_z && coprime;
        sp.in_range = !below_z && coprime;
        sp.rep_range = !below_z;
        qs.push_back(sp);
    });

    auto classify_cofactor = [&](std::uint64_t cof) -> int {
        if (cof == 1)
            return 0;
        return sieve.is_prime(cof) ? 1 : 2; // > N^{1/3} twice over is impossible
    };

    auto account = [&](bool killed, int omega_total, int k_in_range,
                       bool repeated) {
        if (omega_total <= 3)
            ++report.d13;
        if (killed)
            return;
        ++report.s1;
        report.s2 += k_in_range;
        if (repeated)
            ++report.exceptions;
    };

    // p = 2 (even a = N - 2) handled on its own; segments cover odd a only.
    if (range.lo <= 2) {
        std::uint64_t a = static_cast<std::uint64_t>(N) - 2;
        int small = 0, k = 0;
        bool killed = false, repeated = false;
        while (a % 2 == 0) {
            a /= 2;
            ++small;
        }
        for (const auto& sp : qs) {
            if (a % sp.q != 0)
                continue;
            int e = 0;
            while (a % sp.q == 0) {
                a /= sp.q;
                ++e;
            }
            small += e;
            killed = killed || sp.kills;
            k += sp.in_range ? 1 : 0;
            repeated = repeated || (sp.rep_range && e >= 2);
        }
        account(killed, small + classify_cofactor(a), k, repeated);
    }

    const std::uint64_t a_min_raw = static_cast<std::uint64_t>(N - range.hi) | 1;
    const std::uint64_t a_min = std::max<std::uint64_t>(3, a_min_raw); // a = 1 excluded
    const std::uint64_t a_max = static_cast<std::uint64_t>(N - std::max<std::int64_t>(range.lo, 3));
    if (a_max < a_min)
        return finalize(report);

    constexpr std::uint64_t chunk_odds = std::uint64_t{1} << 21;
    std::vector<std::uint64_t> cof(chunk_odds);
    std::vector<std::uint8_t> small_cnt(chunk_odds), k_cnt(chunk_odds);
    std::vector<std::uint8_t> kill_flag(chunk_odds), rep_flag(chunk_odds);

    for (std::uint64_t base = a_min; base <= a_max; base += 2 * chunk_odds) {
        const std::uint64_t last = std::min(a_max, base + 2 * (chunk_odds - 1));
        const std::uint64_t len = (last - base) / 2 + 1;
        for (std::uint64_t i = 0; i < len; ++i) {
            cof[i] = base + 2 * i;
            small_cnt[i] = 0;
            k_cnt[i] = 0;
            kill_flag[i] = 0;
            rep_flag[i] = 0;
        }
        for (const auto& sp : qs) {
            const std::uint64_t q = sp.q;
            // first odd multiple of q that is >= base
            std::uint64_t m = ((base + q - 1) / q) * q;
            if (m % 2 == 0)
                m += q;
            for (; m <= last; m += 2 * q) {
                const std::uint64_t i = (m - base) / 2;
                std::uint64_t& c = cof[i];
                int e = 0;
                while (c % q == 0) {
                    c /= q;
                    ++e;
                }
                small_cnt[i] = static_cast<std::uint8_t>(small_cnt[i] + e);
                if (sp.kills)
                    kill_flag[i] = 1;
                if (sp.in_range)
                    ++k_cnt[i];
                if (sp.rep_range && e >= 2)
                    rep_flag[i] = 1;
            }
        }
        for (std::uint64_t i = 0; i < len; ++i) {
            const std::uint64_t a = base + 2 * i;
            const std::uint64_t p = static_cast<std::uint64_t>(N) - a;
            if (!sieve.is_prime(p))
                continue;
            account(kill_flag[i] != 0, small_cnt[i] + classify_cofactor(cof[i]),
                    k_cnt[i], rep_flag[i] != 0);
        }
    }
    return finalize(report);
}

/// One CountReport per N, order-preserving; per-entry failures are captured
/// instead of aborting the batch.
struct ScanOutcome {
    std::int64_t N = 0;
    std::optional<CountReport> report;
    std::string error;
};

inline std::vector<ScanOutcome> scan_grid(const std::vector<std::int64_t>& Ns,
                                          const CountQuery& q_template,
                                          const PrimeSieve& sieve) {
    std::vector<ScanOutcome> outcomes(Ns.size());
    auto evaluate = [&](std::size_t i) {
        outcomes[i].N = Ns[i];
        try {
            CountQuery q = q_template;
            q.N = Ns[i];
            outcomes[i].report = count_representations(q, sieve);
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    };
    const unsigned workers =
        std::min<unsigned>(std::thread::hardware_concurrency(),
                           static_cast<unsigned>(Ns.size()));
    if (workers > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < Ns.size(); i = next++)
                    evaluate(i);
            });
        for (auto& t : pool)
            t.join();
    } else {
        for (std::size_t i = 0; i < Ns.size(); ++i)
            evaluate(i);
    }
    return outcomes;
}

} // namespace sievekit
