#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

#include "sievekit/errors.hpp"
#include "sievekit/primes.hpp"

namespace sievekit {

struct SingularSeriesResult {
    std::int64_t N = 0;
    double value = 0.0;
    double twin_constant = 0.0; // N-independent product over all odd primes
    std::uint64_t truncation_prime = 0;
    double tail_bound = 0.0;
};

namespace detail {

// prod_{2 < p <= T} (1 - 1/(p-1)^2), accumulated in long double and cached
// per truncation point (the product is expensive but N-independent).
inline double twin_type_constant(std::uint64_t truncation) {
    static std::map<std::uint64_t, double> cache;
    static std::mutex mutex;
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(truncation); it != cache.end())
            return it->second;
    }
    PrimeSieve sieve(truncation);
    long double product = 1.0L;
    sieve.for_each_prime(3, truncation, [&](std::uint64_t p) {
        const long double q = static_cast<long double>(p) - 1.0L;
        product *= 1.0L - 1.0L / (q * q);
    });
    const double value = static_cast<double>(product);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(truncation, value);
    return value;
}

} // namespace detail

/// Singular series C(N) = prod_{p|N, p>2} (p-1)/(p-2) * prod_{p>2} (1 - 1/(p-1)^2),
/// with the infinite product truncated at truncation_prime. The tail bound is
/// the crude but certified sum_{n > T} 1/(n-1)^2 <= 1/(T-1).
inline SingularSeriesResult singular_series(std::int64_t N,
                                            std::uint64_t truncation_prime =
                                                100'000'000) {
    if (N < 4 || N % 2 != 0)
        throw domain_error("singular_series requires even N >= 4");
    if (truncation_prime < 10'000)
        throw domain_error("singular_series requires truncation_prime >= 10^4");
    SingularSeriesResult result;
    result.N = N;
    result.truncation_prime = truncation_prime;
    result.twin_constant = detail::twin_type_constant(truncation_prime);
    result.tail_bound = 1.0 / (static_cast<double>(truncation_prime) - 1.0);

    double factor = 1.0;
    std::uint64_t m = static_cast<std::uint64_t>(N);
    while (m % 2 == 0)
        m /= 2;
    for (std::uint64_t d = 3; d * d <= m; d += 2) {
        if (m % d == 0) {
            factor *= static_cast<double>(d - 1) / static_cast<double>(d - 2);
            while (m % d == 0)
                m /= d;
        }
    }
    if (m > 1)
        factor *= static_cast<double>(m - 1) / static_cast<double>(m - 2);
    result.value = result.twin_constant * factor;
    return result;
}

/// Sieve density product W(z) = prod_{p < z, p not dividing N} (1 - 1/(p-1))
/// over odd primes; even N keeps p = 2 out of the sieving set, so the product
/// starts at p = 3.
inline double sieve_product_W(std::int64_t N, double z, const PrimeSieve& sieve) {
    if (N < 4 || N % 2 != 0)
        throw domain_error("sieve_product_W requires even N (odd N makes W vanish)");
    if (!(z > 2.0) || z > static_cast<double>(sieve.limit()))
        throw domain_error("sieve_product_W requires 2 < z <= sieve limit");
    long double product = 1.0L;
    const auto below = static_cast<std::uint64_t>(std::ceil(z)) - 1;
    sieve.for_each_prime(3, below, [&](std::uint64_t p) {
        if (static_cast<double>(p) < z && N % static_cast<std::int64_t>(p) != 0)
            product *= 1.0L - 1.0L / (static_cast<long double>(p) - 1.0L);
    });
    return static_cast<double>(product);
}

} // namespace sievekit
