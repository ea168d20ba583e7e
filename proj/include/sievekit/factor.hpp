#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sievekit/errors.hpp"
#include "sievekit/primes.hpp"

namespace sievekit {

inline std::uint64_t integer_sqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while ((r + 1) * (r + 1) <= n) ++r;
    while (r * r > n) --r;
    return r;
}

/// Omega(n) = number of prime factors of n counted with multiplicity,
/// by trial division over sieved primes up to sqrt(n).
inline int omega(std::uint64_t n, const PrimeSieve& sieve) {
    if (n < 1)
        throw domain_error("omega requires n >= 1");
    const std::uint64_t root = integer_sqrt(n);
    if (root > sieve.limit())
        throw domain_error("omega: primes up to sqrt(n) unavailable");
    int count = 0;
    std::uint64_t m = n;
    sieve.for_each_prime(2, root, [&](std::uint64_t p) {
        while (m % p == 0) {
            m /= p;
            ++count;
        }
    });
    if (m > 1)
        ++count; // leftover cofactor is prime
    return count;
}

/// Omega(n) for every n in [lo, hi], built by one segmented divide-out pass
/// over the base primes up to sqrt(hi).
class FactorTable {
public:
    FactorTable(std::uint64_t lo, std::uint64_t hi, const PrimeSieve& base)
        : lo_(lo), hi_(hi) {
        if (lo < 1 || hi < lo)
            throw domain_error("FactorTable requires 1 <= lo <= hi");
        const std::uint64_t root = integer_sqrt(hi);
        if (root > base.limit())
            throw domain_error("FactorTable: base primes up to sqrt(hi) unavailable");
        const std::uint64_t len = hi - lo + 1;
        if (len * 9 > memory_budget_bytes())
            throw resource_error("FactorTable range exceeds the memory budget");
        omega_.assign(len, 0);
        std::vector<std::uint64_t> cofactor(len);
        for (std::uint64_t i = 0; i < len; ++i)
            cofactor[i] = lo + i;
        base.for_each_prime(2, root, [&](std::uint64_t p) {
            std::uint64_t first = ((lo + p - 1) / p) * p;
            for (std::uint64_t n = first; n <= hi; n += p) {
                std::uint64_t& c = cofactor[n - lo];
                while (c % p == 0) {
                    c /= p;
                    ++omega_[n - lo];
                }
            }
        });
        for (std::uint64_t i = 0; i < len; ++i)
            if (cofactor[i] > 1)
                ++omega_[i];
    }

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }

    int omega(std::uint64_t n) const {
        if (n < lo_ || n > hi_)
            throw domain_error("FactorTable::omega out of range");
        return omega_[n - lo_];
    }

private:
    std::uint64_t lo_;
    std::uint64_t hi_;
    std::vector<std::uint8_t> omega_;
};

} // namespace sievekit
