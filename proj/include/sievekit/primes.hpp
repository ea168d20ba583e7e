#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "sievekit/errors.hpp"

namespace sievekit {

/// Sieve memory budget in bytes, from SIEVEKIT_MEM_MB (default 2048 MB).
inline std::uint64_t memory_budget_bytes() {
    static const std::uint64_t bytes = [] {
        const char* env = std::getenv("SIEVEKIT_MEM_MB");
        std::uint64_t mb = 2048;
        if (env != nullptr) {
            const long long parsed = std::atoll(env);
            if (parsed > 0)
                mb = static_cast<std::uint64_t>(parsed);
        }
        return mb * 1024 * 1024;
    }();
    return bytes;
}

/// Bit-packed odd-only primality bitmap over [2, limit], built segment by
/// segment so the marking working set stays cache-sized.
class PrimeSieve {
public:
    explicit PrimeSieve(std::uint64_t limit) : limit_(limit) {
        if (limit < 2 || limit > (std::uint64_t{1} << 40))
            throw domain_error("sieve limit must lie in [2, 2^40]");
        const std::uint64_t odd_count = (limit + 1) / 2; // odds 1, 3, ..., <= limit
        const std::uint64_t words = (odd_count + 63) / 64;
        if (words * 8 > memory_budget_bytes())
            throw resource_error("sieve of limit " + std::to_string(limit) +
                                 " exceeds the memory budget");
        bits_.assign(words, ~std::uint64_t{0});
        clear_bit(0); // 1 is not prime
        // mask out bits past the limit
        for (std::uint64_t k = odd_count; k < words * 64; ++k)
            bits_[k >> 6] &= ~(std::uint64_t{1} << (k & 63));

        std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
        while ((root + 1) * (root + 1) <= limit) ++root;
        while (root * root > limit) --root;
        const auto base = simple_odd_primes(root);

        constexpr std::uint64_t segment_bits = std::uint64_t{1} << 21; // 256 KiB
        for (std::uint64_t seg_lo = 0; seg_lo < odd_count; seg_lo += segment_bits) {
            const std::uint64_t seg_hi = std::min(seg_lo + segment_bits, odd_count);
            const std::uint64_t n_hi = 2 * (seg_hi - 1) + 1;
            for (std::uint64_t p : base) {
                if (p * p > n_hi)
                    break;
                // first odd multiple of p that is >= max(p^2, 2*seg_lo+1)
                std::uint64_t start = p * p;
                const std::uint64_t n_lo = 2 * seg_lo + 1;
                if (start < n_lo) {
                    std::uint64_t m = (n_lo + p - 1) / p;
                    if (m % 2 == 0) ++m;
                    start = m * p;
                }
                for (std::uint64_t n = start; n <= n_hi; n += 2 * p)
                    clear_bit(n >> 1);
            }
        }
    }

    std::uint64_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const {
        if (n > limit_)
            throw domain_error("is_prime query beyond sieve limit");
        if (n == 2) return true;
        if (n < 2 || n % 2 == 0) return false;
        return test_bit(n >> 1);
    }

    /// pi(limit), counting 2 plus the surviving odd bits.
    std::uint64_t count_primes() const {
        std::uint64_t count = 1;
        for (std::uint64_t word : bits_)
            count += static_cast<std::uint64_t>(std::popcount(word));
        return count;
    }

    /// Calls fn(p) for every prime p in [lo, hi], ascending.
    template <typename Fn>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        if (hi > limit_)
            throw domain_error("prime iteration beyond sieve limit");
        if (lo <= 2 && hi >= 2)
            fn(std::uint64_t{2});
        std::uint64_t start = std::max<std::uint64_t>(lo, 3);
        if (start % 2 == 0) ++start;
        for (std::uint64_t n = start; n <= hi; n += 2)
            if (test_bit(n >> 1))
                fn(n);
    }

    std::vector<std::uint64_t> primes_in_range(std::uint64_t lo,
                                               std::uint64_t hi) const {
        std::vector<std::uint64_t> out;
        for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
        return out;
    }

private:
    static std::vector<std::uint64_t> simple_odd_primes(std::uint64_t up_to) {
        std::vector<std::uint64_t> primes;
        if (up_to < 3)
            return primes;
        std::vector<bool> composite(up_to + 1, false);
        for (std::uint64_t n = 3; n <= up_to; n += 2) {
            if (composite[n])
                continue;
            primes.push_back(n);
            for (std::uint64_t m = n * n; m <= up_to; m += 2 * n)
                composite[m] = true;
        }
        return primes;
    }

    bool test_bit(std::uint64_t k) const {
        return (bits_[k >> 6] >> (k & 63)) & 1;
    }
    void clear_bit(std::uint64_t k) {
        bits_[k >> 6] &= ~(std::uint64_t{1} << (k & 63));
    }

    std::uint64_t limit_;
    std::vector<std::uint64_t> bits_;
};

} // namespace sievekit
