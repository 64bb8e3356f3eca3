#pragma once

#include "progvar/numeric.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace progvar {

/// Stand-in for +infinity in P^-(1).
inline constexpr u64 kPlusInfinity = std::numeric_limits<u64>::max();

inline constexpr u64 kDefaultSieveLimit = 10'000'000;

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower &, const PrimePower &) = default;
};

class PrimeFactorization {
public:
    PrimeFactorization() = default;
    PrimeFactorization(u64 n, std::vector<PrimePower> factors);

    u64 n() const { return n_; }
    std::span<const PrimePower> factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    /// Number of distinct primes.
    unsigned omega() const { return static_cast<unsigned>(factors_.size()); }
    /// Number of primes counted with multiplicity.
    unsigned big_omega() const;
    bool squarefree() const;
    /// P^+(n), with P^+(1) = 1.
    u64 largest_prime() const { return factors_.empty() ? 1 : factors_.back().prime; }
    /// P^-(n), with P^-(1) = kPlusInfinity.
    u64 smallest_prime() const { return factors_.empty() ? kPlusInfinity : factors_.front().prime; }

    /// Product of prime^exponent, recomputed with overflow checks.
    u64 reconstruct() const;

private:
    u64 n_ = 1;
    std::vector<PrimePower> factors_;
};

/// Smallest-prime-factor table over [2, limit] plus the ordered prime list.
/// Immutable after construction; share freely between threads.
class PrimeTable {
public:
    explicit PrimeTable(u64 limit = kDefaultSieveLimit);

    /// Limit from PROGVAR_SIEVE_LIMIT when set, else `fallback`.
    static u64 limit_from_environment(u64 fallback = kDefaultSieveLimit);

    u64 limit() const { return limit_; }
    /// Largest n that trial division by the stored primes can factor.
    u64 coverage() const { return coverage_; }

    std::span<const std::uint32_t> primes() const { return primes_; }
    /// Smallest prime factor of 2 <= n <= limit.
    std::uint32_t spf(u64 n) const { return spf_[n]; }

    bool is_prime(u64 n) const;
    /// pi(z) for z <= limit.
    u64 prime_count(double z) const;
    /// Primes in [lo, hi] (either side may exceed limit up to coverage).
    std::vector<u64> primes_between(u64 lo, u64 hi) const;

    /// Throws CapacityError unless n <= coverage().
    void require_covered(u64 n) const;

private:
    u64 limit_;
    u64 coverage_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

PrimeFactorization factor(u64 n, const PrimeTable &table);

int mobius(const PrimeFactorization &f);
int mobius(u64 n, const PrimeTable &table);

u64 euler_phi(const PrimeFactorization &f);
u64 euler_phi(u64 n, const PrimeTable &table);

unsigned omega_in_range(const PrimeFactorization &f, double lo, double hi);
unsigned omega_in_range(u64 n, double lo, double hi, const PrimeTable &table);

struct PrimeBounds {
    u64 smallest; // kPlusInfinity for n = 1
    u64 largest;  // 1 for n = 1
};

PrimeBounds prime_bounds(u64 n, const PrimeTable &table);

/// Distinct prime divisors of n in increasing order.
std::vector<u64> prime_divisors(u64 n, const PrimeTable &table);

/// Interval / progression sieve. For every term n_i = first + i*step,
/// 0 <= i < count, calls visit(i, p, e) once per prime power p^e exactly
/// dividing n_i. For each i the primes arrive in increasing order.
/// Terms are processed in blocks so memory stays bounded.
template <class Visit>
void sieve_progression(u64 first, u64 step, u64 count, const PrimeTable &table, Visit &&visit);

// ---------------------------------------------------------------------------

namespace detail {
inline constexpr u64 kSieveBlock = u64{1} << 16;
}

template <class Visit>
void sieve_progression(u64 first, u64 step, u64 count, const PrimeTable &table, Visit &&visit)
{
    if (count == 0)
        return;
    if (first == 0 || step == 0)
        throw DomainError("sieve_progression requires first >= 1 and step >= 1");
    const u64 last = checked_add(first, checked_mul(count - 1, step));
    table.require_covered(last);

    std::vector<u64> rem;
    for (u64 block_start = 0; block_start < count; block_start += detail::kSieveBlock) {
        const u64 block_len = std::min(detail::kSieveBlock, count - block_start);
        const u64 block_first = first + block_start * step;
        const u64 block_last = block_first + (block_len - 1) * step;
        rem.resize(block_len);
        for (u64 i = 0; i < block_len; ++i)
            rem[i] = block_first + i * step;

        const u64 root = isqrt(block_last);
        for (const std::uint32_t p32 : table.primes()) {
            const u64 p = p32;
            if (p > root)
                break;
            u64 start, stride;
            if (step % p == 0) {
                if (block_first % p != 0)
                    continue;
                start = 0;
                stride = 1;
            } else {
                // block_first + i*step == 0 (mod p)
                const u64 inv = powmod(step % p, p - 2, p);
                start = mulmod((p - block_first % p) % p, inv, p);
                stride = p;
            }
            for (u64 i = start; i < block_len; i += stride) {
                unsigned e = 0;
                while (rem[i] % p == 0) {
                    rem[i] /= p;
                    ++e;
                }
                visit(block_start + i, p, e);
            }
        }
        for (u64 i = 0; i < block_len; ++i)
            if (rem[i] > 1)
                visit(block_start + i, rem[i], 1u);
    }
}

} // namespace progvar
