#include "progvar/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace progvar {

PrimeFactorization::PrimeFactorization(u64 n, std::vector<PrimePower> factors)
    : n_(n), factors_(std::move(factors))
{
}

unsigned PrimeFactorization::big_omega() const
{
    unsigned total = 0;
    for (const auto &pp : factors_)
        total += pp.exponent;
    return total;
}

bool PrimeFactorization::squarefree() const
{
    return std::all_of(factors_.begin(), factors_.end(),
                       [](const PrimePower &pp) { return pp.exponent == 1; });
}

u64 PrimeFactorization::reconstruct() const
{
    u64 value = 1;
    for (const auto &pp : factors_)
        for (unsigned k = 0; k < pp.exponent; ++k)
            value = checked_mul(value, pp.prime);
    return value;
}

PrimeTable::PrimeTable(u64 limit) : limit_(std::max<u64>(limit, 2))
{
    if (limit_ > std::numeric_limits<std::uint32_t>::max())
        throw CapacityError("sieve limit exceeds 32-bit prime storage");
    coverage_ = checked_mul(limit_, limit_);
    spf_.assign(limit_ + 1, 0);
    for (u64 n = 2; n <= limit_; ++n) {
        if (spf_[n] == 0) {
            spf_[n] = static_cast<std::uint32_t>(n);
            primes_.push_back(static_cast<std::uint32_t>(n));
        }
        for (const std::uint32_t p : primes_) {
            if (p > spf_[n] || static_cast<u64>(p) * n > limit_)
                break;
            spf_[p * n] = p;
        }
    }
}

u64 PrimeTable::limit_from_environment(u64 fallback)
{
    if (const char *env = std::getenv("PROGVAR_SIEVE_LIMIT")) {
        try {
            const long long v = std::stoll(env);
            if (v >= 2)
                return static_cast<u64>(v);
        } catch (const std::exception &) {
        }
        throw DomainError(std::string("invalid PROGVAR_SIEVE_LIMIT: ") + env);
    }
    return fallback;
}

void PrimeTable::require_covered(u64 n) const
{
    if (n > coverage_)
        throw CapacityError(std::to_string(n) + " exceeds sieve coverage " + std::to_string(coverage_) +
                            " (raise PROGVAR_SIEVE_LIMIT)");
}

bool PrimeTable::is_prime(u64 n) const
{
    if (n < 2)
        return false;
    if (n <= limit_)
        return spf_[n] == n;
    require_covered(n);
    for (const std::uint32_t p : primes_) {
        if (static_cast<u64>(p) * p > n)
            break;
        if (n % p == 0)
            return false;
    }
    return true;
}

u64 PrimeTable::prime_count(double z) const
{
    if (z < 2)
        return 0;
    if (z > static_cast<double>(limit_))
        throw CapacityError("prime_count argument beyond sieve limit");
    const auto bound = static_cast<u64>(std::floor(z));
    return static_cast<u64>(std::upper_bound(primes_.begin(), primes_.end(), bound) - primes_.begin());
}

std::vector<u64> PrimeTable::primes_between(u64 lo, u64 hi) const
{
    std::vector<u64> out;
    lo = std::max<u64>(lo, 2);
    if (lo > hi)
        return out;
    if (hi <= limit_) {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), lo);
        for (; it != primes_.end() && *it <= hi; ++it)
            out.push_back(*it);
        return out;
    }
    require_covered(hi);
    if (lo <= limit_) {
        out = primes_between(lo, limit_);
        lo = limit_ + 1;
    }
    std::vector<unsigned char> composite(hi - lo + 1, 0);
    sieve_progression(lo, 1, hi - lo + 1, *this, [&](u64 i, u64 p, unsigned e) {
        if (p != lo + i || e != 1)
            composite[i] = 1;
    });
    for (u64 i = 0; i < composite.size(); ++i)
        if (!composite[i])
            out.push_back(lo + i);
    return out;
}

PrimeFactorization factor(u64 n, const PrimeTable &table)
{
    if (n == 0)
        throw DomainError("factor(0) is undefined");
    std::vector<PrimePower> factors;
    if (n <= table.limit()) {
        while (n > 1) {
            const u64 p = table.spf(n);
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            factors.push_back({p, e});
        }
    } else {
        table.require_covered(n);
        const u64 original = n;
        for (const std::uint32_t p32 : table.primes()) {
            const u64 p = p32;
            if (p * p > n)
                break;
            if (n % p != 0)
                continue;
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            factors.push_back({p, e});
            if (n <= table.limit()) {
                auto rest = factor(n, table);
                factors.insert(factors.end(), rest.factors().begin(), rest.factors().end());
                n = 1;
                break;
            }
        }
        if (n > 1)
            factors.push_back({n, 1});
        return PrimeFactorization(original, std::move(factors));
    }
    u64 original = 1;
    for (const auto &pp : factors)
        for (unsigned k = 0; k < pp.exponent; ++k)
            original *= pp.prime;
    return PrimeFactorization(original, std::move(factors));
}

int mobius(const PrimeFactorization &f)
{
    if (!f.squarefree())
        return 0;
    return f.omega() % 2 == 0 ? 1 : -1;
}

int mobius(u64 n, const PrimeTable &table) { return mobius(factor(n, table)); }

u64 euler_phi(const PrimeFactorization &f)
{
    u64 phi = 1;
    for (const auto &pp : f.factors()) {
        phi = checked_mul(phi, pp.prime - 1);
        for (unsigned k = 1; k < pp.exponent; ++k)
            phi = checked_mul(phi, pp.prime);
    }
    return phi;
}

u64 euler_phi(u64 n, const PrimeTable &table) { return euler_phi(factor(n, table)); }

unsigned omega_in_range(const PrimeFactorization &f, double lo, double hi)
{
    if (lo > hi)
        throw DomainError("omega_in_range requires P <= Q");
    unsigned count = 0;
    for (const auto &pp : f.factors()) {
        const auto p = static_cast<double>(pp.prime);
        if (p >= lo && p <= hi)
            ++count;
    }
    return count;
}

unsigned omega_in_range(u64 n, double lo, double hi, const PrimeTable &table)
{
    if (lo > hi)
        throw DomainError("omega_in_range requires P <= Q");
    return omega_in_range(factor(n, table), lo, hi);
}

PrimeBounds prime_bounds(u64 n, const PrimeTable &table)
{
    const auto f = factor(n, table);
    return {f.smallest_prime(), f.largest_prime()};
}

std::vector<u64> prime_divisors(u64 n, const PrimeTable &table)
{
    std::vector<u64> out;
    const auto fn = factor(n, table);
    for (const auto &pp : fn.factors())
        out.push_back(pp.prime);
    return out;
}

} // namespace progvar
