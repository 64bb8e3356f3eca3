#pragma once

#include "progvar/arith.hpp"

#include <random>

namespace progvar::testing {

inline const PrimeTable &table()
{
    static const PrimeTable t(2'000'000);
    return t;
}

// Trial division, independent of the sieve.
inline bool is_prime_slow(u64 n)
{
    if (n < 2)
        return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline std::mt19937_64 &rng()
{
    static std::mt19937_64 r(20241015);
    return r;
}

inline u64 uniform(u64 lo, u64 hi)
{
    return std::uniform_int_distribution<u64>(lo, hi)(rng());
}

} // namespace progvar::testing
