#include "progvar/arith.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace progvar;
using testing::table;

TEST_CASE("factor small values")
{
    CHECK(factor(12, table()).factors().size() == 2);
    CHECK(factor(12, table()).factors()[0] == PrimePower{2, 2});
    CHECK(factor(12, table()).factors()[1] == PrimePower{3, 1});
    CHECK(factor(1, table()).empty());
    const auto f97 = factor(97, table());
    REQUIRE(f97.factors().size() == 1);
    CHECK(f97.factors()[0] == PrimePower{97, 1});
    CHECK(testing::is_prime_slow(97));
}

TEST_CASE("factor errors")
{
    CHECK_THROWS_AS(factor(0, table()), DomainError);
    const PrimeTable small(100);
    CHECK_NOTHROW(factor(9973, small)); // 9973 <= 100^2
    CHECK_THROWS_AS(factor(10'001, small), CapacityError);
}

TEST_CASE("factorization beyond the spf table uses trial division")
{
    const PrimeTable small(1000);
    for (u64 n : {999'983ull, 1'000'000ull, 999'999ull, 2ull * 499'979ull, 997ull * 991ull}) {
        const auto f = factor(n, small);
        CHECK(f.reconstruct() == n);
        for (const auto &pp : f.factors())
            CHECK(testing::is_prime_slow(pp.prime));
    }
}

TEST_CASE("factor reconstructs every n up to 1e5")
{
    for (u64 n = 1; n <= 100'000; ++n) {
        const auto f = factor(n, table());
        REQUIRE(f.reconstruct() == n);
        u64 prev = 1;
        for (const auto &pp : f.factors()) {
            REQUIRE(pp.prime > prev);
            prev = pp.prime;
        }
    }
}

TEST_CASE("prime table consistency")
{
    const PrimeTable t(10'000);
    CHECK(t.primes().size() == 1229);
    for (u64 n = 2; n <= 10'000; ++n) {
        CHECK(n % t.spf(n) == 0);
        CHECK(testing::is_prime_slow(t.spf(n)));
        CHECK((t.spf(n) == n) == testing::is_prime_slow(n));
    }
    CHECK(t.prime_count(541) == 100);
    CHECK(t.prime_count(540.9) == 99);
    const auto ps = t.primes_between(99'990, 100'100);
    for (const auto p : ps)
        CHECK(testing::is_prime_slow(p));
    CHECK(ps.front() == 99'991);
}

TEST_CASE("mobius, phi, omega examples")
{
    CHECK(mobius(1, table()) == 1);
    CHECK(mobius(12, table()) == 0);
    CHECK(mobius(30, table()) == -1);
    CHECK(euler_phi(1, table()) == 1);
    CHECK(euler_phi(12, table()) == 4);
    CHECK(euler_phi(97, table()) == 96);
    CHECK(omega_in_range(60, 2, 3, table()) == 2);
    CHECK(omega_in_range(60, 7, 100, table()) == 0);
    CHECK(omega_in_range(30, 3, 5, table()) == 2);
    CHECK_THROWS_AS(omega_in_range(30, 5, 3, table()), DomainError);
}

TEST_CASE("prime bounds conventions")
{
    auto b = prime_bounds(12, table());
    CHECK(b.smallest == 2);
    CHECK(b.largest == 3);
    b = prime_bounds(1, table());
    CHECK(b.smallest == kPlusInfinity);
    CHECK(b.largest == 1);
    b = prime_bounds(13, table());
    CHECK(b.smallest == 13);
    CHECK(b.largest == 13);
}

TEST_CASE("mobius and phi are multiplicative on random coprime pairs")
{
    int checked = 0;
    while (checked < 2000) {
        const u64 m = testing::uniform(1, 10'000), n = testing::uniform(1, 10'000);
        if (std::gcd(m, n) != 1)
            continue;
        ++checked;
        CHECK(mobius(m * n, table()) == mobius(m, table()) * mobius(n, table()));
        CHECK(euler_phi(m * n, table()) == euler_phi(m, table()) * euler_phi(n, table()));
    }
}

TEST_CASE("sum of mobius over divisors is [n = 1]")
{
    for (u64 n = 1; n <= 10'000; ++n) {
        int s = 0;
        for (u64 d = 1; d * d <= n; ++d) {
            if (n % d)
                continue;
            s += mobius(d, table());
            if (d * d != n)
                s += mobius(n / d, table());
        }
        REQUIRE(s == (n == 1 ? 1 : 0));
    }
}

TEST_CASE("omega_in_range over [2, n] equals omega")
{
    for (u64 n = 1; n <= 10'000; ++n)
        REQUIRE(omega_in_range(n, 2, static_cast<double>(std::max<u64>(n, 2)), table()) ==
                factor(n, table()).omega());
}

TEST_CASE("progression sieve agrees with pointwise factorization")
{
    for (const u64 step : {1ull, 7ull, 30ull, 101ull}) {
        const u64 first = 1'234'567 % step + 1 + step * 50;
        const u64 count = 3000;
        std::vector<u64> product(count, 1);
        std::vector<u64> last_prime(count, 0);
        sieve_progression(first, step, count, table(), [&](u64 i, u64 p, unsigned e) {
            CHECK(p > last_prime[i]);
            last_prime[i] = p;
            for (unsigned k = 0; k < e; ++k)
                product[i] *= p;
        });
        for (u64 i = 0; i < count; ++i)
            REQUIRE(product[i] == first + i * step);
    }
}

TEST_CASE("checked arithmetic refuses to wrap")
{
    CHECK_THROWS_AS(checked_mul(u64{1} << 40, u64{1} << 40), CapacityError);
    CHECK_THROWS_AS(checked_add(~u64{0}, 1), CapacityError);
    CHECK(isqrt(99) == 9);
    CHECK(isqrt(100) == 10);
    CHECK(isqrt(~u64{0}) == 4'294'967'295ull);
}
