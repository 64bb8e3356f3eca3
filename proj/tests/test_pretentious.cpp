#include "progvar/pretentious.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace progvar;
using testing::table;

namespace {

// Primes up to x by trial division.
const std::vector<u64> &slow_primes(u64 x)
{
    static std::vector<u64> primes;
    static u64 upto = 1;
    for (u64 n = upto + 1; n <= x; ++n)
        if (testing::is_prime_slow(n))
            primes.push_back(n);
    upto = std::max(upto, x);
    return primes;
}

// D_q(f, chi(n) n^{it}; x)^2 by a plain loop.
double oracle_distance(const MultiplicativeFunction &f, const DirichletCharacter *chi, double t, double x, u64 q)
{
    long double s = 0;
    for (const u64 p : slow_primes(static_cast<u64>(x))) {
        if (static_cast<double>(p) > x)
            break;
        if (q % p == 0)
            continue;
        cplx g = std::polar(1.0, t * std::log(static_cast<double>(p)));
        if (chi)
            g *= (*chi)(static_cast<i64>(p % q));
        s += (1.0L - (f.at_prime(p) * std::conj(g)).real()) / static_cast<long double>(p);
    }
    return static_cast<double>(s);
}

double oracle_grid_min(const MultiplicativeFunction &f, const DirichletCharacter *chi, double T, double dt, double x,
                       u64 q)
{
    double best = oracle_distance(f, chi, 0.0, x, q);
    for (double t = -T; t <= T + 1e-12; t += dt)
        best = std::min(best, oracle_distance(f, chi, t, x, q));
    return best;
}

} // namespace

TEST_CASE("distance_sq examples")
{
    CHECK(distance_sq(functions::mobius(), functions::mobius(), 1000, 1, table()) == doctest::Approx(0.0));
    CHECK(distance_sq(functions::mobius(), functions::one(), 10, 1, table()) ==
          doctest::Approx(2.0 * (1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7)).epsilon(1e-12));
    CHECK(distance_sq(functions::mobius(), functions::one(), 10, 1, table()) == doctest::Approx(2.352381).epsilon(1e-6));
    CHECK(distance_sq(functions::one(), functions::one(), 10, 6, table()) == 0.0);
    // primes dividing q drop out
    CHECK(distance_sq(functions::mobius(), functions::one(), 10, 6, table()) ==
          doctest::Approx(2.0 * (1.0 / 5 + 1.0 / 7)));
    CHECK_THROWS_AS(distance_sq(functions::one(), functions::one(), 1.5, 1, table()), DomainError);
    const PrimeTable small(100);
    CHECK_THROWS_AS(distance_sq(functions::one(), functions::mobius(), 1e6, 1, small), CapacityError);
}

TEST_CASE("distance_sq_range examples")
{
    CHECK(distance_sq_range(functions::one(), functions::one(), 2, 10, table()) == 0.0);
    CHECK(distance_sq_range(functions::mobius(), functions::one(), 5, 10, table()) == doctest::Approx(2.0 / 7));
    CHECK(distance_sq_range(functions::mobius(), functions::one(), 50, 50, table()) == 0.0);
    CHECK_THROWS_AS(distance_sq_range(functions::one(), functions::one(), 20, 10, table()), DomainError);
}

TEST_CASE("distance_sq agrees with a trial-division oracle")
{
    const std::vector<MultiplicativeFunction> fs{functions::one(), functions::mobius(), functions::liouville(),
                                                 functions::character(characters(7, table()).at(2)),
                                                 functions::nit_twist(0.3)};
    for (const auto &f : fs)
        for (const auto &g : fs)
            for (const u64 q : {1ull, 6ull, 7ull}) {
                const double got = distance_sq(f, g, 5000, q, table());
                const auto gp = [&](u64 p) { return g.at_prime(p); };
                long double s = 0;
                for (const u64 p : slow_primes(5000))
                    if (q % p != 0)
                        s += (1.0L - (f.at_prime(p) * std::conj(gp(p))).real()) / static_cast<long double>(p);
                CHECK(got == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
            }
}

TEST_CASE("twist grid is symmetric and covers +-T")
{
    const auto g = twist_grid(1.0, 0.3);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 1.0);
    CHECK(g.size() == 9);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == -g[g.size() - 1 - i]);
    CHECK(twist_grid(0.0, 0.05).size() == 1);
    CHECK(twist_grid(1.0, 0.25).size() == 9);
    CHECK_THROWS_AS(twist_grid(-1.0, 0.1), DomainError);
    CHECK(GridSpec{}.spacing(1e4) == doctest::Approx(std::min(0.05, 1.0 / std::log(1e4))));
    CHECK(GridSpec{}.spacing(1e9) == doctest::Approx(1.0 / std::log(1e9)));
    CHECK(GridSpec{0.01}.spacing(1e9) == 0.01);
}

TEST_CASE("halasz_M examples")
{
    const auto trivial = halasz_M(functions::one(), 1e4, 2.0, 1, table());
    CHECK(trivial.M == doctest::Approx(0.0));
    CHECK(trivial.t_min == 0.0);

    const auto twisted = halasz_M(functions::nit_twist(0.5), 1e4, 1.0, 1, table());
    CHECK(twisted.M < 1e-6);
    CHECK(twisted.t_min == doctest::Approx(0.5).epsilon(1e-3));

    const auto mu = halasz_M(functions::mobius(), 1e4, 1.0, 1, table());
    const double dt = GridSpec{}.spacing(1e4);
    const double dense = oracle_grid_min(functions::mobius(), nullptr, 1.0, dt / 10, 1e4, 1);
    CHECK(std::abs(mu.M - dense) <= 1e-3);
    CHECK(mu.M == doctest::Approx(oracle_distance(functions::mobius(), nullptr, mu.t_min, 1e4, 1)).epsilon(1e-9));
}

TEST_CASE("select_main_character examples")
{
    const auto g5 = characters(5, table());
    for (u64 c = 1; c < g5.size(); ++c) {
        const auto sel = select_main_character(functions::character(g5.at(c)), 5, 1e4, std::nullopt, table());
        CHECK(sel.chi_index == c);
        CHECK(std::abs(sel.t_star) < 1e-3);
        CHECK(sel.distance_sq < 1e-9);
    }
    const auto one = select_main_character(functions::one(), 5, 1e4, std::nullopt, table());
    CHECK(one.chi_index == 0);
    CHECK(one.t_star == 0.0);
    CHECK(one.distance_sq == doctest::Approx(0.0));
    CHECK(one.T == doctest::Approx(std::log(1e4)));
}

TEST_CASE("select_main_character matches a dense-grid oracle for mobius mod 3")
{
    const double x = 1e4;
    const auto sel = select_main_character(functions::mobius(), 3, x, std::nullopt, table());
    const auto g3 = characters(3, table());
    const double dt = GridSpec{}.spacing(x) / 10;
    double best = std::numeric_limits<double>::infinity();
    for (const auto &chi : g3.all())
        best = std::min(best, oracle_grid_min(functions::mobius(), &chi, std::log(x), dt, x, 3));
    CHECK(std::abs(sel.distance_sq - best) <= 1e-3);
    // deterministic
    const auto again = select_main_character(functions::mobius(), 3, x, std::nullopt, table(), GridSpec{0, 1e-4, 3});
    CHECK(again.chi_index == sel.chi_index);
    CHECK(again.t_star == sel.t_star);
    CHECK(again.distance_sq == sel.distance_sq);
}

TEST_CASE("selection invariants: recomputed distance and trace minimality")
{
    const std::vector<std::pair<MultiplicativeFunction, u64>> cases{
        {functions::mobius(), 7}, {functions::liouville(), 12}, {functions::nit_twist(1.1), 5},
        {functions::smooth_indicator(50), 9}, {functions::character(characters(11, table()).at(3)), 11}};
    for (const auto &[f, q] : cases) {
        INFO(f.name(), " q=", q);
        const double x = 3000;
        const auto sel = select_main_character(f, q, x, std::nullopt, table());
        const auto chi = characters(q, table()).at(sel.chi_index);
        CHECK(std::abs(sel.distance_sq - oracle_distance(f, &chi, sel.t_star, x, q)) <= 1e-9);
        REQUIRE_FALSE(sel.trace.empty());
        for (const auto &pt : sel.trace)
            CHECK(sel.distance_sq <= pt.distance_sq + 1e-9);
        // no other character does better on the grid
        for (const auto &psi : characters(q, table()).all())
            for (const auto &pt : sel.trace)
                CHECK(sel.distance_sq <= oracle_distance(f, &psi, pt.t, x, q) + 1e-9);
    }
}

TEST_CASE("planted recovery for every character mod q <= 50")
{
    for (u64 q = 1; q <= 50; ++q) {
        const auto group = characters(q, table());
        for (u64 c = 0; c < group.size(); ++c) {
            const auto sel = select_main_character(functions::character(group.at(c)), q, 1000, std::nullopt, table());
            REQUIRE(sel.chi_index == c);
            REQUIRE(sel.distance_sq < 1e-9);
        }
    }
}

TEST_CASE("pretentious triangle inequality on random triples")
{
    std::vector<MultiplicativeFunction> pool{functions::one(), functions::mobius(), functions::liouville(),
                                             functions::mobius_squared(), functions::smooth_indicator(20),
                                             functions::nit_twist(0.4), functions::nit_twist(-2.0)};
    for (const auto &chi : characters(15, table()).all())
        pool.push_back(functions::character(chi));
    for (int trial = 0; trial < 300; ++trial) {
        const auto &f = pool[testing::uniform(0, pool.size() - 1)];
        const auto &g = pool[testing::uniform(0, pool.size() - 1)];
        const auto &h = pool[testing::uniform(0, pool.size() - 1)];
        const double x = static_cast<double>(testing::uniform(2, 10'000));
        const u64 q = testing::uniform(1, 30);
        const double fh = std::sqrt(distance_sq(f, h, x, q, table()));
        const double fg = std::sqrt(distance_sq(f, g, x, q, table()));
        const double gh = std::sqrt(distance_sq(g, h, x, q, table()));
        CHECK(fh <= fg + gh + 1e-12);
    }
}

TEST_CASE("nonnegativity and monotonicity in x for unimodular functions")
{
    const std::vector<MultiplicativeFunction> pool{functions::mobius(), functions::liouville(), functions::one(),
                                                   functions::nit_twist(0.9),
                                                   functions::character(characters(8, table()).at(1))};
    for (const auto &f : pool)
        for (const auto &g : pool) {
            double prev = 0.0;
            for (double x = 2; x <= 20'000; x *= 1.7) {
                const double d = distance_sq(f, g, x, 1, table());
                CHECK(d >= 0.0);
                CHECK(d >= prev - 1e-15);
                prev = d;
            }
        }
}
