#include "progvar/variance.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace progvar;
using testing::table;

namespace {

MultiplicativeFunction zero_beyond_one()
{
    return {"zero", [](u64, unsigned) { return cplx{0.0}; }, true};
}

// pi(z) by trial division, tabulated once.
u64 slow_prime_count(double z)
{
    static const std::vector<u64> pi = [] {
        std::vector<u64> t(20'001, 0);
        for (u64 n = 2; n < t.size(); ++n)
            t[n] = t[n - 1] + testing::is_prime_slow(n);
        return t;
    }();
    const auto n = static_cast<std::size_t>(std::floor(z));
    REQUIRE(n < pi.size());
    return pi[n];
}

// Scan every integer z >= y until pi(z)/100 exceeds omega(q).
bool brute_y_typical(u64 q, double y)
{
    std::vector<u64> ps;
    for (u64 p = 2; p <= q; ++p)
        if (q % p == 0 && testing::is_prime_slow(p))
            ps.push_back(p);
    auto holds = [&](double z) {
        const auto below = std::count_if(ps.begin(), ps.end(), [z](u64 p) { return static_cast<double>(p) <= z; });
        return static_cast<double>(below) <= static_cast<double>(slow_prime_count(z)) / 100.0;
    };
    if (!holds(y))
        return false;
    u64 pi = slow_prime_count(y);
    for (u64 z = static_cast<u64>(std::ceil(y)); pi < 100 * ps.size() || z <= q; ++z) {
        if (testing::is_prime_slow(z))
            ++pi;
        if (static_cast<double>(z) >= y && !holds(static_cast<double>(z)))
            return false;
    }
    return true;
}

// Fine sampling of omega_{[y,2y]}(q) log y / y over y in [Z, 2 P^+(q)].
double sampled_delta(u64 q, double Z)
{
    std::vector<u64> ps;
    for (u64 p = 2; p <= q; ++p)
        if (q % p == 0 && testing::is_prime_slow(p))
            ps.push_back(p);
    double best = 0.0;
    const double top = ps.empty() ? Z : 2.0 * static_cast<double>(ps.back());
    for (double y = Z; y <= top; y += 1e-3) {
        const auto c = std::count_if(ps.begin(), ps.end(), [y](u64 p) {
            const auto d = static_cast<double>(p);
            return d >= y && d <= 2 * y;
        });
        best = std::max(best, static_cast<double>(c) * std::log(y) / y);
    }
    return best;
}

std::vector<cplx> random_values(std::size_t n, bool real)
{
    std::vector<cplx> v(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto &z : v)
        z = real ? cplx{u(testing::rng())} : std::polar(std::abs(u(testing::rng())), 3.2 * u(testing::rng()));
    return v;
}

} // namespace

TEST_CASE("deviation examples")
{
    const auto g3 = characters(3, table());
    const auto chi = functions::character(g3.at(1));
    const auto d1 = deviation(chi, 3, 10, 1, table());
    REQUIRE(d1.deviations.size() == 2);
    CHECK(std::abs(d1.deviations[0]) == doctest::Approx(0.5));
    CHECK(std::abs(d1.deviations[1]) == doctest::Approx(0.5));
    CHECK(d1.max_deviation == doctest::Approx(0.5));

    CHECK(deviation(functions::one(), 3, 6, 0, table()).max_deviation == doctest::Approx(0.0));
    const auto mu = deviation(functions::mobius(), 3, 10, 0, table());
    CHECK(mu.max_deviation == doctest::Approx(1.5));
    CHECK(mu.residues == std::vector<u64>{1, 2});
    CHECK(mu.deviations[0].real() == doctest::Approx(1.5));
    CHECK(mu.deviations[1].real() == doctest::Approx(-1.5));

    CHECK_THROWS_AS(deviation(functions::one(), 3, 10, 2, table()), DomainError);
}

TEST_CASE("variance examples")
{
    const auto principal = variance(functions::mobius(), 3, 10, 0, table());
    CHECK(principal.variance == doctest::Approx(4.5));
    CHECK(principal.normalized == doctest::Approx(4.5 / (2 * (10.0 / 3) * (10.0 / 3))));
    CHECK(principal.f == "mobius");
    CHECK(variance(functions::mobius(), 3, 10, 1, table()).variance == doctest::Approx(0.5));
    const std::vector<cplx> zeros(50, cplx{0.0});
    CHECK(variance(zeros, characters(7, table()), 3, "zero", 50).variance == 0.0);
    CHECK_THROWS_AS(variance(functions::one(), 3, 10, 5, table()), DomainError);
}

TEST_CASE("variance report invariants")
{
    for (int trial = 0; trial < 50; ++trial) {
        const u64 q = testing::uniform(1, 60);
        const auto group = characters(q, table());
        const auto values = random_values(testing::uniform(1, 3000), trial % 2);
        const u64 chi1 = testing::uniform(0, group.size() - 1);
        const auto rep = variance(values, group, chi1, "random", static_cast<double>(values.size()));
        CHECK(rep.deviations.size() == euler_phi(q, table()));
        double s = 0;
        for (const auto &d : rep.deviations)
            s += std::norm(d);
        CHECK(rep.variance == doctest::Approx(s).epsilon(1e-9));

        // oracle straight from the definition
        const auto chi = group.at(chi1);
        cplx total = 0;
        for (std::size_t n = 1; n <= values.size(); ++n)
            total += values[n - 1] * std::conj(chi(static_cast<i64>(n)));
        for (std::size_t u = 0; u < rep.residues.size(); ++u) {
            const u64 a = rep.residues[u];
            cplx cls = 0;
            for (std::size_t n = 1; n <= values.size(); ++n)
                if (n % q == a % q)
                    cls += values[n - 1];
            const cplx expected = cls - chi(static_cast<i64>(a)) / static_cast<double>(group.size()) * total;
            CHECK(std::abs(rep.deviations[u] - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("parseval examples")
{
    const std::vector<u64> principal{0}, nonprincipal{1}, all{0, 1};
    const auto a = parseval_check(functions::one(), 3, 5, principal, table());
    CHECK(a.lhs == doctest::Approx(0.0));
    CHECK(a.rhs == doctest::Approx(0.0));
    const auto b = parseval_check(functions::mobius(), 3, 10, nonprincipal, table());
    CHECK(b.lhs == doctest::Approx(0.5));
    CHECK(b.rhs == doctest::Approx(0.5));
    const auto c = parseval_check(functions::mobius(), 3, 10, all, table());
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == doctest::Approx(0.0).epsilon(1e-12));
    const std::vector<u64> bad{2};
    CHECK_THROWS_AS(parseval_check(functions::mobius(), 3, 10, bad, table()), DomainError);
}

TEST_CASE("parseval exactness on 200 random instances")
{
    const std::vector<MultiplicativeFunction> pool{functions::mobius(), functions::liouville(),
                                                   functions::one(), functions::smooth_indicator(40),
                                                   functions::nit_twist(0.25)};
    for (int trial = 0; trial < 200; ++trial) {
        const u64 q = testing::uniform(1, 50);
        const auto group = characters(q, table());
        const double x = static_cast<double>(testing::uniform(1, 10'000));
        std::vector<u64> xi;
        for (u64 c = 0; c < group.size(); ++c)
            if (testing::uniform(0, 2) == 0)
                xi.push_back(c);
        ParsevalResult r{};
        if (trial % 4 == 3) {
            const auto values = random_values(static_cast<std::size_t>(x), false);
            r = parseval_check(values, group, xi);
        } else {
            r = parseval_check(pool[trial % pool.size()], q, x, xi, table());
        }
        INFO("q=", q, " x=", x);
        CHECK(std::abs(r.lhs - r.rhs) <= 1e-9 * std::max(1.0, r.lhs));
    }
}

TEST_CASE("parseval-optimal character minimizes single-character variance (q <= 30)")
{
    const std::vector<MultiplicativeFunction> pool{functions::mobius(), functions::liouville(),
                                                   functions::smooth_indicator(7)};
    for (u64 q = 1; q <= 30; ++q) {
        const auto group = characters(q, table());
        for (const auto &f : pool) {
            const auto values = evaluate_range(f, 1, 2000, table());
            const u64 best = parseval_optimal_character(values, group);
            const double v = variance(values, group, best, f.name(), 2000).variance;
            for (u64 c = 0; c < group.size(); ++c)
                CHECK(v <= variance(values, group, c, f.name(), 2000).variance * (1 + 1e-12) + 1e-9);
        }
    }
}

TEST_CASE("distance-optimal character recovers a planted character")
{
    const auto group = characters(13, table());
    CHECK(distance_optimal_character(functions::character(group.at(5)), 13, 5000, table()) == 5);
}

TEST_CASE("hybrid variance examples")
{
    const auto one = hybrid_variance(functions::one(), 1, 100, 10, 0, 1, table());
    CHECK(one.normalized <= 0.05);
    CHECK(one.exact);
    CHECK(one.samples == 100);
    CHECK(hybrid_variance(zero_beyond_one(), 3, 1000, 50, 0, 1, table()).normalized == 0.0);

    CHECK_THROWS_AS(hybrid_variance(functions::one(), 1, 100, 5, 0, 1, table()), DomainError);
    CHECK_THROWS_AS(hybrid_variance(functions::one(), 1, 100, 200, 0, 1, table()), DomainError);
    CHECK_THROWS_AS(hybrid_variance(functions::one(), 3, 100, 20, 0, 1, table()), DomainError);
    CHECK_THROWS_AS(hybrid_variance(functions::nit_twist(1.0), 1, 100, 20, 0, 1, table()), DomainError);
    CHECK_THROWS_AS(hybrid_variance(functions::one(), 1, 100, 20, 0, 0, table()), DomainError);
}

TEST_CASE("hybrid variance agrees with a step-1 double-loop oracle")
{
    struct Case {
        MultiplicativeFunction f;
        u64 q;
        u64 X, h, chi1;
    };
    const std::vector<Case> cases{{functions::mobius(), 1, 10'000, 100, 0},
                                  {functions::liouville(), 3, 5'000, 60, 1},
                                  {functions::mobius(), 5, 4'000, 80, 0},
                                  {functions::smooth_indicator(30), 4, 3'000, 40, 0}};
    for (const auto &[f, q, X, h, chi1] : cases) {
        INFO(f.name(), " q=", q);
        const auto chi = characters(q, table()).at(chi1);
        std::vector<double> v(2 * X + h + 1);
        for (u64 n = 1; n < v.size(); ++n)
            v[n] = f.evaluate(n, table()).real();
        cplx main = 0;
        for (u64 n = X + 1; n <= 2 * X; ++n)
            main += v[n] * std::conj(chi(static_cast<i64>(n)));
        main *= static_cast<double>(h) / static_cast<double>(X);
        long double integral = 0;
        for (u64 x = X; x < 2 * X; ++x)
            for (u64 a = 0; a < q; ++a) {
                if (std::gcd(a, q) != 1)
                    continue;
                double window = 0;
                for (u64 n = x + 1; n <= x + h; ++n)
                    if (n % q == a)
                        window += v[n];
                integral += std::norm(window - chi(static_cast<i64>(a)) / static_cast<double>(euler_phi(q, table())) * main);
            }
        const double phi = static_cast<double>(euler_phi(q, table()));
        const double per = static_cast<double>(h) / static_cast<double>(q);
        const double oracle = static_cast<double>(integral) / (phi * static_cast<double>(X) * per * per);
        const auto r = hybrid_variance(f, q, static_cast<double>(X), static_cast<double>(h), chi1, 1, table());
        CHECK(r.normalized == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("hybrid variance sampling stays within 2% for step <= 16")
{
    const auto exact = hybrid_variance(functions::mobius(), 1, 1e4, 100, 0, 1, table());
    for (const u64 step : {2ull, 4ull, 8ull, 16ull}) {
        const auto r = hybrid_variance(functions::mobius(), 1, 1e4, 100, 0, step, table());
        INFO("step=", step, " exact=", exact.normalized, " sampled=", r.normalized);
        CHECK(std::abs(r.normalized - exact.normalized) <= 0.02 * exact.normalized);
        CHECK_FALSE(r.exact);
    }
}

TEST_CASE("delta typicality examples and sampled oracle")
{
    CHECK(delta_typicality(6, 2, table()) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(delta_typicality(1, 5, table()) == 0.0);
    CHECK(delta_typicality(2 * 3 * 7, 8, table()) == 0.0);
    CHECK_THROWS_AS(delta_typicality(6, 1, table()), DomainError);
    for (u64 q = 1; q <= 300; q += 7)
        for (const double Z : {2.0, 2.5, 3.0, 7.5, 20.0}) {
            const double d = delta_typicality(q, Z, table());
            const double s = sampled_delta(q, Z);
            INFO("q=", q, " Z=", Z);
            CHECK(s <= d + 1e-12);
            CHECK(d - s <= 1e-3);
        }
}

TEST_CASE("small-density threshold: Delta(q, 200 log q) < 1/100 for q <= 10^4")
{
    for (u64 q = 2; q <= 10'000; ++q)
        REQUIRE(delta_typicality(q, 200 * std::log(static_cast<double>(q)), table()) < 0.01);
}

TEST_CASE("y-typical examples and brute-force scan")
{
    CHECK(is_y_typical(1, 2, table()));
    CHECK(is_y_typical(1, 1e6, table()));
    CHECK_FALSE(is_y_typical(2, 2, table()));
    CHECK(is_y_typical(2, 542, table()));
    CHECK_FALSE(is_y_typical(2, 540, table()));
    CHECK_THROWS_AS(is_y_typical(2, 1, table()), DomainError);
    for (const u64 q : {2ull, 6ull, 30ull, 210ull, 2310ull, 97ull, 541ull, 1009ull, 4096ull, 9973ull})
        for (const double y : {2.0, 100.0, 540.0, 542.0, 1000.0, 3000.0, 7000.0}) {
            INFO("q=", q, " y=", y);
            CHECK(is_y_typical(q, y, table()) == brute_y_typical(q, y));
        }
}
