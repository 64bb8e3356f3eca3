#include "progvar/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace progvar {

namespace {

u64 floor_x(double x)
{
    if (!(x >= 1))
        throw DomainError("x must be >= 1");
    return static_cast<u64>(std::floor(x));
}

std::vector<cplx> values_up_to(const MultiplicativeFunction &f, double x, const PrimeTable &table)
{
    return evaluate_range(f, 1, floor_x(x), table);
}

// sum_{n <= N, n == a} values[n-1] for each unit a (index into units()).
std::vector<cplx> class_sums(std::span<const cplx> values, const UnitGroupStructure &g)
{
    const u64 q = g.modulus();
    std::vector<CompensatedComplexSum> by_residue(q);
    for (std::size_t i = 0; i < values.size(); ++i)
        by_residue[(i + 1) % q] += values[i];
    const auto units = g.units();
    std::vector<cplx> out(units.size());
    for (std::size_t u = 0; u < units.size(); ++u)
        out[u] = by_residue[units[u]].value();
    return out;
}

// sum_{n <= N} values[n-1] conj(chi)(n), summed directly over n.
cplx twisted_total(std::span<const cplx> values, const DirichletCharacter &chi)
{
    CompensatedComplexSum s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += values[i] * chi.eval_conj(static_cast<i64>(i + 1));
    return s.value();
}

} // namespace

DeviationResult deviation(std::span<const cplx> values, const CharacterGroup &group, u64 chi1)
{
    if (chi1 >= group.size())
        throw DomainError("chi1 index " + std::to_string(chi1) + " out of range mod " +
                          std::to_string(group.modulus()));
    const auto chi = group.at(chi1);
    const auto &g = group.structure();
    const auto sums = class_sums(values, g);
    const cplx main = twisted_total(values, chi) / static_cast<double>(g.phi());

    DeviationResult r;
    r.residues.assign(g.units().begin(), g.units().end());
    r.deviations.resize(sums.size());
    for (std::size_t u = 0; u < sums.size(); ++u) {
        r.deviations[u] = sums[u] - chi(static_cast<i64>(r.residues[u])) * main;
        r.max_deviation = std::max(r.max_deviation, std::abs(r.deviations[u]));
    }
    return r;
}

DeviationResult deviation(const MultiplicativeFunction &f, u64 q, double x, u64 chi1, const PrimeTable &table)
{
    const CharacterGroup group(q, table);
    const auto values = values_up_to(f, x, table);
    return deviation(values, group, chi1);
}

VarianceReport variance(std::span<const cplx> values, const CharacterGroup &group, u64 chi1, std::string label,
                        double x)
{
    auto dev = deviation(values, group, chi1);
    VarianceReport rep;
    rep.f = std::move(label);
    rep.q = group.modulus();
    rep.x = x;
    rep.chi1_index = chi1;
    CompensatedSum total;
    for (const auto &d : dev.deviations)
        total += std::norm(d);
    rep.variance = total.value();
    const double per_class = x / static_cast<double>(rep.q);
    rep.normalized = rep.variance / (static_cast<double>(group.size()) * per_class * per_class);
    rep.max_deviation = dev.max_deviation;
    rep.residues = std::move(dev.residues);
    rep.deviations = std::move(dev.deviations);
    return rep;
}

VarianceReport variance(const MultiplicativeFunction &f, u64 q, double x, u64 chi1, const PrimeTable &table)
{
    const CharacterGroup group(q, table);
    const auto values = values_up_to(f, x, table);
    return variance(values, group, chi1, f.name(), x);
}

ParsevalResult parseval_check(std::span<const cplx> values, const CharacterGroup &group, std::span<const u64> xi)
{
    const double phi = static_cast<double>(group.size());
    std::vector<bool> in_xi(group.size(), false);
    for (const u64 c : xi) {
        if (c >= group.size())
            throw DomainError("character index in Xi out of range");
        in_xi[c] = true;
    }

    std::vector<cplx> totals(group.size());
    for (u64 c = 0; c < group.size(); ++c)
        totals[c] = twisted_total(values, group.at(c));

    CompensatedSum lhs;
    for (u64 c = 0; c < group.size(); ++c)
        if (!in_xi[c])
            lhs += std::norm(totals[c]);

    const auto &g = group.structure();
    const auto sums = class_sums(values, g);
    std::vector<cplx> main(sums.size(), cplx{0.0});
    for (u64 c = 0; c < group.size(); ++c) {
        if (!in_xi[c])
            continue;
        const auto chi = group.at(c);
        for (std::size_t u = 0; u < sums.size(); ++u)
            main[u] += chi(static_cast<i64>(g.units()[u])) * totals[c] / phi;
    }
    CompensatedSum rhs;
    for (std::size_t u = 0; u < sums.size(); ++u)
        rhs += std::norm(sums[u] - main[u]);
    return {lhs.value() / phi, rhs.value()};
}

ParsevalResult parseval_check(const MultiplicativeFunction &f, u64 q, double x, std::span<const u64> xi,
                              const PrimeTable &table)
{
    const CharacterGroup group(q, table);
    const auto values = values_up_to(f, x, table);
    return parseval_check(values, group, xi);
}

u64 parseval_optimal_character(std::span<const cplx> values, const CharacterGroup &group)
{
    u64 best = 0;
    double best_norm = -1.0;
    for (u64 c = 0; c < group.size(); ++c) {
        const double v = std::norm(twisted_total(values, group.at(c)));
        if (v > best_norm * (1 + 1e-12) + 1e-300) {
            best = c;
            best_norm = v;
        }
    }
    return best;
}

u64 distance_optimal_character(const MultiplicativeFunction &f, u64 q, double x, const PrimeTable &table,
                               const GridSpec &grid)
{
    return select_main_character(f, q, x, std::nullopt, table, grid).chi_index;
}

HybridResult hybrid_variance(const MultiplicativeFunction &f, u64 q, double X, double h, u64 chi1,
                             u64 sample_step, const PrimeTable &table)
{
    if (!(h >= 10) || !(h <= X))
        throw DomainError("hybrid_variance requires 10 <= h <= X");
    if (q == 0 || static_cast<double>(q) > h / 10)
        throw DomainError("hybrid_variance requires 1 <= q <= h/10");
    if (sample_step == 0)
        throw DomainError("sample_step must be positive");
    if (!f.real_valued())
        throw DomainError("hybrid_variance requires a real-valued function");

    const CharacterGroup group(q, table);
    if (chi1 >= group.size())
        throw DomainError("chi1 index out of range");
    const auto chi = group.at(chi1);
    const auto &g = group.structure();
    const auto units = g.units();
    const double phi = static_cast<double>(g.phi());

    const u64 base = static_cast<u64>(std::floor(X)); // values stored for n > base
    const u64 top = static_cast<u64>(std::floor(2 * X + h));
    const auto values = evaluate_range(f, base + 1, top, table);
    auto f_at = [&](u64 n) { return values[n - base - 1].real(); };

    // main term (h/X) sum_{X < n <= 2X} f(n) conj(chi1)(n)
    CompensatedComplexSum total;
    const u64 two_x = static_cast<u64>(std::floor(2 * X));
    for (u64 n = base + 1; n <= two_x; ++n)
        total += f_at(n) * chi.eval_conj(static_cast<i64>(n));
    const cplx main = total.value() * (h / X);

    // progression prefix sums: prefix[n] = f(n) + prefix[n - q]
    std::vector<double> prefix(top - base);
    for (u64 n = base + 1; n <= top; ++n) {
        const u64 i = n - base - 1;
        prefix[i] = f_at(n) + (i >= q ? prefix[i - q] : 0.0);
    }
    // sum_{base < n <= m, n == a} f(n)
    auto partial = [&](u64 m, u64 a) -> double {
        if (m <= base)
            return 0.0;
        const u64 back = (m % q + q - a) % q;
        if (m - back <= base)
            return 0.0;
        return prefix[m - back - base - 1];
    };

    std::vector<cplx> expected(units.size());
    for (std::size_t u = 0; u < units.size(); ++u)
        expected[u] = chi(static_cast<i64>(units[u])) / phi * main;

    HybridResult r;
    CompensatedSum integral, variation;
    const double step = static_cast<double>(sample_step);
    double previous = 0.0;
    for (u64 k = 0;; ++k) {
        const double x = X + static_cast<double>(k) * step;
        if (x >= 2 * X)
            break;
        const u64 lo = static_cast<u64>(std::floor(x));
        const u64 hi = static_cast<u64>(std::floor(x + h));
        CompensatedSum value;
        for (std::size_t u = 0; u < units.size(); ++u) {
            const double window = partial(hi, units[u]) - partial(lo, units[u]);
            value += std::norm(window - expected[u]);
        }
        const double weight = std::min(step, 2 * X - x);
        integral += weight * value.value();
        if (k > 0)
            variation += weight * std::abs(value.value() - previous);
        previous = value.value();
        ++r.samples;
    }
    r.integral = integral.value();
    r.quadrature_bound = variation.value();
    r.exact = sample_step == 1 && X == std::floor(X) && h == std::floor(h);
    if (r.exact)
        r.quadrature_bound = 0.0;
    const double per_class = h / static_cast<double>(q);
    r.normalized = r.integral / (phi * X * per_class * per_class);
    return r;
}

double delta_typicality(u64 q, double Z, const PrimeTable &table)
{
    if (!(Z >= 2))
        throw DomainError("delta_typicality requires Z >= 2");
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    const auto primes = prime_divisors(q, table);
    auto window_count = [&](double y) {
        return static_cast<double>(std::count_if(primes.begin(), primes.end(), [y](u64 p) {
            const auto pd = static_cast<double>(p);
            return pd >= y && pd <= 2 * y;
        }));
    };
    std::vector<double> candidates{Z};
    if (std::numbers::e >= Z)
        candidates.push_back(std::numbers::e);
    for (const u64 p : primes)
        for (const double y : {static_cast<double>(p) / 2, static_cast<double>(p)})
            if (y >= Z)
                candidates.push_back(y);
    double best = 0.0;
    for (const double y : candidates)
        best = std::max(best, window_count(y) * std::log(y) / y);
    return best;
}

bool is_y_typical(u64 q, double y, const PrimeTable &table)
{
    if (!(y >= 2))
        throw DomainError("is_y_typical requires y >= 2");
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    const auto primes = prime_divisors(q, table);
    auto holds_at = [&](double z) {
        const auto count = static_cast<double>(
            std::count_if(primes.begin(), primes.end(), [z](u64 p) { return static_cast<double>(p) <= z; }));
        if (count == 0)
            return true;
        if (z > static_cast<double>(table.limit())) {
            // pi(z) >= pi(limit); only conclusive when that already suffices
            if (count <= static_cast<double>(table.primes().size()) / 100.0)
                return true;
            throw CapacityError("is_y_typical needs pi(z) beyond the sieve limit");
        }
        return count <= static_cast<double>(table.prime_count(z)) / 100.0;
    };
    if (!holds_at(y))
        return false;
    for (const u64 p : primes)
        if (static_cast<double>(p) >= y && !holds_at(static_cast<double>(p)))
            return false;
    return true;
}

} // namespace progvar
