#include "progvar/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace progvar {

namespace {

constexpr double kEndpointSlack = 1e-9;

// Primes in [lo, hi] with a relative slack so that endpoints computed in
// floating point (P^{1+eps}, (1+delta)P) still capture integer boundaries.
std::vector<u64> primes_in(double lo, double hi, const PrimeTable &table)
{
    if (hi < lo)
        return {};
    const double a = std::ceil(lo * (1 - kEndpointSlack));
    const double b = std::floor(hi * (1 + kEndpointSlack));
    if (b < 2 || b < a)
        return {};
    return table.primes_between(static_cast<u64>(std::max(a, 2.0)), static_cast<u64>(b));
}

cplx twist(u64 n, double t) { return std::polar(1.0, -t * std::log(static_cast<double>(n))); }

} // namespace

cplx prime_char_sum(const DirichletCharacter &chi, double t, double P, double delta, const PrimeCoefficients &a,
                    const PrimeTable &table)
{
    if (!(P >= 2))
        throw DomainError("prime_char_sum requires P >= 2");
    if (!(delta > 0))
        throw DomainError("prime_char_sum requires delta > 0");
    CompensatedComplexSum sum;
    for (const u64 p : primes_in(P, (1 + delta) * P, table))
        sum += a(p) * chi.eval_conj(static_cast<i64>(p)) * twist(p, t);
    return sum.value();
}

cplx log_prime_char_sum(const DirichletCharacter &chi, double t, double P, double eps_exp, const PrimeTable &table)
{
    if (!(P >= 2))
        throw DomainError("log_prime_char_sum requires P >= 2");
    if (!(eps_exp > 0))
        throw DomainError("log_prime_char_sum requires eps > 0");
    CompensatedComplexSum sum;
    for (const u64 p : primes_in(P, std::pow(P, 1 + eps_exp), table))
        sum += chi(static_cast<i64>(p)) * twist(p, t) / static_cast<double>(p);
    return sum.value();
}

void validate_well_spaced(std::span<const double> t_grid)
{
    if (t_grid.empty())
        throw DomainError("t-grid is empty");
    std::vector<double> sorted(t_grid.begin(), t_grid.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] - sorted[i - 1] < 1.0)
            throw DomainError("t-grid is not well spaced: points " + format_number(sorted[i - 1]) + " and " +
                              format_number(sorted[i]) + " are closer than 1");
}

Census large_value_census(u64 q, std::span<const double> t_grid, double P, double delta,
                          const PrimeCoefficients &a, double eps, const PrimeTable &table)
{
    validate_well_spaced(t_grid);
    if (!(P >= 2) || !(delta > 0))
        throw DomainError("large_value_census requires P >= 2 and delta > 0");
    const CharacterGroup group(q, table);
    const auto units = group.structure().units();
    const auto primes = primes_in(P, (1 + delta) * P, table);
    const double scale = std::log(P) / (delta * P);

    // class_sums[k][u] = sum over p == units[u] of a_p p^{-i t_k}
    std::vector<std::vector<cplx>> class_sums(t_grid.size(), std::vector<cplx>(units.size()));
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        std::vector<CompensatedComplexSum> acc(units.size());
        for (const u64 p : primes) {
            const auto it = std::lower_bound(units.begin(), units.end(), p % q);
            if (it == units.end() || *it != p % q)
                continue;
            acc[static_cast<std::size_t>(it - units.begin())] += a(p) * twist(p, t_grid[k]);
        }
        for (std::size_t u = 0; u < units.size(); ++u)
            class_sums[k][u] = acc[u].value();
    }

    Census census;
    for (u64 c = 0; c < group.size(); ++c) {
        const auto chi = group.at(c);
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            CompensatedComplexSum s;
            for (std::size_t u = 0; u < units.size(); ++u)
                s += chi.eval_conj(static_cast<i64>(units[u])) * class_sums[k][u];
            const cplx value = s.value();
            const double normalized = scale * std::abs(value);
            if (normalized >= eps)
                census.points.push_back({q, c, t_grid[k], value, normalized});
        }
    }
    census.count = census.points.size();
    return census;
}

double sup_norm_scan(const MultiplicativeFunction &f, u64 q, std::span<const double> y_grid,
                     std::span<const double> t_grid, std::optional<u64> exclude, const PrimeTable &table)
{
    if (y_grid.empty() || t_grid.empty())
        return 0.0;
    std::vector<double> ys(y_grid.begin(), y_grid.end());
    std::sort(ys.begin(), ys.end());
    if (!(ys.front() >= 1))
        throw DomainError("sup_norm_scan requires y >= 1");
    const auto ymax = static_cast<u64>(std::floor(ys.back()));
    const CharacterGroup group(q, table);
    const auto values = evaluate_range(f, 1, ymax, table);

    double best = 0.0;
    std::vector<cplx> twisted(ymax);
    for (const double t : t_grid) {
        for (u64 n = 1; n <= ymax; ++n)
            twisted[n - 1] = values[n - 1] * twist(n, t);
        for (u64 c = 0; c < group.size(); ++c) {
            if (exclude && *exclude == c)
                continue;
            const auto chi = group.at(c);
            CompensatedComplexSum sum;
            u64 n = 1;
            for (const double y : ys) {
                const auto upto = static_cast<u64>(std::floor(y));
                for (; n <= upto; ++n)
                    sum += twisted[n - 1] * chi.eval_conj(static_cast<i64>(n));
                best = std::max(best, std::abs(sum.value()) / y);
            }
        }
    }
    return best;
}

double ramare_weight(u64 n, double P, double Q, const PrimeTable &table)
{
    return 1.0 / (1.0 + omega_in_range(n, P, Q, table));
}

Rational ramare_weight_exact(u64 n, double P, double Q, const PrimeTable &table)
{
    return Rational(1, 1 + omega_in_range(n, P, Q, table));
}

RamareCheck ramare_identity_check(u64 n, double P, double Q, const PrimeTable &table)
{
    if (P > Q)
        throw DomainError("ramare_identity_check requires P <= Q");
    if (P < 1)
        throw DomainError("ramare_identity_check requires P >= 1");
    const auto fn = factor(n, table);
    Rational sum(0);
    bool square_in_range = false;
    for (const auto &[p, k] : fn.factors()) {
        const auto pd = static_cast<double>(p);
        if (pd < P || pd > Q)
            continue;
        if (k >= 2)
            square_in_range = true;
        sum = sum + ramare_weight_exact(n / p, P, Q, table);
    }
    RamareCheck check{sum, sum};
    if (omega_in_range(fn, P, Q) >= 1 && !square_in_range)
        check.expected = Rational(1);
    return check;
}

DecompositionSums decomposition_sums(const MultiplicativeFunction &f, const DirichletCharacter &chi, double t,
                                     double X, double P, double Q, u64 H, i64 v, const PrimeTable &table)
{
    if (P > Q || P < 1)
        throw DomainError("decomposition_sums requires 1 <= P <= Q");
    if (H == 0)
        throw DomainError("decomposition_sums requires H >= 1");
    if (!(X >= 1))
        throw DomainError("decomposition_sums requires X >= 1");
    const double hd = static_cast<double>(H);
    const double lo = std::exp(static_cast<double>(v) / hd);
    const double hi = std::exp(static_cast<double>(v + 1) / hd);

    DecompositionSums out{};
    CompensatedComplexSum qv;
    for (const u64 p : primes_in(std::max(P, lo), std::min(Q, hi), table))
        qv += f.at_prime(p) * chi.eval_conj(static_cast<i64>(p)) * twist(p, t);
    out.Qv = qv.value();

    const double shrink = std::exp(-static_cast<double>(v) / hd);
    const double m_lo = std::ceil(X * shrink * (1 - kEndpointSlack));
    const double m_hi = std::floor(2 * X * shrink * (1 + kEndpointSlack));
    CompensatedComplexSum rv;
    if (m_hi >= std::max(m_lo, 1.0)) {
        const auto first = static_cast<u64>(std::max(m_lo, 1.0));
        const auto last = static_cast<u64>(m_hi);
        const u64 count = last - first + 1;
        std::vector<cplx> values(count, cplx{1.0});
        std::vector<unsigned> omega(count, 0);
        sieve_progression(first, 1, count, table, [&](u64 i, u64 p, unsigned e) {
            values[i] *= f.at_prime_power(p, e);
            const auto pd = static_cast<double>(p);
            if (pd >= P && pd <= Q)
                ++omega[i];
        });
        for (u64 i = 0; i < count; ++i) {
            const u64 m = first + i;
            rv += values[i] * chi.eval_conj(static_cast<i64>(m)) * twist(m, t) / (1.0 + omega[i]);
        }
    }
    out.Rv = rv.value();
    return out;
}

RatioRecord mean_value_ratio(u64 q, u64 M, std::span<const cplx> coefficients, const PrimeTable &table)
{
    if (coefficients.empty())
        throw DomainError("mean_value_ratio requires N >= 1");
    const CharacterGroup group(q, table);
    const auto &g = group.structure();
    const double phi = static_cast<double>(g.phi());
    const auto N = static_cast<double>(coefficients.size());

    CompensatedSum lhs;
    for (u64 c = 0; c < group.size(); ++c) {
        const auto chi = group.at(c);
        CompensatedComplexSum s;
        for (std::size_t i = 0; i < coefficients.size(); ++i)
            s += coefficients[i] * chi(static_cast<i64>(M + 1 + i));
        lhs += std::norm(s.value());
    }

    CompensatedSum l2;
    std::vector<CompensatedComplexSum> classes(q);
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const u64 n = M + 1 + i;
        if (!g.is_unit(n % q))
            continue;
        l2 += std::norm(coefficients[i]);
        classes[n % q] += coefficients[i];
    }
    CompensatedSum identity;
    for (const u64 a : g.units())
        identity += std::norm(classes[a].value());

    RatioRecord r;
    r.lhs = lhs.value();
    r.rhs = (phi + phi / static_cast<double>(q) * N) * l2.value();
    r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
    r.identity = phi * identity.value();
    return r;
}

} // namespace progvar
