#include "progvar/smooth.hpp"

#include <cmath>

namespace progvar {

DickmanTable::DickmanTable(double u_max, double step) : step_(step), u_max_(u_max)
{
    if (!(step > 0) || !(step <= 0.5))
        throw DomainError("Dickman step must lie in (0, 0.5]");
    if (!(u_max >= 1))
        throw DomainError("Dickman u_max must be >= 1");
    per_unit_ = static_cast<std::size_t>(std::llround(1.0 / step));
    if (std::abs(static_cast<double>(per_unit_) * step - 1.0) > 1e-12)
        throw DomainError("Dickman step must divide 1");
    const auto n = static_cast<std::size_t>(std::ceil(u_max / step - 1e-9));
    values_.assign(n + 1, 1.0);
    // (1, 2]: rho(u) = 1 - int_1^u dt/t; trapezoid in rho(t - 1) against the exact weight 1/t
    for (std::size_t k = per_unit_ + 1; k <= std::min(n, 2 * per_unit_); ++k) {
        const double ta = static_cast<double>(k - 1) * step;
        const double tb = static_cast<double>(k) * step;
        const double ra = values_[k - 1 - per_unit_];
        const double rb = values_[k - per_unit_];
        const double slope = (rb - ra) / step;
        const double integral = (ra - slope * ta) * std::log(tb / ta) + slope * step;
        values_[k] = values_[k - 1] - integral;
    }
    // u > 2: u rho(u) = int_{u-1}^u rho(t) dt, trapezoid solved for rho(u); every term is positive
    for (std::size_t k = 2 * per_unit_ + 1; k <= n; ++k) {
        double interior = 0.0;
        for (std::size_t j = k - per_unit_ + 1; j < k; ++j)
            interior += values_[j];
        const double u = static_cast<double>(k) * step;
        values_[k] = step * (0.5 * values_[k - per_unit_] + interior) / (u - 0.5 * step);
    }
}

double DickmanTable::operator()(double u) const
{
    if (u < 0)
        throw DomainError("Dickman rho is defined for u >= 0");
    if (u > u_max_ + 1e-12)
        throw CapacityError("u = " + format_number(u) + " beyond Dickman table u_max = " + format_number(u_max_));
    if (u <= 1)
        return 1.0;
    const auto k = std::min(static_cast<std::size_t>(std::floor(u / step_)), values_.size() - 1);
    const double ta = static_cast<double>(k) * step_;
    if (u - ta <= 0 || k + 1 >= values_.size())
        return values_[k];
    // log-linear between neighbouring grid values
    const double w = (u - ta) / step_;
    return values_[k] * std::pow(values_[k + 1] / values_[k], w);
}

double dickman(double u)
{
    static const DickmanTable table;
    return table(u);
}

namespace {

constexpr u64 kCountBlock = u64{1} << 20;

// Calls accept(n) for every n in [lo, hi] with P^+(n) <= Y and (n, q) = 1.
template <class Accept>
void for_each_smooth_coprime(u64 lo, u64 hi, double Y, u64 q, const PrimeTable &table, Accept &&accept)
{
    if (lo > hi)
        return;
    table.require_covered(hi);
    std::vector<unsigned char> rejected;
    for (u64 start = lo; start <= hi; start += kCountBlock) {
        const u64 len = std::min(kCountBlock, hi - start + 1);
        rejected.assign(len, 0);
        sieve_progression(start, 1, len, table, [&](u64 i, u64 p, unsigned) {
            if (static_cast<double>(p) > Y || q % p == 0)
                rejected[i] = 1;
        });
        for (u64 i = 0; i < len; ++i)
            if (!rejected[i])
                accept(start + i);
        if (hi - start < kCountBlock)
            break;
    }
}

u64 floor_nonneg(double v) { return v < 1 ? 0 : static_cast<u64>(std::floor(v)); }

} // namespace

u64 psi_q_between(double X1, double X2, double Y, u64 q, const PrimeTable &table)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    if (X1 > X2)
        throw DomainError("psi_q_between requires X1 <= X2");
    u64 count = 0;
    for_each_smooth_coprime(floor_nonneg(X1) + 1, floor_nonneg(X2), Y, q, table, [&](u64) { ++count; });
    return count;
}

u64 psi_q(double X, double Y, u64 q, const PrimeTable &table) { return psi_q_between(0, X, Y, q, table); }

double smooth_recip_sum(double X1, double X2, double Y, u64 q, const PrimeTable &table)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    if (X1 > X2)
        throw DomainError("smooth_recip_sum requires X1 <= X2");
    CompensatedSum sum;
    for_each_smooth_coprime(floor_nonneg(X1) + 1, floor_nonneg(X2), Y, q, table,
                            [&](u64 n) { sum += 1.0 / static_cast<double>(n); });
    return sum.value();
}

CanonicalSplit canonical_factorization(u64 n, double x, const PrimeTable &table)
{
    if (!(x >= 4))
        throw DomainError("canonical_factorization requires x >= 4");
    const auto nd = static_cast<double>(n);
    if (n == 0 || nd * nd < x || nd > x)
        throw DomainError("canonical_factorization requires x^{1/2} <= n <= x");
    const auto f = factor(n, table);
    // d * d < x  <=>  d < x^{1/2}
    u64 d = 1;
    for (const auto &[p, k] : f.factors())
        for (unsigned e = 0; e < k; ++e) {
            const double next = static_cast<double>(d) * static_cast<double>(p);
            if (next * next >= x)
                return {d, n / d};
            d *= p;
        }
    return {d, n / d}; // unreachable: the full product n satisfies n^2 >= x
}

ThetaLadder theta_ladder(double eta, double eps)
{
    if (!(eta > 0) || !(eta <= 0.1))
        throw DomainError("theta_ladder requires 0 < eta <= 1/10");
    if (!(eps > 0))
        throw DomainError("theta_ladder requires eps > 0");
    if (eps > 0.2)
        throw DomainError("theta_ladder requires eps <= 0.2 (J degenerates for larger eps)");
    ThetaLadder ladder;
    ladder.eta = eta;
    ladder.eps = eps;
    ladder.J = static_cast<u64>(std::ceil(std::log(std::log(1.0 / eps)) / (eps * eps)));
    ladder.thetas.resize(ladder.J + 2);
    const double ratio = 1.0 - eps * eps;
    for (u64 j = 0; j < ladder.thetas.size(); ++j)
        ladder.thetas[j] = eta * std::pow(ratio, static_cast<double>(j));
    ladder.H = static_cast<u64>(std::floor(std::pow(eps, -1.1)));
    return ladder;
}

std::optional<u64> sj_membership(u64 n, double x, const ThetaLadder &ladder, const PrimeTable &table)
{
    const auto [d, m] = canonical_factorization(n, x, table);
    const auto pm = static_cast<double>(factor(m, table).smallest_prime());
    const auto pd = static_cast<double>(factor(d, table).largest_prime());
    for (u64 j = 0; j <= ladder.J; ++j) {
        const double upper = std::pow(x, ladder.thetas[j]);
        const double lower = std::pow(x, ladder.thetas[j + 1]);
        if (!(pm > lower && pm <= upper))
            continue;
        if (pd <= lower && static_cast<double>(d) > std::pow(x, 0.5 - ladder.thetas[j + 1]))
            return j;
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace progvar
