#include "progvar/characters.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

namespace progvar {

namespace {

u64 ipow(u64 base, unsigned exp)
{
    u64 r = 1;
    for (unsigned k = 0; k < exp; ++k)
        r = checked_mul(r, base);
    return r;
}

// Inverse of a modulo m, gcd(a, m) = 1.
u64 inverse_mod(u64 a, u64 m)
{
    i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 quot = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
    }
    return reduce(old_s, m);
}

// Residue mod q that is `local` mod prime_power and 1 mod q / prime_power.
u64 crt_lift(u64 local, u64 prime_power, u64 q)
{
    const u64 rest = q / prime_power;
    if (rest == 1)
        return local % q;
    // x = local + prime_power * t, with x == 1 (mod rest)
    const u64 need = reduce(static_cast<i64>(1) - static_cast<i64>(local % rest), rest);
    const u64 t = mulmod(need, inverse_mod(prime_power % rest, rest), rest);
    return (local + mulmod(prime_power, t, q)) % q;
}

u64 smallest_primitive_root(u64 p, unsigned k, const PrimeTable &table)
{
    const u64 pk = ipow(p, k);
    const u64 phi = pk / p * (p - 1);
    std::vector<u64> ell = prime_divisors(p - 1, table);
    if (k > 1)
        ell.push_back(p);
    for (u64 g = 2; g < pk; ++g) {
        if (g % p == 0)
            continue;
        bool full_order = true;
        for (const u64 l : ell)
            if (powmod(g, phi / l, pk) == 1) {
                full_order = false;
                break;
            }
        if (full_order)
            return g;
    }
    throw DomainError("no primitive root mod " + std::to_string(pk));
}

} // namespace

cplx root_of_unity(u64 k, u64 order)
{
    k %= order;
    if ((4 * k) % order == 0) {
        switch (4 * k / order) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order);
    return {std::cos(angle), std::sin(angle)};
}

UnitGroupStructure::UnitGroupStructure(u64 q, const PrimeTable &table, u64 budget) : q_(q)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    const auto fq = factor(q, table);
    phi_ = euler_phi(fq);
    if (phi_ > budget)
        throw CapacityError("phi(" + std::to_string(q) + ") = " + std::to_string(phi_) +
                            " exceeds character enumeration budget " + std::to_string(budget));
    modulus_factors_.assign(fq.factors().begin(), fq.factors().end());

    for (const auto &[p, k] : fq.factors()) {
        const u64 pk = ipow(p, k);
        if (p == 2) {
            if (k == 2) {
                components_.push_back({crt_lift(3, pk, q), 2, pk});
            } else if (k >= 3) {
                components_.push_back({crt_lift(pk - 1, pk, q), 2, pk});
                components_.push_back({crt_lift(3, pk, q), pk / 4, pk});
            }
        } else {
            const u64 g = smallest_primitive_root(p, k, table);
            components_.push_back({crt_lift(g, pk, q), pk / p * (p - 1), pk});
        }
    }
    for (const auto &c : components_)
        exponent_ = std::lcm(exponent_, c.order);

    const std::size_t r = components_.size();
    logs_.assign(q_ * r, 0);
    unit_.assign(q_, 0);

    // Odometer over exponent vectors; residue maintained incrementally.
    std::vector<std::uint32_t> e(r, 0);
    u64 residue = 1 % q_;
    for (u64 count = 0; count < phi_; ++count) {
        if (unit_[residue])
            throw DomainError("generator decomposition is not injective mod " + std::to_string(q));
        unit_[residue] = 1;
        std::copy(e.begin(), e.end(), logs_.begin() + static_cast<std::ptrdiff_t>(residue * r));
        for (std::size_t j = r; j-- > 0;) {
            if (++e[j] < components_[j].order) {
                residue = mulmod(residue, components_[j].generator, q_);
                break;
            }
            // g^(order-1) -> g^0: multiply by g since g^order = 1
            e[j] = 0;
            residue = mulmod(residue, components_[j].generator, q_);
        }
    }
    for (u64 a = 0; a < q_; ++a)
        if (unit_[a])
            units_.push_back(a);
}

std::span<const std::uint32_t> UnitGroupStructure::log(u64 residue) const
{
    residue %= q_;
    if (!unit_[residue])
        throw DomainError("residue " + std::to_string(residue) + " is not a unit mod " + std::to_string(q_));
    const std::size_t r = components_.size();
    return {logs_.data() + residue * r, r};
}

u64 UnitGroupStructure::residue_of(std::span<const std::uint32_t> exponents) const
{
    if (exponents.size() != components_.size())
        throw DomainError("exponent vector length mismatch");
    u64 residue = 1 % q_;
    for (std::size_t j = 0; j < exponents.size(); ++j)
        residue = mulmod(residue, powmod(components_[j].generator, exponents[j], q_), q_);
    return residue;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group,
                                       std::vector<std::uint32_t> exponents, u64 index)
    : group_(std::move(group)), exponents_(std::move(exponents)), index_(index)
{
    const auto &g = *group_;
    const auto comps = g.components();
    if (exponents_.size() != comps.size())
        throw DomainError("exponent vector length mismatch");
    const u64 L = g.exponent();
    std::vector<u64> weight(comps.size());
    for (std::size_t j = 0; j < comps.size(); ++j) {
        exponents_[j] = static_cast<std::uint32_t>(exponents_[j] % comps[j].order);
        weight[j] = exponents_[j] * (L / comps[j].order) % L;
    }
    const u64 q = g.modulus();
    phases_.assign(q, kNoPhase);
    values_.assign(q, cplx{0.0, 0.0});
    for (const u64 a : g.units()) {
        const auto lg = g.log(a);
        u64 phase = 0;
        for (std::size_t j = 0; j < comps.size(); ++j)
            phase = (phase + mulmod(weight[j], lg[j], L)) % L;
        phases_[a] = static_cast<std::uint32_t>(phase);
        values_[a] = root_of_unity(phase, L);
    }
}

bool DirichletCharacter::is_principal() const
{
    return std::all_of(exponents_.begin(), exponents_.end(), [](std::uint32_t e) { return e == 0; });
}

CharacterGroup::CharacterGroup(u64 q, const PrimeTable &table, u64 budget)
    : group_(std::make_shared<const UnitGroupStructure>(q, table, budget))
{
}

DirichletCharacter CharacterGroup::at(u64 index) const
{
    if (index >= size())
        throw DomainError("character index " + std::to_string(index) + " out of range mod " +
                          std::to_string(modulus()));
    const auto comps = group_->components();
    std::vector<std::uint32_t> e(comps.size());
    u64 rest = index;
    for (std::size_t j = comps.size(); j-- > 0;) {
        e[j] = static_cast<std::uint32_t>(rest % comps[j].order);
        rest /= comps[j].order;
    }
    return DirichletCharacter(group_, std::move(e), index);
}

u64 CharacterGroup::index_of(std::span<const std::uint32_t> exponents) const
{
    const auto comps = group_->components();
    if (exponents.size() != comps.size())
        throw DomainError("exponent vector length mismatch");
    u64 index = 0;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        if (exponents[j] >= comps[j].order)
            throw DomainError("exponent " + std::to_string(exponents[j]) + " out of range for component of order " +
                              std::to_string(comps[j].order));
        index = index * comps[j].order + exponents[j];
    }
    return index;
}

DirichletCharacter CharacterGroup::from_exponents(std::span<const std::uint32_t> exponents) const
{
    return at(index_of(exponents));
}

std::vector<DirichletCharacter> CharacterGroup::all() const
{
    std::vector<DirichletCharacter> out;
    out.reserve(size());
    for (u64 i = 0; i < size(); ++i)
        out.push_back(at(i));
    return out;
}

CharacterGroup characters(u64 q, const PrimeTable &table) { return CharacterGroup(q, table); }

u64 conductor(const DirichletCharacter &chi)
{
    const u64 q = chi.modulus();
    if (chi.is_principal())
        return 1;
    // chi is induced from modulus d iff chi(n) = 1 whenever n == 1 (mod d), (n, q) = 1.
    std::vector<u64> divisors{1};
    for (const auto &[p, k] : chi.group().modulus_factors()) {
        const std::size_t prev = divisors.size();
        u64 pk = 1;
        for (unsigned e = 1; e <= k; ++e) {
            pk *= p;
            for (std::size_t i = 0; i < prev; ++i)
                divisors.push_back(divisors[i] * pk);
        }
    }
    std::sort(divisors.begin(), divisors.end());
    for (const u64 d : divisors) {
        bool induced = true;
        for (u64 n = 1; n <= q && induced; n += d) {
            const auto ph = chi.phase(static_cast<i64>(n));
            if (ph != DirichletCharacter::kNoPhase && ph != 0)
                induced = false;
        }
        if (induced)
            return d;
    }
    return q;
}

CharacterFlags classify(const DirichletCharacter &chi)
{
    CharacterFlags flags{};
    flags.principal = chi.is_principal();
    const u64 L = chi.group().exponent();
    flags.real = true;
    for (const u64 a : chi.group().units())
        if ((2 * static_cast<u64>(chi.phase(static_cast<i64>(a)))) % L != 0) {
            flags.real = false;
            break;
        }
    flags.primitive = conductor(chi) == chi.modulus();
    flags.parity = chi(-1).real() > 0 ? 1 : -1;
    return flags;
}

DirichletCharacter legendre_character(const CharacterGroup &group)
{
    const u64 q = group.modulus();
    if (q < 3 || group.structure().components().size() != 1 || group.size() != q - 1)
        throw DomainError("legendre_character requires an odd prime modulus");
    std::vector<std::uint32_t> e{static_cast<std::uint32_t>((q - 1) / 2)};
    return group.from_exponents(e);
}

} // namespace progvar
