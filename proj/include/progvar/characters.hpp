#pragma once

#include "progvar/arith.hpp"

#include <memory>
#include <span>
#include <vector>

namespace progvar {

/// One cyclic factor of (Z/q)^x: a residue mod q generating the local
/// factor at `prime_power` and congruent to 1 modulo the rest of q.
struct GroupComponent {
    u64 generator;
    u64 order;
    u64 prime_power;
};

/// CRT decomposition of (Z/q)^x with a full discrete-log table.
class UnitGroupStructure {
public:
    static constexpr u64 kDefaultBudget = 1'000'000;

    UnitGroupStructure(u64 q, const PrimeTable &table, u64 budget = kDefaultBudget);

    u64 modulus() const { return q_; }
    u64 phi() const { return phi_; }
    /// Exponent of the group: lcm of the component orders.
    u64 exponent() const { return exponent_; }
    std::span<const GroupComponent> components() const { return components_; }
    std::span<const PrimePower> modulus_factors() const { return modulus_factors_; }

    bool is_unit(u64 residue) const { return unit_[residue % q_] != 0; }
    /// Exponent vector of a unit residue against the generators.
    std::span<const std::uint32_t> log(u64 residue) const;
    /// Product of generator powers, reduced mod q.
    u64 residue_of(std::span<const std::uint32_t> exponents) const;
    /// Unit residues in increasing order.
    std::span<const u64> units() const { return units_; }

private:
    u64 q_;
    u64 phi_ = 1;
    u64 exponent_ = 1;
    std::vector<GroupComponent> components_;
    std::vector<PrimePower> modulus_factors_;
    std::vector<std::uint32_t> logs_; // q_ * components_.size()
    std::vector<unsigned char> unit_;
    std::vector<u64> units_;
};

struct CharacterFlags {
    bool principal;
    bool real;
    bool primitive;
    int parity; // chi(-1)
};

class DirichletCharacter {
public:
    /// Sentinel phase for residues sharing a factor with q.
    static constexpr std::uint32_t kNoPhase = std::numeric_limits<std::uint32_t>::max();

    DirichletCharacter(std::shared_ptr<const UnitGroupStructure> group, std::vector<std::uint32_t> exponents,
                       u64 index);

    u64 modulus() const { return group_->modulus(); }
    u64 index() const { return index_; }
    std::span<const std::uint32_t> exponents() const { return exponents_; }
    const UnitGroupStructure &group() const { return *group_; }

    cplx operator()(i64 n) const { return values_[reduce(n, modulus())]; }
    cplx eval(i64 n) const { return (*this)(n); }
    cplx eval_conj(i64 n) const { return std::conj((*this)(n)); }
    /// chi(n) = exp(2 pi i phase(n) / group().exponent()), or kNoPhase.
    std::uint32_t phase(i64 n) const { return phases_[reduce(n, modulus())]; }
    std::span<const cplx> values() const { return values_; }

    bool is_principal() const;

private:
    std::shared_ptr<const UnitGroupStructure> group_;
    std::vector<std::uint32_t> exponents_;
    u64 index_;
    std::vector<std::uint32_t> phases_;
    std::vector<cplx> values_;
};

/// All phi(q) characters mod q. Index 0 is principal; indices follow the
/// lexicographic order of exponent vectors (first component most
/// significant). Characters are built on demand.
class CharacterGroup {
public:
    CharacterGroup(u64 q, const PrimeTable &table, u64 budget = UnitGroupStructure::kDefaultBudget);

    u64 modulus() const { return group_->modulus(); }
    u64 size() const { return group_->phi(); }
    const UnitGroupStructure &structure() const { return *group_; }

    DirichletCharacter at(u64 index) const;
    DirichletCharacter from_exponents(std::span<const std::uint32_t> exponents) const;
    u64 index_of(std::span<const std::uint32_t> exponents) const;
    std::vector<DirichletCharacter> all() const;

private:
    std::shared_ptr<const UnitGroupStructure> group_;
};

CharacterGroup characters(u64 q, const PrimeTable &table);

/// Root of unity exp(2 pi i k / order), exact for multiples of 1/4.
cplx root_of_unity(u64 k, u64 order);

u64 conductor(const DirichletCharacter &chi);
CharacterFlags classify(const DirichletCharacter &chi);

/// The unique real non-principal character mod an odd prime.
DirichletCharacter legendre_character(const CharacterGroup &group);

} // namespace progvar
