#pragma once

#include "progvar/arith.hpp"
#include "progvar/characters.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace progvar {

/// A 1-bounded multiplicative function given by its values at prime powers.
class MultiplicativeFunction {
public:
    using Rule = std::function<cplx(u64 prime, unsigned exponent)>;

    MultiplicativeFunction(std::string name, Rule rule, bool real_valued);

    const std::string &name() const { return name_; }
    bool real_valued() const { return real_valued_; }
    std::optional<double> smooth_bound() const { return smooth_bound_; }

    /// f(p^k), zero when p exceeds the smooth bound.
    cplx at_prime_power(u64 p, unsigned k) const;
    cplx at_prime(u64 p) const { return at_prime_power(p, 1); }
    cplx operator()(const PrimeFactorization &f) const;
    cplx evaluate(u64 n, const PrimeTable &table) const;

    /// g(p^k) = f(p^k) for p <= y, else 0.
    MultiplicativeFunction restrict_smooth(double y) const;

private:
    std::string name_;
    Rule rule_;
    bool real_valued_;
    std::optional<double> smooth_bound_;
};

namespace functions {

MultiplicativeFunction one();
MultiplicativeFunction mobius();
MultiplicativeFunction mobius_squared();
MultiplicativeFunction liouville();
/// [P^+(n) <= y]
MultiplicativeFunction smooth_indicator(double y);
MultiplicativeFunction character(const DirichletCharacter &chi);
/// n^{i t0}, completely multiplicative.
MultiplicativeFunction nit_twist(double t0);

} // namespace functions

/// Parses a descriptor such as "mobius", "smooth_indicator:1000",
/// "character:q=5,idx=2" or "nit_twist:0.5".
MultiplicativeFunction builtin(std::string_view descriptor, const PrimeTable &table);

/// f(lo), ..., f(hi) via one interval sieve pass.
std::vector<cplx> evaluate_range(const MultiplicativeFunction &f, u64 lo, u64 hi, const PrimeTable &table);

} // namespace progvar
