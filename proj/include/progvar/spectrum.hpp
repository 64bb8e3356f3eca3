#pragma once

#include "progvar/characters.hpp"
#include "progvar/multfunc.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace progvar {

struct SpectrumPoint {
    u64 q = 1;
    u64 chi_index = 0;
    double t = 0.0;
    cplx value{};
    /// Value after the scan's normalization (e.g. (log P)/(delta P) |value|).
    double normalized = 0.0;
};

struct RatioRecord {
    double lhs = 0.0;
    double rhs = 0.0;
    /// lhs / rhs, or 0 when rhs = 0.
    double ratio = 0.0;
    /// phi(q) sum*_a |sum_{n == a} a_n|^2, equal to lhs.
    double identity = 0.0;
};

/// Prime-indexed coefficients a_p with |a_p| <= 1.
using PrimeCoefficients = std::function<cplx(u64)>;

inline cplx unit_coefficients(u64) { return 1.0; }

/// sum over primes P <= p <= (1 + delta) P of a_p conj(chi)(p) p^{-it}.
cplx prime_char_sum(const DirichletCharacter &chi, double t, double P, double delta, const PrimeCoefficients &a,
                    const PrimeTable &table);

/// sum over primes P <= p <= P^{1 + eps_exp} of chi(p) p^{-(1 + it)}.
cplx log_prime_char_sum(const DirichletCharacter &chi, double t, double P, double eps_exp,
                        const PrimeTable &table);

/// Throws DomainError unless the points are pairwise >= 1 apart (or the grid is {0}).
void validate_well_spaced(std::span<const double> t_grid);

struct Census {
    u64 count = 0;
    std::vector<SpectrumPoint> points;
};

/// All (chi, t) with (log P)/(delta P) |prime_char_sum| >= eps, ordered by
/// character index then grid position.
Census large_value_census(u64 q, std::span<const double> t_grid, double P, double delta,
                          const PrimeCoefficients &a, double eps, const PrimeTable &table);

/// max over chi != exclude, t, y of |(1/y) sum_{n <= y} f(n) conj(chi)(n) n^{-it}|.
double sup_norm_scan(const MultiplicativeFunction &f, u64 q, std::span<const double> y_grid,
                     std::span<const double> t_grid, std::optional<u64> exclude, const PrimeTable &table);

/// 1 / (1 + omega_{[P,Q]}(n))
double ramare_weight(u64 n, double P, double Q, const PrimeTable &table);
Rational ramare_weight_exact(u64 n, double P, double Q, const PrimeTable &table);

struct RamareCheck {
    /// sum over primes p in [P, Q], p | n, of 1 / (1 + omega_{[P,Q]}(n/p))
    Rational sum;
    /// 1 when omega_{[P,Q]}(n) >= 1 and no p^2 | n for p in [P, Q]; else sum.
    Rational expected;
};

RamareCheck ramare_identity_check(u64 n, double P, double Q, const PrimeTable &table);

struct DecompositionSums {
    cplx Qv;
    cplx Rv;
};

/// Q_{v,H} and R_{v,H} of the Ramare-type bilinear decomposition.
DecompositionSums decomposition_sums(const MultiplicativeFunction &f, const DirichletCharacter &chi, double t,
                                     double X, double P, double Q, u64 H, i64 v, const PrimeTable &table);

/// Character mean value of coefficients[i] = a_{M + 1 + i}.
RatioRecord mean_value_ratio(u64 q, u64 M, std::span<const cplx> coefficients, const PrimeTable &table);

} // namespace progvar
