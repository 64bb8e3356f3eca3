#pragma once

#include "progvar/characters.hpp"
#include "progvar/multfunc.hpp"
#include "progvar/pretentious.hpp"

#include <span>
#include <string>
#include <vector>

namespace progvar {

struct DeviationResult {
    /// Unit residues a mod q, increasing.
    std::vector<u64> residues;
    /// sum_{n <= x, n == a} f(n) - chi1(a)/phi(q) sum_{n <= x} f(n) conj(chi1)(n)
    std::vector<cplx> deviations;
    double max_deviation = 0.0;
};

struct VarianceReport {
    std::string f;
    u64 q = 1;
    double x = 0.0;
    u64 chi1_index = 0;
    /// How chi1 was chosen: "explicit", "distance" or "parseval".
    std::string chi1_mode = "explicit";
    std::vector<u64> residues;
    std::vector<cplx> deviations;
    double variance = 0.0;
    /// variance / (phi(q) (x/q)^2)
    double normalized = 0.0;
    double max_deviation = 0.0;
};

struct ParsevalResult {
    double lhs;
    double rhs;
};

struct HybridResult {
    /// Sampled integral divided by phi(q) X (h/q)^2.
    double normalized = 0.0;
    double integral = 0.0;
    u64 samples = 0;
    /// True when the Riemann sum is the exact integral (integer X, h, step 1).
    bool exact = false;
    /// Total-variation estimate of the sampling error in `integral`.
    double quadrature_bound = 0.0;
};

// The span overloads take values[n - 1] = f(n) for 1 <= n <= values.size().

DeviationResult deviation(std::span<const cplx> values, const CharacterGroup &group, u64 chi1);
DeviationResult deviation(const MultiplicativeFunction &f, u64 q, double x, u64 chi1, const PrimeTable &table);

VarianceReport variance(std::span<const cplx> values, const CharacterGroup &group, u64 chi1, std::string label,
                        double x);
VarianceReport variance(const MultiplicativeFunction &f, u64 q, double x, u64 chi1, const PrimeTable &table);

/// (1/phi) sum_{chi not in xi} |sum f conj(chi)|^2 against the class-sum form.
ParsevalResult parseval_check(std::span<const cplx> values, const CharacterGroup &group, std::span<const u64> xi);
ParsevalResult parseval_check(const MultiplicativeFunction &f, u64 q, double x, std::span<const u64> xi,
                              const PrimeTable &table);

/// Character index maximizing |sum_{n <= x} f(n) conj(chi)(n)|^2.
u64 parseval_optimal_character(std::span<const cplx> values, const CharacterGroup &group);

/// chi1 chosen by pretentious distance with |t| <= log x.
u64 distance_optimal_character(const MultiplicativeFunction &f, u64 q, double x, const PrimeTable &table,
                               const GridSpec &grid = {});

/// Short-interval variance in progressions for real-valued f, sampled at
/// x = X + k * sample_step.
HybridResult hybrid_variance(const MultiplicativeFunction &f, u64 q, double X, double h, u64 chi1,
                             u64 sample_step, const PrimeTable &table);

/// max over y >= Z of omega_{[y,2y]}(q) / (y / log y).
double delta_typicality(u64 q, double Z, const PrimeTable &table);

/// #{p | q : p <= z} <= pi(z)/100 for all z >= y.
bool is_y_typical(u64 q, double y, const PrimeTable &table);

} // namespace progvar
