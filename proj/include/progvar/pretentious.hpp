#pragma once

#include "progvar/characters.hpp"
#include "progvar/multfunc.hpp"

#include <optional>
#include <vector>

namespace progvar {

/// t-grid resolution for the twist minimizations.
struct GridSpec {
    /// Grid spacing; 0 selects min(0.05, 1 / log x).
    double dt = 0.0;
    /// Golden-section tolerance in t on the best grid cell.
    double refine_tol = 1e-4;
    unsigned workers = 1;

    double spacing(double x) const;
};

struct GridPoint {
    double t;
    double distance_sq;
};

struct HalaszResult {
    double M;
    double t_min;
};

struct MainCharacterSelection {
    u64 modulus = 1;
    u64 chi_index = 0;
    double t_star = 0.0;
    double distance_sq = 0.0;
    double x = 0.0;
    double T = 0.0;
    /// Grid values of the selected character.
    std::vector<GridPoint> trace;
};

/// sum over p <= x, p not dividing q, of (1 - Re f(p) conj(g(p))) / p.
double distance_sq(const MultiplicativeFunction &f, const MultiplicativeFunction &g, double x, u64 q,
                   const PrimeTable &table);

/// Same sum restricted to primes y < p <= x.
double distance_sq_range(const MultiplicativeFunction &f, const MultiplicativeFunction &g, double y, double x,
                         const PrimeTable &table);

/// Prime data for repeated evaluation of D_q(f, chi(n) n^{it}; x)^2.
class TwistedDistance {
public:
    TwistedDistance(const MultiplicativeFunction &f, double x, u64 q, const PrimeTable &table);

    double x() const { return x_; }
    u64 modulus() const { return q_; }

    /// Direct compensated prime sum; chi == nullptr means the trivial character.
    double at(const DirichletCharacter *chi, double t) const;

    /// For each unit residue a (in UnitGroupStructure::units() order),
    /// sum over p == a of f(p) p^{-it} / p.
    void class_sums(double t, std::span<const u64> units, std::vector<cplx> &out) const;

    double reciprocal_sum() const { return base_; }

private:
    double x_;
    u64 q_;
    std::vector<u64> residues_;
    std::vector<cplx> weights_; // f(p) / p
    std::vector<double> logs_;
    std::vector<double> inverses_;
    double base_;
};

/// Symmetric grid k*dt, |k| <= T/dt, with +-T appended when off-grid.
std::vector<double> twist_grid(double T, double dt);

/// inf over |t| <= T of D_q(f, n^{it}; x)^2 and its location.
HalaszResult halasz_M(const MultiplicativeFunction &f, double x, double T, u64 q, const PrimeTable &table,
                      const GridSpec &grid = {});

/// The pair (chi, t) minimizing D_q(f, chi(n) n^{it}; x) over all characters
/// mod q and |t| <= T (T defaults to log x). Ties go to the smaller
/// character index, then smaller |t|, then negative t.
MainCharacterSelection select_main_character(const MultiplicativeFunction &f, u64 q, double x,
                                             std::optional<double> T, const PrimeTable &table,
                                             const GridSpec &grid = {});

} // namespace progvar
