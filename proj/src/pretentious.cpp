#include "progvar/pretentious.hpp"

#include <cmath>
#include <numeric>

namespace progvar {

namespace {

constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::abs(a)); }

// Ordering among candidates: value, then |t|, then negative t first.
bool better_t(double value, double t, double best_value, double best_t)
{
    if (!nearly_equal(value, best_value))
        return value < best_value;
    if (std::abs(t) != std::abs(best_t))
        return std::abs(t) < std::abs(best_t);
    return t < best_t;
}

std::vector<u64> primes_up_to(double x, const PrimeTable &table)
{
    if (!(x >= 2))
        throw DomainError("prime sums require x >= 2");
    const auto hi = static_cast<u64>(std::floor(x));
    if (hi > table.limit())
        throw CapacityError("prime sum up to " + format_number(x) + " exceeds sieve limit");
    return table.primes_between(2, hi);
}

template <class Eval>
double golden_section(double lo, double hi, double tol, Eval &&eval, double &best_value)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }
    const double t = fc <= fd ? c : d;
    best_value = std::min(fc, fd);
    return t;
}

} // namespace

double GridSpec::spacing(double x) const
{
    if (dt > 0)
        return dt;
    return std::min(0.05, 1.0 / std::log(x));
}

double distance_sq(const MultiplicativeFunction &f, const MultiplicativeFunction &g, double x, u64 q,
                   const PrimeTable &table)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    CompensatedSum sum;
    for (const u64 p : primes_up_to(x, table)) {
        if (q % p == 0)
            continue;
        sum += (1.0 - (f.at_prime(p) * std::conj(g.at_prime(p))).real()) / static_cast<double>(p);
    }
    return std::max(0.0, sum.value());
}

double distance_sq_range(const MultiplicativeFunction &f, const MultiplicativeFunction &g, double y, double x,
                         const PrimeTable &table)
{
    if (y > x)
        throw DomainError("distance_sq_range requires y <= x");
    if (!(y >= 2))
        throw DomainError("distance_sq_range requires y >= 2");
    CompensatedSum sum;
    for (const u64 p : primes_up_to(x, table)) {
        if (static_cast<double>(p) <= y)
            continue;
        sum += (1.0 - (f.at_prime(p) * std::conj(g.at_prime(p))).real()) / static_cast<double>(p);
    }
    return std::max(0.0, sum.value());
}

TwistedDistance::TwistedDistance(const MultiplicativeFunction &f, double x, u64 q, const PrimeTable &table)
    : x_(x), q_(q)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    CompensatedSum base;
    for (const u64 p : primes_up_to(x, table)) {
        if (q % p == 0)
            continue;
        const double inv = 1.0 / static_cast<double>(p);
        residues_.push_back(p % q);
        weights_.push_back(f.at_prime(p) * inv);
        logs_.push_back(std::log(static_cast<double>(p)));
        inverses_.push_back(inv);
        base += inv;
    }
    base_ = base.value();
}

double TwistedDistance::at(const DirichletCharacter *chi, double t) const
{
    if (chi && chi->modulus() != q_)
        throw DomainError("character modulus does not match distance modulus");
    CompensatedSum sum;
    for (std::size_t i = 0; i < residues_.size(); ++i) {
        cplx w = weights_[i] * std::polar(1.0, -t * logs_[i]);
        if (chi)
            w *= std::conj((*chi)(static_cast<i64>(residues_[i])));
        sum += inverses_[i] - w.real();
    }
    return std::max(0.0, sum.value());
}

void TwistedDistance::class_sums(double t, std::span<const u64> units, std::vector<cplx> &out) const
{
    // units are sorted; locate each prime's class by binary search once per call.
    std::vector<CompensatedComplexSum> acc(units.size());
    for (std::size_t i = 0; i < residues_.size(); ++i) {
        const auto it = std::lower_bound(units.begin(), units.end(), residues_[i]);
        acc[static_cast<std::size_t>(it - units.begin())] += weights_[i] * std::polar(1.0, -t * logs_[i]);
    }
    out.resize(units.size());
    for (std::size_t u = 0; u < units.size(); ++u)
        out[u] = acc[u].value();
}

std::vector<double> twist_grid(double T, double dt)
{
    if (T < 0)
        throw DomainError("twist range T must be >= 0");
    if (!(dt > 0))
        throw DomainError("grid spacing must be positive");
    const auto K = static_cast<i64>(std::floor(T / dt + 1e-12));
    std::vector<double> grid;
    if (T > static_cast<double>(K) * dt + 1e-12)
        grid.push_back(-T);
    for (i64 k = -K; k <= K; ++k)
        grid.push_back(static_cast<double>(k) * dt);
    if (T > static_cast<double>(K) * dt + 1e-12)
        grid.push_back(T);
    return grid;
}

namespace {

struct CharacterOptimum {
    double value;
    double t;
};

// Best grid point followed by golden-section refinement over its neighbours.
template <class Eval>
CharacterOptimum optimize_over_grid(std::span<const double> grid, std::span<const double> values, double tol,
                                    Eval &&eval)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (better_t(values[k], grid[k], values[best], grid[best]))
            best = k;
    CharacterOptimum opt{values[best], grid[best]};
    if (grid.size() < 2)
        return opt;
    const double lo = grid[best > 0 ? best - 1 : best];
    const double hi = grid[best + 1 < grid.size() ? best + 1 : best];
    double refined_value = 0.0;
    const double refined_t = golden_section(lo, hi, tol, eval, refined_value);
    if (refined_value < opt.value && !nearly_equal(refined_value, opt.value))
        opt = {refined_value, refined_t};
    return opt;
}

} // namespace

HalaszResult halasz_M(const MultiplicativeFunction &f, double x, double T, u64 q, const PrimeTable &table,
                      const GridSpec &grid_spec)
{
    const TwistedDistance dist(f, x, q, table);
    const auto grid = twist_grid(T, grid_spec.spacing(x));
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), grid_spec.workers, [&](std::size_t k) { values[k] = dist.at(nullptr, grid[k]); });
    const auto opt = optimize_over_grid(grid, values, grid_spec.refine_tol,
                                        [&](double t) { return dist.at(nullptr, t); });
    return {opt.value, opt.t};
}

MainCharacterSelection select_main_character(const MultiplicativeFunction &f, u64 q, double x,
                                             std::optional<double> T, const PrimeTable &table,
                                             const GridSpec &grid_spec)
{
    const CharacterGroup group(q, table);
    const TwistedDistance dist(f, x, q, table);
    const double range = T.value_or(std::log(x));
    const auto grid = twist_grid(range, grid_spec.spacing(x));
    const auto units = group.structure().units();
    const std::size_t nu = units.size();

    // class_sums[k * nu + u]: sum over p == units[u] of f(p) p^{-i t_k} / p
    std::vector<cplx> sums(grid.size() * nu);
    parallel_for(grid.size(), grid_spec.workers, [&](std::size_t k) {
        std::vector<cplx> row;
        dist.class_sums(grid[k], units, row);
        std::copy(row.begin(), row.end(), sums.begin() + static_cast<std::ptrdiff_t>(k * nu));
    });

    auto grid_values = [&](const DirichletCharacter &chi) {
        std::vector<cplx> conj_values(nu);
        for (std::size_t u = 0; u < nu; ++u)
            conj_values[u] = std::conj(chi(static_cast<i64>(units[u])));
        std::vector<double> values(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CompensatedSum s;
            s += dist.reciprocal_sum();
            for (std::size_t u = 0; u < nu; ++u)
                s += -(conj_values[u] * sums[k * nu + u]).real();
            values[k] = std::max(0.0, s.value());
        }
        return values;
    };

    std::vector<CharacterOptimum> optima(group.size());
    parallel_for(group.size(), grid_spec.workers, [&](std::size_t c) {
        const auto chi = group.at(c);
        const auto values = grid_values(chi);
        optima[c] = optimize_over_grid(grid, values, grid_spec.refine_tol,
                                       [&](double t) { return dist.at(&chi, t); });
    });

    std::size_t best = 0;
    for (std::size_t c = 1; c < optima.size(); ++c) {
        const auto &a = optima[c];
        const auto &b = optima[best];
        if (!nearly_equal(a.value, b.value) ? a.value < b.value : false)
            best = c;
    }

    MainCharacterSelection sel;
    sel.modulus = q;
    sel.chi_index = best;
    sel.t_star = optima[best].t;
    sel.x = x;
    sel.T = range;
    const auto chi = group.at(best);
    sel.distance_sq = dist.at(&chi, sel.t_star);
    const auto values = grid_values(chi);
    sel.trace.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        sel.trace.push_back({grid[k], values[k]});
    return sel;
}

} // namespace progvar
