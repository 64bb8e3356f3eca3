#pragma once

#include "progvar/arith.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace progvar {

enum class Predicate {
    E3,          // Omega(n) = 3, primes counted with multiplicity
    E3Distinct,  // n = p1 p2 p3 with distinct primes
    MobiusMinus, // mu(n) = -1
    MobiusPlus,  // mu(n) = +1
};

std::string to_string(Predicate p);
Predicate predicate_from_string(const std::string &s);

/// Least n <= bound, n == a (mod q), satisfying the predicate, scanning the
/// progression a, a + q, ... in sieved blocks.
std::optional<u64> least_in_progression(u64 q, u64 a, Predicate predicate, u64 bound, const PrimeTable &table);

std::optional<u64> e3_least(u64 q, u64 a, u64 bound, const PrimeTable &table, bool distinct = false);
std::optional<u64> mobius_least(u64 q, u64 a, int sign, u64 bound, const PrimeTable &table);

/// Reverifies a recorded witness by factorization.
bool satisfies(u64 n, Predicate predicate, const PrimeTable &table);

struct LinnikScanResult {
    u64 q = 1;
    Predicate predicate = Predicate::E3;
    u64 bound = 0;
    std::vector<u64> residues;
    /// nullopt: not found below bound
    std::vector<std::optional<u64>> minima;
    /// Max of minima, present only when every class was found.
    std::optional<u64> max;
    /// log(max) / log(q); NaN when undefined.
    double exponent = 0.0;
};

/// Resumable per-class results keyed by (q, a, predicate), persisted as JSON.
class ScanState {
public:
    ScanState() = default;
    static ScanState load(const std::filesystem::path &path);
    void save(const std::filesystem::path &path) const;

    struct Entry {
        std::optional<u64> found;
        u64 searched_to = 0; // bound used when nothing was found
    };

    /// Known result for this class that is valid at `bound`.
    std::optional<std::optional<u64>> lookup(u64 q, u64 a, Predicate p, u64 bound) const;
    void record(u64 q, u64 a, Predicate p, std::optional<u64> found, u64 bound);
    void mark_pending(u64 q, u64 a, Predicate p);
    std::size_t size() const { return entries_.size(); }

private:
    static std::string key(u64 q, u64 a, Predicate p);
    std::map<std::string, std::optional<Entry>> entries_; // nullopt = pending
};

LinnikScanResult linnik_scan(u64 q, Predicate predicate, u64 bound, const PrimeTable &table,
                             ScanState *state = nullptr, unsigned workers = 1);
LinnikScanResult linnik_L3(u64 q, u64 bound, const PrimeTable &table, bool distinct = false);
LinnikScanResult linnik_Lmu(u64 q, u64 bound, const PrimeTable &table, int sign = -1);

/// sum of 1/n over the set {p1 p2 p3 : p_i in [P_i^{1-eps}, P_i]}, n == a (mod q).
double e3_star_logsum(u64 q, u64 a, double P1, double P2, double P3, double eps, const PrimeTable &table);

struct TernaryCoverage {
    bool covered = false;
    /// lexicographically least p1 <= p2 <= p3 <= q per class
    std::map<u64, std::array<u64, 3>> witnesses;
    std::vector<u64> missing;
};

TernaryCoverage ternary_coverage(u64 q, const PrimeTable &table);

/// Least quadratic nonresidue mod an odd prime.
u64 least_qnr(u64 q, const PrimeTable &table);

} // namespace progvar
