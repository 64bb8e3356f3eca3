#include "progvar/linnik.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace progvar {

namespace {

constexpr u64 kFirstBlock = 256;
constexpr u64 kMaxBlock = 100'000;

struct TermStats {
    unsigned big_omega = 0;
    unsigned omega = 0;
    bool squarefree = true;
};

bool holds(const TermStats &s, Predicate p)
{
    switch (p) {
    case Predicate::E3: return s.big_omega == 3;
    case Predicate::E3Distinct: return s.omega == 3 && s.squarefree;
    case Predicate::MobiusMinus: return s.squarefree && s.omega % 2 == 1;
    case Predicate::MobiusPlus: return s.squarefree && s.omega % 2 == 0;
    }
    return false;
}

std::vector<u64> coprime_residues(u64 q)
{
    std::vector<u64> out;
    if (q == 1)
        return {0};
    for (u64 a = 1; a < q; ++a)
        if (std::gcd(a, q) == 1)
            out.push_back(a);
    return out;
}

} // namespace

std::string to_string(Predicate p)
{
    switch (p) {
    case Predicate::E3: return "e3";
    case Predicate::E3Distinct: return "e3_distinct";
    case Predicate::MobiusMinus: return "mobius_minus";
    case Predicate::MobiusPlus: return "mobius_plus";
    }
    return "?";
}

Predicate predicate_from_string(const std::string &s)
{
    if (s == "e3")
        return Predicate::E3;
    if (s == "e3_distinct")
        return Predicate::E3Distinct;
    if (s == "mobius_minus" || s == "mobius")
        return Predicate::MobiusMinus;
    if (s == "mobius_plus")
        return Predicate::MobiusPlus;
    throw DomainError("unknown predicate '" + s + "'");
}

std::optional<u64> least_in_progression(u64 q, u64 a, Predicate predicate, u64 bound, const PrimeTable &table)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    if (std::gcd(a % q, q) != 1 && q != 1)
        throw DomainError("residue " + std::to_string(a) + " is not coprime to " + std::to_string(q));
    u64 first = a % q;
    if (first == 0)
        first = q;
    if (first > bound)
        return std::nullopt;
    table.require_covered(bound);

    const u64 terms = (bound - first) / q + 1;
    std::vector<TermStats> stats;
    u64 block = kFirstBlock;
    for (u64 start = 0; start < terms;) {
        const u64 len = std::min(block, terms - start);
        stats.assign(len, {});
        sieve_progression(first + start * q, q, len, table, [&](u64 i, u64, unsigned e) {
            stats[i].big_omega += e;
            stats[i].omega += 1;
            if (e > 1)
                stats[i].squarefree = false;
        });
        for (u64 i = 0; i < len; ++i)
            if (holds(stats[i], predicate))
                return first + (start + i) * q;
        start += len;
        block = std::min(block * 2, kMaxBlock);
    }
    return std::nullopt;
}

std::optional<u64> e3_least(u64 q, u64 a, u64 bound, const PrimeTable &table, bool distinct)
{
    return least_in_progression(q, a, distinct ? Predicate::E3Distinct : Predicate::E3, bound, table);
}

std::optional<u64> mobius_least(u64 q, u64 a, int sign, u64 bound, const PrimeTable &table)
{
    if (sign != 1 && sign != -1)
        throw DomainError("mobius_least sign must be +1 or -1");
    return least_in_progression(q, a, sign < 0 ? Predicate::MobiusMinus : Predicate::MobiusPlus, bound, table);
}

bool satisfies(u64 n, Predicate predicate, const PrimeTable &table)
{
    const auto f = factor(n, table);
    return holds({f.big_omega(), f.omega(), f.squarefree()}, predicate);
}

// ---------------------------------------------------------------------------

std::string ScanState::key(u64 q, u64 a, Predicate p)
{
    return std::to_string(q) + ":" + std::to_string(a) + ":" + to_string(p);
}

ScanState ScanState::load(const std::filesystem::path &path)
{
    ScanState state;
    std::ifstream in(path);
    if (!in)
        return state;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw DomainError("malformed scan state " + path.string() + ": " + e.what());
    }
    for (const auto &[k, v] : j.at("entries").items()) {
        if (v.is_string() && v.get<std::string>() == "pending")
            state.entries_[k] = std::nullopt;
        else if (v.is_number_unsigned())
            state.entries_[k] = Entry{v.get<u64>(), 0};
        else if (v.is_object())
            state.entries_[k] = Entry{std::nullopt, v.at("not_found_below").get<u64>()};
        else
            throw DomainError("malformed scan state entry '" + k + "'");
    }
    return state;
}

void ScanState::save(const std::filesystem::path &path) const
{
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (const auto &[k, v] : entries_) {
        if (!v)
            entries[k] = "pending";
        else if (v->found)
            entries[k] = *v->found;
        else
            entries[k] = {{"not_found_below", v->searched_to}};
    }
    nlohmann::ordered_json j;
    j["schema"] = "progvar-scan-state v1";
    j["entries"] = std::move(entries);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw CapacityError("cannot write scan state " + tmp);
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::optional<u64>> ScanState::lookup(u64 q, u64 a, Predicate p, u64 bound) const
{
    const auto it = entries_.find(key(q, a, p));
    if (it == entries_.end() || !it->second)
        return std::nullopt;
    const Entry &e = *it->second;
    if (e.found) {
        if (*e.found <= bound)
            return std::optional<u64>{*e.found};
        return std::optional<u64>{std::nullopt};
    }
    if (e.searched_to >= bound)
        return std::optional<u64>{std::nullopt};
    return std::nullopt;
}

void ScanState::record(u64 q, u64 a, Predicate p, std::optional<u64> found, u64 bound)
{
    entries_[key(q, a, p)] = Entry{found, found ? 0 : bound};
}

void ScanState::mark_pending(u64 q, u64 a, Predicate p)
{
    auto &slot = entries_[key(q, a, p)];
    (void)slot; // inserts nullopt when absent
}

LinnikScanResult linnik_scan(u64 q, Predicate predicate, u64 bound, const PrimeTable &table, ScanState *state,
                             unsigned workers)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    LinnikScanResult r;
    r.q = q;
    r.predicate = predicate;
    r.bound = bound;
    r.residues = coprime_residues(q);
    r.minima.assign(r.residues.size(), std::nullopt);

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < r.residues.size(); ++i) {
        if (state) {
            if (auto known = state->lookup(q, r.residues[i], predicate, bound)) {
                r.minima[i] = *known;
                continue;
            }
            state->mark_pending(q, r.residues[i], predicate);
        }
        todo.push_back(i);
    }
    parallel_for(todo.size(), workers, [&](std::size_t k) {
        const std::size_t i = todo[k];
        r.minima[i] = least_in_progression(q, r.residues[i], predicate, bound, table);
    });
    if (state)
        for (const std::size_t i : todo)
            state->record(q, r.residues[i], predicate, r.minima[i], bound);

    const bool complete = std::all_of(r.minima.begin(), r.minima.end(), [](const auto &m) { return m.has_value(); });
    if (complete) {
        u64 best = 0;
        for (const auto &m : r.minima)
            best = std::max(best, *m);
        r.max = best;
    }
    r.exponent = (r.max && q > 1) ? std::log(static_cast<double>(*r.max)) / std::log(static_cast<double>(q))
                                  : std::nan("");
    return r;
}

LinnikScanResult linnik_L3(u64 q, u64 bound, const PrimeTable &table, bool distinct)
{
    return linnik_scan(q, distinct ? Predicate::E3Distinct : Predicate::E3, bound, table);
}

LinnikScanResult linnik_Lmu(u64 q, u64 bound, const PrimeTable &table, int sign)
{
    return linnik_scan(q, sign < 0 ? Predicate::MobiusMinus : Predicate::MobiusPlus, bound, table);
}

double e3_star_logsum(u64 q, u64 a, double P1, double P2, double P3, double eps, const PrimeTable &table)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    if (q > 1 && std::gcd(a % q, q) != 1)
        throw DomainError("e3_star_logsum requires gcd(a, q) = 1");
    if (!(eps > 0) || !(eps < 1))
        throw DomainError("e3_star_logsum requires 0 < eps < 1");
    auto range = [&](double P) {
        if (!(P >= 2))
            throw DomainError("e3_star_logsum requires P_i >= 2");
        const double lo = std::ceil(std::pow(P, 1 - eps) - 1e-9);
        const double hi = std::floor(P + 1e-9);
        return table.primes_between(static_cast<u64>(std::max(lo, 2.0)), static_cast<u64>(hi));
    };
    const auto r1 = range(P1), r2 = range(P2), r3 = range(P3);
    table.require_covered(static_cast<u64>(P1 * P2 * P3));
    std::set<u64> hits;
    const u64 target = a % q;
    for (const u64 p1 : r1)
        for (const u64 p2 : r2)
            for (const u64 p3 : r3) {
                const u64 n = checked_mul(checked_mul(p1, p2), p3);
                if (n % q == target)
                    hits.insert(n);
            }
    CompensatedSum sum;
    for (const u64 n : hits)
        sum += 1.0 / static_cast<double>(n);
    return sum.value();
}

TernaryCoverage ternary_coverage(u64 q, const PrimeTable &table)
{
    if (q == 0)
        throw DomainError("modulus must be >= 1");
    TernaryCoverage cov;
    if (q == 1) {
        cov.covered = true;
        return cov;
    }
    if (q > table.limit())
        throw CapacityError("ternary_coverage needs primes up to q within the sieve limit");
    const auto primes = table.primes_between(2, q);
    const auto residues = coprime_residues(q);
    std::vector<char> seen(q, 0);
    std::size_t remaining = residues.size();
    for (std::size_t i = 0; i < primes.size() && remaining > 0; ++i)
        for (std::size_t j = i; j < primes.size() && remaining > 0; ++j) {
            const u64 pair = mulmod(primes[i], primes[j], q);
            for (std::size_t k = j; k < primes.size() && remaining > 0; ++k) {
                const u64 r = mulmod(pair, primes[k], q);
                if (!seen[r] && std::gcd(r, q) == 1) {
                    seen[r] = 1;
                    cov.witnesses[r] = {primes[i], primes[j], primes[k]};
                    --remaining;
                }
            }
        }
    for (const u64 a : residues)
        if (!seen[a])
            cov.missing.push_back(a);
    cov.covered = cov.missing.empty();
    return cov;
}

u64 least_qnr(u64 q, const PrimeTable &table)
{
    if (q < 3 || q % 2 == 0 || !table.is_prime(q))
        throw DomainError("least_qnr requires an odd prime modulus");
    for (u64 n = 2; n < q; ++n)
        if (powmod(n, (q - 1) / 2, q) == q - 1)
            return n;
    throw DomainError("no quadratic nonresidue found");
}

} // namespace progvar
