#include "progvar/multfunc.hpp"

#include <charconv>
#include <cmath>
#include <memory>

namespace progvar {

MultiplicativeFunction::MultiplicativeFunction(std::string name, Rule rule, bool real_valued)
    : name_(std::move(name)), rule_(std::move(rule)), real_valued_(real_valued)
{
}

cplx MultiplicativeFunction::at_prime_power(u64 p, unsigned k) const
{
    if (k == 0)
        return 1.0;
    if (smooth_bound_ && static_cast<double>(p) > *smooth_bound_)
        return 0.0;
    return rule_(p, k);
}

cplx MultiplicativeFunction::operator()(const PrimeFactorization &f) const
{
    cplx value = 1.0;
    for (const auto &[p, k] : f.factors())
        value *= at_prime_power(p, k);
    return value;
}

cplx MultiplicativeFunction::evaluate(u64 n, const PrimeTable &table) const { return (*this)(factor(n, table)); }

MultiplicativeFunction MultiplicativeFunction::restrict_smooth(double y) const
{
    if (!(y >= 2))
        throw DomainError("restrict_smooth requires y >= 2");
    MultiplicativeFunction g = *this;
    g.smooth_bound_ = smooth_bound_ ? std::min(*smooth_bound_, y) : y;
    g.name_ = name_ + "|smooth<=" + format_number(y);
    return g;
}

namespace functions {

MultiplicativeFunction one()
{
    return {"one", [](u64, unsigned) { return cplx{1.0}; }, true};
}

MultiplicativeFunction mobius()
{
    return {"mobius", [](u64, unsigned k) { return cplx{k == 1 ? -1.0 : 0.0}; }, true};
}

MultiplicativeFunction mobius_squared()
{
    return {"mobius_squared", [](u64, unsigned k) { return cplx{k == 1 ? 1.0 : 0.0}; }, true};
}

MultiplicativeFunction liouville()
{
    return {"liouville", [](u64, unsigned k) { return cplx{k % 2 ? -1.0 : 1.0}; }, true};
}

MultiplicativeFunction smooth_indicator(double y)
{
    if (!(y >= 2))
        throw DomainError("smooth_indicator requires y >= 2");
    return {"smooth_indicator:" + format_number(y),
            [y](u64 p, unsigned) { return cplx{static_cast<double>(p) <= y ? 1.0 : 0.0}; }, true};
}

MultiplicativeFunction character(const DirichletCharacter &chi)
{
    auto shared = std::make_shared<const DirichletCharacter>(chi);
    const bool real = classify(chi).real;
    auto rule = [shared](u64 p, unsigned k) {
        const cplx v = (*shared)(static_cast<i64>(p % shared->modulus()));
        cplx r = 1.0;
        for (unsigned i = 0; i < k; ++i)
            r *= v;
        return r;
    };
    return {"character:q=" + std::to_string(chi.modulus()) + ",idx=" + std::to_string(chi.index()), rule, real};
}

MultiplicativeFunction nit_twist(double t0)
{
    auto rule = [t0](u64 p, unsigned k) {
        const double angle = t0 * static_cast<double>(k) * std::log(static_cast<double>(p));
        return cplx{std::cos(angle), std::sin(angle)};
    };
    return {"nit_twist:" + format_number(t0), rule, t0 == 0.0};
}

} // namespace functions

namespace {

double parse_double(std::string_view s, std::string_view what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used == s.size())
            return v;
    } catch (const std::exception &) {
    }
    throw DomainError("bad number '" + std::string(s) + "' in " + std::string(what));
}

u64 parse_u64(std::string_view s, std::string_view what)
{
    u64 v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DomainError("bad integer '" + std::string(s) + "' in " + std::string(what));
    return v;
}

} // namespace

MultiplicativeFunction builtin(std::string_view descriptor, const PrimeTable &table)
{
    const auto colon = descriptor.find(':');
    const std::string_view name = descriptor.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : descriptor.substr(colon + 1);

    if (name == "one")
        return functions::one();
    if (name == "mobius")
        return functions::mobius();
    if (name == "mobius_squared")
        return functions::mobius_squared();
    if (name == "liouville")
        return functions::liouville();
    if (name == "smooth_indicator")
        return functions::smooth_indicator(parse_double(args, descriptor));
    if (name == "nit_twist")
        return functions::nit_twist(parse_double(args, descriptor));
    if (name == "character") {
        std::optional<u64> q, idx;
        std::string_view rest = args;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw DomainError("bad character descriptor '" + std::string(descriptor) + "'");
            const auto key = item.substr(0, eq);
            const auto value = parse_u64(item.substr(eq + 1), descriptor);
            if (key == "q")
                q = value;
            else if (key == "idx")
                idx = value;
            else
                throw DomainError("unknown key '" + std::string(key) + "' in character descriptor");
        }
        if (!q || !idx)
            throw DomainError("character descriptor needs q= and idx=");
        return functions::character(characters(*q, table).at(*idx));
    }
    throw DomainError("unknown multiplicative function '" + std::string(descriptor) + "'");
}

constexpr u64 kMaxEvaluateRange = u64{1} << 28;

std::vector<cplx> evaluate_range(const MultiplicativeFunction &f, u64 lo, u64 hi, const PrimeTable &table)
{
    if (lo == 0 || lo > hi)
        throw DomainError("evaluate_range requires 1 <= lo <= hi");
    if (hi > table.coverage())
        throw CapacityError(std::to_string(hi) + " exceeds sieve coverage " + std::to_string(table.coverage()));
    if (hi - lo >= kMaxEvaluateRange)
        throw CapacityError("evaluate_range of " + std::to_string(hi - lo + 1) + " values exceeds the in-memory limit");
    std::vector<cplx> values(hi - lo + 1, cplx{1.0});
    sieve_progression(lo, 1, hi - lo + 1, table,
                      [&](u64 i, u64 p, unsigned e) { values[i] *= f.at_prime_power(p, e); });
    return values;
}

} // namespace progvar
