#include "cli.hpp"

#include "progvar/progvar.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace progvar::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::string format = "csv";
    std::string output;
    unsigned workers = 1;
};

struct GridOptions {
    std::optional<double> T;
    double grid_dt = 0.0;
    double refine_tol = 1e-4;

    GridSpec spec(unsigned workers) const { return GridSpec{grid_dt, refine_tol, workers}; }
};

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// key=value lines; '#' or ';' start a comment line; values may be quoted.
std::map<std::string, std::string> read_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        std::replace(key.begin(), key.end(), '_', '-');
        entries[key] = value;
    }
    return entries;
}

std::pair<u64, u64> parse_range(const std::string &s)
{
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos)
            throw UsageError("");
        const u64 lo = std::stoull(s.substr(0, colon));
        const u64 hi = std::stoull(s.substr(colon + 1));
        if (lo < 1 || lo > hi)
            throw UsageError("");
        return {lo, hi};
    } catch (const std::exception &) {
        throw UsageError("bad range '" + s + "', expected A:B with 1 <= A <= B");
    }
}

std::vector<double> parse_list(const std::string &s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const std::string t = trim(item);
            out.push_back(std::stod(t, &used));
            if (used != t.size())
                throw UsageError("");
        } catch (const std::exception &) {
            throw UsageError("bad number '" + item + "' in list '" + s + "'");
        }
    }
    return out;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Per-invocation state: lazily built prime table and the output sink.
class Context {
public:
    Context(std::ostream &out, std::string subcommand) : out_(out), subcommand_(std::move(subcommand)) {}

    const PrimeTable &table()
    {
        if (!table_)
            table_ = std::make_unique<PrimeTable>(PrimeTable::limit_from_environment());
        return *table_;
    }

    std::ostream &sink(const OutputOptions &o)
    {
        if (o.output.empty())
            return out_;
        file_.open(o.output);
        if (!file_)
            throw std::runtime_error("cannot open output file " + o.output);
        return file_;
    }

    std::string comment() const { return "progvar " + subcommand_ + " generated " + utc_timestamp(); }

    void emit_json(const OutputOptions &o, const Json &j)
    {
        auto &s = sink(o);
        s << j.dump(2) << '\n';
        finish(s);
    }

    void finish(std::ostream &s)
    {
        s.flush();
        if (!s)
            throw std::runtime_error("write failed");
    }

private:
    std::ostream &out_;
    std::string subcommand_;
    std::unique_ptr<PrimeTable> table_;
    std::ofstream file_;
};

using Handler = std::function<void(Context &)>;

void add_output_options(CLI::App *sub, OutputOptions &o)
{
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.output, "Output file (default: standard output)");
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
}

void add_grid_options(CLI::App *sub, GridOptions &g)
{
    sub->add_option("--T", g.T, "Twist range |t| <= T (default log x)")->check(CLI::NonNegativeNumber);
    sub->add_option("--grid-dt", g.grid_dt, "t-grid spacing (0: min(0.05, 1/log x))")->check(CLI::NonNegativeNumber);
    sub->add_option("--refine-tol", g.refine_tol, "Refinement tolerance in t")->check(CLI::PositiveNumber);
}

std::vector<u64> moduli(std::optional<u64> q, const std::string &range, bool primes_only, Context &ctx)
{
    if (q && !range.empty())
        throw UsageError("give either --q or --q-range, not both");
    std::vector<u64> out;
    if (q) {
        out.push_back(*q);
    } else if (!range.empty()) {
        const auto [lo, hi] = parse_range(range);
        for (u64 m = lo; m <= hi; ++m)
            out.push_back(m);
    } else {
        throw UsageError("--q or --q-range is required");
    }
    if (primes_only)
        std::erase_if(out, [&](u64 m) { return !ctx.table().is_prime(m); });
    return out;
}

struct Chi1Choice {
    u64 index;
    std::string mode;
};

Chi1Choice resolve_chi1(const std::string &spec, const MultiplicativeFunction &f, const CharacterGroup &group,
                        std::span<const cplx> values, double x, const GridOptions &grid, unsigned workers,
                        const PrimeTable &table)
{
    if (spec == "principal")
        return {0, "explicit"};
    if (spec == "parseval")
        return {parseval_optimal_character(values, group), "parseval"};
    if (spec == "auto")
        return {select_main_character(f, group.modulus(), x, grid.T, table, grid.spec(workers)).chi_index,
                "distance"};
    u64 index = 0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), index);
    if (ec != std::errc() || ptr != spec.data() + spec.size())
        throw UsageError("--chi1 must be principal, auto, parseval or a character index");
    if (index >= group.size())
        throw UsageError("--chi1 index " + spec + " out of range for " + std::to_string(group.size()) +
                         " characters");
    return {index, "explicit"};
}

Handler variance_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        GridOptions grid;
        std::string f = "mobius";
        std::optional<u64> q;
        std::string q_range;
        bool primes_only = false;
        double x = 0;
        std::string chi1 = "principal";
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("variance", "Variance of f in progressions mod q");
    sub->add_option("--f", o->f, "Function descriptor");
    sub->add_option("--q", o->q, "Modulus")->check(CLI::PositiveNumber);
    sub->add_option("--q-range", o->q_range, "Moduli A:B");
    sub->add_flag("--primes-only", o->primes_only, "Keep only prime moduli from --q-range");
    sub->add_option("--x", o->x, "Length x")->required()->check(CLI::Range(1.0, 1e12));
    sub->add_option("--chi1", o->chi1, "principal | auto | parseval | character index");
    add_output_options(sub, o->out);
    add_grid_options(sub, o->grid);
    return [o](Context &ctx) {
        const auto &table = ctx.table();
        const auto f = builtin(o->f, table);
        const auto values = evaluate_range(f, 1, static_cast<u64>(std::floor(o->x)), table);
        std::vector<VarianceReport> reports;
        for (const u64 q : moduli(o->q, o->q_range, o->primes_only, ctx)) {
            const CharacterGroup group(q, table);
            const auto chi1 = resolve_chi1(o->chi1, f, group, values, o->x, o->grid, o->out.workers, table);
            auto rep = variance(values, group, chi1.index, f.name(), o->x);
            rep.chi1_mode = chi1.mode;
            reports.push_back(std::move(rep));
        }
        if (o->out.format == "json") {
            if (reports.size() == 1 && o->q) {
                ctx.emit_json(o->out, to_json(reports.front()));
            } else {
                Json arr = Json::array();
                for (const auto &r : reports)
                    arr.push_back(to_json(r));
                ctx.emit_json(o->out, arr);
            }
            return;
        }
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s, {"q", "x", "f", "chi1_index", "chi1_mode", "variance", "normalized", "max_deviation"},
                          ctx.comment());
            for (const auto &r : reports)
                csv.row() << r.q << r.x << r.f << r.chi1_index << r.chi1_mode << r.variance << r.normalized
                          << r.max_deviation;
        }
        ctx.finish(s);
    };
}

Handler hybrid_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        GridOptions grid;
        std::string f = "mobius";
        u64 q = 1;
        double X = 0, h = 0;
        std::string chi1 = "principal";
        u64 step = 1;
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("hybrid", "Short-interval variance in progressions");
    sub->add_option("--f", o->f, "Real-valued function descriptor");
    sub->add_option("--q", o->q, "Modulus")->check(CLI::PositiveNumber);
    sub->add_option("--X", o->X, "Start of the x range [X, 2X]")->required()->check(CLI::PositiveNumber);
    sub->add_option("--h", o->h, "Interval length")->required()->check(CLI::PositiveNumber);
    sub->add_option("--chi1", o->chi1, "principal | auto | parseval | character index");
    sub->add_option("--step", o->step, "Sample spacing in x")->check(CLI::PositiveNumber);
    add_output_options(sub, o->out);
    add_grid_options(sub, o->grid);
    return [o](Context &ctx) {
        const auto &table = ctx.table();
        const auto f = builtin(o->f, table);
        const CharacterGroup group(o->q, table);
        const auto values = evaluate_range(f, 1, static_cast<u64>(std::floor(2 * o->X)), table);
        const auto chi1 = resolve_chi1(o->chi1, f, group, values, 2 * o->X, o->grid, o->out.workers, table);
        const auto r = hybrid_variance(f, o->q, o->X, o->h, chi1.index, o->step, table);
        if (o->out.format == "json") {
            Json j;
            j["q"] = o->q;
            j["X"] = o->X;
            j["h"] = o->h;
            j["f"] = f.name();
            j["chi1_index"] = chi1.index;
            j["chi1_mode"] = chi1.mode;
            j["step"] = o->step;
            j["result"] = to_json(r);
            ctx.emit_json(o->out, j);
            return;
        }
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s,
                          {"q", "X", "h", "f", "chi1_index", "chi1_mode", "step", "normalized", "integral", "samples",
                           "exact", "quadrature_bound"},
                          ctx.comment());
            csv.row() << o->q << o->X << o->h << f.name() << chi1.index << chi1.mode << o->step << r.normalized
                      << r.integral << r.samples << (r.exact ? "true" : "false") << r.quadrature_bound;
        }
        ctx.finish(s);
    };
}

std::vector<u64> parse_xi(const std::string &spec, const CharacterGroup &group)
{
    std::vector<u64> xi;
    if (spec == "none")
        return xi;
    if (spec == "all") {
        for (u64 c = 0; c < group.size(); ++c)
            xi.push_back(c);
        return xi;
    }
    if (spec == "principal")
        return {0};
    for (const double v : parse_list(spec)) {
        if (v < 0 || v != std::floor(v) || v >= static_cast<double>(group.size()))
            throw UsageError("character index " + format_number(v) + " in --xi out of range");
        xi.push_back(static_cast<u64>(v));
    }
    return xi;
}

Handler parseval_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        std::string f = "mobius";
        u64 q = 1;
        double x = 0;
        std::string xi = "principal";
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("parseval", "Character-side against class-side variance");
    sub->add_option("--f", o->f, "Function descriptor");
    sub->add_option("--q", o->q, "Modulus")->required()->check(CLI::PositiveNumber);
    sub->add_option("--x", o->x, "Length x")->required()->check(CLI::Range(1.0, 1e12));
    sub->add_option("--xi", o->xi, "Main-term characters: principal | all | none | i,j,...");
    add_output_options(sub, o->out);
    return [o](Context &ctx) {
        const auto &table = ctx.table();
        const auto f = builtin(o->f, table);
        const CharacterGroup group(o->q, table);
        const auto xi = parse_xi(o->xi, group);
        const auto values = evaluate_range(f, 1, static_cast<u64>(std::floor(o->x)), table);
        const auto r = parseval_check(values, group, xi);
        if (o->out.format == "json") {
            Json j;
            j["q"] = o->q;
            j["x"] = o->x;
            j["f"] = f.name();
            j["xi"] = xi;
            j["lhs"] = r.lhs;
            j["rhs"] = r.rhs;
            ctx.emit_json(o->out, j);
            return;
        }
        std::string joined;
        for (const u64 c : xi)
            joined += (joined.empty() ? "" : ";") + std::to_string(c);
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s, {"q", "x", "f", "xi", "lhs", "rhs"}, ctx.comment());
            csv.row() << o->q << o->x << f.name() << joined << r.lhs << r.rhs;
        }
        ctx.finish(s);
    };
}

Handler spectrum_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        std::string f = "one";
        u64 q = 1;
        double P = 0, delta = 1, eps = 0, T = 0;
        std::string t_grid;
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("spectrum", "Large values of prime character sums over (chi, t)");
    sub->add_option("--f", o->f, "Prime coefficients a_p = f(p)");
    sub->add_option("--q", o->q, "Modulus")->required()->check(CLI::PositiveNumber);
    sub->add_option("--P", o->P, "Prime range [P, (1 + delta) P]")->required()->check(CLI::Range(2.0, 1e13));
    sub->add_option("--delta", o->delta, "Relative range length")->check(CLI::PositiveNumber);
    sub->add_option("--eps", o->eps, "Threshold on (log P)/(delta P) |sum|")->check(CLI::NonNegativeNumber);
    sub->add_option("--T", o->T, "Integer grid -T..T with unit spacing")->check(CLI::NonNegativeNumber);
    sub->add_option("--t-grid", o->t_grid, "Explicit well-spaced grid t1,t2,...");
    add_output_options(sub, o->out);
    return [o](Context &ctx) {
        const auto &table = ctx.table();
        const auto f = builtin(o->f, table);
        std::vector<double> grid;
        if (!o->t_grid.empty()) {
            if (o->T != 0)
                throw UsageError("give either --T or --t-grid, not both");
            grid = parse_list(o->t_grid);
        } else {
            const auto K = static_cast<i64>(std::floor(o->T));
            for (i64 k = -K; k <= K; ++k)
                grid.push_back(static_cast<double>(k));
        }
        const auto census = large_value_census(o->q, grid, o->P, o->delta,
                                               [&f](u64 p) { return f.at_prime(p); }, o->eps, table);
        if (o->out.format == "json") {
            Json j;
            j["q"] = o->q;
            j["f"] = f.name();
            j["P"] = o->P;
            j["delta"] = o->delta;
            j["eps"] = o->eps;
            j["grid_size"] = grid.size();
            j["count"] = census.count;
            Json pts = Json::array();
            for (const auto &p : census.points)
                pts.push_back(to_json(p));
            j["points"] = std::move(pts);
            ctx.emit_json(o->out, j);
            return;
        }
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s, {"q", "chi_index", "t", "re", "im", "abs", "normalized"}, ctx.comment());
            for (const auto &p : census.points)
                csv.row() << p.q << p.chi_index << p.t << p.value.real() << p.value.imag() << std::abs(p.value)
                          << p.normalized;
        }
        ctx.finish(s);
    };
}

u64 integer_power_bound(u64 q, double exponent)
{
    const double b = std::pow(static_cast<double>(q), exponent);
    if (!(b < 1.8e19))
        throw CapacityError("bound q^" + format_number(exponent) + " overflows");
    return static_cast<u64>(std::llround(std::floor(b + 1e-6)));
}

Handler linnik_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        std::optional<u64> q;
        std::string q_range;
        bool primes_only = false;
        std::string predicate = "e3";
        double bound_exponent = 3;
        std::optional<u64> bound;
        std::string resume;
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("linnik", "Least elements of a predicate in every coprime class");
    sub->add_option("--q", o->q, "Modulus")->check(CLI::PositiveNumber);
    sub->add_option("--q-range", o->q_range, "Moduli A:B");
    sub->add_flag("--primes-only", o->primes_only, "Keep only prime moduli from --q-range");
    sub->add_option("--predicate", o->predicate, "e3 | e3_distinct | mobius_minus | mobius_plus");
    sub->add_option("--bound-exponent", o->bound_exponent, "Search bound q^k")->check(CLI::PositiveNumber);
    sub->add_option("--bound", o->bound, "Absolute search bound (overrides --bound-exponent)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--resume", o->resume, "JSON scan state to resume from and update");
    add_output_options(sub, o->out);
    return [o](Context &ctx) {
        Predicate predicate{};
        try {
            predicate = predicate_from_string(o->predicate);
        } catch (const DomainError &e) {
            throw UsageError(e.what());
        }
        const auto &table = ctx.table();
        const auto qs = moduli(o->q, o->q_range, o->primes_only, ctx);
        ScanState state;
        if (!o->resume.empty() && std::filesystem::exists(o->resume)) {
            try {
                state = ScanState::load(o->resume);
            } catch (const std::exception &e) {
                throw std::runtime_error("cannot resume from " + o->resume + ": " + e.what());
            }
        }
        std::vector<LinnikScanResult> results;
        for (const u64 q : qs) {
            const u64 bound = o->bound ? *o->bound : integer_power_bound(q, o->bound_exponent);
            results.push_back(linnik_scan(q, predicate, bound, table, o->resume.empty() ? nullptr : &state,
                                          o->out.workers));
            if (!o->resume.empty())
                state.save(o->resume);
        }
        if (o->out.format == "json") {
            Json arr = Json::array();
            for (const auto &r : results)
                arr.push_back(to_json(r));
            ctx.emit_json(o->out, arr);
            return;
        }
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s, {"q", "a", "n", "exponent"}, ctx.comment() + " predicate=" + o->predicate);
            for (const auto &r : results)
                for (std::size_t i = 0; i < r.residues.size(); ++i) {
                    auto row = csv.row();
                    row << r.q << r.residues[i];
                    if (r.minima[i]) {
                        const double e = r.q > 1 ? std::log(static_cast<double>(*r.minima[i])) /
                                                       std::log(static_cast<double>(r.q))
                                                 : std::nan("");
                        row << *r.minima[i] << e;
                    } else {
                        row << "none" << std::nan("");
                    }
                }
        }
        ctx.finish(s);
    };
}

Handler smooth_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        double X1 = 0, X = 0, Y = 0;
        u64 q = 1;
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("smooth", "Counts and reciprocal sums of Y-smooth numbers coprime to q");
    sub->add_option("--X", o->X, "Upper end X2")->required()->check(CLI::Range(1.0, 1e13));
    sub->add_option("--X1", o->X1, "Lower end (exclusive)")->check(CLI::NonNegativeNumber);
    sub->add_option("--Y", o->Y, "Smoothness bound")->required()->check(CLI::Range(2.0, 1e13));
    sub->add_option("--q", o->q, "Modulus")->check(CLI::PositiveNumber);
    add_output_options(sub, o->out);
    return [o](Context &ctx) {
        if (o->X1 >= o->X)
            throw UsageError("--X1 must be below --X");
        const auto &table = ctx.table();
        const u64 count = psi_q_between(o->X1, o->X, o->Y, o->q, table);
        // n = 1 is smooth and coprime to q
        const double recip = o->X1 >= 1 ? smooth_recip_sum(o->X1, o->X, o->Y, o->q, table)
                                        : 1.0 + (o->X > 1 ? smooth_recip_sum(1, o->X, o->Y, o->q, table) : 0.0);
        const double u = std::log(o->X) / std::log(o->Y);
        const double rho = u <= DickmanTable::kDefaultUMax ? dickman(u) : std::nan("");
        if (o->out.format == "json") {
            Json j;
            j["X1"] = o->X1;
            j["X2"] = o->X;
            j["Y"] = o->Y;
            j["q"] = o->q;
            j["count"] = count;
            j["recip_sum"] = recip;
            j["u"] = u;
            j["rho_u"] = std::isnan(rho) ? Json(nullptr) : Json(rho);
            ctx.emit_json(o->out, j);
            return;
        }
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s, {"X1", "X2", "Y", "q", "count", "recip_sum", "u", "rho_u"}, ctx.comment());
            csv.row() << o->X1 << o->X << o->Y << o->q << count << recip << u << rho;
        }
        ctx.finish(s);
    };
}

Handler dickman_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        double u_max = 10;
        double step = 0.01;
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("dickman-table", "Tabulate the Dickman function");
    sub->add_option("--u-max", o->u_max, "Largest u")->check(CLI::Range(0.0, DickmanTable::kDefaultUMax));
    sub->add_option("--step", o->step, "Output spacing in u")->check(CLI::Range(1e-3, 10.0));
    add_output_options(sub, o->out);
    return [o](Context &ctx) {
        const auto n = static_cast<u64>(std::floor(o->u_max / o->step + 1e-9));
        std::vector<std::pair<double, double>> rows;
        for (u64 k = 0; k <= n; ++k) {
            const double u = static_cast<double>(k) * o->step;
            rows.emplace_back(u, dickman(u));
        }
        if (o->out.format == "json") {
            Json arr = Json::array();
            for (const auto &[u, rho] : rows)
                arr.push_back(Json{{"u", u}, {"rho", rho}});
            ctx.emit_json(o->out, arr);
            return;
        }
        auto &s = ctx.sink(o->out);
        {
            CsvWriter csv(s, {"u", "rho"}, ctx.comment());
            for (const auto &[u, rho] : rows)
                csv.row() << u << rho;
        }
        ctx.finish(s);
    };
}

Handler character_command(CLI::App &app)
{
    struct Opts {
        OutputOptions out;
        u64 q = 1;
        std::optional<u64> index;
    };
    auto o = std::make_shared<Opts>();
    auto *sub = app.add_subcommand("character", "List Dirichlet characters mod q, or the values of one");
    sub->add_option("--q", o->q, "Modulus")->required()->check(CLI::PositiveNumber);
    sub->add_option("--index", o->index, "Print the value table of this character");
    add_output_options(sub, o->out);
    return [o](Context &ctx) {
        const CharacterGroup group(o->q, ctx.table());
        if (o->index && *o->index >= group.size())
            throw UsageError("--index out of range for " + std::to_string(group.size()) + " characters");
        const bool json = o->out.format == "json";
        if (o->index) {
            const auto chi = group.at(*o->index);
            if (json) {
                Json j;
                j["q"] = o->q;
                j["index"] = *o->index;
                j["descriptor"] = character_descriptor(chi);
                Json vals = Json::array();
                for (u64 n = 0; n < o->q; ++n) {
                    const cplx v = chi(static_cast<i64>(n));
                    vals.push_back(Json::array({v.real(), v.imag()}));
                }
                j["values"] = std::move(vals);
                ctx.emit_json(o->out, j);
                return;
            }
            auto &s = ctx.sink(o->out);
            {
                CsvWriter csv(s, {"q", "index", "n", "re", "im"}, ctx.comment());
                for (u64 n = 0; n < o->q; ++n) {
                    const cplx v = chi(static_cast<i64>(n));
                    csv.row() << o->q << *o->index << n << v.real() << v.imag();
                }
            }
            ctx.finish(s);
            return;
        }
        Json arr = Json::array();
        std::ostringstream body;
        {
            auto &s = json ? body : ctx.sink(o->out);
            std::optional<CsvWriter> csv;
            if (!json)
                csv.emplace(s, std::vector<std::string>{"q", "index", "exponents", "conductor", "principal", "real",
                                                        "primitive", "parity"},
                            ctx.comment());
            for (u64 c = 0; c < group.size(); ++c) {
                const auto chi = group.at(c);
                const auto flags = classify(chi);
                const u64 cond = conductor(chi);
                if (json) {
                    Json j;
                    j["index"] = c;
                    j["descriptor"] = character_descriptor(chi);
                    j["conductor"] = cond;
                    j["principal"] = flags.principal;
                    j["real"] = flags.real;
                    j["primitive"] = flags.primitive;
                    j["parity"] = flags.parity;
                    arr.push_back(std::move(j));
                    continue;
                }
                std::string exps;
                for (const auto e : chi.exponents())
                    exps += (exps.empty() ? "" : ";") + std::to_string(e);
                csv->row() << o->q << c << exps << cond << (flags.principal ? "true" : "false")
                           << (flags.real ? "true" : "false") << (flags.primitive ? "true" : "false") << flags.parity;
            }
            if (!json)
                ctx.finish(s);
        }
        if (json)
            ctx.emit_json(o->out, Json{{"q", o->q}, {"characters", std::move(arr)}});
    };
}

// Locates the subcommand name in args (first token naming one).
std::string find_subcommand(const std::vector<std::string> &args, const CLI::App &app)
{
    for (const auto &a : args)
        for (const auto *sub : app.get_subcommands([](const CLI::App *) { return true; }))
            if (sub->get_name() == a)
                return a;
    return {};
}

std::optional<std::string> find_config_path(const std::vector<std::string> &args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0)
            return args[i].substr(9);
    }
    return std::nullopt;
}

} // namespace

int run(const std::vector<std::string> &args_in, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Statistics of multiplicative functions in arithmetic progressions", "progvar"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; command-line flags take precedence");

    std::map<std::string, Handler> handlers{
        {"variance", variance_command(app)}, {"hybrid", hybrid_command(app)},
        {"parseval", parseval_command(app)}, {"spectrum", spectrum_command(app)},
        {"linnik", linnik_command(app)},     {"smooth", smooth_command(app)},
        {"dickman-table", dickman_command(app)}, {"character", character_command(app)},
    };
    // a --config given after the subcommand belongs to the top-level app
    for (auto *sub : app.get_subcommands([](const CLI::App *) { return true; }))
        sub->fallthrough();

    std::vector<std::string> args = args_in;
    try {
        if (const auto path = find_config_path(args)) {
            auto entries = read_config(*path);
            std::string name = find_subcommand(args, app);
            if (name.empty()) {
                if (const auto it = entries.find("subcommand"); it != entries.end()) {
                    name = it->second;
                    args.insert(args.begin(), name);
                }
            }
            entries.erase("subcommand");
            if (!name.empty() && handlers.count(name)) {
                auto *sub = app.get_subcommand(name);
                for (const auto &[key, value] : entries) {
                    auto *opt = sub->get_option_no_throw("--" + key);
                    if (!opt)
                        throw UsageError("unknown config key '" + key + "' for " + name);
                    opt->default_val(value);
                    opt->required(false);
                }
            }
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError &e) {
        err << "progvar: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        // conversion failures while applying config defaults
        err << "progvar: " << e.what() << '\n';
        return kExitUsage;
    }

    const auto chosen = app.get_subcommands();
    const std::string name = chosen.front()->get_name();
    Context ctx(out, name);
    try {
        handlers.at(name)(ctx);
    } catch (const UsageError &e) {
        err << "progvar " << name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError &e) {
        err << "progvar " << name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "progvar " << name << ": " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

} // namespace progvar::cli
