#include "progvar/report.hpp"

#include <cmath>
#include <limits>

namespace progvar {

namespace {

Json number_or_null(double v)
{
    if (std::isnan(v))
        return nullptr;
    return v;
}

double number_or_nan(const Json &j)
{
    if (j.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx complex_from(const Json &j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

} // namespace

Json character_descriptor(const DirichletCharacter &chi)
{
    Json exps = Json::array();
    for (const auto e : chi.exponents())
        exps.push_back(e);
    return Json::array({chi.modulus(), exps});
}

DirichletCharacter character_from_descriptor(const Json &j, const PrimeTable &table)
{
    if (!j.is_array() || j.size() != 2 || !j.at(1).is_array())
        throw DomainError("character descriptor must be [q, [exponents...]]");
    const CharacterGroup group(j.at(0).get<u64>(), table);
    const auto exps = j.at(1).get<std::vector<std::uint32_t>>();
    return group.from_exponents(exps);
}

Json to_json(const VarianceReport &r)
{
    Json j;
    j["q"] = r.q;
    j["x"] = r.x;
    j["f"] = r.f;
    j["chi1_index"] = r.chi1_index;
    j["chi1_mode"] = r.chi1_mode;
    j["variance"] = r.variance;
    j["normalized"] = r.normalized;
    j["max_deviation"] = r.max_deviation;
    Json devs = Json::array();
    for (std::size_t i = 0; i < r.residues.size(); ++i)
        devs.push_back(Json{{"a", r.residues[i]}, {"deviation", complex_json(r.deviations[i])}});
    j["deviations"] = std::move(devs);
    return j;
}

VarianceReport variance_report_from_json(const Json &j)
{
    VarianceReport r;
    r.q = j.at("q").get<u64>();
    r.x = j.at("x").get<double>();
    r.f = j.at("f").get<std::string>();
    r.chi1_index = j.at("chi1_index").get<u64>();
    r.chi1_mode = j.value("chi1_mode", std::string("explicit"));
    r.variance = j.at("variance").get<double>();
    r.normalized = j.at("normalized").get<double>();
    r.max_deviation = j.at("max_deviation").get<double>();
    if (j.contains("deviations"))
        for (const auto &d : j.at("deviations")) {
            r.residues.push_back(d.at("a").get<u64>());
            r.deviations.push_back(complex_from(d.at("deviation")));
        }
    return r;
}

Json to_json(const LinnikScanResult &r)
{
    Json j;
    j["q"] = r.q;
    j["predicate"] = to_string(r.predicate);
    j["bound"] = r.bound;
    j["max"] = r.max ? Json(*r.max) : Json(nullptr);
    j["exponent"] = number_or_null(r.exponent);
    Json classes = Json::array();
    for (std::size_t i = 0; i < r.residues.size(); ++i)
        classes.push_back(
            Json{{"a", r.residues[i]}, {"n", r.minima[i] ? Json(*r.minima[i]) : Json("not found below bound")}});
    j["classes"] = std::move(classes);
    return j;
}

LinnikScanResult linnik_result_from_json(const Json &j)
{
    LinnikScanResult r;
    r.q = j.at("q").get<u64>();
    r.predicate = predicate_from_string(j.at("predicate").get<std::string>());
    r.bound = j.at("bound").get<u64>();
    if (!j.at("max").is_null())
        r.max = j.at("max").get<u64>();
    r.exponent = number_or_nan(j.at("exponent"));
    for (const auto &c : j.at("classes")) {
        r.residues.push_back(c.at("a").get<u64>());
        const auto &n = c.at("n");
        r.minima.push_back(n.is_number() ? std::optional<u64>(n.get<u64>()) : std::nullopt);
    }
    return r;
}

Json to_json(const MainCharacterSelection &s)
{
    Json j;
    j["q"] = s.modulus;
    j["x"] = s.x;
    j["T"] = s.T;
    j["chi_index"] = s.chi_index;
    j["t_star"] = s.t_star;
    j["distance_sq"] = s.distance_sq;
    Json trace = Json::array();
    for (const auto &g : s.trace)
        trace.push_back(Json::array({g.t, g.distance_sq}));
    j["trace"] = std::move(trace);
    return j;
}

MainCharacterSelection selection_from_json(const Json &j)
{
    MainCharacterSelection s;
    s.modulus = j.at("q").get<u64>();
    s.x = j.at("x").get<double>();
    s.T = j.at("T").get<double>();
    s.chi_index = j.at("chi_index").get<u64>();
    s.t_star = j.at("t_star").get<double>();
    s.distance_sq = j.at("distance_sq").get<double>();
    for (const auto &g : j.at("trace"))
        s.trace.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
    return s;
}

Json to_json(const SpectrumPoint &p)
{
    Json j;
    j["q"] = p.q;
    j["chi_index"] = p.chi_index;
    j["t"] = p.t;
    j["re"] = p.value.real();
    j["im"] = p.value.imag();
    j["abs"] = std::abs(p.value);
    j["normalized"] = p.normalized;
    return j;
}

SpectrumPoint spectrum_point_from_json(const Json &j)
{
    SpectrumPoint p;
    p.q = j.at("q").get<u64>();
    p.chi_index = j.at("chi_index").get<u64>();
    p.t = j.at("t").get<double>();
    p.value = {j.at("re").get<double>(), j.at("im").get<double>()};
    p.normalized = j.at("normalized").get<double>();
    return p;
}

Json to_json(const RatioRecord &r)
{
    return Json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"identity", r.identity}};
}

RatioRecord ratio_record_from_json(const Json &j)
{
    return {j.at("lhs").get<double>(), j.at("rhs").get<double>(), j.at("ratio").get<double>(),
            j.at("identity").get<double>()};
}

Json to_json(const HybridResult &r)
{
    return Json{{"normalized", r.normalized},
                {"integral", r.integral},
                {"samples", r.samples},
                {"exact", r.exact},
                {"quadrature_bound", r.quadrature_bound}};
}

HybridResult hybrid_result_from_json(const Json &j)
{
    HybridResult r;
    r.normalized = j.at("normalized").get<double>();
    r.integral = j.at("integral").get<double>();
    r.samples = j.at("samples").get<u64>();
    r.exact = j.at("exact").get<bool>();
    r.quadrature_bound = j.at("quadrature_bound").get<double>();
    return r;
}

CsvWriter::CsvWriter(std::ostream &out, std::vector<std::string> columns, const std::string &comment)
    : out_(out), columns_(columns.size())
{
    out_ << kCsvSchema << '\n';
    if (!comment.empty())
        out_ << "# " << comment << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::Row::cell(const std::string &s)
{
    if (cells_++)
        w_.out_ << ',';
    w_.out_ << s;
}

CsvWriter::Row &CsvWriter::Row::operator<<(double v)
{
    cell(std::isnan(v) ? std::string("nan") : format_number(v));
    return *this;
}

CsvWriter::Row &CsvWriter::Row::operator<<(u64 v)
{
    cell(std::to_string(v));
    return *this;
}

CsvWriter::Row &CsvWriter::Row::operator<<(i64 v)
{
    cell(std::to_string(v));
    return *this;
}

CsvWriter::Row &CsvWriter::Row::operator<<(const std::string &v)
{
    if (v.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (const char c : v) {
            if (c == '"')
                quoted += '"';
            quoted += c;
        }
        cell(quoted + "\"");
    } else {
        cell(v);
    }
    return *this;
}

CsvWriter::Row::~Row() { w_.out_ << '\n'; }

} // namespace progvar
