#pragma once

#include "progvar/characters.hpp"
#include "progvar/linnik.hpp"
#include "progvar/pretentious.hpp"
#include "progvar/spectrum.hpp"
#include "progvar/variance.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace progvar {

using Json = nlohmann::ordered_json;

inline constexpr const char *kCsvSchema = "# progvar-schema v1";

// Character descriptor: [q, [e_1, ..., e_k]]
Json character_descriptor(const DirichletCharacter &chi);
DirichletCharacter character_from_descriptor(const Json &j, const PrimeTable &table);

Json to_json(const VarianceReport &r);
VarianceReport variance_report_from_json(const Json &j);

Json to_json(const LinnikScanResult &r);
LinnikScanResult linnik_result_from_json(const Json &j);

Json to_json(const MainCharacterSelection &s);
MainCharacterSelection selection_from_json(const Json &j);

Json to_json(const SpectrumPoint &p);
SpectrumPoint spectrum_point_from_json(const Json &j);

Json to_json(const RatioRecord &r);
RatioRecord ratio_record_from_json(const Json &j);

Json to_json(const HybridResult &r);
HybridResult hybrid_result_from_json(const Json &j);

/// Comma-separated output with a schema comment line, an optional comment
/// line carrying run metadata (e.g. a timestamp), then a header row.
/// Numbers use the shortest round-trip form, independent of locale.
class CsvWriter {
public:
    CsvWriter(std::ostream &out, std::vector<std::string> columns, const std::string &comment = {});

    class Row {
    public:
        explicit Row(CsvWriter &w) : w_(w) {}
        Row &operator<<(double v);
        Row &operator<<(u64 v);
        Row &operator<<(i64 v);
        Row &operator<<(int v) { return *this << static_cast<i64>(v); }
        Row &operator<<(const std::string &v);
        Row &operator<<(const char *v) { return *this << std::string(v); }
        ~Row();

    private:
        void cell(const std::string &s);
        CsvWriter &w_;
        std::size_t cells_ = 0;
    };

    Row row() { return Row(*this); }

private:
    std::ostream &out_;
    std::size_t columns_;
};

} // namespace progvar
