#include "shadow/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "shadow/errors.hpp"

namespace shadow {

namespace {

constexpr std::string_view kHeader =
    "region_code,region_name,district_code,indicator_id,period,value,unit";
constexpr std::size_t kColumns = 7;

struct SourceRow {
    std::size_t row = 0;
    IndicatorObservation observation;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// RFC 4180 fields on a single physical line. Embedded newlines are not
// supported; an unterminated quote is a parse error.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool field_was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            if (!trim(current).empty()) {
                throw ParseError(fmt::format("row {}: stray quote inside unquoted field", row));
            }
            current.clear();
            quoted = true;
            field_was_quoted = true;
        } else if (c == ',') {
            fields.push_back(field_was_quoted ? current : std::string(trim(current)));
            current.clear();
            field_was_quoted = false;
        } else {
            current.push_back(c);
        }
    }
    if (quoted) throw ParseError(fmt::format("row {}: unterminated quoted field", row));
    fields.push_back(field_was_quoted ? current : std::string(trim(current)));
    return fields;
}

bool looks_like_comma_decimal(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find('.') != std::string_view::npos) {
        return false;
    }
    auto digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) != 0;
        });
    };
    std::string_view whole = text.substr(0, comma);
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    return digits(whole) && digits(text.substr(comma + 1));
}

double parse_value(std::string_view text, std::size_t row) {
    text = trim(text);
    if (looks_like_comma_decimal(text)) {
        throw ParseError(fmt::format(
            "row {}: value '{}' uses a comma decimal separator; use '.' instead", row, text));
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ptr != end ||
        (ec != std::errc() && ec != std::errc::result_out_of_range)) {
        throw ParseError(fmt::format("row {}: value '{}' is not a decimal number", row, text));
    }
    if (ec == std::errc::result_out_of_range || !std::isfinite(value)) {
        throw ValueError(fmt::format("row {}: value '{}' is not finite", row, text));
    }
    return value;
}

Period parse_period(std::string_view text, std::size_t row) {
    const auto period = Period::parse(trim(text));
    if (!period) {
        throw ParseError(fmt::format(
            "row {}: period '{}' is not a year in [{}, {}] or a YYYY-MM month", row, text,
            Period::kMinYear, Period::kMaxYear));
    }
    return *period;
}

void require_nonempty(const std::string& field, std::string_view name, std::size_t row) {
    if (field.empty()) throw ParseError(fmt::format("row {}: empty {}", row, name));
}

void check_vocabulary(const IndicatorObservation& obs, std::size_t row,
                      const std::set<std::string>& vocabulary) {
    if (!vocabulary.contains(obs.indicator_id)) {
        throw UnknownIndicatorError(
            fmt::format("row {}: indicator '{}' is not in the registered vocabulary", row,
                        obs.indicator_id));
    }
}

IndicatorDataset build(std::vector<SourceRow> rows) {
    std::map<ObservationKey, std::size_t> first_row;
    for (const auto& r : rows) {
        ObservationKey key{r.observation.region_code, r.observation.indicator_id,
                           r.observation.period};
        const auto [it, inserted] = first_row.emplace(key, r.row);
        if (!inserted) {
            throw DuplicateKeyError(fmt::format("rows {} and {}: duplicate observation {}",
                                                it->second, r.row, key.to_string()));
        }
    }
    std::vector<IndicatorObservation> observations;
    observations.reserve(rows.size());
    for (auto& r : rows) observations.push_back(std::move(r.observation));
    return IndicatorDataset::from_observations(std::move(observations));
}

IndicatorDataset parse_csv(std::istream& input, const std::set<std::string>& vocabulary) {
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    std::vector<SourceRow> rows;
    while (std::getline(input, line)) {
        ++row;
        if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (trim(line).empty()) continue;
        if (!header_seen) {
            if (trim(line) != kHeader) {
                throw ParseError(fmt::format("row {}: expected header '{}'", row, kHeader));
            }
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line, row);
        if (fields.size() == kColumns + 1 && looks_like_comma_decimal(fields[5] + "," + fields[6])) {
            throw ParseError(fmt::format(
                "row {}: value '{},{}' uses a comma decimal separator; use '.' instead", row,
                fields[5], fields[6]));
        }
        if (fields.size() != kColumns) {
            throw ParseError(
                fmt::format("row {}: expected {} columns, found {}", row, kColumns, fields.size()));
        }
        SourceRow source;
        source.row = row;
        auto& obs = source.observation;
        obs.region_code = fields[0];
        obs.region_name = fields[1];
        obs.district_code = fields[2];
        obs.indicator_id = fields[3];
        obs.period = parse_period(fields[4], row);
        obs.value = parse_value(fields[5], row);
        obs.unit = fields[6];
        require_nonempty(obs.region_code, "region_code", row);
        require_nonempty(obs.indicator_id, "indicator_id", row);
        check_vocabulary(obs, row, vocabulary);
        rows.push_back(std::move(source));
    }
    if (!header_seen) throw ParseError("row 1: missing header");
    return build(std::move(rows));
}

std::string json_string(const nlohmann::json& record, const char* key, std::size_t row) {
    const auto it = record.find(key);
    if (it == record.end()) throw ParseError(fmt::format("record {}: missing key '{}'", row, key));
    if (!it->is_string()) {
        throw ParseError(fmt::format("record {}: key '{}' must be a string", row, key));
    }
    return it->get<std::string>();
}

IndicatorDataset parse_json(std::istream& input, const std::set<std::string>& vocabulary) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(fmt::format("malformed JSON: {}", e.what()));
    }
    if (!document.is_array()) throw ParseError("JSON dataset must be an array of records");
    std::vector<SourceRow> rows;
    rows.reserve(document.size());
    std::size_t row = 0;
    for (const auto& record : document) {
        ++row;
        if (!record.is_object()) throw ParseError(fmt::format("record {}: not an object", row));
        if (record.size() != kColumns) {
            throw ParseError(fmt::format("record {}: expected {} keys, found {}", row, kColumns,
                                         record.size()));
        }
        SourceRow source;
        source.row = row;
        auto& obs = source.observation;
        obs.region_code = json_string(record, "region_code", row);
        obs.region_name = json_string(record, "region_name", row);
        obs.district_code = json_string(record, "district_code", row);
        obs.indicator_id = json_string(record, "indicator_id", row);
        obs.unit = json_string(record, "unit", row);

        const auto period = record.find("period");
        if (period == record.end()) {
            throw ParseError(fmt::format("record {}: missing key 'period'", row));
        } else if (period->is_number_integer()) {
            obs.period = parse_period(std::to_string(period->get<long long>()), row);
        } else if (period->is_string()) {
            obs.period = parse_period(period->get<std::string>(), row);
        } else {
            throw ParseError(fmt::format("record {}: period must be an integer or string", row));
        }

        const auto value = record.find("value");
        if (value == record.end()) {
            throw ParseError(fmt::format("record {}: missing key 'value'", row));
        } else if (value->is_number()) {
            obs.value = value->get<double>();
            if (!std::isfinite(obs.value)) {
                throw ValueError(fmt::format("record {}: value is not finite", row));
            }
        } else if (value->is_string()) {
            obs.value = parse_value(value->get<std::string>(), row);
        } else {
            throw ValueError(fmt::format("record {}: value must be a number", row));
        }
        require_nonempty(obs.region_code, "region_code", row);
        require_nonempty(obs.indicator_id, "indicator_id", row);
        check_vocabulary(obs, row, vocabulary);
        rows.push_back(std::move(source));
    }
    return build(std::move(rows));
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

const std::set<std::string>& builtin_vocabulary() {
    static const std::set<std::string> vocabulary{
        "construction_volume_index", "fixed_capital_investment", "retail_turnover",
        "paid_services_volume",      "unemployment_rate",        "cpi",
        "ppi",                       "credit_institutions_count", "bank_assets",
        "bank_capital",              "loans_individuals",        "loans_legal_entities",
        "deposits_total",            "population",               "grp",
    };
    return vocabulary;
}

std::string ObservationKey::to_string() const {
    return fmt::format("({}, {}, {})", region_code, indicator_id, period.to_string());
}

IndicatorDataset IndicatorDataset::from_observations(std::vector<IndicatorObservation> observations) {
    IndicatorDataset dataset;
    for (auto& obs : observations) {
        if (!std::isfinite(obs.value)) {
            throw ValueError(fmt::format("value for {} is not finite",
                                         ObservationKey{obs.region_code, obs.indicator_id,
                                                        obs.period}
                                             .to_string()));
        }
        RegionInfo info{obs.region_name, obs.district_code};
        const auto [region, inserted] = dataset.regions_.emplace(obs.region_code, info);
        if (!inserted && region->second != info) {
            throw ParseError(fmt::format(
                "region '{}' appears with conflicting name/district ('{}'/'{}' vs '{}'/'{}')",
                obs.region_code, region->second.name, region->second.district_code, info.name,
                info.district_code));
        }
        ObservationKey key{obs.region_code, obs.indicator_id, obs.period};
        const std::string description = key.to_string();
        if (!dataset.observations_.emplace(std::move(key), std::move(obs)).second) {
            throw DuplicateKeyError(fmt::format("duplicate observation {}", description));
        }
    }
    return dataset;
}

const IndicatorObservation* IndicatorDataset::find(const ObservationKey& key) const {
    const auto it = observations_.find(key);
    return it == observations_.end() ? nullptr : &it->second;
}

std::optional<double> IndicatorDataset::value(std::string_view region, std::string_view indicator,
                                              const Period& period) const {
    const auto* obs = find(ObservationKey{std::string(region), std::string(indicator), period});
    if (obs == nullptr) return std::nullopt;
    return obs->value;
}

std::vector<std::string> IndicatorDataset::regions() const {
    std::vector<std::string> out;
    out.reserve(regions_.size());
    for (const auto& [code, info] : regions_) out.push_back(code);
    return out;
}

std::vector<std::string> IndicatorDataset::subject_regions() const {
    std::vector<std::string> out;
    for (const auto& [code, info] : regions_) {
        if (code != kNationalRegion) out.push_back(code);
    }
    return out;
}

std::set<std::string> IndicatorDataset::indicators() const {
    std::set<std::string> out;
    for (const auto& [key, obs] : observations_) out.insert(key.indicator_id);
    return out;
}

std::set<Period> IndicatorDataset::periods() const {
    std::set<Period> out;
    for (const auto& [key, obs] : observations_) out.insert(key.period);
    return out;
}

const RegionInfo* IndicatorDataset::region_info(std::string_view region_code) const {
    const auto it = regions_.find(region_code);
    return it == regions_.end() ? nullptr : &it->second;
}

std::optional<DataFormat> format_from_extension(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv" || ext == ".CSV") return DataFormat::csv;
    if (ext == ".json" || ext == ".JSON") return DataFormat::json;
    return std::nullopt;
}

IndicatorDataset load_dataset(std::istream& input, DataFormat format,
                              const std::set<std::string>* vocabulary) {
    const auto& vocab = vocabulary != nullptr ? *vocabulary : builtin_vocabulary();
    return format == DataFormat::csv ? parse_csv(input, vocab) : parse_json(input, vocab);
}

IndicatorDataset load_dataset(const std::filesystem::path& path, DataFormat format,
                              const std::set<std::string>* vocabulary) {
    std::ifstream input(path, std::ios::binary);
    if (!input) throw IoError(fmt::format("cannot open dataset '{}'", path.string()));
    return load_dataset(input, format, vocabulary);
}

IndicatorDataset load_dataset_from_string(std::string_view text, DataFormat format,
                                          const std::set<std::string>* vocabulary) {
    std::istringstream input{std::string(text)};
    return load_dataset(input, format, vocabulary);
}

std::string to_csv(const IndicatorDataset& dataset) {
    std::string out(kHeader);
    out.push_back('\n');
    for (const auto& [key, obs] : dataset.observations()) {
        char buffer[64];
        const auto result = std::to_chars(buffer, buffer + sizeof(buffer), obs.value);
        out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(obs.region_code),
                           csv_field(obs.region_name), csv_field(obs.district_code),
                           csv_field(obs.indicator_id), obs.period.to_string(),
                           std::string_view(buffer, result.ptr), csv_field(obs.unit));
    }
    return out;
}

ValidationReport validate_dataset(const IndicatorDataset& dataset,
                                  const std::vector<std::string>& required,
                                  const std::vector<Period>& periods,
                                  const std::vector<std::string>* registered) {
    ValidationReport report;
    report.row_count = dataset.size();

    std::set<std::string> wanted(required.begin(), required.end());
    const std::set<Period> period_set(periods.begin(), periods.end());
    for (const auto& region : dataset.regions()) {
        for (const auto& indicator : wanted) {
            for (const auto& period : period_set) {
                ObservationKey key{region, indicator, period};
                if (dataset.find(key) == nullptr) {
                    report.errors.push_back(
                        {0, "missing_observation", fmt::format("no observation for {}", key.to_string())});
                }
            }
        }
    }

    const std::set<std::string> used =
        registered != nullptr ? std::set<std::string>(registered->begin(), registered->end())
                              : wanted;
    for (const auto& indicator : dataset.indicators()) {
        if (!used.contains(indicator)) {
            report.warnings.push_back(
                {0, "unused_indicator",
                 fmt::format("indicator '{}' is not used by any registered sub-index", indicator)});
        }
    }
    return report;
}

}  // namespace shadow
