#include "shadow/subindex.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "shadow/errors.hpp"

namespace shadow {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(const nlohmann::json& record, const char* key,
                const std::pair<std::string_view, Enum> (&table)[N], std::size_t index) {
    const auto it = record.find(key);
    if (it == record.end() || !it->is_string()) {
        throw ConfigError(fmt::format("registry entry {}: '{}' must be a string", index, key));
    }
    const auto text = it->get<std::string>();
    for (const auto& [name, value] : table) {
        if (name == text) return value;
    }
    throw ConfigError(fmt::format("registry entry {}: unknown {} '{}'", index, key, text));
}

constexpr std::pair<std::string_view, Denominator> kDenominators[] = {
    {"none", Denominator::none}, {"population", Denominator::population}, {"grp", Denominator::grp}};
constexpr std::pair<std::string_view, Transform> kTransforms[] = {
    {"level", Transform::level}, {"yoy_growth", Transform::yoy_growth}};
constexpr std::pair<std::string_view, Direction> kDirections[] = {
    {"benefit", Direction::benefit}, {"cost", Direction::cost}};

double observed(const IndicatorDataset& dataset, std::string_view region,
                std::string_view indicator, const Period& period) {
    const auto value = dataset.value(region, indicator, period);
    if (!value) {
        const auto key =
            ObservationKey{std::string(region), std::string(indicator), period}.to_string();
        if (region == kNationalRegion) {
            throw MissingNationalBaseline(
                fmt::format("national baseline missing: no observation for {}", key));
        }
        throw MissingObservation(fmt::format("no observation for {}", key));
    }
    return *value;
}

double transformed(const IndicatorDataset& dataset, std::string_view region,
                   std::string_view indicator, const Period& period, Transform transform) {
    const double current = observed(dataset, region, indicator, period);
    if (transform == Transform::level) return current;
    const Period prior = period.previous_year();
    const double previous = observed(dataset, region, indicator, prior);
    if (previous == 0.0) {
        throw DivisionByZero(fmt::format("zero base for year-over-year growth of {}",
                                         ObservationKey{std::string(region),
                                                        std::string(indicator), prior}
                                             .to_string()));
    }
    return compute_yoy_growth(current, previous);
}

double regional_ratio(const SubIndexDefinition& def, const IndicatorDataset& dataset,
                      std::string_view region, const Period& period) {
    const double numerator = transformed(dataset, region, def.numerator, period, def.transform);
    if (def.denominator == Denominator::none) return numerator;
    const auto den_id = def.denominator_indicator();
    const double denominator = transformed(dataset, region, den_id, period, def.transform);
    if (denominator == 0.0) {
        throw DivisionByZero(fmt::format("{}: zero {} for region {} in {}", def.id, den_id, region,
                                         period.to_string()));
    }
    return numerator / denominator;
}

double apply_direction(Direction direction, double value) {
    return direction == Direction::benefit ? value : 1.0 / value;
}

}  // namespace

std::string_view to_string(Denominator d) {
    switch (d) {
        case Denominator::none: return "none";
        case Denominator::population: return "population";
        case Denominator::grp: return "grp";
    }
    return "none";
}

std::string_view to_string(Transform t) {
    return t == Transform::level ? "level" : "yoy_growth";
}

std::string_view to_string(Direction d) { return d == Direction::benefit ? "benefit" : "cost"; }

std::string_view SubIndexDefinition::denominator_indicator() const {
    switch (denominator) {
        case Denominator::population: return "population";
        case Denominator::grp: return "grp";
        case Denominator::none: break;
    }
    return {};
}

double normalize_to_national(double regional, double national) {
    if (!std::isfinite(regional) || !std::isfinite(national)) {
        throw DomainError("normalize_to_national: inputs must be finite");
    }
    if (national == 0.0) throw DivisionByZero("normalize_to_national: national value is zero");
    return regional / national;
}

double compute_yoy_growth(double current, double previous) {
    if (!std::isfinite(current) || !std::isfinite(previous)) {
        throw DomainError("compute_yoy_growth: inputs must be finite");
    }
    if (previous == 0.0) throw DivisionByZero("compute_yoy_growth: previous value is zero");
    return current / previous;
}

SubIndexValue compute_subindex(const SubIndexDefinition& definition,
                               const IndicatorDataset& dataset, std::string_view region,
                               const Period& period) {
    SubIndexValue out;
    out.definition_id = definition.id;
    out.region_code = std::string(region);
    out.period = period;
    out.direction = definition.direction;
    out.raw_regional = regional_ratio(definition, dataset, region, period);

    double normalized = out.raw_regional;
    if (definition.normalize_national) {
        out.raw_national = region == kNationalRegion
                               ? out.raw_regional
                               : regional_ratio(definition, dataset, kNationalRegion, period);
        if (out.raw_national == 0.0) {
            throw DivisionByZero(fmt::format("{}: national value is zero in {}", definition.id,
                                             period.to_string()));
        }
        normalized = region == kNationalRegion
                         ? 1.0
                         : normalize_to_national(out.raw_regional, out.raw_national);
    }
    if (!(normalized > 0.0)) {
        throw NonPositiveValue(fmt::format("{}: non-positive value {} for region {} in {}",
                                           definition.id, normalized, region,
                                           period.to_string()));
    }
    out.value = apply_direction(definition.direction, normalized);
    return out;
}

const std::vector<SubIndexDefinition>& registry_banking() {
    using enum Denominator;
    static const std::vector<SubIndexDefinition> registry{
        {"I1_institutional_per_capita", "credit_institutions_count", population},
        {"I2_institutional_per_grp", "credit_institutions_count", grp},
        {"I3_assets_per_grp", "bank_assets", grp},
        {"I4_capital_per_grp", "bank_capital", grp},
        {"I5_loans_individuals_per_capita", "loans_individuals", population},
        {"I6_loans_legal_entities_per_grp", "loans_legal_entities", grp},
        {"I7_savings_per_capita", "deposits_total", population},
        {"I8_paid_services_per_capita", "paid_services_volume", population},
    };
    return registry;
}

const std::vector<SubIndexDefinition>& registry_health() {
    using enum Denominator;
    using enum Transform;
    static const std::vector<SubIndexDefinition> registry{
        {"H1_construction_volume", "construction_volume_index", none, level},
        {"H2_fixed_capital_investment_growth", "fixed_capital_investment", none, yoy_growth},
        {"H3_retail_turnover_per_capita_growth", "retail_turnover", population, yoy_growth},
        {"H4_paid_services_volume_growth", "paid_services_volume", none, yoy_growth},
        {"H5_unemployment_growth", "unemployment_rate", none, yoy_growth, Direction::cost},
        {"H6_cpi_growth", "cpi", none, yoy_growth, Direction::cost},
    };
    return registry;
}

std::vector<std::string> required_indicators(const std::vector<SubIndexDefinition>& registry) {
    std::set<std::string> ids;
    for (const auto& def : registry) {
        ids.insert(def.numerator);
        if (def.denominator != Denominator::none) ids.emplace(def.denominator_indicator());
    }
    return {ids.begin(), ids.end()};
}

std::vector<Period> required_periods(const std::vector<SubIndexDefinition>& registry,
                                     const std::vector<Period>& periods) {
    std::set<Period> out(periods.begin(), periods.end());
    for (const auto& def : registry) {
        if (def.transform != Transform::yoy_growth) continue;
        for (const auto& p : periods) out.insert(p.previous_year());
    }
    return {out.begin(), out.end()};
}

std::vector<SubIndexDefinition> registry_from_json(const nlohmann::json& document,
                                                   const std::set<std::string>* vocabulary) {
    const auto& vocab = vocabulary != nullptr ? *vocabulary : builtin_vocabulary();
    if (!document.is_array() || document.empty()) {
        throw ConfigError("registry must be a non-empty JSON array");
    }
    std::vector<SubIndexDefinition> registry;
    std::set<std::string> ids;
    std::size_t index = 0;
    for (const auto& record : document) {
        ++index;
        if (!record.is_object()) {
            throw ConfigError(fmt::format("registry entry {}: not an object", index));
        }
        SubIndexDefinition def;
        const auto id = record.find("id");
        const auto numerator = record.find("numerator");
        const auto normalize = record.find("normalize_national");
        if (id == record.end() || !id->is_string() || id->get<std::string>().empty()) {
            throw ConfigError(fmt::format("registry entry {}: 'id' must be a non-empty string", index));
        }
        if (numerator == record.end() || !numerator->is_string()) {
            throw ConfigError(fmt::format("registry entry {}: 'numerator' must be a string", index));
        }
        if (normalize == record.end() || !normalize->is_boolean()) {
            throw ConfigError(
                fmt::format("registry entry {}: 'normalize_national' must be a boolean", index));
        }
        def.id = id->get<std::string>();
        def.numerator = numerator->get<std::string>();
        def.denominator = parse_enum(record, "denominator", kDenominators, index);
        def.transform = parse_enum(record, "transform", kTransforms, index);
        def.direction = parse_enum(record, "direction", kDirections, index);
        def.normalize_national = normalize->get<bool>();
        if (!vocab.contains(def.numerator)) {
            throw UnknownIndicatorError(fmt::format(
                "registry entry {}: numerator '{}' is not in the vocabulary", index, def.numerator));
        }
        if (!ids.insert(def.id).second) {
            throw ConfigError(fmt::format("registry entry {}: duplicate id '{}'", index, def.id));
        }
        registry.push_back(std::move(def));
    }
    return registry;
}

std::vector<SubIndexDefinition> load_registry(const std::filesystem::path& path,
                                              const std::set<std::string>* vocabulary) {
    std::ifstream input(path);
    if (!input) throw IoError(fmt::format("cannot open registry '{}'", path.string()));
    try {
        return registry_from_json(nlohmann::json::parse(input), vocabulary);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("registry '{}': malformed JSON: {}", path.string(), e.what()));
    }
}

nlohmann::json registry_to_json(const std::vector<SubIndexDefinition>& registry) {
    auto out = nlohmann::json::array();
    for (const auto& def : registry) {
        out.push_back({{"id", def.id},
                       {"numerator", def.numerator},
                       {"denominator", to_string(def.denominator)},
                       {"transform", to_string(def.transform)},
                       {"direction", to_string(def.direction)},
                       {"normalize_national", def.normalize_national}});
    }
    return out;
}

}  // namespace shadow
