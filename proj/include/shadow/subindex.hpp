#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shadow/ingestion.hpp"
#include "shadow/period.hpp"

namespace shadow {

enum class Denominator { none, population, grp };
enum class Transform { level, yoy_growth };
enum class Direction { benefit, cost };

std::string_view to_string(Denominator d);
std::string_view to_string(Transform t);
std::string_view to_string(Direction d);

/// Declarative recipe for one sub-index:
///   value = dir( norm( tr(numerator) / tr(denominator) ) )
struct SubIndexDefinition {
    std::string id;
    std::string numerator;
    Denominator denominator = Denominator::none;
    Transform transform = Transform::level;
    Direction direction = Direction::benefit;
    bool normalize_national = true;

    /// Indicator id of the denominator series, empty for Denominator::none.
    std::string_view denominator_indicator() const;

    bool operator==(const SubIndexDefinition&) const = default;
};

struct SubIndexValue {
    std::string definition_id;
    std::string region_code;
    Period period;
    double value = 0.0;
    /// The regional ratio tr(numerator)/tr(denominator) before normalization.
    double raw_regional = 0.0;
    /// The same ratio for the national region; 1 when not normalized.
    double raw_national = 1.0;
    Direction direction = Direction::benefit;

    bool operator==(const SubIndexValue&) const = default;
};

/// regional / national. Throws DivisionByZero on national == 0 and
/// DomainError on non-finite input.
double normalize_to_national(double regional, double national);

/// current / previous, so 1.29 means growth to 129%.
double compute_yoy_growth(double current, double previous);

SubIndexValue compute_subindex(const SubIndexDefinition& definition,
                               const IndicatorDataset& dataset, std::string_view region,
                               const Period& period);

/// Eight banking-provision sub-indices I1..I8, in order.
const std::vector<SubIndexDefinition>& registry_banking();
/// Six economic-health sub-indices.
const std::vector<SubIndexDefinition>& registry_health();

/// Every indicator a registry reads (numerators and denominators).
std::vector<std::string> required_indicators(const std::vector<SubIndexDefinition>& registry);

/// Periods whose observations are needed to evaluate `registry` at `periods`
/// (adds the prior year for year-over-year definitions).
std::vector<Period> required_periods(const std::vector<SubIndexDefinition>& registry,
                                     const std::vector<Period>& periods);

/// Registry JSON: array of {id, numerator, denominator, transform, direction,
/// normalize_national}. Throws ConfigError on schema violations and
/// UnknownIndicatorError on numerators outside `vocabulary`.
std::vector<SubIndexDefinition> registry_from_json(const nlohmann::json& document,
                                                   const std::set<std::string>* vocabulary = nullptr);
std::vector<SubIndexDefinition> load_registry(const std::filesystem::path& path,
                                              const std::set<std::string>* vocabulary = nullptr);
nlohmann::json registry_to_json(const std::vector<SubIndexDefinition>& registry);

}  // namespace shadow
