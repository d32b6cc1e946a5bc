#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shadow/classification.hpp"
#include "shadow/composite.hpp"
#include "shadow/distribution.hpp"
#include "shadow/errors.hpp"
#include "shadow/ingestion.hpp"
#include "shadow/scatter.hpp"
#include "shadow/subindex.hpp"

namespace shadow {

/// Raised by run_pipeline when the loaded dataset fails coverage checks.
class ValidationFailed : public InputError {
public:
    explicit ValidationFailed(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Where a typology feature comes from: an index or sub-index id, a raw
/// indicator id, or a constant applied to every region.
using FeatureSource = std::variant<std::string, double, bool>;

struct TypologyConfig {
    TypologyThresholds thresholds;
    std::map<std::string, FeatureSource> features;
};

/// {t_income, t_save, t_diff, t_infra, features?: {name: id | number | bool}}
TypologyConfig typology_config_from_json(const nlohmann::json& document);
TypologyConfig load_typology_config(const std::filesystem::path& path);

struct PipelineConfig {
    std::filesystem::path dataset;
    std::optional<DataFormat> format;  // inferred from the extension when unset
    std::vector<SubIndexDefinition> banking = registry_banking();
    std::vector<SubIndexDefinition> health = registry_health();
    std::string registry_version = "builtin:banking@1,builtin:health@1";
    std::vector<Period> periods;
    WeightKind weight_kind = WeightKind::population;
    std::optional<TypologyConfig> typology;
};

struct ReportMetadata {
    std::string dataset;
    std::string registry_version;
    std::vector<Period> periods;
    std::string quartile_convention{kQuartileConvention};
    WeightKind weight_kind = WeightKind::population;

    bool operator==(const ReportMetadata&) const = default;
};

struct RegionReport {
    std::string region_code;
    std::string region_name;
    std::string district_code;
    Period period;
    CompositeIndexValue banking;
    CompositeIndexValue health;
    RegionClassification banking_class;
    RegionClassification health_class;

    bool operator==(const RegionReport&) const = default;
};

struct DistrictEntry {
    IndexKind index_kind = IndexKind::banking_rbsp;
    DistrictIndexValue district;

    bool operator==(const DistrictEntry&) const = default;
};

struct DistributionEntry {
    IndexKind index_kind = IndexKind::banking_rbsp;
    Period period;
    DistributionSummary summary;

    bool operator==(const DistributionEntry&) const = default;
};

struct CorrelationEntry {
    Period period;
    std::size_t n = 0;
    double r_squared = 0.0;

    bool operator==(const CorrelationEntry&) const = default;
};

struct ReportBundle {
    ReportMetadata metadata;
    std::vector<RegionReport> per_region;
    std::vector<DistrictEntry> per_district;
    std::vector<DistributionEntry> distribution;
    std::vector<CorrelationEntry> correlation;

    bool operator==(const ReportBundle&) const = default;
};

/// load -> validate -> sub-indices -> composites -> districts -> statistics
/// -> classification -> correlation. Errors carry the failing module name.
ReportBundle run_pipeline(const PipelineConfig& config);

/// Same, on an already loaded dataset. `dataset_label` goes to the metadata.
ReportBundle run_pipeline(const PipelineConfig& config, const IndicatorDataset& dataset,
                          const std::string& dataset_label);

/// Regional composites for one period, subject regions only.
std::vector<CompositeIndexValue> compute_composites(const IndicatorDataset& dataset,
                                                    const std::vector<SubIndexDefinition>& registry,
                                                    IndexKind kind, const Period& period);

/// Region -> value of an index ("rbsp", "health"), a sub-index id from either
/// registry, or a raw indicator id, over subject regions at `period`.
std::map<std::string, double> cross_section(const IndicatorDataset& dataset,
                                            const std::vector<SubIndexDefinition>& banking,
                                            const std::vector<SubIndexDefinition>& health,
                                            std::string_view id, const Period& period);

/// Scatter of `y_id` against `x_id` ("rank" orders regions by y), with
/// leaders/outsiders taken from the quartile classification of the y values.
ScatterSpec build_scatter(const IndicatorDataset& dataset,
                          const std::vector<SubIndexDefinition>& banking,
                          const std::vector<SubIndexDefinition>& health, std::string_view x_id,
                          std::string_view y_id, const Period& period);

nlohmann::json to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const nlohmann::json& document);
nlohmann::json to_json(const DistributionSummary& summary);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const std::map<std::string, RegionClassification>& classes);

std::string render_markdown(const ReportBundle& bundle);

enum class ReportFormat { json, markdown };

/// Throws IoError with the path when the file cannot be written.
void emit_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& out);

}  // namespace shadow
