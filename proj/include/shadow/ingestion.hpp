#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "shadow/period.hpp"

namespace shadow {

/// Reserved region code holding the published all-Russia values.
inline constexpr std::string_view kNationalRegion = "RU";

/// The registered indicator vocabulary. Anything else is rejected at load.
const std::set<std::string>& builtin_vocabulary();

struct IndicatorObservation {
    std::string region_code;
    std::string region_name;
    std::string district_code;
    std::string indicator_id;
    Period period;
    double value = 0.0;
    std::string unit;

    bool operator==(const IndicatorObservation&) const = default;
};

struct ObservationKey {
    std::string region_code;
    std::string indicator_id;
    Period period;

    auto operator<=>(const ObservationKey&) const = default;
    std::string to_string() const;
};

struct RegionInfo {
    std::string name;
    std::string district_code;

    bool operator==(const RegionInfo&) const = default;
};

/// Immutable keyed collection of observations. Built only through
/// load_dataset() or IndicatorDataset::from_observations().
class IndicatorDataset {
public:
    IndicatorDataset() = default;

    /// Throws DuplicateKeyError on a repeated (region, indicator, period).
    /// Throws ParseError when one region code carries two different names
    /// or district codes.
    static IndicatorDataset from_observations(std::vector<IndicatorObservation> observations);

    const IndicatorObservation* find(const ObservationKey& key) const;
    std::optional<double> value(std::string_view region, std::string_view indicator,
                                const Period& period) const;

    std::size_t size() const { return observations_.size(); }
    const std::map<ObservationKey, IndicatorObservation>& observations() const {
        return observations_;
    }

    /// All region codes, including the national one when present.
    std::vector<std::string> regions() const;
    /// Region codes excluding the national row-set, sorted.
    std::vector<std::string> subject_regions() const;
    std::set<std::string> indicators() const;
    std::set<Period> periods() const;
    const RegionInfo* region_info(std::string_view region_code) const;

    std::string_view national_region_code() const { return kNationalRegion; }
    bool has_national() const { return regions_.contains(std::string(kNationalRegion)); }

    bool operator==(const IndicatorDataset& other) const {
        return observations_ == other.observations_;
    }

private:
    std::map<ObservationKey, IndicatorObservation> observations_;
    std::map<std::string, RegionInfo, std::less<>> regions_;
};

enum class DataFormat { csv, json };

std::optional<DataFormat> format_from_extension(const std::filesystem::path& path);

/// Load and validate observations. `vocabulary` defaults to the built-in
/// set; callers with custom registries may pass an extended one.
IndicatorDataset load_dataset(const std::filesystem::path& path, DataFormat format,
                              const std::set<std::string>* vocabulary = nullptr);
IndicatorDataset load_dataset(std::istream& input, DataFormat format,
                              const std::set<std::string>* vocabulary = nullptr);
IndicatorDataset load_dataset_from_string(std::string_view text, DataFormat format,
                                          const std::set<std::string>* vocabulary = nullptr);

/// Serialize back to the canonical CSV layout (sorted by key).
std::string to_csv(const IndicatorDataset& dataset);

struct ValidationIssue {
    std::size_t row = 0;  // 0 when the issue is not tied to a source row
    std::string rule;
    std::string message;

    bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    std::size_t row_count = 0;

    bool accepted() const { return errors.empty(); }
};

/// Coverage check. Every (region, required indicator, period) triple with no
/// observation is an error. Indicators present in the dataset but used by no
/// registered sub-index are warnings; `registered` defaults to `required`.
/// Never throws.
ValidationReport validate_dataset(const IndicatorDataset& dataset,
                                  const std::vector<std::string>& required,
                                  const std::vector<Period>& periods,
                                  const std::vector<std::string>* registered = nullptr);

}  // namespace shadow
