#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "shadow/period.hpp"

namespace shadow {

enum class QuartileBand { lower, mid_lower, mid_upper, upper };
enum class LeaderFlag { leader, outsider, neither };
enum class Typology { type_I, type_II, type_III, type_IV, unassigned };

std::string_view to_string(QuartileBand band);
std::string_view to_string(LeaderFlag flag);
std::string_view to_string(Typology typology);
std::optional<QuartileBand> quartile_band_from_string(std::string_view text);
std::optional<LeaderFlag> leader_flag_from_string(std::string_view text);
std::optional<Typology> typology_from_string(std::string_view text);

struct RegionClassification {
    std::string region_code;
    Period period;
    QuartileBand quartile_band = QuartileBand::lower;
    LeaderFlag leader_flag = LeaderFlag::neither;
    Typology typology = Typology::unassigned;

    bool operator==(const RegionClassification&) const = default;
};

/// Bands by the cross-section's type-7 quartiles, closed on the left bound:
/// lower v <= Q1 < mid_lower <= median < mid_upper <= Q3 < upper.
/// Leaders are the upper band, outsiders the lower band.
/// Throws InsufficientData for fewer than 4 regions.
std::map<std::string, RegionClassification> classify_quartiles(
    const std::map<std::string, double>& values, const Period& period = {});

/// Features are optional so a partially mapped profile can be reported as
/// MissingFeature rather than silently defaulted.
struct RegionProfile {
    std::optional<double> income_level;
    std::optional<double> savings_propensity;
    std::optional<double> income_differentiation;
    std::optional<bool> export_orientation;
    std::optional<double> infrastructure_score;
};

struct TypologyThresholds {
    double t_income = 0.0;
    double t_save = 0.0;
    double t_diff = 0.0;
    double t_infra = 0.0;

    bool operator==(const TypologyThresholds&) const = default;
};

/// Reads {t_income, t_save, t_diff, t_infra}; every key is mandatory.
/// Throws ConfigError otherwise.
TypologyThresholds typology_thresholds_from_json(const nlohmann::json& document);

/// type_I: income >= t_income and savings >= t_save.
/// type_II: differentiation >= t_diff, export-oriented, infrastructure < t_infra.
/// Otherwise unassigned; types III and IV have no rule.
Typology classify_typology(const RegionProfile& profile, const TypologyThresholds& thresholds);

}  // namespace shadow
