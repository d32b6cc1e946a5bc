#include "shadow/classification.hpp"

#include <vector>

#include <fmt/format.h>

#include "shadow/distribution.hpp"
#include "shadow/errors.hpp"

namespace shadow {

namespace {

constexpr std::pair<std::string_view, QuartileBand> kBands[] = {
    {"lower", QuartileBand::lower},
    {"mid_lower", QuartileBand::mid_lower},
    {"mid_upper", QuartileBand::mid_upper},
    {"upper", QuartileBand::upper}};
constexpr std::pair<std::string_view, LeaderFlag> kFlags[] = {
    {"leader", LeaderFlag::leader}, {"outsider", LeaderFlag::outsider}, {"neither", LeaderFlag::neither}};
constexpr std::pair<std::string_view, Typology> kTypologies[] = {
    {"type_I", Typology::type_I},     {"type_II", Typology::type_II},
    {"type_III", Typology::type_III}, {"type_IV", Typology::type_IV},
    {"unassigned", Typology::unassigned}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::pair<std::string_view, Enum> (&table)[N]) {
    for (const auto& [name, v] : table) {
        if (v == value) return name;
    }
    return {};
}

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text, const std::pair<std::string_view, Enum> (&table)[N]) {
    for (const auto& [name, v] : table) {
        if (name == text) return v;
    }
    return std::nullopt;
}

template <typename T>
const T& need(const std::optional<T>& feature, const char* name) {
    if (!feature) throw MissingFeature(fmt::format("region profile lacks feature '{}'", name));
    return *feature;
}

}  // namespace

std::string_view to_string(QuartileBand band) { return name_of(band, kBands); }
std::string_view to_string(LeaderFlag flag) { return name_of(flag, kFlags); }
std::string_view to_string(Typology typology) { return name_of(typology, kTypologies); }
std::optional<QuartileBand> quartile_band_from_string(std::string_view text) { return lookup(text, kBands); }
std::optional<LeaderFlag> leader_flag_from_string(std::string_view text) { return lookup(text, kFlags); }
std::optional<Typology> typology_from_string(std::string_view text) { return lookup(text, kTypologies); }

std::map<std::string, RegionClassification> classify_quartiles(
    const std::map<std::string, double>& values, const Period& period) {
    if (values.size() < 4) {
        throw InsufficientData(
            fmt::format("quartile classification needs at least 4 regions, got {}", values.size()));
    }
    std::vector<double> xs;
    xs.reserve(values.size());
    for (const auto& [region, v] : values) xs.push_back(v);
    const auto summary = summarize(xs);

    std::map<std::string, RegionClassification> out;
    for (const auto& [region, v] : values) {
        RegionClassification c;
        c.region_code = region;
        c.period = period;
        if (v <= summary.q1) {
            c.quartile_band = QuartileBand::lower;
            c.leader_flag = LeaderFlag::outsider;
        } else if (v <= summary.median) {
            c.quartile_band = QuartileBand::mid_lower;
        } else if (v <= summary.q3) {
            c.quartile_band = QuartileBand::mid_upper;
        } else {
            c.quartile_band = QuartileBand::upper;
            c.leader_flag = LeaderFlag::leader;
        }
        out.emplace(region, c);
    }
    return out;
}

TypologyThresholds typology_thresholds_from_json(const nlohmann::json& document) {
    if (!document.is_object()) throw ConfigError("typology thresholds must be a JSON object");
    auto read = [&](const char* key) {
        const auto it = document.find(key);
        if (it == document.end() || !it->is_number()) {
            throw ConfigError(fmt::format("typology thresholds: '{}' must be a number", key));
        }
        return it->get<double>();
    };
    return TypologyThresholds{read("t_income"), read("t_save"), read("t_diff"), read("t_infra")};
}

Typology classify_typology(const RegionProfile& profile, const TypologyThresholds& thresholds) {
    const double income = need(profile.income_level, "income_level");
    const double savings = need(profile.savings_propensity, "savings_propensity");
    const double differentiation = need(profile.income_differentiation, "income_differentiation");
    const bool export_oriented = need(profile.export_orientation, "export_orientation");
    const double infrastructure = need(profile.infrastructure_score, "infrastructure_score");

    if (income >= thresholds.t_income && savings >= thresholds.t_save) return Typology::type_I;
    if (differentiation >= thresholds.t_diff && export_oriented &&
        infrastructure < thresholds.t_infra) {
        return Typology::type_II;
    }
    return Typology::unassigned;
}

}  // namespace shadow
