#include "shadow/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace shadow {

using nlohmann::json;

namespace {

template <typename Fn>
auto in_module(const char* module, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (ShadowError& e) {
        e.add_context(module);
        throw;
    }
}

std::vector<std::string> union_of(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
    std::set<std::string> out(a.begin(), a.end());
    out.insert(b.begin(), b.end());
    return {out.begin(), out.end()};
}

const char* weight_indicator(WeightKind kind) {
    return kind == WeightKind::grp ? "grp" : "population";
}

// ---- JSON helpers ---------------------------------------------------------

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

Period read_period(const json& j) {
    const auto text = j.get<std::string>();
    const auto period = Period::parse(text);
    if (!period) throw ParseError(fmt::format("report: invalid period '{}'", text));
    return *period;
}

IndexKind read_index_kind(const json& j) {
    const auto text = j.get<std::string>();
    if (text == "banking_rbsp") return IndexKind::banking_rbsp;
    if (text == "economic_health") return IndexKind::economic_health;
    throw ParseError(fmt::format("report: unknown index kind '{}'", text));
}

WeightKind read_weight_kind(const json& j) {
    const auto kind = weight_kind_from_string(j.get<std::string>());
    if (!kind) throw ParseError("report: unknown weight kind");
    return *kind;
}

json composite_to_json(const CompositeIndexValue& c) {
    json subs = json::array();
    for (const auto& s : c.subindices) {
        subs.push_back({{"id", s.definition_id},
                        {"value", s.value},
                        {"raw_regional", s.raw_regional},
                        {"raw_national", s.raw_national},
                        {"direction", to_string(s.direction)}});
    }
    return {{"value", c.value}, {"subindices", subs}, {"contributions", c.contributions}};
}

CompositeIndexValue composite_from_json(const json& j, IndexKind kind, const std::string& region,
                                        const Period& period) {
    CompositeIndexValue c;
    c.index_kind = kind;
    c.region_code = region;
    c.period = period;
    c.value = j.at("value").get<double>();
    c.contributions = j.at("contributions").get<std::vector<double>>();
    for (const auto& s : j.at("subindices")) {
        SubIndexValue v;
        v.definition_id = s.at("id").get<std::string>();
        v.region_code = region;
        v.period = period;
        v.value = s.at("value").get<double>();
        v.raw_regional = s.at("raw_regional").get<double>();
        v.raw_national = s.at("raw_national").get<double>();
        v.direction = s.at("direction").get<std::string>() == "cost" ? Direction::cost
                                                                     : Direction::benefit;
        c.subindices.push_back(std::move(v));
    }
    return c;
}

json class_to_json(const RegionClassification& c) {
    return {{"quartile_band", to_string(c.quartile_band)},
            {"leader_flag", to_string(c.leader_flag)},
            {"typology", to_string(c.typology)}};
}

RegionClassification class_from_json(const json& j, const std::string& region, const Period& period) {
    RegionClassification c;
    c.region_code = region;
    c.period = period;
    const auto band = quartile_band_from_string(j.at("quartile_band").get<std::string>());
    const auto flag = leader_flag_from_string(j.at("leader_flag").get<std::string>());
    const auto typology = typology_from_string(j.at("typology").get<std::string>());
    if (!band || !flag || !typology) throw ParseError("report: invalid classification entry");
    c.quartile_band = *band;
    c.leader_flag = *flag;
    c.typology = *typology;
    return c;
}

DistributionSummary summary_from_json(const json& j) {
    DistributionSummary s;
    s.n = j.at("n").get<std::size_t>();
    s.mean = j.at("mean").get<double>();
    s.std_dev = j.at("std_dev").get<double>();
    s.skewness = read_optional(j, "skewness");
    s.kurtosis = read_optional(j, "kurtosis");
    s.cv = read_optional(j, "cv");
    s.q1 = j.at("q1").get<double>();
    s.median = j.at("median").get<double>();
    s.q3 = j.at("q3").get<double>();
    return s;
}

// ---- typology -------------------------------------------------------------

constexpr const char* kFeatureNames[] = {"income_level", "savings_propensity",
                                         "income_differentiation", "export_orientation",
                                         "infrastructure_score"};

std::map<std::string, Typology> assign_typology(const TypologyConfig& config,
                                                const IndicatorDataset& dataset,
                                                const PipelineConfig& pipeline, const Period& period,
                                                const std::vector<std::string>& regions) {
    std::map<std::string, std::map<std::string, double>> series;
    for (const auto& [name, source] : config.features) {
        if (const auto* id = std::get_if<std::string>(&source)) {
            series[name] = cross_section(dataset, pipeline.banking, pipeline.health, *id, period);
        }
    }
    std::map<std::string, Typology> out;
    for (const auto& region : regions) {
        RegionProfile profile;
        auto numeric = [&](const char* name) -> std::optional<double> {
            const auto it = config.features.find(name);
            if (it == config.features.end()) return std::nullopt;
            if (const auto* d = std::get_if<double>(&it->second)) return *d;
            if (const auto* b = std::get_if<bool>(&it->second)) return *b ? 1.0 : 0.0;
            const auto& values = series.at(name);
            const auto v = values.find(region);
            if (v == values.end()) return std::nullopt;
            return v->second;
        };
        profile.income_level = numeric("income_level");
        profile.savings_propensity = numeric("savings_propensity");
        profile.income_differentiation = numeric("income_differentiation");
        profile.infrastructure_score = numeric("infrastructure_score");
        if (const auto it = config.features.find("export_orientation"); it != config.features.end()) {
            if (const auto* b = std::get_if<bool>(&it->second)) {
                profile.export_orientation = *b;
            } else if (const auto v = numeric("export_orientation")) {
                // Numeric sources are national-relative: above 1 means export-oriented.
                profile.export_orientation = *v > 1.0;
            }
        }
        try {
            out[region] = classify_typology(profile, config.thresholds);
        } catch (MissingFeature& e) {
            e.add_context(fmt::format("region {}", region));
            throw;
        }
    }
    return out;
}

std::string fmt_value(double v) { return fmt::format("{:.4f}", v); }
std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_value(*v) : "n/a"; }

}  // namespace

ValidationFailed::ValidationFailed(ValidationReport report)
    : InputError(fmt::format("dataset failed validation with {} error(s){}", report.errors.size(),
                             report.errors.empty() ? "" : "; first: " + report.errors.front().message)),
      report_(std::move(report)) {}

TypologyConfig typology_config_from_json(const json& document) {
    TypologyConfig config;
    config.thresholds = typology_thresholds_from_json(document);
    if (const auto it = document.find("features"); it != document.end()) {
        if (!it->is_object()) throw ConfigError("typology 'features' must be an object");
        for (const auto& [name, source] : it->items()) {
            if (std::find_if(std::begin(kFeatureNames), std::end(kFeatureNames),
                             [&](const char* n) { return name == n; }) == std::end(kFeatureNames)) {
                throw ConfigError(fmt::format("typology: unknown feature '{}'", name));
            }
            if (source.is_string()) {
                config.features[name] = source.get<std::string>();
            } else if (source.is_boolean()) {
                config.features[name] = source.get<bool>();
            } else if (source.is_number()) {
                config.features[name] = source.get<double>();
            } else {
                throw ConfigError(fmt::format("typology: feature '{}' must be an id, number or bool", name));
            }
        }
    }
    return config;
}

TypologyConfig load_typology_config(const std::filesystem::path& path) {
    std::ifstream input(path);
    if (!input) throw IoError(fmt::format("cannot open typology thresholds '{}'", path.string()));
    try {
        return typology_config_from_json(json::parse(input));
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("typology '{}': malformed JSON: {}", path.string(), e.what()));
    }
}

std::vector<CompositeIndexValue> compute_composites(const IndicatorDataset& dataset,
                                                    const std::vector<SubIndexDefinition>& registry,
                                                    IndexKind kind, const Period& period) {
    std::vector<CompositeIndexValue> out;
    for (const auto& region : dataset.subject_regions()) {
        std::vector<SubIndexValue> subs;
        subs.reserve(registry.size());
        in_module("subindex_engine", [&] {
            for (const auto& def : registry) subs.push_back(compute_subindex(def, dataset, region, period));
        });
        out.push_back(in_module("composite_indices", [&] {
            return kind == IndexKind::banking_rbsp ? compute_rbsp(std::move(subs))
                                                   : compute_health(std::move(subs));
        }));
    }
    return out;
}

std::map<std::string, double> cross_section(const IndicatorDataset& dataset,
                                            const std::vector<SubIndexDefinition>& banking,
                                            const std::vector<SubIndexDefinition>& health,
                                            std::string_view id, const Period& period) {
    std::map<std::string, double> out;
    if (id == "rbsp" || id == "health") {
        const bool is_banking = id == "rbsp";
        for (const auto& c : compute_composites(dataset, is_banking ? banking : health,
                                                is_banking ? IndexKind::banking_rbsp
                                                           : IndexKind::economic_health,
                                                period)) {
            out[c.region_code] = c.value;
        }
        return out;
    }
    for (const auto* registry : {&banking, &health}) {
        const auto def = std::find_if(registry->begin(), registry->end(),
                                      [&](const SubIndexDefinition& d) { return d.id == id; });
        if (def == registry->end()) continue;
        in_module("subindex_engine", [&] {
            for (const auto& region : dataset.subject_regions()) {
                out[region] = compute_subindex(*def, dataset, region, period).value;
            }
        });
        return out;
    }
    if (builtin_vocabulary().contains(std::string(id)) || dataset.indicators().contains(std::string(id))) {
        for (const auto& region : dataset.subject_regions()) {
            const auto v = dataset.value(region, id, period);
            if (!v) {
                throw MissingObservation(fmt::format(
                    "no observation for {}",
                    ObservationKey{region, std::string(id), period}.to_string()));
            }
            out[region] = *v;
        }
        return out;
    }
    throw ConfigError(fmt::format("unknown index, sub-index or indicator id '{}'", id));
}

ReportBundle run_pipeline(const PipelineConfig& config) {
    if (config.periods.empty()) throw ConfigError("no periods requested");
    const auto format = config.format ? config.format : format_from_extension(config.dataset);
    if (!format) {
        throw ConfigError(fmt::format("cannot infer dataset format from '{}'", config.dataset.string()));
    }
    const auto dataset = in_module("ingestion", [&] { return load_dataset(config.dataset, *format); });
    return run_pipeline(config, dataset, config.dataset.string());
}

ReportBundle run_pipeline(const PipelineConfig& config, const IndicatorDataset& dataset,
                          const std::string& dataset_label) {
    if (config.periods.empty()) throw ConfigError("no periods requested");
    std::vector<Period> periods = config.periods;
    std::sort(periods.begin(), periods.end());
    periods.erase(std::unique(periods.begin(), periods.end()), periods.end());

    auto required = union_of(required_indicators(config.banking), required_indicators(config.health));
    if (config.weight_kind != WeightKind::unweighted) {
        required = union_of(required, {weight_indicator(config.weight_kind)});
    }
    const auto needed_periods =
        required_periods(config.health, required_periods(config.banking, periods));
    auto report = validate_dataset(dataset, required, needed_periods);
    if (!report.accepted()) {
        ValidationFailed failure(std::move(report));
        failure.add_context("ingestion");
        throw failure;
    }

    ReportBundle bundle;
    bundle.metadata.dataset = dataset_label;
    bundle.metadata.registry_version = config.registry_version;
    bundle.metadata.periods = periods;
    bundle.metadata.weight_kind = config.weight_kind;

    for (const auto& period : periods) {
        const auto banking = compute_composites(dataset, config.banking, IndexKind::banking_rbsp, period);
        const auto health = compute_composites(dataset, config.health, IndexKind::economic_health, period);

        for (const auto& [kind, composites] :
             {std::pair{IndexKind::banking_rbsp, &banking}, std::pair{IndexKind::economic_health, &health}}) {
            for (auto& d : in_module("composite_indices",
                                     [&] { return aggregate_districts(*composites, dataset, config.weight_kind); })) {
                bundle.per_district.push_back({kind, std::move(d)});
            }
        }

        std::map<std::string, double> banking_values;
        std::map<std::string, double> health_values;
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < banking.size(); ++i) {
            banking_values[banking[i].region_code] = banking[i].value;
            health_values[health[i].region_code] = health[i].value;
            pairs.emplace_back(health[i].value, banking[i].value);
        }

        for (const auto& [kind, values] :
             {std::pair{IndexKind::banking_rbsp, &banking_values},
              std::pair{IndexKind::economic_health, &health_values}}) {
            std::vector<double> xs;
            for (const auto& [region, v] : *values) xs.push_back(v);
            bundle.distribution.push_back(
                {kind, period, in_module("distribution_stats", [&] { return summarize(xs); })});
        }

        const auto banking_classes =
            in_module("classification", [&] { return classify_quartiles(banking_values, period); });
        const auto health_classes =
            in_module("classification", [&] { return classify_quartiles(health_values, period); });
        std::map<std::string, Typology> typology;
        if (config.typology) {
            typology = in_module("classification", [&] {
                return assign_typology(*config.typology, dataset, config, period, dataset.subject_regions());
            });
        }

        for (std::size_t i = 0; i < banking.size(); ++i) {
            RegionReport entry;
            entry.region_code = banking[i].region_code;
            const auto* info = dataset.region_info(entry.region_code);
            entry.region_name = info->name;
            entry.district_code = info->district_code;
            entry.period = period;
            entry.banking = banking[i];
            entry.health = health[i];
            entry.banking_class = banking_classes.at(entry.region_code);
            entry.health_class = health_classes.at(entry.region_code);
            if (const auto t = typology.find(entry.region_code); t != typology.end()) {
                entry.banking_class.typology = t->second;
                entry.health_class.typology = t->second;
            }
            bundle.per_region.push_back(std::move(entry));
        }

        bundle.correlation.push_back(
            {period, pairs.size(), in_module("composite_indices", [&] { return correlate_indices(pairs); })});
    }
    return bundle;
}

ScatterSpec build_scatter(const IndicatorDataset& dataset,
                          const std::vector<SubIndexDefinition>& banking,
                          const std::vector<SubIndexDefinition>& health, std::string_view x_id,
                          std::string_view y_id, const Period& period) {
    const auto ys = cross_section(dataset, banking, health, y_id, period);
    std::map<std::string, double> xs;
    if (x_id == "rank") {
        std::vector<std::pair<double, std::string>> order;
        for (const auto& [region, y] : ys) order.emplace_back(y, region);
        std::sort(order.begin(), order.end());
        for (std::size_t i = 0; i < order.size(); ++i) xs[order[i].second] = static_cast<double>(i + 1);
    } else {
        xs = cross_section(dataset, banking, health, x_id, period);
    }
    const auto classes = in_module("classification", [&] { return classify_quartiles(ys, period); });

    ScatterSpec spec;
    spec.title = fmt::format("{} vs {} ({})", y_id, x_id, period.to_string());
    spec.x_label = std::string(x_id);
    spec.y_label = std::string(y_id);
    for (const auto& [region, y] : ys) {
        ScatterPoint point;
        point.label = region;
        point.x = xs.at(region);
        point.y = y;
        switch (classes.at(region).leader_flag) {
            case LeaderFlag::leader: point.highlight = Highlight::leader; break;
            case LeaderFlag::outsider: point.highlight = Highlight::outsider; break;
            case LeaderFlag::neither: break;
        }
        spec.points.push_back(std::move(point));
    }
    return spec;
}

json to_json(const DistributionSummary& s) {
    return {{"n", s.n},
            {"mean", s.mean},
            {"std_dev", s.std_dev},
            {"skewness", optional_number(s.skewness)},
            {"kurtosis", optional_number(s.kurtosis)},
            {"cv", optional_number(s.cv)},
            {"q1", s.q1},
            {"median", s.median},
            {"q3", s.q3},
            {"degenerate", s.degenerate()}};
}

json to_json(const ValidationReport& report) {
    auto issues = [](const std::vector<ValidationIssue>& list) {
        json out = json::array();
        for (const auto& i : list) out.push_back({{"row", i.row}, {"rule", i.rule}, {"message", i.message}});
        return out;
    };
    return {{"row_count", report.row_count},
            {"accepted", report.accepted()},
            {"errors", issues(report.errors)},
            {"warnings", issues(report.warnings)}};
}

json to_json(const std::map<std::string, RegionClassification>& classes) {
    json out = json::object();
    for (const auto& [region, c] : classes) out[region] = class_to_json(c);
    return out;
}

json to_json(const ReportBundle& bundle) {
    json periods = json::array();
    for (const auto& p : bundle.metadata.periods) periods.push_back(p.to_string());
    json metadata = {{"dataset", bundle.metadata.dataset},
                     {"registry_version", bundle.metadata.registry_version},
                     {"periods", periods},
                     {"period_range", bundle.metadata.periods.empty()
                                          ? json(nullptr)
                                          : json::array({bundle.metadata.periods.front().to_string(),
                                                         bundle.metadata.periods.back().to_string()})},
                     {"quartile_convention", bundle.metadata.quartile_convention},
                     {"weight_kind", to_string(bundle.metadata.weight_kind)}};

    json regions = json::array();
    for (const auto& r : bundle.per_region) {
        regions.push_back({{"region_code", r.region_code},
                           {"region_name", r.region_name},
                           {"district_code", r.district_code},
                           {"period", r.period.to_string()},
                           {"banking", composite_to_json(r.banking)},
                           {"health", composite_to_json(r.health)},
                           {"classification",
                            {{"banking", class_to_json(r.banking_class)},
                             {"health", class_to_json(r.health_class)}}}});
    }

    json districts = json::array();
    for (const auto& d : bundle.per_district) {
        districts.push_back({{"index", to_string(d.index_kind)},
                             {"district_code", d.district.district_code},
                             {"period", d.district.period.to_string()},
                             {"value", d.district.value},
                             {"member_regions", d.district.member_regions},
                             {"weight_kind", to_string(d.district.weight_kind)}});
    }

    json distribution = json::array();
    for (const auto& d : bundle.distribution) {
        distribution.push_back(
            {{"index", to_string(d.index_kind)}, {"period", d.period.to_string()}, {"summary", to_json(d.summary)}});
    }

    json correlation = json::array();
    for (const auto& c : bundle.correlation) {
        correlation.push_back({{"period", c.period.to_string()}, {"n", c.n}, {"r_squared", c.r_squared}});
    }

    return {{"metadata", metadata},
            {"per_region", regions},
            {"per_district", districts},
            {"distribution", distribution},
            {"correlation", correlation}};
}

ReportBundle bundle_from_json(const json& document) {
    try {
        ReportBundle bundle;
        const auto& meta = document.at("metadata");
        bundle.metadata.dataset = meta.at("dataset").get<std::string>();
        bundle.metadata.registry_version = meta.at("registry_version").get<std::string>();
        for (const auto& p : meta.at("periods")) bundle.metadata.periods.push_back(read_period(p));
        bundle.metadata.quartile_convention = meta.at("quartile_convention").get<std::string>();
        bundle.metadata.weight_kind = read_weight_kind(meta.at("weight_kind"));

        for (const auto& r : document.at("per_region")) {
            RegionReport entry;
            entry.region_code = r.at("region_code").get<std::string>();
            entry.region_name = r.at("region_name").get<std::string>();
            entry.district_code = r.at("district_code").get<std::string>();
            entry.period = read_period(r.at("period"));
            entry.banking = composite_from_json(r.at("banking"), IndexKind::banking_rbsp,
                                                entry.region_code, entry.period);
            entry.health = composite_from_json(r.at("health"), IndexKind::economic_health,
                                               entry.region_code, entry.period);
            const auto& classes = r.at("classification");
            entry.banking_class = class_from_json(classes.at("banking"), entry.region_code, entry.period);
            entry.health_class = class_from_json(classes.at("health"), entry.region_code, entry.period);
            bundle.per_region.push_back(std::move(entry));
        }
        for (const auto& d : document.at("per_district")) {
            DistrictEntry entry;
            entry.index_kind = read_index_kind(d.at("index"));
            entry.district.district_code = d.at("district_code").get<std::string>();
            entry.district.period = read_period(d.at("period"));
            entry.district.value = d.at("value").get<double>();
            entry.district.member_regions = d.at("member_regions").get<std::vector<std::string>>();
            entry.district.weight_kind = read_weight_kind(d.at("weight_kind"));
            bundle.per_district.push_back(std::move(entry));
        }
        for (const auto& d : document.at("distribution")) {
            bundle.distribution.push_back(
                {read_index_kind(d.at("index")), read_period(d.at("period")), summary_from_json(d.at("summary"))});
        }
        for (const auto& c : document.at("correlation")) {
            bundle.correlation.push_back(
                {read_period(c.at("period")), c.at("n").get<std::size_t>(), c.at("r_squared").get<double>()});
        }
        return bundle;
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("report JSON does not match the bundle schema: {}", e.what()));
    }
}

std::string render_markdown(const ReportBundle& bundle) {
    std::string md;
    md += "# Regional indicator report\n\n";
    md += fmt::format("- Dataset: `{}`\n", bundle.metadata.dataset);
    md += fmt::format("- Registry version: `{}`\n", bundle.metadata.registry_version);
    if (!bundle.metadata.periods.empty()) {
        md += fmt::format("- Periods: {} to {}\n", bundle.metadata.periods.front().to_string(),
                          bundle.metadata.periods.back().to_string());
    }
    md += fmt::format("- Quartile convention: `{}`\n", bundle.metadata.quartile_convention);
    md += fmt::format("- District weights: {}\n", to_string(bundle.metadata.weight_kind));

    struct IndexView {
        IndexKind kind;
        const char* title;
    };
    const IndexView views[] = {{IndexKind::banking_rbsp, "Banking services provision index"},
                               {IndexKind::economic_health, "Economic health indicator"}};

    for (const auto& period : bundle.metadata.periods) {
        md += fmt::format("\n## Period {}\n", period.to_string());
        for (const auto& view : views) {
            std::vector<const RegionReport*> leaders;
            std::vector<const RegionReport*> outsiders;
            auto value_of = [&](const RegionReport* r) {
                return view.kind == IndexKind::banking_rbsp ? r->banking.value : r->health.value;
            };
            for (const auto& r : bundle.per_region) {
                if (r.period != period) continue;
                const auto& c = view.kind == IndexKind::banking_rbsp ? r.banking_class : r.health_class;
                if (c.leader_flag == LeaderFlag::leader) leaders.push_back(&r);
                if (c.leader_flag == LeaderFlag::outsider) outsiders.push_back(&r);
            }
            auto by_value = [&](bool descending) {
                return [&, descending](const RegionReport* a, const RegionReport* b) {
                    if (value_of(a) != value_of(b)) {
                        return descending ? value_of(a) > value_of(b) : value_of(a) < value_of(b);
                    }
                    return a->region_code < b->region_code;
                };
            };
            std::sort(leaders.begin(), leaders.end(), by_value(true));
            std::sort(outsiders.begin(), outsiders.end(), by_value(false));

            for (const auto& [heading, rows] : {std::pair{"Leaders", &leaders}, std::pair{"Outsiders", &outsiders}}) {
                md += fmt::format("\n### {}: {} ({} regions)\n\n", view.title, heading, rows->size());
                md += "| Region | Name | District | Value |\n|---|---|---|---|\n";
                for (const auto* r : *rows) {
                    md += fmt::format("| {} | {} | {} | {} |\n", r->region_code, r->region_name,
                                      r->district_code, fmt_value(value_of(r)));
                }
            }
        }

        md += "\n### Distribution\n\n";
        md += "| Index | n | Mean | Std dev | CV | Skewness | Kurtosis | Q1 | Median | Q3 |\n";
        md += "|---|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& d : bundle.distribution) {
            if (d.period != period) continue;
            const auto& s = d.summary;
            md += fmt::format("| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n", to_string(d.index_kind),
                              s.n, fmt_value(s.mean), fmt_value(s.std_dev), fmt_optional(s.cv),
                              fmt_optional(s.skewness), fmt_optional(s.kurtosis), fmt_value(s.q1),
                              fmt_value(s.median), fmt_value(s.q3));
        }
        for (const auto& c : bundle.correlation) {
            if (c.period == period) {
                md += fmt::format("\nHealth vs banking R² = {} (n = {})\n", fmt_value(c.r_squared), c.n);
            }
        }
    }

    for (const auto& view : views) {
        std::map<std::string, std::map<Period, double>> table;
        for (const auto& d : bundle.per_district) {
            if (d.index_kind == view.kind) table[d.district.district_code][d.district.period] = d.district.value;
        }
        if (table.empty()) continue;
        md += fmt::format("\n## {} by federal district\n\n| District |", view.title);
        for (const auto& p : bundle.metadata.periods) md += fmt::format(" {} |", p.to_string());
        md += "\n|---|";
        for (std::size_t i = 0; i < bundle.metadata.periods.size(); ++i) md += "---|";
        md += "\n";
        for (const auto& [district, values] : table) {
            md += fmt::format("| {} |", district);
            for (const auto& p : bundle.metadata.periods) {
                const auto it = values.find(p);
                md += fmt::format(" {} |", it == values.end() ? std::string("n/a") : fmt_value(it->second));
            }
            md += "\n";
        }
    }
    return md;
}

void emit_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& out) {
    const std::string text =
        format == ReportFormat::json ? to_json(bundle).dump(2) + "\n" : render_markdown(bundle);
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(fmt::format("cannot write report '{}'", out.string()));
    file << text;
    if (!file) throw IoError(fmt::format("failed writing report '{}'", out.string()));
}

}  // namespace shadow
