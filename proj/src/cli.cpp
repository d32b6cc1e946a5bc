#include "shadow/cli.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "shadow/report.hpp"

namespace shadow {

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream stream(item);
        std::string part;
        while (std::getline(stream, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

std::vector<Period> parse_periods(const std::vector<std::string>& items) {
    std::vector<Period> out;
    for (const auto& text : split_list(items)) {
        const auto p = Period::parse(text);
        if (!p) throw ConfigError(fmt::format("invalid period '{}'", text));
        out.push_back(*p);
    }
    return out;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", hash);
}

// Applies --registry selections on top of the built-in pair. A JSON registry
// replaces the banking registry when it has 8 entries, health when it has 6.
void apply_registries(const std::vector<std::string>& selections, PipelineConfig& config) {
    std::string banking_version = "builtin:banking@1";
    std::string health_version = "builtin:health@1";
    for (const auto& selection : split_list(selections)) {
        if (selection == "builtin:banking") {
            config.banking = registry_banking();
            banking_version = selection + "@1";
        } else if (selection == "builtin:health") {
            config.health = registry_health();
            health_version = selection + "@1";
        } else {
            std::ifstream input(selection, std::ios::binary);
            if (!input) throw IoError(fmt::format("cannot open registry '{}'", selection));
            const std::string bytes{std::istreambuf_iterator<char>(input), {}};
            auto registry = load_registry(selection);
            const auto version = fmt::format("file:{}#{}", std::filesystem::path(selection).filename().string(),
                                             fnv1a_hex(bytes));
            if (registry.size() == 8) {
                config.banking = std::move(registry);
                banking_version = version;
            } else if (registry.size() == 6) {
                config.health = std::move(registry);
                health_version = version;
            } else {
                throw ConfigError(fmt::format(
                    "registry '{}' has {} entries; expected 8 (banking) or 6 (health)", selection,
                    registry.size()));
            }
        }
    }
    config.registry_version = banking_version + "," + health_version;
}

IndicatorDataset open_dataset(const std::string& path) {
    const auto format = format_from_extension(path);
    if (!format) throw ConfigError(fmt::format("cannot infer dataset format from '{}'", path));
    try {
        return load_dataset(path, *format);
    } catch (ShadowError& e) {
        e.add_context("ingestion");
        throw;
    }
}

Period single_period(const std::vector<std::string>& items) {
    const auto periods = parse_periods(items);
    if (periods.size() != 1) throw ConfigError("exactly one --period is required");
    return periods.front();
}

const char* index_id(const std::string& index) { return index == "rbsp" ? "rbsp" : "health"; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regional composite indices: banking-services provision and economic health", "shadow"};
    app.require_subcommand(1);

    std::string dataset;
    std::vector<std::string> registries;
    std::vector<std::string> periods;
    std::string output;
    std::string format = "json";
    std::string weights = "population";
    std::string typology;
    std::string index;
    std::string x_id;
    std::string y_id;
    std::vector<std::string> required;

    auto* compute = app.add_subcommand("compute", "Run the full pipeline and write a report");
    compute->add_option("--dataset", dataset, "CSV or JSON observations")->required();
    compute->add_option("--registry", registries,
                        "builtin:banking, builtin:health or a registry JSON file (repeatable)");
    compute->add_option("--period", periods, "YYYY[,YYYY...]")->required();
    compute->add_option("--out", output, "Report path")->required();
    compute->add_option("--format", format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));
    compute->add_option("--weights", weights, "District weights")
        ->check(CLI::IsMember({"population", "grp", "unweighted"}));
    compute->add_option("--typology", typology, "Typology thresholds JSON");

    auto* stats = app.add_subcommand("stats", "Distribution summary of an index cross-section");
    stats->add_option("--dataset", dataset)->required();
    stats->add_option("--index", index)->required()->check(CLI::IsMember({"rbsp", "health"}));
    stats->add_option("--period", periods)->required();
    stats->add_option("--registry", registries);

    auto* classify = app.add_subcommand("classify", "Quartile bands, leaders/outsiders and typology");
    classify->add_option("--dataset", dataset)->required();
    classify->add_option("--index", index)->required()->check(CLI::IsMember({"rbsp", "health"}));
    classify->add_option("--period", periods)->required();
    classify->add_option("--typology", typology, "Typology thresholds JSON");
    classify->add_option("--registry", registries);

    auto* plot = app.add_subcommand("plot", "SVG scatter diagram of two index or sub-index series");
    plot->add_option("--dataset", dataset)->required();
    plot->add_option("--x", x_id, "Index id, sub-index id, indicator id or 'rank'")->required();
    plot->add_option("--y", y_id, "Index id, sub-index id or indicator id")->required();
    plot->add_option("--period", periods)->required();
    plot->add_option("--out", output)->required();
    plot->add_option("--registry", registries);

    auto* validate = app.add_subcommand("validate", "Coverage report for a dataset");
    validate->add_option("--dataset", dataset)->required();
    validate->add_option("--required", required, "Indicator ids, comma separated");
    validate->add_option("--period", periods, "Periods to check (default: all in the dataset)");

    std::vector<std::string> argv_storage{"shadow"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        PipelineConfig config;
        apply_registries(registries, config);

        if (*compute) {
            config.dataset = dataset;
            config.periods = parse_periods(periods);
            config.weight_kind = *weight_kind_from_string(weights);
            if (!typology.empty()) config.typology = load_typology_config(typology);
            const auto bundle = run_pipeline(config);
            emit_report(bundle, format == "json" ? ReportFormat::json : ReportFormat::markdown, output);
            return kExitOk;
        }
        if (*stats) {
            const auto period = single_period(periods);
            const auto data = open_dataset(dataset);
            const auto values = cross_section(data, config.banking, config.health, index_id(index), period);
            std::vector<double> xs;
            for (const auto& [region, v] : values) xs.push_back(v);
            auto doc = to_json(summarize(xs));
            doc["index"] = index;
            doc["period"] = period.to_string();
            doc["quartile_convention"] = kQuartileConvention;
            out << doc.dump(2) << "\n";
            return kExitOk;
        }
        if (*classify) {
            const auto period = single_period(periods);
            const auto data = open_dataset(dataset);
            const auto values = cross_section(data, config.banking, config.health, index_id(index), period);
            auto classes = classify_quartiles(values, period);
            if (!typology.empty()) {
                PipelineConfig with_typology = config;
                with_typology.periods = {period};
                with_typology.typology = load_typology_config(typology);
                // Reuse the pipeline's feature resolution through a one-period run.
                const auto bundle = run_pipeline(with_typology, data, dataset);
                for (const auto& r : bundle.per_region) classes[r.region_code].typology = r.banking_class.typology;
            }
            nlohmann::json doc{{"index", index},
                               {"period", period.to_string()},
                               {"quartile_convention", kQuartileConvention},
                               {"regions", to_json(classes)}};
            out << doc.dump(2) << "\n";
            return kExitOk;
        }
        if (*plot) {
            const auto period = single_period(periods);
            const auto data = open_dataset(dataset);
            emit_scatter(build_scatter(data, config.banking, config.health, x_id, y_id, period), output);
            return kExitOk;
        }
        if (*validate) {
            const auto data = open_dataset(dataset);
            auto checked = parse_periods(periods);
            if (checked.empty()) {
                const auto all = data.periods();
                checked.assign(all.begin(), all.end());
            }
            const auto registered =
                [&] {
                    auto ids = required_indicators(config.banking);
                    for (auto& id : required_indicators(config.health)) ids.push_back(std::move(id));
                    return ids;
                }();
            const auto wanted = required.empty() ? registered : split_list(required);
            const auto report = validate_dataset(data, wanted, checked, &registered);
            out << to_json(report).dump(2) << "\n";
            return report.accepted() ? kExitOk : kExitValidation;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ShadowError& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}

}  // namespace shadow
