#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "shadow/cli.hpp"
#include "shadow/errors.hpp"
#include "shadow/fixture.hpp"
#include "shadow/report.hpp"
#include "support.hpp"

using namespace shadow;
using shadow::testing::fixture;

namespace {

std::size_t count_substr(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++count;
    return count;
}

/// Data rows of the first Markdown table following `heading`.
std::size_t table_rows(const std::string& md, const std::string& heading) {
    auto pos = md.find(heading);
    if (pos == std::string::npos) return 0;
    std::istringstream in(md.substr(pos));
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    bool in_table = false;
    while (std::getline(in, line)) {
        if (line.rfind("|", 0) == 0) {
            if (in_table && line.rfind("|---", 0) != 0) ++rows;
            in_table = true;
        } else if (in_table) {
            break;
        }
    }
    return rows;
}

std::string region_code(int i) { return (i < 10 ? "R0" : "R") + std::to_string(i); }

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text != nullptr) *out_text = out.str();
    if (err_text != nullptr) *err_text = err.str();
    return code;
}

const ReportBundle& fixture_bundle() {
    static const ReportBundle bundle = [] {
        PipelineConfig config;
        config.periods = {Period{2018}, Period{2019}};
        return run_pipeline(config, fixture(), "synthetic_85.csv");
    }();
    return bundle;
}

}  // namespace

TEST(RunPipeline, FixtureOnePeriod) {
    PipelineConfig config;
    config.dataset = shadow::testing::fixture_path();
    config.periods = {Period{2019}};
    const auto bundle = run_pipeline(config);
    ASSERT_EQ(bundle.per_region.size(), fixture().subject_regions().size());
    EXPECT_EQ(bundle.per_region.size(), 85u);
    const auto regions = fixture().subject_regions();
    for (const auto& r : bundle.per_region) {
        EXPECT_TRUE(std::binary_search(regions.begin(), regions.end(), r.region_code)) << r.region_code;
        EXPECT_EQ(r.banking.subindices.size(), 8u);
        EXPECT_EQ(r.health.subindices.size(), 6u);
    }
    ASSERT_EQ(bundle.correlation.size(), 1u);
    EXPECT_EQ(bundle.correlation[0].n, 85u);
    EXPECT_GE(bundle.correlation[0].r_squared, 0.0);
    EXPECT_LE(bundle.correlation[0].r_squared, 1.0);
    EXPECT_EQ(bundle.distribution.size(), 2u);
    EXPECT_EQ(bundle.metadata.quartile_convention, kQuartileConvention);
    std::set<std::string> districts;
    for (const auto& d : bundle.per_district) districts.insert(d.district.district_code);
    EXPECT_EQ(districts.size(), 8u);
}

TEST(RunPipeline, Errors) {
    PipelineConfig empty;
    empty.dataset = "/nonexistent/never-read.csv";
    EXPECT_THROW(run_pipeline(empty), ConfigError);

    std::vector<IndicatorObservation> rows;
    for (const auto& [key, o] : fixture().observations()) {
        if (o.region_code != kNationalRegion) rows.push_back(o);
    }
    const auto no_national = IndicatorDataset::from_observations(rows);
    PipelineConfig config;
    config.periods = {Period{2019}};
    try {
        run_pipeline(config, no_national, "no-ru");
        FAIL() << "expected MissingNationalBaseline";
    } catch (const MissingNationalBaseline& e) {
        EXPECT_EQ(std::string(e.what()).rfind("subindex_engine", 0), 0u) << e.what();
    }

    const auto dir = shadow::testing::scratch_dir("no-ru");
    const auto path = dir / "no_ru.csv";
    std::ofstream(path) << to_csv(no_national);
    EXPECT_EQ(cli({"compute", "--dataset", path.string(), "--period", "2019", "--out", (dir / "r.json").string()}),
              kExitComputation);

    std::vector<IndicatorObservation> gap;
    for (const auto& [key, o] : fixture().observations()) {
        if (!(o.region_code == "KOMI-LIKE" && o.indicator_id == "grp")) gap.push_back(o);
    }
    EXPECT_THROW(run_pipeline(config, IndicatorDataset::from_observations(gap), "gap"), ValidationFailed);
}

TEST(Report, JsonRoundTrip) {
    const auto& bundle = fixture_bundle();
    const auto doc = to_json(bundle);
    EXPECT_EQ(bundle_from_json(doc), bundle);
    EXPECT_EQ(bundle_from_json(nlohmann::json::parse(doc.dump(2))), bundle);
    EXPECT_THROW(bundle_from_json(nlohmann::json::array()), ParseError);

    std::vector<std::string> keys;
    for (const auto& [key, value] : doc.items()) keys.push_back(key);
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

TEST(Report, MarkdownOutsiderTable) {
    // Sixteen regions valued 1..16: Q1 = 4.75, so exactly four outsiders.
    std::map<std::string, double> values;
    for (int i = 1; i <= 16; ++i) values[region_code(i)] = i;
    const auto classes = classify_quartiles(values, Period{2019});
    ReportBundle bundle;
    bundle.metadata.periods = {Period{2019}};
    std::size_t outsiders = 0;
    for (const auto& [region, value] : values) {
        RegionReport r;
        r.region_code = region;
        r.region_name = region;
        r.district_code = "CFD";
        r.period = Period{2019};
        r.banking.value = value;
        r.health.value = 1.0;
        r.banking_class = classes.at(region);
        r.health_class.leader_flag = LeaderFlag::neither;
        outsiders += r.banking_class.leader_flag == LeaderFlag::outsider;
        bundle.per_region.push_back(r);
    }
    ASSERT_EQ(outsiders, 4u);
    const auto md = render_markdown(bundle);
    EXPECT_EQ(table_rows(md, "### Banking services provision index: Outsiders"), 4u);
    EXPECT_EQ(table_rows(md, "### Banking services provision index: Leaders"), 4u);
    EXPECT_NE(md.find("Outsiders (4 regions)"), std::string::npos);

    const auto fixture_md = render_markdown(fixture_bundle());
    std::size_t fixture_outsiders = 0;
    for (const auto& r : fixture_bundle().per_region) {
        fixture_outsiders += r.period == Period{2018} && r.banking_class.leader_flag == LeaderFlag::outsider;
    }
    EXPECT_EQ(table_rows(fixture_md, "### Banking services provision index: Outsiders"), fixture_outsiders);
}

TEST(Report, UnwritablePath) {
    EXPECT_THROW(emit_report(fixture_bundle(), ReportFormat::json, "/nonexistent/dir/report.json"), IoError);
    ScatterSpec spec{"t", "x", "y", {{"a", 1, 1, Highlight::none}}};
    EXPECT_THROW(emit_scatter(spec, "/nonexistent/dir/plot.svg"), IoError);
    EXPECT_NE(cli({"compute", "--dataset", shadow::testing::fixture_path().string(), "--period", "2019", "--out",
                   "/nonexistent/dir/report.json"}),
              kExitOk);
}

TEST(Scatter, CircleCounts) {
    const ScatterSpec three{"t", "x", "y",
                            {{"a", 0.1, 1.0, Highlight::none},
                             {"b", 0.5, 2.5, Highlight::leader},
                             {"c", 0.9, 0.2, Highlight::outsider}}};
    const auto svg = render_scatter(three);
    EXPECT_EQ(count_substr(svg, "<circle "), 3u);
    EXPECT_EQ(count_substr(svg, "class=\"leader\""), 1u);
    EXPECT_EQ(count_substr(svg, "class=\"outsider\""), 1u);
    EXPECT_EQ(render_scatter(three), svg);

    EXPECT_THROW(render_scatter(ScatterSpec{}), DomainError);
    EXPECT_THROW(render_scatter(ScatterSpec{"t", "x", "y", {{"a", 1.0, std::nan(""), Highlight::none}}}), DomainError);
    const ScatterSpec escaped{"a<b & c", "x", "y", {{"<r>", 1, 1, Highlight::leader}}};
    EXPECT_EQ(render_scatter(escaped).find("<r>"), std::string::npos);
}

TEST(Scatter, NiceTicks) {
    const auto ticks = nice_ticks(0.17, 5.15);
    ASSERT_GE(ticks.size(), 2u);
    EXPECT_LE(ticks.front(), 0.17);
    EXPECT_GE(ticks.back(), 5.15);
    EXPECT_EQ(ticks.front(), 0.0);
    EXPECT_EQ(ticks[1] - ticks[0], 1.0);
}

TEST(Scatter, FixturePaidServicesHighlights) {
    const auto spec = build_scatter(fixture(), registry_banking(), registry_health(), "rank",
                                    "I8_paid_services_per_capita", Period{2019});
    ASSERT_EQ(spec.points.size(), 85u);
    auto highlight_of = [&](double y) {
        for (const auto& p : spec.points) {
            if (std::abs(p.y - y) <= 1e-9) return p.highlight;
        }
        ADD_FAILURE() << "no point at " << y;
        return Highlight::none;
    };
    for (double y : {5.15, 2.86}) EXPECT_EQ(highlight_of(y), Highlight::leader) << y;
    for (double y : {0.45, 0.56, 0.25, 0.17}) EXPECT_EQ(highlight_of(y), Highlight::outsider) << y;

    std::size_t leaders = 0;
    for (const auto& p : spec.points) leaders += p.highlight == Highlight::leader;
    EXPECT_EQ(count_substr(render_scatter(spec), "class=\"leader\""), leaders);
}

TEST(Cli, Contract) {
    std::string out, err;
    EXPECT_EQ(cli({"--help"}, &out), kExitOk);
    EXPECT_NE(out.find("compute"), std::string::npos);
    EXPECT_EQ(cli({"compute", "--bogus"}, nullptr, &err), kExitUsage);
    EXPECT_NE(err.find("Usage"), std::string::npos);
    EXPECT_EQ(cli({}), kExitUsage);

    const auto data = shadow::testing::fixture_path().string();
    EXPECT_EQ(cli({"stats", "--dataset", data, "--index", "rbsp", "--period", "2019"}, &out), kExitOk);
    const auto stats = nlohmann::json::parse(out);
    EXPECT_NEAR(stats.at("q1").get<double>(), kFixtureBankingQ1, 1e-9);
    EXPECT_NEAR(stats.at("q3").get<double>(), kFixtureBankingQ3, 1e-9);

    EXPECT_EQ(cli({"classify", "--dataset", data, "--index", "rbsp", "--period", "2019"}, &out), kExitOk);
    const auto classes = nlohmann::json::parse(out);
    EXPECT_EQ(classes.at("regions").at(kFixtureOutsiderRegion).at("leader_flag"), "outsider");

    EXPECT_EQ(cli({"validate", "--dataset", data}, &out), kExitOk);
    EXPECT_EQ(cli({"validate", "--dataset", data, "--required", "ppi"}, &out), kExitValidation);
    EXPECT_EQ(cli({"stats", "--dataset", data, "--index", "rbsp", "--period", "2018,2019"}), kExitUsage);
    EXPECT_EQ(cli({"stats", "--dataset", "/nonexistent.csv", "--index", "rbsp", "--period", "2019"}), kExitIo);

    const auto dir = shadow::testing::scratch_dir("cli");
    EXPECT_EQ(cli({"compute", "--dataset", data, "--period", "2019", "--format", "markdown", "--out",
                   (dir / "r.md").string()}),
              kExitOk);
    EXPECT_NE(shadow::testing::read_file(dir / "r.md").find("Outsiders"), std::string::npos);
    EXPECT_EQ(cli({"plot", "--dataset", data, "--x", "health", "--y", "rbsp", "--period", "2019", "--out",
                   (dir / "p.svg").string()}),
              kExitOk);
    EXPECT_EQ(count_substr(shadow::testing::read_file(dir / "p.svg"), "<circle "), 85u);
}

TEST(Cli, TypologyConfig) {
    const auto dir = shadow::testing::scratch_dir("typology");
    const auto path = dir / "typology.json";
    std::ofstream(path) << R"({"t_income": 1.0, "t_save": 1.0, "t_diff": 1.0, "t_infra": 1.0,
        "features": {"income_level": "I5_loans_individuals_per_capita",
                     "savings_propensity": "I7_savings_per_capita",
                     "income_differentiation": "H3_retail_turnover_per_capita_growth",
                     "export_orientation": false,
                     "infrastructure_score": "I3_assets_per_grp"}})";
    std::string out;
    const auto data = shadow::testing::fixture_path().string();
    ASSERT_EQ(cli({"classify", "--dataset", data, "--index", "rbsp", "--period", "2019", "--typology", path.string()},
                  &out),
              kExitOk);
    const auto doc = nlohmann::json::parse(out);
    std::size_t type_one = 0;
    for (const auto& [region, c] : doc.at("regions").items()) type_one += c.at("typology") == "type_I";
    EXPECT_GT(type_one, 0u);

    std::ofstream(path, std::ios::trunc) << R"({"t_income": 1.0, "t_save": 1.0, "t_diff": 1.0, "t_infra": 1.0})";
    EXPECT_EQ(cli({"classify", "--dataset", data, "--index", "rbsp", "--period", "2019", "--typology", path.string()}),
              kExitComputation);
    std::ofstream(path, std::ios::trunc) << R"({"t_income": 1.0})";
    EXPECT_EQ(cli({"classify", "--dataset", data, "--index", "rbsp", "--period", "2019", "--typology", path.string()}),
              kExitUsage);
}
