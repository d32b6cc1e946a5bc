// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "shadow/composite.hpp"
#include "shadow/distribution.hpp"
#include "shadow/fixture.hpp"
#include "shadow/report.hpp"
#include "support.hpp"

using namespace shadow;
namespace oracle = shadow::oracle;

namespace {

using Clock = std::chrono::steady_clock;

// Tolerances.
constexpr double kRbspRel = 1e-12;
constexpr double kGeoPropertyRel = 1e-12;
constexpr double kAnchorAbs = 1e-12;
constexpr double kScaleRel = 1e-12;
constexpr double kCheckpointAbs = 1e-9;
constexpr double kStatsRel = 1e-10;
constexpr double kStatsAbsFloor = 1e-14;
constexpr double kSymmetricSkew = 1e-12;
constexpr double kCollinearAbs = 1e-12;
constexpr double kFourPointAbs = 1e-9;
constexpr double kBudgetSeconds = 1.0;

const std::vector<Period> kPeriods{Period{2015}, Period{2016}, Period{2017}, Period{2018}, Period{2019}};

/// Collects failure messages for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    void expect(bool ok, const std::string& what) {
        if (!ok && failures.size() < 10) failures.push_back(what);
        if (!ok && failures.size() == 10) failures.push_back("...");
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> random_vector(oracle::Sampler& rng, std::size_t k, double lo, double hi) {
    std::vector<double> v(k);
    for (auto& x : v) x = rng.log_uniform(lo, hi);
    return v;
}

void criterion_rbsp_oracle(Check& c) {
    oracle::Sampler rng(1001);
    std::vector<std::vector<double>> cases;
    for (int i = 0; i < 1000; ++i) cases.push_back(random_vector(rng, 8, 1e-3, 1e3));
    const auto start = Clock::now();
    std::vector<double> results;
    results.reserve(cases.size());
    for (const auto& v : cases) results.push_back(compute_rbsp(shadow::testing::subindices(v)).value);
    const double elapsed = seconds_since(start);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto expected = oracle::product_root(cases[i]);
        c.expect(oracle::close_rel(results[i], expected, kRbspRel),
                 fmt::format("case {}: {} vs oracle {}", i, results[i], static_cast<double>(expected)));
    }
    c.expect(elapsed < kBudgetSeconds, fmt::format("1000 evaluations took {:.3f} s", elapsed));
    c.notes.push_back(fmt::format("1000 cases, {:.4f} s", elapsed));
}

void criterion_geometric_properties(Check& c) {
    oracle::Sampler rng(2002);
    constexpr int kCases = 500;
    int identity = 0, bounds = 0, monotone = 0, permutation = 0, homogeneity = 0;
    for (int i = 0; i < kCases; ++i) {
        const std::size_t k = 1 + rng.index(16);
        const std::vector<double> ones(k, 1.0);
        c.expect(geometric_mean(ones) == 1.0, fmt::format("identity k={}", k));
        ++identity;

        const auto v = random_vector(rng, k, 1e-3, 1e3);
        const double g = geometric_mean(v);
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        c.expect(*lo <= g && g <= *hi, fmt::format("bounds case {}: {} not in [{}, {}]", i, g, *lo, *hi));
        ++bounds;

        auto raised = v;
        raised[rng.index(k)] *= 1.0 + rng.uniform(0.01, 2.0);
        c.expect(geometric_mean(raised) > g, fmt::format("monotonicity case {}", i));
        ++monotone;

        auto shuffled = v;
        for (std::size_t j = shuffled.size(); j > 1; --j) std::swap(shuffled[j - 1], shuffled[rng.index(j)]);
        c.expect(oracle::close_rel(geometric_mean(shuffled), g, kGeoPropertyRel), fmt::format("permutation case {}", i));
        ++permutation;

        const double factor = rng.log_uniform(1e-2, 1e2);
        auto scaled = v;
        for (auto& x : scaled) x *= factor;
        c.expect(oracle::close_rel(geometric_mean(scaled), static_cast<long double>(factor) * g, kGeoPropertyRel),
                 fmt::format("homogeneity case {}", i));
        ++homogeneity;

        if (k == 8) {
            c.expect(compute_rbsp(shadow::testing::subindices(v)).value == g, fmt::format("rbsp vs mean case {}", i));
        }
    }
    c.notes.push_back(fmt::format("identity {}, bounds {}, monotonicity {}, permutation {}, homogeneity {}", identity,
                                  bounds, monotone, permutation, homogeneity));
}

void criterion_normalization(Check& c, const IndicatorDataset& dataset) {
    std::size_t anchors = 0, scaled_checks = 0;
    for (const auto* registry : {&registry_banking(), &registry_health()}) {
        for (const auto& def : *registry) {
            for (const auto& p : kPeriods) {
                const double v = compute_subindex(def, dataset, kNationalRegion, p).value;
                c.expect(std::abs(v - 1.0) <= kAnchorAbs, fmt::format("RU {} {} = {}", def.id, p.to_string(), v));
                ++anchors;
            }
        }
    }
    for (const auto& indicator : dataset.indicators()) {
        const auto scaled = shadow::testing::scaled(dataset, indicator, 7.0);
        for (const auto* registry : {&registry_banking(), &registry_health()}) {
            for (const auto& def : *registry) {
                for (const auto& region : dataset.regions()) {
                    for (const auto& p : kPeriods) {
                        const double a = compute_subindex(def, dataset, region, p).value;
                        const double b = compute_subindex(def, scaled, region, p).value;
                        c.expect(oracle::close_rel(b, a, kScaleRel),
                                 fmt::format("x7 {}: {} {} {}: {} -> {}", indicator, def.id, region, p.to_string(), a, b));
                        ++scaled_checks;
                    }
                }
            }
        }
    }
    c.notes.push_back(fmt::format("{} anchor values, {} scaled comparisons", anchors, scaled_checks));
}

void criterion_checkpoints(Check& c, const IndicatorDataset& dataset) {
    const Period p{2019};
    std::map<std::string, const SubIndexDefinition*> defs;
    for (const auto& d : registry_banking()) defs[d.id] = &d;
    const std::vector<FixtureCheckpoint> expected{
        {"CRIMEA-LIKE", "I8_paid_services_per_capita", 5.15},  {"SEVASTOPOL-LIKE", "I8_paid_services_per_capita", 2.86},
        {"SAKHALIN-LIKE", "I8_paid_services_per_capita", 0.45}, {"CHUKOTKA-LIKE", "I8_paid_services_per_capita", 0.56},
        {"KHMAO-LIKE", "I8_paid_services_per_capita", 0.25},    {"YANAO-LIKE", "I8_paid_services_per_capita", 0.17},
        {"MOSCOW-LIKE", "I7_savings_per_capita", 1.41},
    };
    for (const auto& cp : expected) {
        const double v = compute_subindex(*defs.at(cp.subindex_id), dataset, cp.region_code, p).value;
        c.expect(std::abs(v - cp.value) <= kCheckpointAbs,
                 fmt::format("{} {} = {:.12f}, want {}", cp.region_code, cp.subindex_id, v, cp.value));
    }
    const auto values = cross_section(dataset, registry_banking(), registry_health(), "rbsp", p);
    std::vector<double> xs;
    for (const auto& [r, v] : values) xs.push_back(v);
    const double q1 = static_cast<double>(oracle::quantile7(xs, 0.25));
    const double q3 = static_cast<double>(oracle::quantile7(xs, 0.75));
    const auto [lq1, lq3] = quartile_bounds(xs);
    c.expect(std::abs(q1 - 0.19) <= kCheckpointAbs, fmt::format("Q1 = {:.12f}", q1));
    c.expect(std::abs(q3 - 0.56) <= kCheckpointAbs, fmt::format("Q3 = {:.12f}", q3));
    c.expect(std::abs(lq1 - 0.19) <= kCheckpointAbs && std::abs(lq3 - 0.56) <= kCheckpointAbs,
             fmt::format("quartile_bounds = ({:.12f}, {:.12f})", lq1, lq3));
    c.notes.push_back(fmt::format("{} checkpoints, Q1 = {:.12f}, Q3 = {:.12f}, n = {}", expected.size(), q1, q3, xs.size()));
}

void criterion_distribution(Check& c) {
    oracle::Sampler rng(5005);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + rng.index(49);
        std::vector<double> xs(n);
        const double scale = rng.log_uniform(1e-2, 1e3);
        for (auto& x : xs) x = scale * rng.uniform(-1.0, 3.0);
        const auto s = summarize(xs);
        const auto m = oracle::moments(xs);
        auto near = [&](const char* what, double got, long double want) {
            c.expect(oracle::close_rel(got, want, kStatsRel, kStatsAbsFloor),
                     fmt::format("case {} (n={}): {} = {} vs oracle {}", i, n, what, got, static_cast<double>(want)));
        };
        c.expect(s.skewness && s.kurtosis && s.cv, fmt::format("case {}: moment statistics unset", i));
        if (!(s.skewness && s.kurtosis && s.cv)) continue;
        near("skewness", *s.skewness, m.skewness);
        near("kurtosis", *s.kurtosis, m.kurtosis);
        near("cv", *s.cv, m.cv);
        near("q1", s.q1, oracle::quantile7(xs, 0.25));
        near("median", s.median, oracle::quantile7(xs, 0.5));
        near("q3", s.q3, oracle::quantile7(xs, 0.75));
    }
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double centre = rng.uniform(-50.0, 50.0);
        std::vector<double> xs;
        const std::size_t half = 1 + rng.index(25);
        for (std::size_t j = 0; j < half; ++j) {
            const double d = rng.uniform(0.0, 10.0);
            xs.push_back(centre + d);
            xs.push_back(centre - d);
        }
        if (rng.index(2) == 0) xs.push_back(centre);
        const auto s = summarize(xs);
        const double skew = s.skewness ? std::abs(*s.skewness) : 0.0;
        worst = std::max(worst, skew);
        c.expect(skew < kSymmetricSkew, fmt::format("symmetric case {}: |skewness| = {}", i, skew));
    }
    c.notes.push_back(fmt::format("200 random + 200 symmetric vectors, max symmetric |skewness| = {:.2e}", worst));
}

void criterion_smoothing(Check& c, const IndicatorDataset& dataset) {
    const Period p{2019};
    const auto values = cross_section(dataset, registry_banking(), registry_health(), "rbsp", p);
    std::vector<std::string> regions;
    std::vector<double> logs, weights;
    for (const auto& [r, v] : values) {
        regions.push_back(r);
        logs.push_back(std::log(v));
        weights.push_back(*dataset.value(r, "population", p));
    }
    const double region_var = weighted_variance(logs, weights);
    oracle::Sampler rng(6006);
    double max_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::size_t> order(regions.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t j = order.size(); j > 1; --j) std::swap(order[j - 1], order[rng.index(j)]);
        std::vector<std::size_t> district(regions.size());
        for (std::size_t j = 0; j < order.size(); ++j) district[order[j]] = j < 8 ? j : rng.index(8);

        std::vector<double> district_logs, district_weights;
        for (std::size_t d = 0; d < 8; ++d) {
            std::vector<std::pair<std::string, double>> members;
            std::map<std::string, double> w;
            double total = 0.0;
            for (std::size_t j = 0; j < regions.size(); ++j) {
                if (district[j] != d) continue;
                members.emplace_back(regions[j], values.at(regions[j]));
                w[regions[j]] = weights[j];
                total += weights[j];
            }
            const auto agg = aggregate_district(fmt::format("D{}", d), p, members, w, WeightKind::population);
            district_logs.push_back(std::log(agg.value));
            district_weights.push_back(total);
        }
        const double district_var = weighted_variance(district_logs, district_weights);
        max_ratio = std::max(max_ratio, district_var / region_var);
        c.expect(district_var <= region_var,
                 fmt::format("partition {}: district variance {} > region variance {}", trial, district_var, region_var));
    }
    c.notes.push_back(fmt::format("100 partitions, max district/region variance ratio {:.4f}", max_ratio));
}

void criterion_correlation(Check& c, const IndicatorDataset& dataset) {
    oracle::Sampler rng(7007);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, double>> line;
        const std::size_t n = 3 + rng.index(80);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = rng.uniform(0.1, 5.0);
            line.emplace_back(x, 2.0 * x + 1.0);
        }
        const double r2 = correlate_indices(line);
        c.expect(std::abs(r2 - 1.0) <= kCollinearAbs, fmt::format("collinear trial {}: {}", trial, r2));
    }
    const double four = correlate_indices({{1, 1}, {2, 3}, {3, 2}, {4, 4}});
    c.expect(std::abs(four - 0.64) <= kFourPointAbs, fmt::format("four-point case: {}", four));

    PipelineConfig config;
    config.periods = {Period{2019}};
    const auto bundle = run_pipeline(config, dataset, "synthetic_85.csv");
    c.expect(bundle.correlation.size() == 1, "bundle carries no correlation entry");
    if (bundle.correlation.size() == 1) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& r : bundle.per_region) pairs.emplace_back(r.health.value, r.banking.value);
        const auto& entry = bundle.correlation.front();
        c.expect(entry.n == pairs.size(), "correlation n differs from per-region count");
        c.expect(oracle::close_rel(entry.r_squared, oracle::r_squared(pairs), 1e-10),
                 fmt::format("bundle R² {} vs oracle", entry.r_squared));
        c.notes.push_back(fmt::format("fixture health vs banking R² (2019) = {:.6f}", entry.r_squared));
    }
}

int run_command(const std::vector<std::string>& args) {
    std::string command = fmt::format("\"{}\"", SHADOW_CLI_PATH);
    for (const auto& a : args) command += fmt::format(" \"{}\"", a);
    command += " > /dev/null 2>&1";
    return std::system(command.c_str());
}

void criterion_determinism(Check& c) {
    const auto dir = shadow::testing::scratch_dir("acceptance");
    const auto data = shadow::testing::fixture_path().string();
    for (int run = 0; run < 2; ++run) {
        const auto json = (dir / fmt::format("report{}.json", run)).string();
        const auto md = (dir / fmt::format("report{}.md", run)).string();
        const auto svg = (dir / fmt::format("plot{}.svg", run)).string();
        c.expect(run_command({"compute", "--dataset", data, "--registry", "builtin:banking", "--period",
                              "2015,2016,2017,2018,2019", "--out", json, "--format", "json"}) == 0,
                 "shadow compute (json) failed");
        c.expect(run_command({"compute", "--dataset", data, "--period", "2019", "--out", md, "--format", "markdown"}) == 0,
                 "shadow compute (markdown) failed");
        c.expect(run_command({"plot", "--dataset", data, "--x", "rank", "--y", "I8_paid_services_per_capita",
                              "--period", "2019", "--out", svg}) == 0,
                 "shadow plot failed");
    }
    for (const auto& [a, b] : {std::pair{"report0.json", "report1.json"}, std::pair{"report0.md", "report1.md"},
                               std::pair{"plot0.svg", "plot1.svg"}}) {
        const auto x = shadow::testing::read_file(dir / a);
        const auto y = shadow::testing::read_file(dir / b);
        c.expect(!x.empty() && x == y, fmt::format("{} and {} differ or are empty", a, b));
    }

    PipelineConfig config;
    config.dataset = shadow::testing::fixture_path();
    config.periods = kPeriods;
    const auto start = Clock::now();
    const auto bundle = run_pipeline(config);
    const double elapsed = seconds_since(start);
    c.expect(bundle.per_region.size() == 85 * kPeriods.size(),
             fmt::format("pipeline produced {} region entries", bundle.per_region.size()));
    c.expect(elapsed < kBudgetSeconds, fmt::format("85 x 5 pipeline took {:.3f} s", elapsed));
    c.notes.push_back(fmt::format("JSON, Markdown and SVG byte-identical; 85 x 5 pipeline {:.4f} s", elapsed));
}

void check_sets(Check& c, const std::string& label, const std::map<std::string, double>& values) {
    std::vector<double> xs;
    for (const auto& [r, v] : values) xs.push_back(v);
    const long double q1 = oracle::quantile7(xs, 0.25);
    const long double q3 = oracle::quantile7(xs, 0.75);
    std::set<std::string> want_out, want_lead, got_out, got_lead;
    for (const auto& [r, v] : values) {
        if (v <= q1) want_out.insert(r);
        if (v > q3) want_lead.insert(r);
    }
    for (const auto& [r, cls] : classify_quartiles(values)) {
        if (cls.leader_flag == LeaderFlag::outsider) got_out.insert(r);
        if (cls.leader_flag == LeaderFlag::leader) got_lead.insert(r);
    }
    c.expect(got_out == want_out, fmt::format("{}: outsider set differs ({} vs {})", label, got_out.size(), want_out.size()));
    c.expect(got_lead == want_lead, fmt::format("{}: leader set differs ({} vs {})", label, got_lead.size(), want_lead.size()));
}

void criterion_classification(Check& c, const IndicatorDataset& dataset) {
    std::size_t sections = 0;
    for (const auto& p : kPeriods) {
        for (const auto* id : {"rbsp", "health", "I8_paid_services_per_capita", "H3_retail_turnover_per_capita_growth"}) {
            check_sets(c, fmt::format("fixture {} {}", id, p.to_string()),
                       cross_section(dataset, registry_banking(), registry_health(), id, p));
            ++sections;
        }
    }
    oracle::Sampler rng(9009);
    for (int trial = 0; trial < 300; ++trial) {
        std::map<std::string, double> values;
        const std::size_t n = 4 + rng.index(100);
        const bool ties = trial % 3 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = ties ? static_cast<double>(rng.index(5)) * 0.25 : rng.log_uniform(0.01, 10.0);
            values[fmt::format("r{:03}", i)] = v;
        }
        check_sets(c, fmt::format("seeded cross-section {}", trial), values);
        ++sections;
    }
    c.notes.push_back(fmt::format("{} cross-sections", sections));
}

}  // namespace

int main() {
    const auto& dataset = shadow::testing::fixture();
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"composite banking index matches product-root oracle", criterion_rbsp_oracle},
        {"geometric-mean property suite", criterion_geometric_properties},
        {"national anchor and x7 scale invariance", [&](Check& c) { criterion_normalization(c, dataset); }},
        {"fixture checkpoints and banking quartiles", [&](Check& c) { criterion_checkpoints(c, dataset); }},
        {"distribution statistics match definitional oracle", criterion_distribution},
        {"district aggregation smooths log-index variance", [&](Check& c) { criterion_smoothing(c, dataset); }},
        {"correlation cases and reported bundle R²", [&](Check& c) { criterion_correlation(c, dataset); }},
        {"end-to-end determinism and time budget", criterion_determinism},
        {"leader/outsider sets match quartile recomputation", [&](Check& c) { criterion_classification(c, dataset); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        try {
            criteria[i].second(check);
        } catch (const std::exception& e) {
            check.failures.push_back(fmt::format("exception: {}", e.what()));
        }
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::cout << fmt::format("[{}] {}. {}", ok ? "PASS" : "FAIL", i + 1, criteria[i].first);
        for (const auto& note : check.notes) std::cout << " | " << note;
        std::cout << "\n";
        for (const auto& f : check.failures) std::cout << "       " << f << "\n";
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
