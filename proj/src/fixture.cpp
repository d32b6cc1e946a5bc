#include "shadow/fixture.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <random>

#include <fmt/format.h>

namespace shadow {

namespace {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so the mapping to [a, b) is done here to keep fixtures portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double a, double b) {
        const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return a + (b - a) * unit;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

private:
    std::mt19937_64 engine_;
};

double round_sig(double v, int digits) {
    const auto text = fmt::format("{:.{}g}", v, digits);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

enum class Band { lower, q1_anchor, middle, q3_anchor, upper };

struct RegionSpec {
    std::string code;
    std::string name;
    std::string district;
    Band band = Band::middle;
    std::optional<double> target;       // banking index in the calibration year
    std::optional<double> paid_services;  // I8 in the calibration year
    std::optional<double> savings;        // I7 in the calibration year
    std::optional<double> grp_per_capita;  // relative to national
    bool exact = false;                    // written without rounding
};

struct District {
    const char* code;
    int count;
};

constexpr District kDistricts[] = {{"CFD", 18}, {"NWFD", 11}, {"SFD", 8},   {"NCFD", 7},
                                   {"VFD", 14}, {"UFD", 6},   {"SibFD", 10}, {"FEFD", 11}};

std::vector<RegionSpec> named_regions() {
    auto named = [](const char* code, const char* name, const char* district, Band band) {
        RegionSpec r;
        r.code = code;
        r.name = name;
        r.district = district;
        r.band = band;
        r.exact = true;
        return r;
    };
    std::vector<RegionSpec> out;
    auto& moscow = out.emplace_back(named("MOSCOW-LIKE", "Moscow-like (synthetic)", "CFD", Band::upper));
    moscow.target = 2.4;
    moscow.savings = 1.41;
    moscow.grp_per_capita = 3.2;
    out.push_back(named("VORONEZH-LIKE", "Voronezh-like (synthetic)", "CFD", Band::lower));
    out.push_back(named("TAMBOV-LIKE", "Tambov-like (synthetic)", "CFD", Band::lower));
    out.push_back(named("KOMI-LIKE", "Komi-like (synthetic)", "NWFD", Band::lower));
    auto& crimea = out.emplace_back(named("CRIMEA-LIKE", "Crimea-like (synthetic)", "SFD", Band::middle));
    crimea.target = 0.45;
    crimea.paid_services = 5.15;
    crimea.grp_per_capita = 0.6;
    auto& sevastopol =
        out.emplace_back(named("SEVASTOPOL-LIKE", "Sevastopol-like (synthetic)", "SFD", Band::middle));
    sevastopol.target = 0.4;
    sevastopol.paid_services = 2.86;
    sevastopol.grp_per_capita = 0.7;
    auto& dagestan = out.emplace_back(named(kFixtureOutsiderRegion, "Dagestan-like (synthetic)", "NCFD", Band::lower));
    dagestan.target = kFixtureOutsiderValue;
    dagestan.grp_per_capita = 0.45;
    auto& q1 = out.emplace_back(named("ANCHOR-Q1", "Lower-quartile anchor (synthetic)", "VFD", Band::q1_anchor));
    q1.target = kFixtureBankingQ1;
    auto& khmao = out.emplace_back(named("KHMAO-LIKE", "Khanty-Mansi-like (synthetic)", "UFD", Band::upper));
    khmao.target = 1.1;
    khmao.paid_services = 0.25;
    khmao.grp_per_capita = 4.5;
    auto& yanao = out.emplace_back(named("YANAO-LIKE", "Yamalo-Nenets-like (synthetic)", "UFD", Band::upper));
    yanao.target = 1.3;
    yanao.paid_services = 0.17;
    yanao.grp_per_capita = 6.0;
    auto& q3 = out.emplace_back(named("ANCHOR-Q3", "Upper-quartile anchor (synthetic)", "SibFD", Band::q3_anchor));
    q3.target = kFixtureBankingQ3;
    auto& sakhalin = out.emplace_back(named("SAKHALIN-LIKE", "Sakhalin-like (synthetic)", "FEFD", Band::upper));
    sakhalin.target = 0.9;
    sakhalin.paid_services = 0.45;
    sakhalin.grp_per_capita = 3.8;
    auto& chukotka = out.emplace_back(named("CHUKOTKA-LIKE", "Chukotka-like (synthetic)", "FEFD", Band::middle));
    chukotka.target = 0.3;
    chukotka.paid_services = 0.56;
    chukotka.grp_per_capita = 3.0;
    return out;
}

// Banking numerators with their denominators, in registry order minus I2
// (which shares the I1 numerator).
struct BankingSeries {
    const char* indicator;
    bool per_capita;
};
constexpr BankingSeries kBankingSeries[] = {
    {"credit_institutions_count", true}, {"bank_assets", false}, {"bank_capital", false},
    {"loans_individuals", true},         {"loans_legal_entities", false},
    {"deposits_total", true},            {"paid_services_volume", true}};

const char* unit_of(std::string_view indicator) {
    if (indicator == "population") return "thousand-persons";
    if (indicator == "credit_institutions_count") return "units";
    if (indicator == "unemployment_rate") return "percent";
    if (indicator == "construction_volume_index" || indicator == "cpi") return "index-points";
    return "bln-rub";
}

}  // namespace

const std::vector<FixtureCheckpoint>& fixture_checkpoints() {
    static const std::vector<FixtureCheckpoint> checkpoints{
        {"CRIMEA-LIKE", "I8_paid_services_per_capita", 5.15},
        {"SEVASTOPOL-LIKE", "I8_paid_services_per_capita", 2.86},
        {"SAKHALIN-LIKE", "I8_paid_services_per_capita", 0.45},
        {"CHUKOTKA-LIKE", "I8_paid_services_per_capita", 0.56},
        {"KHMAO-LIKE", "I8_paid_services_per_capita", 0.25},
        {"YANAO-LIKE", "I8_paid_services_per_capita", 0.17},
        {"MOSCOW-LIKE", "I7_savings_per_capita", 1.41},
    };
    return checkpoints;
}

IndicatorDataset make_synthetic_dataset(const FixtureOptions& options) {
    Rng rng(options.seed);

    // Region roster: named regions first, generic ones fill each district.
    std::vector<RegionSpec> regions = named_regions();
    std::map<std::string, int> per_district;
    for (const auto& r : regions) ++per_district[r.district];
    std::vector<std::size_t> generic;
    for (const auto& d : kDistricts) {
        for (int i = per_district[d.code]; i < d.count; ++i) {
            RegionSpec r;
            r.code = fmt::format("{}-{:02d}", d.code, i + 1);
            r.name = fmt::format("Synthetic region {} {:02d}", d.code, i + 1);
            r.district = d.code;
            generic.push_back(regions.size());
            regions.push_back(std::move(r));
        }
    }
    // 85 regions: 21 below Q1, the Q1 anchor, 41 between, the Q3 anchor, 21 above.
    // Named regions take 4 lower, 3 middle and 4 upper slots.
    for (std::size_t i = generic.size(); i > 1; --i) std::swap(generic[i - 1], generic[rng.index(i)]);
    for (std::size_t i = 0; i < generic.size(); ++i) {
        regions[generic[i]].band = i < 17 ? Band::lower : i < 55 ? Band::middle : Band::upper;
    }

    // Static per-region attributes.
    struct State {
        double base_target = 0;
        double base_i8 = 0;
        double population = 0;
        double pop_growth = 0;
        double grp_per_capita = 0;
        double latent = 0;
        std::map<std::string, double> banking_profile;  // persistent log-deviations
        std::map<std::string, double> health_level;  // chained health series
    };
    std::vector<State> state(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        auto& r = regions[i];
        auto& s = state[i];
        switch (r.band) {
            case Band::lower: s.base_target = rng.uniform(0.06, 0.18); break;
            case Band::middle: s.base_target = rng.uniform(0.2, 0.55); break;
            case Band::upper: s.base_target = rng.uniform(0.58, 2.8); break;
            case Band::q1_anchor:
            case Band::q3_anchor: break;
        }
        if (r.target) s.base_target = *r.target;
        s.base_i8 = r.paid_services.value_or(rng.uniform(0.65, 2.3));
        s.population = r.code == "MOSCOW-LIKE" ? 12500.0 : round_to(rng.uniform(150.0, 5500.0), 0.1);
        s.pop_growth = rng.uniform(0.992, 1.008);
        s.grp_per_capita = r.grp_per_capita.value_or(rng.uniform(0.5, 2.0));
        s.latent = std::log(s.base_target / 0.35);
        for (const auto& series : kBankingSeries) s.banking_profile[series.indicator] = rng.uniform(-0.5, 0.5);
        s.health_level["fixed_capital_investment"] = round_sig(s.population * rng.uniform(0.05, 0.15), 6);
        s.health_level["retail_turnover"] = round_sig(s.population * rng.uniform(0.1, 0.25), 6);
        s.health_level["unemployment_rate"] = round_to(rng.uniform(3.0, 12.0), 0.1);
        s.health_level["cpi"] = round_to(rng.uniform(102.0, 108.0), 0.1);
    }

    // National series.
    std::map<std::string, double> national{
        {"population", 146267.0},      {"grp", 65751.0},
        {"credit_institutions_count", 38000.0}, {"bank_assets", 77653.0},
        {"bank_capital", 7928.0},      {"loans_individuals", 11330.0},
        {"loans_legal_entities", 29535.0}, {"deposits_total", 18553.0},
        {"paid_services_volume", 7100.0}, {"fixed_capital_investment", 13900.0},
        {"retail_turnover", 26356.0},  {"unemployment_rate", 5.2},
        {"cpi", 111.4},                {"construction_volume_index", 97.7},
    };

    std::vector<IndicatorObservation> observations;
    auto emit = [&](const std::string& code, const std::string& name, const std::string& district,
                    const std::string& indicator, int year, double value) {
        observations.push_back({code, name, district, indicator, Period::annual(year), value,
                                unit_of(indicator)});
    };

    std::map<std::string, double> previous_national;
    for (int year = options.first_year; year <= options.last_year; ++year) {
        const bool calibrating = year == options.calibration_year;
        const bool first = year == options.first_year;
        if (!first) {
            previous_national = national;
            national["population"] = round_to(national["population"] * rng.uniform(0.999, 1.002), 0.1);
            for (const char* id : {"grp", "bank_assets", "bank_capital", "loans_individuals",
                                   "loans_legal_entities", "deposits_total", "paid_services_volume",
                                   "fixed_capital_investment", "retail_turnover"}) {
                national[id] = round_to(national[id] * rng.uniform(1.01, 1.09), 0.1);
            }
            national["credit_institutions_count"] =
                std::round(national["credit_institutions_count"] * rng.uniform(0.95, 1.0));
            national["unemployment_rate"] = round_to(national["unemployment_rate"] * rng.uniform(0.9, 1.1), 0.1);
            national["cpi"] = round_to(rng.uniform(102.0, 113.0), 0.1);
            national["construction_volume_index"] = round_to(rng.uniform(97.0, 106.0), 0.1);
        }
        for (const auto& [id, v] : national) {
            emit(std::string(kNationalRegion), "Russian Federation", std::string(kNationalRegion), id, year, v);
        }
        const double nat_pop = national["population"];
        const double nat_grp = national["grp"];

        for (std::size_t i = 0; i < regions.size(); ++i) {
            const auto& r = regions[i];
            auto& s = state[i];
            auto written = [&](double v) { return r.exact ? v : round_sig(v, 6); };
            if (!first) s.population *= s.pop_growth;
            const double prev_pop = first ? s.population : s.population / s.pop_growth;
            const double pop = written(s.population);
            const double grp = written(pop * (nat_grp / nat_pop) * s.grp_per_capita *
                                       (calibrating ? 1.0 : std::exp(rng.uniform(-0.05, 0.05))));
            const double q = (grp / pop) / (nat_grp / nat_pop);

            // Banking sub-indices; the free ones are shifted by a common factor
            // so the composite hits the target.
            const double target =
                calibrating ? s.base_target : s.base_target * std::exp(rng.uniform(-0.1, 0.1));
            std::map<std::string, double> fixed;
            fixed["paid_services_volume"] =
                calibrating ? s.base_i8 : s.base_i8 * std::exp(rng.uniform(-0.08, 0.08));
            if (r.savings) {
                fixed["deposits_total"] =
                    calibrating ? *r.savings : *r.savings * std::exp(rng.uniform(-0.08, 0.08));
            }
            std::map<std::string, double> deviation;
            double free_sum = 0.0;
            double fixed_sum = 0.0;
            for (const auto& series : kBankingSeries) {
                if (const auto f = fixed.find(series.indicator); f != fixed.end()) {
                    fixed_sum += std::log(f->second);
                } else {
                    const double d = s.banking_profile.at(series.indicator) + rng.uniform(-0.05, 0.05);
                    deviation[series.indicator] = d;
                    free_sum += d;
                }
            }
            // I2 = I1 / q contributes the I1 deviation a second time.
            const double d1 = deviation.at("credit_institutions_count");
            const double shift = (8.0 * std::log(target) - free_sum - d1 + std::log(q) - fixed_sum) /
                                 static_cast<double>(deviation.size() + 1);
            std::map<std::string, double> banking_raw;
            for (const auto& series : kBankingSeries) {
                const auto f = fixed.find(series.indicator);
                const double index =
                    f != fixed.end() ? f->second : std::exp(deviation.at(series.indicator) + shift);
                const double base = series.per_capita ? pop : grp;
                const double national_base = series.per_capita ? nat_pop : nat_grp;
                banking_raw[series.indicator] = written(index * base * (national[series.indicator] / national_base));
            }

            emit(r.code, r.name, r.district, "population", year, pop);
            emit(r.code, r.name, r.district, "grp", year, grp);
            for (const auto& [id, v] : banking_raw) emit(r.code, r.name, r.district, id, year, v);

            // Health series, loosely tied to the banking level through `latent`.
            auto health_factor = [&] { return std::exp(0.06 * s.latent + rng.uniform(-0.06, 0.06)); };
            emit(r.code, r.name, r.district, "construction_volume_index", year,
                 round_to(health_factor() * national["construction_volume_index"], 0.01));
            if (!first) {
                auto& fci = s.health_level["fixed_capital_investment"];
                fci = written(fci * health_factor() *
                              (national["fixed_capital_investment"] / previous_national["fixed_capital_investment"]));
                auto& retail = s.health_level["retail_turnover"];
                const double national_per_capita =
                    (national["retail_turnover"] / previous_national["retail_turnover"]) /
                    (nat_pop / previous_national["population"]);
                retail = written(retail * (s.population / prev_pop) * health_factor() * national_per_capita);
                auto& unemployment = s.health_level["unemployment_rate"];
                unemployment = round_to(unemployment *
                                            (national["unemployment_rate"] / previous_national["unemployment_rate"]) /
                                            health_factor(),
                                        0.01);
                auto& cpi = s.health_level["cpi"];
                cpi = round_to(cpi * (national["cpi"] / previous_national["cpi"]) / health_factor(), 0.01);
            }
            for (const char* id : {"fixed_capital_investment", "retail_turnover", "unemployment_rate", "cpi"}) {
                emit(r.code, r.name, r.district, id, year, s.health_level[id]);
            }
        }
    }
    return IndicatorDataset::from_observations(std::move(observations));
}

}  // namespace shadow
