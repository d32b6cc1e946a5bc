#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "shadow/ingestion.hpp"
#include "shadow/subindex.hpp"

namespace shadow::testing {

inline std::filesystem::path fixture_path() {
    return std::filesystem::path(SHADOW_FIXTURE_DIR) / "synthetic_85.csv";
}

inline const IndicatorDataset& fixture() {
    static const IndicatorDataset dataset = load_dataset(fixture_path(), DataFormat::csv);
    return dataset;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("shadow-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline IndicatorObservation obs(std::string region, std::string indicator, int year, double value,
                                std::string district = "CFD") {
    return {region, region + " name", std::move(district), std::move(indicator), Period{year}, value, "u"};
}

/// Sub-index values for one region-period, ids s0, s1, ...
inline std::vector<SubIndexValue> subindices(const std::vector<double>& values, const std::string& region = "A",
                                             Period period = Period{2019}) {
    std::vector<SubIndexValue> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({"s" + std::to_string(i), region, period, values[i], values[i], 1.0, Direction::benefit});
    }
    return out;
}

/// Copy of `dataset` with every observation of `indicator` scaled by `factor`.
inline IndicatorDataset scaled(const IndicatorDataset& dataset, const std::string& indicator, double factor) {
    std::vector<IndicatorObservation> rows;
    for (const auto& [key, o] : dataset.observations()) {
        rows.push_back(o);
        if (o.indicator_id == indicator) rows.back().value *= factor;
    }
    return IndicatorDataset::from_observations(std::move(rows));
}

}  // namespace shadow::testing
