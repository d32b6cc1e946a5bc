#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shadow/ingestion.hpp"

namespace shadow {

inline constexpr std::uint64_t kDefaultFixtureSeed = 85;

struct FixtureOptions {
    std::uint64_t seed = kDefaultFixtureSeed;
    int first_year = 2014;
    int last_year = 2019;
    /// Year in which the checkpoint values below hold exactly.
    int calibration_year = 2019;
};

/// A sub-index value the synthetic dataset reproduces in the calibration year.
struct FixtureCheckpoint {
    std::string region_code;
    std::string subindex_id;
    double value;
};

const std::vector<FixtureCheckpoint>& fixture_checkpoints();

/// Banking-index cross-section targets in the calibration year.
inline constexpr double kFixtureBankingQ1 = 0.19;
inline constexpr double kFixtureBankingQ3 = 0.56;
inline constexpr double kFixtureOutsiderValue = 0.15;
inline constexpr const char* kFixtureOutsiderRegion = "DAGESTAN-LIKE";

/// 85 synthetic subject regions in 8 federal districts plus the national
/// "RU" rows, covering every indicator the built-in registries read. Values
/// are random but fully determined by the seed; the checkpoints hold to
/// rounding error regardless of seed.
IndicatorDataset make_synthetic_dataset(const FixtureOptions& options = {});

}  // namespace shadow
