#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shadow/ingestion.hpp"
#include "shadow/subindex.hpp"

namespace shadow {

enum class IndexKind { banking_rbsp, economic_health };
enum class WeightKind { population, grp, unweighted };

std::string_view to_string(IndexKind kind);
std::string_view to_string(WeightKind kind);
std::optional<WeightKind> weight_kind_from_string(std::string_view text);

struct CompositeIndexValue {
    IndexKind index_kind = IndexKind::banking_rbsp;
    std::string region_code;
    Period period;
    double value = 0.0;
    std::vector<SubIndexValue> subindices;
    std::vector<double> contributions;

    bool operator==(const CompositeIndexValue&) const = default;
};

struct DistrictIndexValue {
    std::string district_code;
    Period period;
    double value = 0.0;
    std::vector<std::string> member_regions;
    WeightKind weight_kind = WeightKind::population;

    bool operator==(const DistrictIndexValue&) const = default;
};

/// exp(mean(ln v)). Values must be finite and positive; the result is clamped
/// to [min v, max v] so constant inputs return exactly that constant.
double geometric_mean(std::span<const double> values);

/// exp(sum(w ln v) / sum(w)) with the same clamping.
double weighted_geometric_mean(std::span<const double> values, std::span<const double> weights);

/// Banking-provision index: 8th root of the product of I1..I8.
CompositeIndexValue compute_rbsp(std::vector<SubIndexValue> subindices);

/// Economic-health indicator: 6th root of the product of its sub-indices.
/// Cost sub-indices are expected to be inverted already.
CompositeIndexValue compute_health(std::vector<SubIndexValue> subindices);

/// Log-share of each sub-index: ln v_i / sum ln v_j. When the log-sum is
/// zero (composite exactly 1, within rounding) the shares are uniform 1/k.
std::vector<double> decompose_contributions(const CompositeIndexValue& composite);
std::vector<double> decompose_contributions(std::span<const double> subindex_values);

/// Weighted geometric mean of one district's regional composites.
/// For WeightKind::unweighted the weights map is ignored.
DistrictIndexValue aggregate_district(std::string district_code, const Period& period,
                                      const std::vector<std::pair<std::string, double>>& values,
                                      const std::map<std::string, double>& weights,
                                      WeightKind weight_kind);

/// Groups composites by the dataset's district codes and aggregates each,
/// reading population or GRP weights from the dataset at the same period.
std::vector<DistrictIndexValue> aggregate_districts(const std::vector<CompositeIndexValue>& composites,
                                                    const IndicatorDataset& dataset,
                                                    WeightKind weight_kind);

/// Squared Pearson correlation of (health, banking) pairs.
double correlate_indices(const std::vector<std::pair<double, double>>& pairs);

}  // namespace shadow
