#include "shadow/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "shadow/errors.hpp"

namespace shadow {

namespace {

// Neumaier-compensated sum; the log-sums here mix magnitudes freely.
double compensated_sum(std::span<const double> xs) {
    double sum = 0.0;
    double compensation = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            compensation += (sum - t) + x;
        } else {
            compensation += (x - t) + sum;
        }
        sum = t;
    }
    return sum + compensation;
}

void require_positive(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError(fmt::format("{}: non-finite value", what));
        if (v <= 0.0) throw NonPositiveValue(fmt::format("{}: non-positive value {}", what, v));
    }
}

double clamp_to_range(double result, std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return std::clamp(result, *lo, *hi);
}

CompositeIndexValue aggregate(IndexKind kind, std::size_t arity,
                              std::vector<SubIndexValue> subindices) {
    if (subindices.size() != arity) {
        throw ArityError(fmt::format("{} requires exactly {} sub-indices, got {}", to_string(kind),
                                     arity, subindices.size()));
    }
    const auto& first = subindices.front();
    std::vector<double> values;
    values.reserve(arity);
    for (const auto& s : subindices) {
        if (s.region_code != first.region_code || s.period != first.period) {
            throw MixedKeyError(fmt::format("{}: sub-index {} is for ({}, {}), expected ({}, {})",
                                            to_string(kind), s.definition_id, s.region_code,
                                            s.period.to_string(), first.region_code,
                                            first.period.to_string()));
        }
        if (!std::isfinite(s.value)) {
            throw DomainError(fmt::format("{}: sub-index {} is not finite", to_string(kind),
                                          s.definition_id));
        }
        if (s.value <= 0.0) {
            throw NonPositiveValue(fmt::format("{}: sub-index {} has non-positive value {}",
                                               to_string(kind), s.definition_id, s.value));
        }
        values.push_back(s.value);
    }

    CompositeIndexValue out;
    out.index_kind = kind;
    out.region_code = first.region_code;
    out.period = first.period;
    out.value = geometric_mean(values);
    out.contributions = decompose_contributions(values);
    out.subindices = std::move(subindices);
    return out;
}

}  // namespace

std::string_view to_string(IndexKind kind) {
    return kind == IndexKind::banking_rbsp ? "banking_rbsp" : "economic_health";
}

std::string_view to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::population: return "population";
        case WeightKind::grp: return "grp";
        case WeightKind::unweighted: return "unweighted";
    }
    return "population";
}

std::optional<WeightKind> weight_kind_from_string(std::string_view text) {
    if (text == "population") return WeightKind::population;
    if (text == "grp") return WeightKind::grp;
    if (text == "unweighted") return WeightKind::unweighted;
    return std::nullopt;
}

double geometric_mean(std::span<const double> values) {
    if (values.empty()) throw EmptyGroup("geometric_mean: no values");
    require_positive(values, "geometric_mean");
    std::vector<double> logs(values.size());
    std::transform(values.begin(), values.end(), logs.begin(), [](double v) { return std::log(v); });
    const double mean_log = compensated_sum(logs) / static_cast<double>(values.size());
    return clamp_to_range(std::exp(mean_log), values);
}

double weighted_geometric_mean(std::span<const double> values, std::span<const double> weights) {
    if (values.empty()) throw EmptyGroup("weighted_geometric_mean: no values");
    if (values.size() != weights.size()) {
        throw ArityError("weighted_geometric_mean: values and weights differ in length");
    }
    require_positive(values, "weighted_geometric_mean");
    require_positive(weights, "weighted_geometric_mean weight");
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = weights[i] * std::log(values[i]);
    const double mean_log = compensated_sum(terms) / compensated_sum(weights);
    return clamp_to_range(std::exp(mean_log), values);
}

CompositeIndexValue compute_rbsp(std::vector<SubIndexValue> subindices) {
    return aggregate(IndexKind::banking_rbsp, 8, std::move(subindices));
}

CompositeIndexValue compute_health(std::vector<SubIndexValue> subindices) {
    return aggregate(IndexKind::economic_health, 6, std::move(subindices));
}

std::vector<double> decompose_contributions(std::span<const double> subindex_values) {
    if (subindex_values.empty()) throw EmptyGroup("decompose_contributions: no sub-indices");
    require_positive(subindex_values, "decompose_contributions");
    const auto k = subindex_values.size();
    std::vector<double> logs(k);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        logs[i] = std::log(subindex_values[i]);
        magnitude += std::abs(logs[i]);
    }
    const double total = compensated_sum(logs);
    // A log-sum within rounding noise of zero means the composite is 1.
    if (std::abs(total) <= 64.0 * std::numeric_limits<double>::epsilon() * magnitude) {
        return std::vector<double>(k, 1.0 / static_cast<double>(k));
    }
    std::vector<double> shares(k);
    for (std::size_t i = 0; i < k; ++i) shares[i] = logs[i] / total;
    return shares;
}

std::vector<double> decompose_contributions(const CompositeIndexValue& composite) {
    std::vector<double> values;
    values.reserve(composite.subindices.size());
    for (const auto& s : composite.subindices) values.push_back(s.value);
    return decompose_contributions(values);
}

DistrictIndexValue aggregate_district(std::string district_code, const Period& period,
                                      const std::vector<std::pair<std::string, double>>& values,
                                      const std::map<std::string, double>& weights,
                                      WeightKind weight_kind) {
    if (values.empty()) {
        throw EmptyGroup(fmt::format("district {} has no member regions in {}", district_code,
                                     period.to_string()));
    }
    std::vector<double> xs;
    std::vector<double> ws;
    DistrictIndexValue out;
    out.district_code = std::move(district_code);
    out.period = period;
    out.weight_kind = weight_kind;
    for (const auto& [region, value] : values) {
        if (!(value > 0.0)) {
            throw NonPositiveValue(fmt::format("district {}: region {} has non-positive value {}",
                                               out.district_code, region, value));
        }
        double weight = 1.0;
        if (weight_kind != WeightKind::unweighted) {
            const auto it = weights.find(region);
            if (it == weights.end()) {
                throw MissingWeight(fmt::format("district {}: no {} weight for region {}",
                                                out.district_code, to_string(weight_kind), region));
            }
            weight = it->second;
            if (!(weight > 0.0)) {
                throw NonPositiveValue(fmt::format("district {}: region {} has weight {}",
                                                   out.district_code, region, weight));
            }
        }
        xs.push_back(value);
        ws.push_back(weight);
        out.member_regions.push_back(region);
    }
    std::sort(out.member_regions.begin(), out.member_regions.end());
    out.value = weighted_geometric_mean(xs, ws);
    return out;
}

std::vector<DistrictIndexValue> aggregate_districts(const std::vector<CompositeIndexValue>& composites,
                                                    const IndicatorDataset& dataset,
                                                    WeightKind weight_kind) {
    // (district, period) -> members
    std::map<std::pair<std::string, Period>, std::vector<std::pair<std::string, double>>> groups;
    std::map<Period, std::map<std::string, double>> weights;
    for (const auto& c : composites) {
        if (c.region_code == kNationalRegion) continue;
        const auto* info = dataset.region_info(c.region_code);
        if (info == nullptr) {
            throw MissingObservation(fmt::format("region {} is not in the dataset", c.region_code));
        }
        groups[{info->district_code, c.period}].emplace_back(c.region_code, c.value);
        if (weight_kind != WeightKind::unweighted) {
            const char* indicator = weight_kind == WeightKind::population ? "population" : "grp";
            if (const auto w = dataset.value(c.region_code, indicator, c.period)) {
                weights[c.period][c.region_code] = *w;
            }
        }
    }
    std::vector<DistrictIndexValue> out;
    out.reserve(groups.size());
    for (const auto& [key, members] : groups) {
        out.push_back(aggregate_district(key.first, key.second, members, weights[key.second],
                                         weight_kind));
    }
    return out;
}

double correlate_indices(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) {
        throw InsufficientData(
            fmt::format("correlate_indices needs at least 3 pairs, got {}", pairs.size()));
    }
    const double n = static_cast<double>(pairs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw DomainError("correlate_indices: non-finite value");
        }
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pairs) {
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ZeroVariance("correlate_indices: a coordinate has zero variance");
    }
    return std::clamp((sxy / sxx) * (sxy / syy), 0.0, 1.0);
}

}  // namespace shadow
