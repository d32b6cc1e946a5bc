#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>

namespace shadow {

/// Quartile convention used throughout: linear interpolation between order
/// statistics at position p(n-1)+1 (Hyndman-Fan type 7).
inline constexpr std::string_view kQuartileConvention = "hyndman-fan-type-7";

struct DistributionSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample, divisor n-1
    // Unset when the second central moment is zero (constant input), or for
    // cv when the mean is zero.
    std::optional<double> skewness;  // g1 = m3 / m2^(3/2)
    std::optional<double> kurtosis;  // m4 / m2^2, non-excess
    std::optional<double> cv;        // std_dev / |mean|
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;

    bool degenerate() const { return !skewness.has_value(); }

    bool operator==(const DistributionSummary&) const = default;
};

/// Throws InsufficientData for n < 2 and DomainError for non-finite input.
/// Constant input does not throw; moment statistics are left unset.
DistributionSummary summarize(std::span<const double> values);

/// Same as summarize() but throws DegenerateDistribution instead of leaving
/// moment statistics unset.
DistributionSummary summarize_strict(std::span<const double> values);

/// Type-7 quantile of already sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

/// (Q1, Q3). Throws InsufficientData for n < 4.
std::pair<double, double> quartile_bounds(std::span<const double> values);

/// Weighted population variance sum w (x - xbar_w)^2 / sum w.
double weighted_variance(std::span<const double> values, std::span<const double> weights);

}  // namespace shadow
