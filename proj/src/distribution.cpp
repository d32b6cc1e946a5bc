#include "shadow/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "shadow/errors.hpp"

namespace shadow {

namespace {

std::vector<double> sorted_copy(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) throw DomainError("distribution statistics: non-finite value");
    }
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw InsufficientData("quantile of empty data");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DistributionSummary summarize(std::span<const double> values) {
    if (values.size() < 2) {
        throw InsufficientData(
            fmt::format("summarize needs at least 2 values, got {}", values.size()));
    }
    const auto sorted = sorted_copy(values);
    const double n = static_cast<double>(values.size());

    DistributionSummary out;
    out.n = values.size();
    out.q1 = quantile_sorted(sorted, 0.25);
    out.median = quantile_sorted(sorted, 0.5);
    out.q3 = quantile_sorted(sorted, 0.75);

    if (sorted.front() == sorted.back()) {
        out.mean = sorted.front();
        out.std_dev = 0.0;
        return out;
    }

    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / n;

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - out.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    out.std_dev = std::sqrt(m2 * n / (n - 1.0));
    if (m2 > 0.0) {
        out.skewness = m3 / (m2 * std::sqrt(m2));
        out.kurtosis = m4 / (m2 * m2);
    }
    if (out.mean != 0.0) out.cv = out.std_dev / std::abs(out.mean);
    return out;
}

DistributionSummary summarize_strict(std::span<const double> values) {
    auto out = summarize(values);
    if (out.degenerate()) {
        throw DegenerateDistribution("distribution has zero variance; moments are undefined");
    }
    return out;
}

std::pair<double, double> quartile_bounds(std::span<const double> values) {
    if (values.size() < 4) {
        throw InsufficientData(
            fmt::format("quartile_bounds needs at least 4 values, got {}", values.size()));
    }
    const auto sorted = sorted_copy(values);
    return {quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.75)};
}

double weighted_variance(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw InsufficientData("weighted_variance: values and weights must be non-empty and aligned");
    }
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] > 0.0)) throw NonPositiveValue("weighted_variance: non-positive weight");
        total += weights[i];
        mean += weights[i] * values[i];
    }
    mean /= total;
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean;
        acc += weights[i] * d * d;
    }
    return acc / total;
}

}  // namespace shadow
