#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace shadow {

/// A reporting period: a calendar year, or a year-month for monthly series
/// such as price indices. month == 0 marks an annual period.
struct Period {
    int year = 0;
    int month = 0;

    static constexpr int kMinYear = 1990;
    static constexpr int kMaxYear = 2100;

    static Period annual(int y) { return Period{y, 0}; }

    /// Accepts "YYYY" or "YYYY-MM". Returns nullopt on anything else,
    /// including years outside [1990, 2100].
    static std::optional<Period> parse(std::string_view text);

    bool is_monthly() const { return month != 0; }

    /// Same month (or year) one year earlier.
    Period previous_year() const { return Period{year - 1, month}; }

    std::string to_string() const;

    auto operator<=>(const Period&) const = default;
};

}  // namespace shadow
