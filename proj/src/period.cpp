#include "shadow/period.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace shadow {

namespace {

std::optional<int> parse_digits(std::string_view text, std::size_t width) {
    if (text.size() != width) return std::nullopt;
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) return std::nullopt;
    }
    int value = 0;
    std::from_chars(text.data(), text.data() + text.size(), value);
    return value;
}

}  // namespace

std::optional<Period> Period::parse(std::string_view text) {
    const auto year = parse_digits(text.substr(0, 4), 4);
    if (!year || *year < kMinYear || *year > kMaxYear) return std::nullopt;
    if (text.size() == 4) return Period{*year, 0};
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    const auto month = parse_digits(text.substr(5), 2);
    if (!month || *month < 1 || *month > 12) return std::nullopt;
    return Period{*year, *month};
}

std::string Period::to_string() const {
    return month == 0 ? fmt::format("{:04d}", year) : fmt::format("{:04d}-{:02d}", year, month);
}

}  // namespace shadow
