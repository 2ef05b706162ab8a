#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace polyreg::detail {

inline std::string_view trim(std::string_view s) noexcept {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Splits on any of the given delimiter characters.
inline std::vector<std::string_view> split_any(std::string_view s, std::string_view delims) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find_first_of(delims, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

/// Parses a finite double with std::from_chars; the whole token must be consumed.
bool parse_double(std::string_view token, double& out) noexcept;

/// Shortest round-tripping decimal representation.
std::string format_double(double v);

/// Fixed-point with `decimals` digits after the point; "-0.00" is normalized to "0.00".
std::string format_fixed(double v, int decimals);

}  // namespace polyreg::detail
