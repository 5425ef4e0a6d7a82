#include "semidiscrete/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace semidiscrete {

std::string shortest(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return digits17(value);
    return std::string(buf.data(), ptr);
}

std::string digits17(double value) {
    std::array<char, 64> buf{};
    int n = std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

}  // namespace semidiscrete
