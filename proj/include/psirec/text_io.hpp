#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace psirec {

/// Shortest text that parses back to exactly `value` (17 significant digits).
std::string format_double(double value);

/// Shortest round-trip text, for echoing configuration values ("0.6", not "0.59999999999999998").
std::string format_shortest(double value);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

std::uint64_t parse_uint(std::string_view text, std::size_t line);
std::int64_t parse_int(std::string_view text, std::size_t line);
double parse_double(std::string_view text, std::size_t line);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace psirec
