#include "psirec/text_io.hpp"

#include <charconv>
#include <system_error>

#include "psirec/error.hpp"

namespace psirec {

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("cannot format floating-point value");
  return std::string(buf, end);
}

std::string format_shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format floating-point value");
  return std::string(buf, end);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  if (ec != std::errc()) throw Error("cannot format floating-point value");
  return std::string(buf, end);
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

namespace {

template <class T>
T parse_number(std::string_view text, std::size_t line, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::uint64_t parse_uint(std::string_view text, std::size_t line) {
  return parse_number<std::uint64_t>(text, line, "a non-negative integer");
}

std::int64_t parse_int(std::string_view text, std::size_t line) {
  return parse_number<std::int64_t>(text, line, "an integer");
}

double parse_double(std::string_view text, std::size_t line) {
  return parse_number<double>(text, line, "a number");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace psirec
