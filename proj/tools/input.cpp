#include "input.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace unireg::cli {

ParseError::ParseError(std::size_t line, const std::string& what)
    : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}

std::optional<double> parse_number(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

Sequence read_sequence(std::istream& in) {
  Sequence values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_line = 0;
  std::string header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find(',') != std::string::npos) {
      throw ParseError(line_no, "expected a single numeric column, found a comma");
    }
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(w);
    if (words.empty()) continue;
    const bool first_content = values.empty() && header_line == 0;
    if (first_content && words.size() == 1 && !parse_number(words[0])) {
      header_line = line_no;
      header = words[0];
      continue;
    }
    for (const std::string& w : words) {
      const auto v = parse_number(w);
      if (!v) throw ParseError(line_no, "expected a finite number, got '" + w + "'");
      values.push_back(*v);
    }
  }
  if (values.empty()) {
    if (header_line != 0) {
      throw ParseError(header_line, "expected a finite number, got '" + header + "'");
    }
    throw ParseError(line_no == 0 ? 1 : line_no, "no values in input");
  }
  return values;
}

}  // namespace unireg::cli
