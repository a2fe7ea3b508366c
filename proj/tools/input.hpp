#pragma once

#include <istream>
#include <optional>
#include <string_view>

#include "unireg/errors.hpp"
#include "unireg/sequence.hpp"

namespace unireg::cli {

/// Input that could not be parsed. The message starts with "line N:".
class ParseError : public InvalidArgument {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Strict finite double; the whole token must be consumed.
std::optional<double> parse_number(std::string_view token);

/// Reads one numeric column (CSV with an optional header line) or
/// whitespace-separated values.
Sequence read_sequence(std::istream& in);

}  // namespace unireg::cli
