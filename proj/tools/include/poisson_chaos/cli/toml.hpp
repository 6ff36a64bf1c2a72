#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace poisson_chaos::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

// The TOML subset used by run configurations: [tables] and [dotted.tables],
// dotted keys, basic/literal strings, integers, floats (inf/nan included),
// booleans, (multi-line) arrays and inline tables. No dates, no [[arrays]].
nlohmann::json parse_toml(std::string_view text);

// A single TOML value, as written on the right of `=`.
nlohmann::json parse_toml_value(std::string_view text);

}  // namespace poisson_chaos::cli
