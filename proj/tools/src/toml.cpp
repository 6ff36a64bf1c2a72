#include "poisson_chaos/cli/toml.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace poisson_chaos::cli {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  json document() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        if (peek(1) == '[') fail("arrays of tables are not supported");
        ++pos_;
        skip_inline_ws();
        auto path = key_path();
        skip_inline_ws();
        expect(']');
        table = &open_table(root, path, true);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

  json single_value() {
    skip_inline_ws();
    json v = value();
    skip_inline_ws();
    if (!eof()) fail("trailing characters after value");
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::size_t line_start_ = 0;
  json defined_tables_ = json::array();

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, static_cast<int>(pos_ - line_start_) + 1);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
  void newline() {
    ++pos_;
    ++line_;
    line_start_ = pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_inline_ws();
      skip_comment();
      if (peek() == '\r' && peek(1) == '\n') ++pos_;
      if (peek() == '\n') {
        newline();
        continue;
      }
      break;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_any_ws() {
    while (!eof()) {
      skip_inline_ws();
      skip_comment();
      if (peek() == '\r') {
        ++pos_;
        continue;
      }
      if (peek() == '\n') {
        newline();
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++pos_;
    if (peek() != '\n') fail("expected end of line");
    newline();
  }

  static bool bare_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  }

  std::string key_part() {
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    const std::size_t start = pos_;
    while (!eof() && bare_char(peek())) ++pos_;
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> path{key_part()};
    while (true) {
      skip_inline_ws();
      if (peek() != '.') break;
      ++pos_;
      skip_inline_ws();
      path.push_back(key_part());
    }
    return path;
  }

  json& open_table(json& root, const std::vector<std::string>& path, bool header) {
    json* t = &root;
    for (const auto& k : path) {
      if (!t->contains(k)) (*t)[k] = json::object();
      t = &(*t)[k];
      if (!t->is_object()) fail("key '" + k + "' is already a value");
    }
    if (header) {
      json p = path;
      for (const auto& d : defined_tables_)
        if (d == p) fail("table defined twice");
      defined_tables_.push_back(p);
    }
    return *t;
  }

  void key_value(json& table) {
    auto path = key_path();
    skip_inline_ws();
    expect('=');
    skip_inline_ws();
    const std::string last = path.back();
    path.pop_back();
    json& parent = path.empty() ? table : open_table(table, path, false);
    if (parent.contains(last)) fail("duplicate key '" + last + "'");
    parent[last] = value();
  }

  json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (s_.substr(pos_, 4) == "true" && !bare_char(peek(4))) {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false" && !bare_char(peek(5))) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      c = s_[pos_++];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + c);
      }
    }
    return out;
  }

  std::string literal_string() {
    expect('\'');
    const std::size_t start = pos_;
    while (!eof() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') fail("unterminated string");
    std::string out(s_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  json array() {
    expect('[');
    json out = json::array();
    while (true) {
      skip_any_ws();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      out.push_back(value());
      skip_any_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
  }

  json inline_table() {
    expect('{');
    json out = json::object();
    skip_inline_ws();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      skip_inline_ws();
      key_value(out);
      skip_inline_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return out;
    }
  }

  json number() {
    const std::size_t start = pos_;
    while (!eof() && (bare_char(peek()) || peek() == '+' || peek() == '.')) ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty()) fail("expected a value");
    std::string body = tok;
    double sign = 1.0;
    if (body[0] == '+' || body[0] == '-') {
      sign = body[0] == '-' ? -1.0 : 1.0;
      body.erase(0, 1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::string clean;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] != '_') {
        clean += tok[i];
        continue;
      }
      const bool ok = i > 0 && i + 1 < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i - 1])) &&
                      std::isdigit(static_cast<unsigned char>(tok[i + 1]));
      if (!ok) fail("misplaced '_' in number");
    }
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    const char* b = clean.data() + (clean[0] == '+' ? 1 : 0);
    const char* e = clean.data() + clean.size();
    if (is_float) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || p != e) fail("invalid number '" + tok + "'");
      return v;
    }
    long long v = 0;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail("invalid value '" + tok + "'");
    return v;
  }
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return Parser(text).document(); }

nlohmann::json parse_toml_value(std::string_view text) { return Parser(text).single_value(); }

}  // namespace poisson_chaos::cli
