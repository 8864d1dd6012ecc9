#include "bss/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "bss/core.hpp"

namespace bss {
namespace {

using nlohmann::json;

class Parser {
 public:
  Parser(std::string_view text, const std::string& origin) : text_(text), origin_(origin) {}

  json parse() {
    json root = json::object();
    json* current = &root;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        current = parse_header(root);
      } else {
        parse_key_value(*current);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(origin_ + ":" + std::to_string(line_) + ": " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  char take() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }
  void skip_blank_lines() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        take();
      } else {
        break;
      }
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_all() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        take();
      } else {
        break;
      }
    }
  }
  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected text after value");
    take();
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    take();
  }

  std::string parse_key() {
    skip_spaces();
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    std::string key;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      key += take();
    }
    if (key.empty()) fail("expected a key");
    skip_spaces();
    if (peek() == '.') fail("dotted keys are not supported");
    return key;
  }

  json* parse_header(json& root) {
    take();
    const bool array = peek() == '[';
    if (array) take();
    std::vector<std::string> path;
    while (true) {
      path.push_back(parse_key());
      skip_spaces();
      if (peek() != '.') break;
      take();
    }
    expect(']');
    if (array) expect(']');

    json* node = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      json& child = (*node)[path[i]];
      if (child.is_null()) child = json::object();
      if (child.is_array()) {
        node = &child.back();
      } else if (child.is_object()) {
        node = &child;
      } else {
        fail("key '" + path[i] + "' is not a table");
      }
    }
    const std::string& leaf = path.back();
    if (array) {
      json& arr = (*node)[leaf];
      if (arr.is_null()) arr = json::array();
      if (!arr.is_array()) fail("'" + leaf + "' is not an array of tables");
      arr.push_back(json::object());
      return &arr.back();
    }
    if (node->contains(leaf)) {
      if (!(*node)[leaf].is_object() || defined_.count(&(*node)[leaf])) fail("table '" + leaf + "' defined twice");
    } else {
      (*node)[leaf] = json::object();
    }
    defined_.insert(&(*node)[leaf]);
    return &(*node)[leaf];
  }

  void parse_key_value(json& table) {
    const std::string key = parse_key();
    skip_spaces();
    expect('=');
    skip_spaces();
    if (table.contains(key)) fail("duplicate key '" + key + "'");
    table[key] = parse_value();
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    take();
    if (text_.substr(pos_, 2) == "\"\"") fail("multi-line strings are not supported");
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = take();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        const char e = take();
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case 'r': c = '\r'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    return out;
  }

  std::string parse_literal_string() {
    take();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = take();
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  json parse_array() {
    take();
    json arr = json::array();
    while (true) {
      skip_all();
      if (peek() == ']') {
        take();
        return arr;
      }
      arr.push_back(parse_value());
      skip_all();
      if (peek() == ',') {
        take();
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    take();
    json table = json::object();
    skip_spaces();
    if (peek() == '}') {
      take();
      return table;
    }
    while (true) {
      parse_key_value(table);
      skip_spaces();
      if (peek() == ',') {
        take();
        continue;
      }
      expect('}');
      return table;
    }
  }

  json parse_number() {
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_') {
        if (c != '_') token += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (token.empty()) fail("expected a value");
    const bool is_float = token.find_first_of(".eE") != std::string::npos || token == "inf" || token == "nan";
    const char* first = token.data() + (token[0] == '+' ? 1 : 0);
    const char* last = token.data() + token.size();
    if (is_float) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) fail("malformed number '" + token + "'");
      return v;
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("malformed value '" + token + "'");
    return v;
  }

  std::string_view text_;
  std::string origin_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::set<const json*> defined_;
};

}  // namespace

json parse_toml(std::string_view text, const std::string& origin) { return Parser(text, origin).parse(); }

json parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str(), path);
}

}  // namespace bss
