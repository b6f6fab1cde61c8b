#include "vardyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "vardyn/error.hpp"

namespace vardyn::config {

namespace {

[[noreturn]] void field_error(std::string_view field, Position pos, const std::string& msg) {
  throw Error(ErrorKind::Config, fmt::format("field '{}' (line {}, column {}): {}", field, pos.line, pos.column, msg));
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view origin) : text_(text), origin_(origin) {}

  Table run() {
    Table root;
    std::string section;
    while (!at_end()) {
      skip_blank();
      if (at_end()) break;
      if (peek() == '\n') {
        advance();
        continue;
      }
      if (peek() == '#') {
        skip_comment();
        continue;
      }
      if (peek() == '[') {
        advance();
        skip_spaces();
        section = read_key();
        skip_spaces();
        expect(']');
        end_of_line();
        continue;
      }
      const Position key_pos = here();
      std::string key = read_key();
      if (key.empty()) fail(key_pos, "expected a key");
      skip_spaces();
      expect('=');
      skip_spaces();
      Value v = read_value();
      end_of_line();
      root.emplace_back(section.empty() ? key : section + "." + key, std::move(v));
    }
    return root;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[i_]; }
  Position here() const { return {line_, col_}; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  [[noreturn]] void fail(Position pos, const std::string& msg) const {
    throw Error(ErrorKind::Config, fmt::format("{}:{}:{}: {}", origin_, pos.line, pos.column, msg));
  }

  void expect(char c) {
    if (peek() != c) {
      fail(here(), at_end() ? fmt::format("expected '{}' before end of input", c)
                            : fmt::format("expected '{}', found '{}'", c, peek()));
    }
    advance();
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }

  // Whitespace including newlines and comments, used inside brackets.
  void skip_blank() {
    for (;;) {
      skip_spaces();
      if (peek() == '#') {
        skip_comment();
      } else if (peek() == '\n' && depth_ > 0) {
        advance();
      } else {
        return;
      }
    }
  }

  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }

  void end_of_line() {
    skip_spaces();
    if (peek() == '#') skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail(here(), fmt::format("unexpected '{}' after value", peek()));
    advance();
  }

  std::string read_key() {
    std::string key;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        key += c;
        advance();
      } else {
        break;
      }
    }
    return key;
  }

  Value read_value() {
    const Position pos = here();
    const char c = peek();
    if (c == '"' || c == '\'') return {read_string(), pos};
    if (c == '[') return {read_array(), pos};
    if (c == '{') return {read_table(), pos};
    if (c == '+' || c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) return {read_number(), pos};
    const std::string word = read_key();
    if (word == "true") return {true, pos};
    if (word == "false") return {false, pos};
    if (word.empty()) fail(pos, at_end() ? "expected a value before end of input" : fmt::format("unexpected '{}'", c));
    fail(pos, fmt::format("unquoted word '{}' (strings need quotes)", word));
  }

  std::string read_string() {
    const Position start = here();
    const char quote = peek();
    advance();
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail(start, "unterminated string");
      const char c = peek();
      advance();
      if (c == quote) return out;
      if (c == '\\' && quote == '"') {
        if (at_end()) fail(start, "unterminated string");
        const char e = peek();
        advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          default: fail(here(), fmt::format("unknown escape '\\{}'", e));
        }
        continue;
      }
      out += c;
    }
  }

  Number read_number() {
    const Position pos = here();
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_') {
        token += c;
        advance();
      } else {
        break;
      }
    }
    std::string digits = token;
    digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
    const char* begin = digits.data() + (digits.starts_with('+') ? 1 : 0);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(v)) {
      fail(pos, fmt::format("invalid number '{}'", token));
    }
    return {v, digits};
  }

  Array read_array() {
    expect('[');
    ++depth_;
    Array out;
    skip_blank();
    while (peek() != ']') {
      out.push_back(read_value());
      skip_blank();
      if (peek() == ',') {
        advance();
        skip_blank();
      } else if (peek() != ']') {
        fail(here(), at_end() ? "unterminated array" : fmt::format("expected ',' or ']', found '{}'", peek()));
      }
    }
    advance();
    --depth_;
    return out;
  }

  Table read_table() {
    expect('{');
    ++depth_;
    Table out;
    skip_blank();
    while (peek() != '}') {
      const Position key_pos = here();
      std::string key = read_key();
      if (key.empty()) fail(key_pos, at_end() ? "unterminated table" : "expected a key");
      skip_blank();
      expect('=');
      skip_blank();
      Value v = read_value();
      for (const auto& [k, _] : out) {
        if (k == key) fail(key_pos, fmt::format("duplicate key '{}' in table", key));
      }
      out.emplace_back(std::move(key), std::move(v));
      skip_blank();
      if (peek() == ',') {
        advance();
        skip_blank();
      } else if (peek() != '}') {
        fail(here(), at_end() ? "unterminated table" : fmt::format("expected ',' or '}}', found '{}'", peek()));
      }
    }
    advance();
    --depth_;
    return out;
  }

  std::string_view text_;
  std::string_view origin_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
};

}  // namespace

const char* Value::type_name() const noexcept {
  switch (data_.index()) {
    case 0: return "string";
    case 1: return "number";
    case 2: return "boolean";
    case 3: return "array";
    case 4: return "table";
  }
  return "?";
}

const std::string& Value::as_string(std::string_view field) const {
  if (const auto* s = std::get_if<std::string>(&data_)) return *s;
  field_error(field, pos_, fmt::format("expected a string, found a {}", type_name()));
}

double Value::as_number(std::string_view field) const {
  if (const auto* n = std::get_if<Number>(&data_)) return n->value;
  field_error(field, pos_, fmt::format("expected a number, found a {}", type_name()));
}

bool Value::as_bool(std::string_view field) const {
  if (const auto* b = std::get_if<bool>(&data_)) return *b;
  field_error(field, pos_, fmt::format("expected true or false, found a {}", type_name()));
}

std::uint64_t Value::as_u64(std::string_view field) const {
  const auto* n = std::get_if<Number>(&data_);
  if (!n) field_error(field, pos_, fmt::format("expected an unsigned integer, found a {}", type_name()));
  const std::string& t = n->text;
  const char* begin = t.data() + (t.starts_with('+') ? 1 : 0);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    field_error(field, pos_, fmt::format("'{}' is not an unsigned 64-bit integer", t));
  }
  return v;
}

int Value::as_int(std::string_view field) const {
  const double v = as_number(field);
  if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) {
    field_error(field, pos_, fmt::format("expected an integer, found {}", std::get<Number>(data_).text));
  }
  return static_cast<int>(v);
}

const Array& Value::as_array(std::string_view field) const {
  if (const auto* a = std::get_if<Array>(&data_)) return *a;
  field_error(field, pos_, fmt::format("expected an array, found a {}", type_name()));
}

const Table& Value::as_table(std::string_view field) const {
  if (const auto* t = std::get_if<Table>(&data_)) return *t;
  field_error(field, pos_, fmt::format("expected a table, found a {}", type_name()));
}

const Value* find(const Table& table, std::string_view key) {
  const Value* hit = nullptr;
  for (const auto& [k, v] : table) {
    if (k != key) continue;
    if (hit) field_error(key, v.position(), "given more than once");
    hit = &v;
  }
  return hit;
}

std::vector<const Value*> find_all(const Table& table, std::string_view key) {
  std::vector<const Value*> out;
  for (const auto& [k, v] : table) {
    if (k == key) out.push_back(&v);
  }
  return out;
}

void require_known_keys(const Table& table, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [k, v] : table) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      const Position p = v.position();
      throw Error(ErrorKind::Config,
                  fmt::format("unknown key '{}' in {} (line {}, column {})", k, where, p.line, p.column));
    }
  }
}

Table parse(std::string_view text, std::string_view origin) { return Parser(text, origin).run(); }

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, fmt::format("cannot open config '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

}  // namespace vardyn::config
