#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace vardyn::config {

struct Position {
  int line = 0;
  int column = 0;
};

class Value;
using Array = std::vector<Value>;
using Table = std::vector<std::pair<std::string, Value>>;  // keeps order and repeated keys

/// Number literals keep their source text so 64-bit integers survive.
struct Number {
  double value = 0.0;
  std::string text;
};

/// A parsed value: string, number, boolean, array or inline table.
///
/// The `as_*` accessors throw a Config error naming `field` and the source
/// position when the type does not match.
class Value {
 public:
  using Data = std::variant<std::string, Number, bool, Array, Table>;

  Value(Data data, Position pos) : data_(std::move(data)), pos_(pos) {}

  const Data& data() const noexcept { return data_; }
  Position position() const noexcept { return pos_; }
  const char* type_name() const noexcept;

  const std::string& as_string(std::string_view field) const;
  double as_number(std::string_view field) const;
  bool as_bool(std::string_view field) const;
  std::uint64_t as_u64(std::string_view field) const;
  int as_int(std::string_view field) const;
  const Array& as_array(std::string_view field) const;
  const Table& as_table(std::string_view field) const;

 private:
  Data data_;
  Position pos_;
};

/// Lookup helpers over a Table. `find` returns nullptr when absent and throws
/// when the key is repeated; `find_all` returns every occurrence in order.
const Value* find(const Table& table, std::string_view key);
std::vector<const Value*> find_all(const Table& table, std::string_view key);
/// Config error unless every key of `table` is in `allowed`.
void require_known_keys(const Table& table, std::initializer_list<std::string_view> allowed, std::string_view where);

/// Line-oriented key/value text:
///
///   # comment
///   name = "ising2q"
///   gate = { generator = '1.0 ZZ', sign = -1 }
///   lambda0 = [0.1, 0.0]
///   [solver]
///   dt = 1e-3
///
/// Keys under a `[section]` header are stored as "section.key". Errors carry
/// the line and column.
Table parse(std::string_view text, std::string_view origin = "<config>");
Table parse_file(const std::string& path);

}  // namespace vardyn::config
