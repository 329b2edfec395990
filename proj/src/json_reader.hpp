#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sepidx {

/// Parses text into a JSON document; malformed input becomes SchemaViolation.
nlohmann::json parse_json_document(std::string_view text);

/// Typed, path-aware view of a JSON value. Every accessor throws
/// SchemaViolation carrying the JSON pointer of the offending value.
class JsonReader {
 public:
  explicit JsonReader(const nlohmann::json& value, std::string pointer = {})
      : value_(&value), pointer_(std::move(pointer)) {}

  JsonReader operator[](std::string_view key) const;
  JsonReader operator[](std::size_t index) const;

  bool has(std::string_view key) const;
  bool is_null() const { return value_->is_null(); }
  std::size_t size() const;
  std::vector<std::string> keys() const;
  // Rejects members outside `allowed`.
  void only_keys(std::initializer_list<std::string_view> allowed) const;

  double real() const;
  std::optional<double> optional_real() const;
  std::uint64_t unsigned_integer() const;
  std::optional<std::uint64_t> optional_unsigned() const;
  bool boolean() const;
  std::string string() const;

  const nlohmann::json& raw() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  [[noreturn]] void fail(const std::string& message) const;

 private:
  const nlohmann::json* value_;
  std::string pointer_;
};

}  // namespace sepidx
